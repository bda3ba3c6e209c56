#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarselab/space.hpp"

namespace coarselab {

using PointSet = std::vector<PointId>;  // sorted, unique

struct Cover {
  SpacePtr space;
  std::vector<PointSet> pieces;
  std::vector<std::string> labels;  // empty or one per piece

  std::size_t piece_count() const { return pieces.size(); }
};

struct ColoredDecomposition : Cover {
  std::vector<int> colour;                    // one per piece
  double r = 0;                               // claimed separation
  int d = 0;                                  // colour count - 1
  bool partition = true;                      // false when pieces may overlap
  std::vector<std::vector<PieceId>> parents;  // input pieces each piece traces back to
};

/// Point -> pieces containing it, CSR layout.
struct Membership {
  std::vector<std::size_t> offsets;
  std::vector<PieceId> pieces;

  std::span<const PieceId> of(PointId p) const { return {pieces.data() + offsets[p], offsets[p + 1] - offsets[p]}; }
};

Membership membership(const Cover& cover);
Cover to_cover(const ColoredDecomposition& decomp);

/// Structural invariants: non-empty sorted pieces, union is the whole space,
/// colours in range. Throws Invariant with a witness.
void validate(const Cover& cover);
void validate(const ColoredDecomposition& decomp);

struct MultiplicityResult {
  int value = 0;
  PointId center = 0;
};

MultiplicityResult r_multiplicity(const Cover& cover, double R, Metric metric = Metric::Graph);

struct Violation {
  PieceId a = 0, b = 0;
  PointId point_a = 0, point_b = 0;
  double distance = 0;
};

/// Same-colour pairs at model distance < r.
std::vector<Violation> check_disjointness(const ColoredDecomposition& decomp);

/// Smallest model distance between distinct same-colour pieces, searched up
/// to `cap`; returns cap when nothing closer exists.
double same_colour_separation(const ColoredDecomposition& decomp, double cap);

struct NeighborhoodChain {
  PieceId base = 0;
  double s = 0;
  std::vector<PointSet> levels;
  std::vector<bool> level_truncated;
  bool truncated = false;
};

NeighborhoodChain iterated_neighborhood(const Cover& cover, PieceId piece, double s, int m);

/// Closed model-metric neighbourhood [set]_radius within the window.
PointSet fatten(const SpaceGraph& space, const PointSet& set, double radius);

ColoredDecomposition greedy_decomposition(const Cover& cover, double R, int n);

/// One step of the amplification: input (3r, k) with every point in at least
/// (k + 1) - n classes, output (r, k + 1) with at least (k + 2) - n.
ColoredDecomposition kolmogorov_amplify(const ColoredDecomposition& decomp, int n);

/// Colour classes containing each point, counted as point sets.
std::vector<int> class_counts(const ColoredDecomposition& decomp);

ColoredDecomposition product_decomposition(const ColoredDecomposition& dx, const ColoredDecomposition& dy,
                                           const SpacePtr& product);

struct MapRecord;
Cover pullback_cover(const MapRecord& f, const Cover& cover);
ColoredDecomposition pullback_decomposition(const MapRecord& f, const ColoredDecomposition& decomp);

/// R-connected components of every piece, in piece order.
Cover refine_connected(const Cover& cover, double R);

/// Model-metric diameter of a set.
double diameter(const SpaceGraph& space, const PointSet& set);

struct CoverageReport {
  bool covered = true;
  std::optional<PointId> uncovered;
};
CoverageReport check_coverage(const Cover& cover);

}  // namespace coarselab
