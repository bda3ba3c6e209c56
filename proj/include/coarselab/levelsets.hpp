#pragma once

#include <complex>
#include <vector>

#include "coarselab/tiling.hpp"

namespace coarselab {

/// Geodesic arc in the upper half-plane: part of a vertical line (x = centre,
/// y in [lo, hi]) or of the semicircle |z - centre| = radius (x in [lo, hi]).
struct Arc {
  bool vertical = false;
  double centre = 0, radius = 0;
  double lo = 0, hi = 0;

  double max_height() const;
  /// Points of the arc at height h.
  int crossings(double h) const;
};

/// A D-comb: base geodesic plus hairs, all given as arcs, with hair i
/// attached to the base at `feet[i]`.
struct Comb {
  double spacing = 0;  // D
  Arc base;
  std::vector<Arc> hairs;
  std::vector<std::complex<double>> feet;
};

/// The comb of a B tile: image of the y-axis with the quarter circles of radius
/// dilation^i, keeping hairs that reach height exp(c_min).
Comb tile_comb(const Tiling& t, const Tile& tile, double c_min);

struct LevelSetOptions {
  double a_min = -8, a_max = 8, a_step = 0.5;  // sublevel heights exp(a)
  double c_step = 0.25;                        // level spacing below a0
  double c_min = -8;
};

struct LevelSetReport {
  std::size_t combs = 0;
  std::size_t components = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst_ratio = 0;  // max count / bound
  Json witness;            // first violation, if any
};

/// Counts |C_0 n {y = exp(c)}| for every component C_0 of C n {y <= exp(a)}
/// and compares with 3 + 2 log 2 / D + 2 (a_0 - c) / D.
LevelSetReport check_level_sets(const Comb& comb, const LevelSetOptions& opts);
/// Every B tile of the tiling.
LevelSetReport check_tiling_level_sets(const Tiling& t, const LevelSetOptions& opts);

}  // namespace coarselab
