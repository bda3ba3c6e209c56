#pragma once

#include <array>
#include <string>
#include <vector>

#include "coarselab/covers.hpp"
#include "coarselab/hyperbolic.hpp"

namespace coarselab {

enum class TileKind { A, B, B1 };

const char* to_string(TileKind kind);

/// A tile of the two-colour tiling of H^2. The tile is side * frame(T) where T
/// is the standard tile of its kind in the right half-plane and side = -1
/// reflects in the y-axis. The merged top tile B1 u phi(B1) has side 0.
struct Tile {
  TileKind kind = TileKind::A;
  int side = 1;
  std::vector<int> path;  // semicircle indices from the root frame
  hyp::Mobius frame;
  double lo = 0, hi = 0;  // world span of the frame's semicircle; 0, 0 at the root
  int depth() const { return static_cast<int>(path.size()); }
};

struct TilingWindow {
  double radius = 10.0;     // hyperbolic ball about (0; 1)
  double resolution = 0.0;  // smallest Euclidean semicircle radius kept, 0 keeps all meeting the window
};

struct Tiling {
  double r = 1.0;
  std::array<double, 5> lambda{};  // sinh(k r), k = 0..4
  double dilation = 0;             // ratio of consecutive semicircle endpoints
  TilingWindow window;
  std::vector<Tile> tiles;

  static int colour(TileKind kind) { return kind == TileKind::A ? 0 : 1; }
};

/// Endpoint ratio of the semicircle family, by bisection on the tangency
/// condition with the line x = sinh(4r) y.
double solve_dilation(double r);

Tiling build_h2_tiling(double r, const TilingWindow& window);

struct TileLocation {
  TileKind kind = TileKind::A;
  int side = 1;
  std::vector<int> path;
};

/// Tile containing (x; y). Points on a boundary go to the lower-depth tile,
/// then to A before B before B1.
TileLocation locate_tile(const Tiling& t, double x, double y);
std::string tile_key(const TileLocation& loc);
std::string tile_key(const Tile& tile);

/// Partition of an H^2 net by tile, colours A -> 0 and B, B1 -> 1, r = t.r.
ColoredDecomposition tiling_to_decomposition(const Tiling& t, const SpacePtr& net);

/// Kind of a decomposition piece from its label.
TileKind label_kind(const std::string& label);

Json tiling_to_json(const Tiling& t);

}  // namespace coarselab
