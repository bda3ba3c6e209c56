#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coarselab/error.hpp"
#include "coarselab/model_point.hpp"

namespace coarselab {

inline constexpr double kTolerance = 1e-9;
inline constexpr int kSpaceVersion = 1;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Neighbor {
  PointId id;
  double dist;
};

/// Model-side view of a window: coordinates, the continuous metric and the
/// distance of each point to the window boundary.
class Geometry {
 public:
  virtual ~Geometry() = default;

  virtual std::size_t size() const = 0;
  virtual double distance(PointId p, PointId q) const = 0;
  virtual ModelPoint point(PointId p) const = 0;
  /// Distance from p to the boundary of the window (infinite when the window
  /// is the whole space).
  virtual double depth(PointId p) const = 0;
  /// Window points at model distance <= radius from p, ascending by id.
  virtual void within(PointId p, double radius, std::vector<Neighbor>& out) const;
  /// Adjacent points for graph models (unit edges); nets return nothing and
  /// rely on the edge threshold instead.
  virtual void adjacent(PointId p, std::vector<PointId>& out) const;
  /// True when the model metric is the path metric of `adjacent`.
  virtual bool is_graph_model() const { return false; }
  /// True when `adjacent` enumerates the edges of the window graph.
  virtual bool provides_adjacency() const { return is_graph_model(); }
};

class SpaceGraph {
 public:
  SpaceGraph(std::shared_ptr<const Geometry> geometry, Json manifest, double separation,
             double edge_threshold, bool build_edges);

  std::size_t size() const { return geometry_->size(); }
  double model_distance(PointId p, PointId q) const;
  ModelPoint point(PointId p) const;
  double depth(PointId p) const { return geometry_->depth(p); }
  const Geometry& geometry() const { return *geometry_; }
  std::shared_ptr<const Geometry> geometry_ptr() const { return geometry_; }

  bool has_edges() const { return has_edges_; }
  std::span<const PointId> neighbors(PointId p) const;
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  std::size_t degree_bound() const { return degree_bound_; }
  double separation() const { return separation_; }
  double edge_threshold() const { return edge_threshold_; }

  const Json& manifest() const { return manifest_; }
  /// SHA-256 of the canonical manifest text.
  const std::string& ref() const { return ref_; }

  void check_index(PointId p) const;

 private:
  std::shared_ptr<const Geometry> geometry_;
  Json manifest_;
  std::string ref_;
  double separation_;
  double edge_threshold_;
  bool has_edges_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<PointId> adjacency_;
  std::size_t degree_bound_ = 0;
};

using SpacePtr = std::shared_ptr<const SpaceGraph>;

enum class Metric { Graph, Model };

struct Ball {
  std::vector<PointId> points;  // ascending
  bool truncated = false;
};

/// Closed ball. Graph metric uses BFS over edges with integer radius; the
/// model metric uses `Geometry::within`.
Ball ball(const SpaceGraph& space, PointId center, double r, Metric metric = Metric::Graph);

/// BFS distances (hops) from a set of sources, -1 for unreachable.
std::vector<int> bfs_distances(const SpaceGraph& space, std::span<const PointId> sources,
                               int limit = std::numeric_limits<int>::max());

double model_distance(const SpaceGraph& space, PointId p, PointId q);

// Generators. Each returns a space whose manifest regenerates it exactly.
SpacePtr make_integer_window(std::int64_t lo, std::int64_t hi);
SpacePtr make_tree_ball(int radius);
/// Subtree of T3 visited by the walk with spine range [-spine, spine].
SpacePtr make_tree_walk_window(int spine);
SpacePtr make_comb(int d, int extent);
SpacePtr make_graph(std::size_t n, const std::vector<std::pair<PointId, PointId>>& edges);

struct ProductOptions {
  std::size_t max_points = 4'000'000'000ULL;
  std::size_t max_edge_points = 20'000'000;
};
SpacePtr build_product(const std::vector<SpacePtr>& factors, const ProductOptions& opts = {});

struct NetOptions {
  int dim = 2;              // d of H^d
  double window_radius = 8.0;
  double sep = 1.0;
  double edge_threshold = 0.0;  // 0 selects 3 * sep
  bool build_edges = true;
};
SpacePtr generate_net(const NetOptions& opts);

/// Rebuild any space from its manifest.
SpacePtr space_from_manifest(const Json& manifest);

}  // namespace coarselab
