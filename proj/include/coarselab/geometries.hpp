#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "coarselab/space.hpp"

namespace coarselab {

/// Window [lo, hi] of the integers.
class IntegerGeometry final : public Geometry {
 public:
  IntegerGeometry(std::int64_t lo, std::int64_t hi);
  std::size_t size() const override { return static_cast<std::size_t>(hi_ - lo_ + 1); }
  double distance(PointId p, PointId q) const override;
  ModelPoint point(PointId p) const override { return Integer{value(p)}; }
  double depth(PointId p) const override;
  void within(PointId p, double radius, std::vector<Neighbor>& out) const override;
  void adjacent(PointId p, std::vector<PointId>& out) const override;
  bool is_graph_model() const override { return true; }

  std::int64_t value(PointId p) const { return lo_ + static_cast<std::int64_t>(p); }
  PointId id_of(std::int64_t n) const { return static_cast<PointId>(n - lo_); }
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }

 private:
  std::int64_t lo_, hi_;
};

/// A finite subtree of the 3-regular tree, vertices named by reduced words.
class TreeGeometry final : public Geometry {
 public:
  explicit TreeGeometry(std::vector<std::string> words);
  std::size_t size() const override { return words_.size(); }
  double distance(PointId p, PointId q) const override;
  ModelPoint point(PointId p) const override { return TreeAddress{words_[p]}; }
  double depth(PointId p) const override { return depth_[p]; }
  void adjacent(PointId p, std::vector<PointId>& out) const override;
  bool is_graph_model() const override { return true; }

  const std::string& word(PointId p) const { return words_[p]; }
  /// Id of a word, or -1 when the word is outside the window.
  std::int64_t find(const std::string& word) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, PointId> index_;
  std::vector<double> depth_;
};

int tree_distance(const std::string& a, const std::string& b);

/// Comb of step d truncated at `extent` on the base and on every hair.
class CombGeometry final : public Geometry {
 public:
  static constexpr int kMaxStep = 4;
  CombGeometry(int d, int extent);
  std::size_t size() const override { return levels_.size(); }
  double distance(PointId p, PointId q) const override;
  ModelPoint point(PointId p) const override;
  double depth(PointId p) const override { return depth_[p]; }
  void adjacent(PointId p, std::vector<PointId>& out) const override;
  bool is_graph_model() const override { return true; }

  int step() const { return d_; }
  int extent() const { return extent_; }
  /// Id of the node (base; offsets...), or -1 if absent.
  std::int64_t find(std::int64_t base, const std::vector<std::int64_t>& offsets) const;
  PointId origin() const;
  bool is_hair_root(PointId p) const;

 private:
  using Coords = std::array<std::int32_t, kMaxStep>;  // base, offsets padded with 0
  std::uint64_t pack(const Coords& c) const;

  int d_, extent_;
  std::vector<Coords> coords_;
  std::vector<std::uint8_t> levels_;
  std::unordered_map<std::uint64_t, PointId> index_;
  std::vector<double> depth_;
};

/// Arbitrary finite graph with its path metric.
class GraphGeometry final : public Geometry {
 public:
  GraphGeometry(std::size_t n, const std::vector<std::pair<PointId, PointId>>& edges);
  std::size_t size() const override { return n_; }
  double distance(PointId p, PointId q) const override;
  ModelPoint point(PointId p) const override { return Integer{static_cast<std::int64_t>(p)}; }
  double depth(PointId) const override { return kInfinity; }
  void adjacent(PointId p, std::vector<PointId>& out) const override;
  bool is_graph_model() const override { return true; }
  const std::vector<std::pair<PointId, PointId>>& edges() const { return edges_; }

 private:
  std::size_t n_;
  std::vector<std::pair<PointId, PointId>> edges_;
  std::vector<std::vector<PointId>> adj_;
  std::vector<std::int32_t> dist_;  // all pairs, -1 unreachable
};

/// Net of the upper half-space model of H^d, points on the stratified grid
/// y = exp(k h), x = j * sep * y with h = sep / 2, ids in (k, j) lex order.
class HalfSpaceGeometry final : public Geometry {
 public:
  HalfSpaceGeometry(int dim, double window_radius, double sep);

  std::size_t size() const override { return keys_.size() / static_cast<std::size_t>(dim_); }
  double distance(PointId p, PointId q) const override;
  ModelPoint point(PointId p) const override;
  double depth(PointId p) const override;
  void within(PointId p, double radius, std::vector<Neighbor>& out) const override;

  int dim() const { return dim_; }
  double window_radius() const { return radius_; }
  double sep() const { return sep_; }
  double y(PointId p) const;
  double x(PointId p, int i) const;
  void coords(PointId p, double* x, double& y) const;

  double distance_to(PointId p, std::span<const double> x, double y) const;
  void within_point(std::span<const double> x, double y, double radius, std::vector<Neighbor>& out) const;
  /// Nearest net point to (x; y); ties to the lower id.
  PointId nearest(std::span<const double> x, double y) const;
  /// Distance from (x; y) to the window centre (0, ..., 0; 1).
  double distance_to_center(std::span<const double> x, double y) const;

 private:
  std::int64_t find_row(std::int32_t k, const std::int32_t* prefix) const;

  int dim_;
  double radius_, sep_, step_;
  std::int32_t k_min_ = 0;
  std::vector<double> layer_y_;
  std::vector<std::int32_t> keys_;      // stride dim_: k, j_1 .. j_{dim-1}
  std::vector<std::int32_t> row_keys_;  // stride dim_ - 1: k, j_1 .. j_{dim-2}
  std::vector<PointId> row_start_;
};

/// l1 product of windows; ids are mixed-radix with the first factor most significant.
class ProductGeometry final : public Geometry {
 public:
  explicit ProductGeometry(std::vector<SpacePtr> factors);
  std::size_t size() const override { return size_; }
  double distance(PointId p, PointId q) const override;
  ModelPoint point(PointId p) const override;
  double depth(PointId p) const override;
  void adjacent(PointId p, std::vector<PointId>& out) const override;
  bool is_graph_model() const override { return graph_model_; }
  bool provides_adjacency() const override { return adjacency_; }

  std::size_t arity() const { return factors_.size(); }
  const SpaceGraph& factor(std::size_t i) const { return *factors_[i]; }
  const std::vector<SpacePtr>& factors() const { return factors_; }
  PointId component(PointId p, std::size_t i) const;
  PointId compose(std::span<const PointId> parts) const;

 private:
  std::vector<SpacePtr> factors_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 1;
  bool graph_model_ = true;
  bool adjacency_ = true;
};

}  // namespace coarselab
