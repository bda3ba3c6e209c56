#include <omp.h>

#include <random>

#include "coarselab/geometries.hpp"
#include "coarselab/kernels.hpp"
#include "coarselab/tiling.hpp"
#include "coarselab/walk.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace coarselab;
using namespace coarselab::testing;

namespace {

// Run with several threads even on a single-core machine.
struct Threads {
  int saved = omp_get_max_threads();
  explicit Threads(int n) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
};

bool same(const std::vector<Violation>& a, const std::vector<Violation>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].a != b[i].a || a[i].b != b[i].b || a[i].point_a != b[i].point_a || a[i].point_b != b[i].point_b ||
        a[i].distance != b[i].distance)
      return false;
  return true;
}

}  // namespace

TEST_CASE("parallel kernels match the serial references") {
  const Threads threads(4);
  NetOptions o;
  o.window_radius = 6;
  const auto net = generate_net(o);
  const Tiling t = build_h2_tiling(1.0, TilingWindow{6, 0});
  const auto d = tiling_to_decomposition(t, net);
  const Membership mem = membership(d);

  SUBCASE("multiplicity") {
    for (double R : {0.0, 1.0, 2.5})
      for (Metric m : {Metric::Graph, Metric::Model}) {
        const auto a = kernels::multiplicity(*net, mem, R, m);
        const auto b = kernels::multiplicity_serial(*net, mem, R, m);
        CHECK(a.value == b.value);
        CHECK(a.center == b.center);
      }
  }
  SUBCASE("disjointness") {
    for (double r : {1.0, 1.5, 3.0}) {
      const auto a = kernels::disjointness(*net, mem, d.colour, r);
      const auto b = kernels::disjointness_serial(*net, mem, d.colour, r);
      CHECK(same(a, b));
    }
    CHECK(kernels::disjointness(*net, mem, d.colour, 1.0).empty());
    CHECK_FALSE(kernels::disjointness(*net, mem, d.colour, 3.0).empty());
  }
  SUBCASE("diameter") {
    for (const auto& piece : d.pieces)
      CHECK(kernels::diameter(*net, piece) == kernels::diameter_serial(*net, piece));
    const auto all = all_points(*net);
    CHECK(kernels::diameter(*net, all) == kernels::diameter_serial(*net, all));
  }
  SUBCASE("set growth") {
    std::vector<PointId> centers;
    for (PointId p = 0; p < net->size(); p += 97) centers.push_back(p);
    for (const auto& piece : {d.pieces.front(), d.pieces.back(), all_points(*net)})
      CHECK(kernels::set_growth(*net, piece, centers, 8) == kernels::set_growth_serial(*net, piece, centers, 8));
  }
}

TEST_CASE("pair distances match the serial reference") {
  const Threads threads(4);
  const MapRecord walk = tree_walk(2000);
  std::mt19937_64 rng(3);
  std::vector<std::pair<PointId, PointId>> pairs;
  for (int i = 0; i < 20000; ++i)
    pairs.emplace_back(static_cast<PointId>(rng() % walk.source->size()), static_cast<PointId>(rng() % walk.source->size()));
  std::vector<double> s1, t1, s2, t2;
  kernels::pair_distances(walk, pairs, s1, t1);
  kernels::pair_distances_serial(walk, pairs, s2, t2);
  CHECK(s1 == s2);
  CHECK(t1 == t2);
  for (std::size_t i = 0; i < pairs.size(); i += 1000) {
    CHECK(s1[i] == walk.source->model_distance(pairs[i].first, pairs[i].second));
    CHECK(t1[i] == walk.target->model_distance(walk.assignment[pairs[i].first], walk.assignment[pairs[i].second]));
  }
}

TEST_CASE("kernel multiplicity agrees with brute force on random graphs") {
  const Threads threads(3);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_graph(rng, 5 + rng() % 30, 0.05);
    const Cover c = random_cover(rng, g, 1 + static_cast<int>(rng() % 6));
    const Membership mem = membership(c);
    for (double R : {0.0, 1.0, 2.0}) {
      const auto k = kernels::multiplicity(*g, mem, R, Metric::Graph);
      CHECK(k.value == brute_multiplicity(c, R));
      CHECK(k.center == kernels::multiplicity_serial(*g, mem, R, Metric::Graph).center);
    }
  }
}
