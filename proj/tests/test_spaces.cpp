#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "coarselab/geometries.hpp"
#include "coarselab/hyperbolic.hpp"
#include "coarselab/io.hpp"
#include "coarselab/formats.hpp"
#include "doctest.h"

using namespace coarselab;

namespace {

// Breadth-first count over an implicit graph given by a neighbour function.
template <class Node, class Next>
std::vector<std::size_t> bfs_layers(const Node& start, int r_max, Next next) {
  std::map<Node, int> seen{{start, 0}};
  std::queue<Node> q;
  q.push(start);
  std::vector<std::size_t> per(static_cast<std::size_t>(r_max) + 1, 0);
  while (!q.empty()) {
    Node u = q.front();
    q.pop();
    const int d = seen[u];
    ++per[static_cast<std::size_t>(d)];
    if (d == r_max) continue;
    for (const Node& v : next(u))
      if (seen.emplace(v, d + 1).second) q.push(v);
  }
  std::vector<std::size_t> cumulative(per.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < per.size(); ++i) cumulative[i] = total += per[i];
  return cumulative;
}

std::vector<std::string> tree_next(const std::string& w) {
  std::vector<std::string> out;
  if (!w.empty()) out.push_back(w.substr(0, w.size() - 1));
  for (char c : {'0', '1', '2'})
    if (w.empty() || w.back() != c) out.push_back(w + c);
  return out;
}

// Comb node as (base, offsets...) with one-sided hairs of length `extent`.
std::vector<std::vector<std::int64_t>> comb_next(const std::vector<std::int64_t>& u, int d, int extent) {
  std::vector<std::vector<std::int64_t>> out;
  auto v = u;
  if (u.size() == 1) {
    for (int s : {-1, 1}) {
      v = u;
      v[0] += s;
      if (std::llabs(v[0]) <= extent) out.push_back(v);
    }
  } else {
    v = u;
    v.back() -= 1;
    if (v.back() == 0) v.pop_back();
    out.push_back(v);
    v = u;
    v.back() += 1;
    if (v.back() <= extent) out.push_back(v);
  }
  if (static_cast<int>(u.size()) < d) {
    v = u;
    v.push_back(1);
    out.push_back(v);
  }
  return out;
}

}  // namespace

TEST_CASE("integer window") {
  const auto s = make_integer_window(-5, 5);
  CHECK(s->size() == 11);
  CHECK(s->edge_count() == 10);
  CHECK(s->model_distance(0, 10) == doctest::Approx(10));
  const auto b = ball(*s, 5, 2);
  CHECK(b.points.size() == 5);
  CHECK_THROWS_AS(make_integer_window(3, 2), Error);
}

TEST_CASE("tree ball sizes match a breadth-first count") {
  for (int n = 1; n <= 8; ++n) {
    const auto s = make_tree_ball(n);
    const auto oracle = bfs_layers(std::string(), n, tree_next);
    CHECK(s->size() == oracle.back());
    CHECK(s->size() == static_cast<std::size_t>(3 * (1 << n) - 2));
  }
}

TEST_CASE("tree graph distances equal word distances") {
  const auto s = make_tree_ball(4);
  const auto& g = dynamic_cast<const TreeGeometry&>(s->geometry());
  for (PointId p = 0; p < s->size(); p += 7) {
    const PointId src[] = {p};
    const auto dist = bfs_distances(*s, src);
    for (PointId q = 0; q < s->size(); ++q) {
      // oracle: strip the common prefix
      const auto& a = g.word(p);
      const auto& b = g.word(q);
      std::size_t c = 0;
      while (c < a.size() && c < b.size() && a[c] == b[c]) ++c;
      const int expected = static_cast<int>(a.size() + b.size() - 2 * c);
      REQUIRE(dist[q] == expected);
      REQUIRE(s->model_distance(p, q) == doctest::Approx(expected));
    }
  }
}

TEST_CASE("walk window contains the spine and hanging trees") {
  const auto s = make_tree_walk_window(3);
  const auto& g = dynamic_cast<const TreeGeometry&>(s->geometry());
  for (const char* w : {"", "0", "01", "010", "1", "10", "101", "2", "0102", "01020", "010201"}) CHECK(g.find(w) >= 0);
  CHECK(g.find("0101") < 0);
  CHECK(g.find("22") < 0);
}

TEST_CASE("comb balls match a breadth-first count") {
  SUBCASE("step 1 is a path") {
    const auto s = make_comb(1, 30);
    const auto& g = dynamic_cast<const CombGeometry&>(s->geometry());
    for (int n : {0, 1, 5, 12}) CHECK(ball(*s, g.origin(), n).points.size() == static_cast<std::size_t>(2 * n + 1));
  }
  for (int d : {2, 3}) {
    CAPTURE(d);
    const int extent = 12;
    const auto s = make_comb(d, extent);
    const auto& g = dynamic_cast<const CombGeometry&>(s->geometry());
    const auto oracle = bfs_layers(std::vector<std::int64_t>{0}, 8,
                                   [&](const std::vector<std::int64_t>& u) { return comb_next(u, d, extent); });
    for (int r = 0; r <= 8; ++r) CHECK(ball(*s, g.origin(), r).points.size() == oracle[static_cast<std::size_t>(r)]);
  }
}

TEST_CASE("product of integer windows has the l1 ball") {
  const auto z = make_integer_window(-10, 10);
  const auto p = build_product({z, z});
  CHECK(p->size() == 441);
  const auto& g = dynamic_cast<const ProductGeometry&>(p->geometry());
  const PointId parts[] = {10, 10};
  const PointId origin = g.compose(parts);
  for (int n = 0; n <= 6; ++n) CHECK(ball(*p, origin, n).points.size() == static_cast<std::size_t>(2 * n * n + 2 * n + 1));
  CHECK(g.component(origin, 0) == 10);
}

TEST_CASE("hyperbolic distance and isometries") {
  CHECK(hyp::distance(0, 1, 1, 1) == doctest::Approx(std::acosh(1.5)));
  CHECK(hyp::distance(0, 1, 1, 1) == doctest::Approx(0.96242).epsilon(1e-5));
  CHECK(hyp::distance(0, 1, 0, std::exp(2.0)) == doctest::Approx(2.0));

  double x = 0, y = 0;
  const double px[] = {-1.0}, qx[] = {2.0};
  double ox[1];
  const double total = hyp::distance(-1, 0.5, 2, 3);
  hyp::geodesic_point(px, 0.5, qx, 3, total / 3, ox, y);
  x = ox[0];
  CHECK(hyp::distance(-1, 0.5, x, y) == doctest::Approx(total / 3));
  CHECK(hyp::distance(x, y, 2, 3) == doctest::Approx(2 * total / 3));

  const auto m = hyp::Mobius::onto_half_disc(2.0, 5.0);
  CHECK(m.det() == doctest::Approx(1));
  CHECK(m.apply_boundary(0) == doctest::Approx(2.0));
  CHECK(std::isinf(m.inverse().apply_boundary(5.0)));
  const std::complex<double> z{0.3, 0.7}, w{-1.2, 2.0};
  CHECK(hyp::distance(z.real(), z.imag(), w.real(), w.imag()) ==
        doctest::Approx(hyp::distance(m.apply(z).real(), m.apply(z).imag(), m.apply(w).real(), m.apply(w).imag())));
  const auto back = (m * m.inverse()).apply(z);
  CHECK(back.real() == doctest::Approx(z.real()));
  CHECK(back.imag() == doctest::Approx(z.imag()));

  const double hx[] = {0.4};
  const auto h = hyp::to_hyperboloid(hx, 1.7);
  CHECK(h[0] * h[0] - h[1] * h[1] - h[2] * h[2] == doctest::Approx(1));
  double rx[1], ry = 0;
  hyp::from_hyperboloid(h, rx, ry);
  CHECK(rx[0] == doctest::Approx(0.4));
  CHECK(ry == doctest::Approx(1.7));
}

TEST_CASE("H2 net: size, separation and maximality") {
  NetOptions o;
  o.window_radius = 8;
  const auto s = generate_net(o);
  const double reference = std::cosh(8.0) - 1;
  CHECK(static_cast<double>(s->size()) <= 4 * reference);
  CHECK(static_cast<double>(s->size()) >= reference / 4);

  o.window_radius = 5;
  const auto small = generate_net(o);
  const auto& g = dynamic_cast<const HalfSpaceGeometry&>(small->geometry());
  double closest = kInfinity;
  for (PointId p = 0; p < small->size(); ++p)
    for (PointId q = p + 1; q < small->size(); ++q) closest = std::min(closest, small->model_distance(p, q));
  CHECK(closest >= 1.0 - 1e-9);

  // every candidate of the stream lies within sep of a kept point
  const double h = 0.5;
  int candidates = 0;
  for (int k = -12; k <= 12; ++k) {
    const double y = std::exp(k * h);
    for (int j = -400; j <= 400; ++j) {
      const double x[] = {j * y};
      if (g.distance_to_center(x, y) > 5) continue;
      ++candidates;
      const PointId n = g.nearest(x, y);
      REQUIRE(g.distance_to(n, x, y) < 1.0);
    }
  }
  CHECK(candidates > static_cast<int>(small->size()));
}

TEST_CASE("H2 net graph distance dominates model distance over the threshold") {
  NetOptions o;
  o.window_radius = 6;
  const auto s = generate_net(o);
  const auto& g = dynamic_cast<const HalfSpaceGeometry&>(s->geometry());
  const double x0[] = {0.0};
  const PointId c = g.nearest(x0, 1.0);
  const PointId src[] = {c};
  const auto dist = bfs_distances(*s, src);
  double worst = 0;
  for (PointId p = 0; p < s->size(); ++p) {
    REQUIRE(dist[p] >= 0);
    CHECK(dist[p] + 1e-9 >= s->model_distance(c, p) / s->edge_threshold());
    if (s->depth(p) > 2) worst = std::max(worst, dist[p] / std::max(1.0, s->model_distance(c, p)));
  }
  CHECK(worst < 3.0);
}

TEST_CASE("H3 net is separated") {
  NetOptions o;
  o.dim = 3;
  o.window_radius = 3;
  const auto s = generate_net(o);
  for (PointId p = 0; p < s->size(); ++p)
    for (PointId q = p + 1; q < s->size(); ++q) REQUIRE(s->model_distance(p, q) >= 1.0 - 1e-9);
}

TEST_CASE("manifests regenerate identical spaces") {
  NetOptions o;
  o.window_radius = 4;
  const std::vector<SpacePtr> spaces{make_integer_window(-3, 7), make_tree_ball(3), make_comb(2, 5), generate_net(o),
                                     build_product({make_integer_window(0, 4), make_tree_ball(2)})};
  for (const auto& s : spaces) {
    const auto again = space_from_manifest(Json::parse(s->manifest().dump()));
    CHECK(again->ref() == s->ref());
    CHECK(points_csv(*again) == points_csv(*s));
    CHECK(edges_csv(*again) == edges_csv(*s));
  }
  Json bad = make_tree_ball(2)->manifest();
  bad["version"] = 99;
  CHECK_THROWS_AS(space_from_manifest(bad), Error);
}

TEST_CASE("index errors") {
  const auto s = make_integer_window(0, 3);
  CHECK_THROWS_AS(s->check_index(4), Error);
  CHECK_THROWS_AS(make_graph(0, {}), Error);
}
