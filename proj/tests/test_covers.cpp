#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "coarselab/covers.hpp"
#include "coarselab/geometries.hpp"
#include "coarselab/map_record.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace coarselab;
using namespace coarselab::testing;

TEST_CASE("multiplicity of singleton covers") {
  const auto z = make_integer_window(-10, 10);
  ColoredDecomposition d;
  d.space = z;
  for (PointId p = 0; p < z->size(); ++p) {
    d.pieces.push_back({p});
    d.colour.push_back(static_cast<int>(p % 2));
  }
  d.d = 1;
  for (int R : {0, 1, 2}) {
    const auto res = r_multiplicity(d, R);
    CHECK(res.value == brute_multiplicity(d, R));
  }
  CHECK(r_multiplicity(d, 0).value == 1);
  CHECK(r_multiplicity(d, 1).value == 3);

  Cover whole{z, {all_points(*z)}, {}};
  for (int R : {0, 3, 50}) CHECK(r_multiplicity(whole, R).value == 1);
}

TEST_CASE("disjointness reads distances off the line") {
  const auto z = make_integer_window(0, 8);
  ColoredDecomposition d;
  d.space = z;
  d.pieces = {{0, 1, 2, 3}, {5, 6, 7, 8}, {4}};
  d.colour = {0, 0, 1};
  d.d = 1;
  d.r = 2;
  CHECK(check_disjointness(d).empty());
  d.r = 3;
  const auto v = check_disjointness(d);
  REQUIRE(v.size() == 1);
  CHECK(v[0].distance == doctest::Approx(2));
  CHECK(std::set<PointId>{v[0].point_a, v[0].point_b} == std::set<PointId>{3, 5});
  CHECK(same_colour_separation(d, 10) == doctest::Approx(2));

  ColoredDecomposition one;
  one.space = z;
  one.pieces = {all_points(*z)};
  one.colour = {0};
  one.r = 100;
  CHECK(check_disjointness(one).empty());
}

TEST_CASE("coverage and validation report witnesses") {
  const auto z = make_integer_window(0, 5);
  Cover c{z, {{0, 1, 2}, {4, 5}}, {}};
  const auto rep = check_coverage(c);
  CHECK_FALSE(rep.covered);
  CHECK(rep.uncovered == PointId{3});
  CHECK_THROWS_AS(validate(c), Error);
  Cover unsorted{z, {{1, 0, 2, 3, 4, 5}}, {}};
  CHECK_THROWS_AS(validate(unsorted), Error);
  Cover ok{z, {{0, 1, 2, 3}, {3, 4, 5}}, {}};
  CHECK_NOTHROW(validate(ok));
  const auto mem = membership(ok);
  CHECK(mem.of(3).size() == 2);
  CHECK(mem.of(0).size() == 1);
}

TEST_CASE("iterated neighbourhoods follow the inductive definition") {
  SUBCASE("singletons in Z grow by balls") {
    const auto z = make_integer_window(-30, 30);
    Cover c{z, {}, {}};
    for (PointId p = 0; p < z->size(); ++p) c.pieces.push_back({p});
    const PieceId base = 30;
    const auto chain = iterated_neighborhood(c, base, 1, 6);
    REQUIRE(chain.levels.size() == 7);
    for (int k = 0; k <= 6; ++k) CHECK(chain.levels[static_cast<std::size_t>(k)].size() == static_cast<std::size_t>(2 * k + 1));
    CHECK_FALSE(chain.truncated);
    CHECK(iterated_neighborhood(c, base, 1, 40).truncated);
  }
  SUBCASE("isolated piece stays put") {
    const auto z = make_integer_window(0, 20);
    Cover c{z, {{0, 1, 2}, {10}, {3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20}}, {}};
    Cover far{z, {{0, 1}, {5, 6}}, {}};
    const auto chain = iterated_neighborhood(far, 0, 1, 1);
    CHECK(chain.levels[1] == PointSet{0, 1});
    CHECK(iterated_neighborhood(c, 1, 1, 0).levels[0] == PointSet{10});
  }
  SUBCASE("random graphs against a brute-force recomputation") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const auto g = random_graph(rng, 30, 0.08);
      const Cover c = random_cover(rng, g, 8);
      const double s = 1 + trial % 3;
      const auto chain = iterated_neighborhood(c, 0, s, 3);
      PointSet level = c.pieces[0];
      for (int m = 0; m <= 3; ++m) {
        REQUIRE(chain.levels[static_cast<std::size_t>(m)] == level);
        level = brute_neighbourhood_step(c, level, s);
      }
    }
  }
}

TEST_CASE("fatten is the closed neighbourhood") {
  const auto z = make_integer_window(0, 20);
  CHECK(fatten(*z, {5, 12}, 2) == PointSet{3, 4, 5, 6, 7, 10, 11, 12, 13, 14});
  CHECK(fatten(*z, {0}, 0.5) == PointSet{0});
}

TEST_CASE("greedy decomposition") {
  SUBCASE("one piece, n = 0") {
    const auto z = make_integer_window(0, 9);
    Cover c{z, {all_points(*z)}, {}};
    const auto d = greedy_decomposition(c, 3, 0);
    REQUIRE(d.pieces.size() == 1);
    CHECK(d.colour[0] == 0);
    CHECK(d.pieces[0].size() == 10);
  }
  SUBCASE("intervals [2k, 2k+2]") {
    const auto z = make_integer_window(0, 40);
    Cover c{z, {}, {}};
    for (PointId k = 0; 2 * k + 2 <= 40; ++k) c.pieces.push_back({2 * k, 2 * k + 1, 2 * k + 2});
    // 2R-multiplicity of this cover is 4 at R = 1, so n = 1 violates the precondition
    try {
      greedy_decomposition(c, 1, 1);
      FAIL("expected a precondition error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Precondition);
      CHECK(e.witness().contains("ball"));
    }
    CHECK(brute_multiplicity(c, 2, Metric::Model) == 4);
    const auto d = greedy_decomposition(c, 1, 3);
    CHECK(d.d == 3);
    CHECK(check_coverage(d).covered);
    CHECK(brute_disjoint(d, 1));
    CHECK(traces_into(d, c));
    const auto small = greedy_decomposition(c, 0.25, 1);
    CHECK(small.d == 1);
    CHECK(check_coverage(small).covered);
    CHECK(brute_disjoint(small, 0.25));
    CHECK(traces_into(small, c));
  }
  SUBCASE("random graphs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 5 + rng() % 36;
      const auto g = random_graph(rng, n, 0.1);
      const Cover c = random_cover(rng, g, 1 + static_cast<int>(rng() % 6));
      const double R = 1 + static_cast<double>(trial % 2);
      const int mult = brute_multiplicity(c, 2 * R, Metric::Model);
      const auto d = greedy_decomposition(c, R, mult - 1);
      REQUIRE(check_coverage(d).covered);
      REQUIRE(brute_disjoint(d, R));
      REQUIRE(traces_into(d, c));
      REQUIRE(d.d == mult - 1);
    }
  }
}

TEST_CASE("amplification") {
  SUBCASE("one colour covering the window, k = n = 0") {
    const auto z = make_integer_window(0, 40);
    ColoredDecomposition d;
    d.space = z;
    d.r = 6;
    d.d = 0;
    d.pieces = {all_points(*z)};
    d.colour = {0};
    const auto out = kolmogorov_amplify(d, 0);
    CHECK(out.d == 1);
    CHECK(out.r == doctest::Approx(2));
    CHECK(min_classes(out) >= 2);
    CHECK(brute_disjoint(out, out.r));
  }
  SUBCASE("two colours on a path of 20 points") {
    const auto z = make_integer_window(0, 19);
    ColoredDecomposition d;
    d.space = z;
    d.r = 3;
    d.d = 1;
    d.pieces = {{0, 1, 2, 3}, {7, 8, 9, 10}, {14, 15, 16, 17}, {4, 5, 6}, {11, 12, 13}, {18, 19}};
    d.colour = {0, 0, 0, 1, 1, 1};
    REQUIRE(brute_disjoint(d, 3));
    const auto out = kolmogorov_amplify(d, 1);
    CHECK(out.d == 2);
    CHECK(min_classes(out) >= 2);
    CHECK(brute_disjoint(out, out.r));
    const auto counts = class_counts(out);
    for (PointId p = 0; p < z->size(); ++p) CHECK(counts[p] == brute_class_count(out, p));
    SUBCASE("a second step adds another class") {
      // the output is an (r, 2) decomposition with 2 classes everywhere, i.e. a valid
      // (3 (r / 3), 2) input for n = 1
      const auto twice = kolmogorov_amplify(out, 1);
      CHECK(twice.d == 3);
      CHECK(twice.r == doctest::Approx(out.r / 3));
      CHECK(min_classes(twice) >= 3);
      CHECK(brute_disjoint(twice, twice.r));
    }
  }
  SUBCASE("precondition") {
    const auto z = make_integer_window(0, 9);
    ColoredDecomposition d;
    d.space = z;
    d.r = 3;
    d.d = 0;
    d.pieces = {{0, 1, 2}};
    d.colour = {0};
    CHECK_THROWS_AS(kolmogorov_amplify(d, 0), Error);
  }
}

TEST_CASE("product of amplified interval decompositions covers Z x Z") {
  const auto z = make_integer_window(-10, 10);
  ColoredDecomposition base;
  base.space = z;
  base.r = 3;
  base.d = 1;
  int colour = 0;
  for (PointId start = 0; start < z->size(); start += 4, colour ^= 1) {
    PointSet piece;
    for (PointId p = start; p < std::min<PointId>(start + 4, static_cast<PointId>(z->size())); ++p) piece.push_back(p);
    base.pieces.push_back(piece);
    base.colour.push_back(colour);
  }
  REQUIRE(brute_disjoint(base, 3));
  const auto amp = kolmogorov_amplify(base, 1);
  REQUIRE(min_classes(amp) >= 2);
  const auto prod = build_product({z, z});
  const auto d = product_decomposition(amp, amp, prod);
  CHECK(prod->size() == 441);
  CHECK(check_coverage(d).covered);
  CHECK(brute_disjoint(d, d.r));
  CHECK(min_classes(d) >= 1);

  SUBCASE("single pieces give a single piece") {
    ColoredDecomposition one;
    one.space = z;
    one.pieces = {all_points(*z)};
    one.colour = {0};
    one.r = 1;
    const auto p1 = product_decomposition(one, one, prod);
    CHECK(p1.pieces.size() == 1);
    CHECK(p1.pieces[0].size() == 441);
  }
  SUBCASE("colour counts must agree") {
    CHECK_THROWS_AS(product_decomposition(base, amp, prod), Error);
  }
}

TEST_CASE("pullbacks") {
  const auto z = make_integer_window(0, 30);
  Cover c{z, {}, {}};
  for (PointId s = 0; s <= 30; s += 5) {
    PointSet piece;
    for (PointId p = s; p <= std::min<PointId>(s + 6, 30); ++p) piece.push_back(p);
    c.pieces.push_back(piece);
  }
  SUBCASE("identity") {
    const auto id = identity_map(z);
    const auto pc = pullback_cover(id, c);
    CHECK(pc.pieces == c.pieces);
  }
  SUBCASE("constant map") {
    const auto src = make_integer_window(-4, 4);
    MapRecord f{src, z, std::vector<PointId>(src->size(), 7), Json::object()};
    measure_map(f);
    const auto pc = pullback_cover(f, c);
    for (const auto& piece : pc.pieces) CHECK(piece.size() == src->size());
  }
  SUBCASE("multiplicity bound under a Lipschitz map") {
    const auto src = make_integer_window(0, 90);
    MapRecord f{src, z, {}, Json::object()};
    for (PointId p = 0; p < src->size(); ++p) f.assignment.push_back(p / 3);
    measure_map(f);
    CHECK(f.measured_lipschitz == doctest::Approx(1));
    CHECK(f.measured_max_fiber == 3);
    const auto pc = pullback_cover(f, c);
    for (double R : {1.0, 2.0, 4.0})
      CHECK(r_multiplicity(pc, R).value <= r_multiplicity(c, f.measured_lipschitz * R).value);
  }
  SUBCASE("map must land in the cover's space") {
    const auto other = make_integer_window(0, 3);
    const auto id = identity_map(other);
    CHECK_THROWS_AS(pullback_cover(id, c), Error);
  }
}

TEST_CASE("refine_connected") {
  const auto z = make_integer_window(0, 30);
  Cover c{z, {{0, 1, 2, 3, 20, 21, 22}, all_points(*z)}, {}};
  const auto refined = refine_connected(c, 1);
  REQUIRE(refined.pieces.size() == 3);
  CHECK(refined.pieces[0] == PointSet{0, 1, 2, 3});
  CHECK(refined.pieces[1] == PointSet{20, 21, 22});
  CHECK(refine_connected(c, 20).pieces.size() == 2);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_graph(rng, 30, 0.07);
    const Cover rc = random_cover(rng, g, 5);
    const double R = 1 + trial % 3;
    const auto out = refine_connected(rc, R);
    CHECK(out.pieces == brute_components(rc, R));
    // components at scale 2R keep the R-multiplicity
    CHECK(r_multiplicity(refine_connected(rc, 2 * R), R).value <= r_multiplicity(rc, R).value);
  }
}

TEST_CASE("diameter") {
  const auto z = make_integer_window(-5, 5);
  CHECK(diameter(*z, {0, 3, 7}) == doctest::Approx(7));
  const auto t = make_tree_ball(3);
  CHECK(diameter(*t, all_points(*t)) == doctest::Approx(6));
}
