// Acceptance run: one PASS/FAIL line per criterion. Exit status 1 when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <sstream>

#include "coarselab/analysis.hpp"
#include "coarselab/bradyfarb.hpp"
#include "coarselab/cli.hpp"
#include "coarselab/geometries.hpp"
#include "coarselab/io.hpp"
#include "coarselab/levelsets.hpp"
#include "coarselab/nerve.hpp"
#include "coarselab/tiling.hpp"
#include "coarselab/walk.hpp"
#include "test_support.hpp"

using namespace coarselab;
using namespace coarselab::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > limit_s) o.require(false, "runtime over " + std::to_string(static_cast<int>(limit_s)) + " s");
  if (!o.pass) ++failures;
  std::printf("criterion %2d: %s  %s (%.1f s): %s\n", id, o.pass ? "PASS" : "FAIL", name, secs, o.detail.str().c_str());
  std::fflush(stdout);
}

int word_distance(const std::string& a, const std::string& b) {
  std::size_t c = 0;
  while (c < a.size() && c < b.size() && a[c] == b[c]) ++c;
  return static_cast<int>(a.size() + b.size() - 2 * c);
}

// Balls of integer radius R about a maximal R-separated set, chosen greedily in index order.
Cover ball_cover(const SpacePtr& s, int R) {
  std::vector<std::uint8_t> near(s->size(), 0);
  Cover c{s, {}, {}};
  for (PointId p = 0; p < s->size(); ++p) {
    if (near[p]) continue;
    for (PointId q : ball(*s, p, R - 1).points) near[q] = 1;
    auto pts = ball(*s, p, R).points;
    std::sort(pts.begin(), pts.end());
    c.pieces.push_back(std::move(pts));
  }
  return c;
}

// Comb ball sizes by breadth-first search over (base, offsets...) tuples.
std::vector<std::size_t> comb_oracle(int d, int extent, int r_max) {
  using Node = std::vector<std::int64_t>;
  std::map<Node, int> seen{{Node{0}, 0}};
  std::queue<Node> q;
  q.push(Node{0});
  std::vector<std::size_t> per(static_cast<std::size_t>(r_max) + 1, 0);
  while (!q.empty()) {
    const Node u = q.front();
    q.pop();
    const int du = seen[u];
    ++per[static_cast<std::size_t>(du)];
    if (du == r_max) continue;
    std::vector<Node> next;
    Node v = u;
    if (u.size() == 1) {
      for (int s : {-1, 1}) {
        v = u;
        v[0] += s;
        if (std::llabs(v[0]) <= extent) next.push_back(v);
      }
    } else {
      v = u;
      if (--v.back() == 0) v.pop_back();
      next.push_back(v);
      v = u;
      if (++v.back() <= extent) next.push_back(v);
    }
    if (static_cast<int>(u.size()) < d) {
      v = u;
      v.push_back(1);
      next.push_back(v);
    }
    for (const auto& w : next)
      if (seen.emplace(w, du + 1).second) q.push(w);
  }
  for (std::size_t i = 1; i < per.size(); ++i) per[i] += per[i - 1];
  return per;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

}  // namespace

int main() {
  criterion(1, "tree walk on |b| <= 1e5", 10, [](Outcome& o) {
    const std::int64_t n = 100000;
    const auto words = tree_walk_words(n);
    std::map<std::string, int> fibres;
    for (const auto& w : words) ++fibres[w];
    int worst = 0;
    for (const auto& [w, c] : fibres) worst = std::max(worst, c);
    bool adjacent = true;
    for (std::size_t i = 0; i + 1 < words.size(); ++i) adjacent = adjacent && word_distance(words[i], words[i + 1]) == 1;
    double slack = kInfinity;
    const auto& w0 = words[static_cast<std::size_t>(n)];
    for (std::int64_t b = -n; b <= n; ++b) {
      const double bound = 2 * std::log2(1.0 + static_cast<double>(std::llabs(b))) + 6;
      slack = std::min(slack, bound - word_distance(w0, words[static_cast<std::size_t>(b + n)]));
    }
    o.detail << "max fibre " << worst << ", min slack " << slack;
    o.require(worst <= 3, "fibres");
    o.require(adjacent, "adjacency");
    o.require(slack >= 0, "distance bound");
  });

  criterion(2, "H2 tiling at window radius 10, r = 1", 120, [](Outcome& o) {
    const Tiling t = build_h2_tiling(1.0, TilingWindow{10, 0});
    NetOptions no;
    no.window_radius = 10;
    const auto d = tiling_to_decomposition(t, generate_net(no));
    validate(d);
    const double sep = same_colour_separation(d, 4.0);
    const auto mult = r_multiplicity(to_cover(d), d.r, Metric::Model);
    double worst_ab1 = 0, lo_b = kInfinity, hi_b = 0;
    std::size_t fitted = 0;
    for (const auto& pg : piece_growth(to_cover(d))) {
      if (!pg.growth.fitted) continue;
      ++fitted;
      const double e = pg.growth.fitted_exponent;
      if (label_kind(d.labels[pg.piece]) == TileKind::B) {
        lo_b = std::min(lo_b, e);
        hi_b = std::max(hi_b, e);
      } else {
        worst_ab1 = std::max(worst_ab1, e);
      }
    }
    o.detail << "colours " << d.d + 1 << ", separation " << sep << ", multiplicity " << mult.value << ", fitted pieces "
             << fitted << ", A/B1 max exponent " << worst_ab1 << ", B exponents [" << lo_b << ", " << hi_b << "]";
    o.require(d.d + 1 == 2 && check_disjointness(d).empty(), "two colours");
    o.require(sep >= 0.5, "separation");
    o.require(worst_ab1 <= 1.3, "A/B1 exponent");
    o.require(fitted > 0 && lo_b >= 1.7 && hi_b <= 2.3, "B exponent");
    o.require(mult.value <= 2, "multiplicity");
  });

  criterion(3, "H3 cover at window radius 8", 600, [](Outcome& o) {
    HdCoverOptions opts;
    opts.dim = 3;
    opts.window_radius = 8;
    const HdCover hd = hd_cover(opts);
    const auto& d = hd.decomposition;
    validate(d);
    const bool disjoint = check_disjointness(d).empty();
    double worst = 0;
    std::size_t fitted = 0;
    for (const auto& pg : piece_growth(to_cover(d))) {
      if (!pg.growth.fitted) continue;
      ++fitted;
      worst = std::max(worst, pg.growth.fitted_exponent);
    }
    const auto levels = check_tiling_level_sets(hd.tiling, LevelSetOptions{});
    o.detail << "points " << d.space->size() << ", pieces " << d.pieces.size() << ", colours " << d.d + 1
             << ", fitted pieces " << fitted << ", max exponent " << worst << ", level-set checks " << levels.checks
             << " with " << levels.violations << " violations";
    o.require(d.d + 1 <= 4 && disjoint, "colour classes");
    o.require(fitted > 0 && worst <= 3.5, "piece exponent");
    o.require(levels.checks > 0 && levels.violations == 0, "level-set bound");
  });

  criterion(4, "cover algebra on 50 random graphs", kInfinity, [](Outcome& o) {
    std::mt19937_64 rng(2024);
    int ok = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto g = random_graph(rng, 5 + rng() % 36, 0.08);
      const Cover c = random_cover(rng, g, 1 + static_cast<int>(rng() % 6));
      const double R = 1 + trial % 3;
      const int mult = brute_multiplicity(c, 2 * R, Metric::Model);
      const auto d = greedy_decomposition(c, R, mult - 1);
      bool good = check_coverage(d).covered && brute_disjoint(d, R) && traces_into(d, c) && d.d == mult - 1;
      const auto a = kolmogorov_amplify(d, d.d);
      good = good && check_coverage(a).covered && brute_disjoint(a, a.r) && a.d == d.d + 1;
      const auto counts = class_counts(a);
      for (PointId p = 0; p < g->size(); ++p)
        good = good && counts[p] == brute_class_count(a, p) && counts[p] >= 2;
      for (std::size_t j = 0; j < a.pieces.size(); ++j) {
        // each amplified piece lies in the fattening of the input pieces it records
        PointSet parent_union;
        for (PieceId q : a.parents[j]) parent_union.insert(parent_union.end(), d.pieces[q].begin(), d.pieces[q].end());
        std::sort(parent_union.begin(), parent_union.end());
        parent_union.erase(std::unique(parent_union.begin(), parent_union.end()), parent_union.end());
        const auto grown = fatten(*g, parent_union, a.r);
        good = good && !a.parents[j].empty() && std::includes(grown.begin(), grown.end(), a.pieces[j].begin(), a.pieces[j].end());
      }
      ok += good;
    }
    o.detail << ok << "/50 graphs pass";
    o.require(ok == 50, "random graphs");
  });

  criterion(5, "walk pullback of ball covers", kInfinity, [](Outcome& o) {
    std::map<int, double> previous;
    bool stable = true, bounded = true, monotone = true;
    for (std::int64_t n : {20000, 100000}) {
      const MapRecord f = tree_walk(n);
      double last = 0;
      for (int R : {2, 4, 8}) {
        const Cover pieces = refine_connected(pullback_cover(f, ball_cover(f.target, R)), 1.0);
        double worst = 0;
        for (const auto& p : pieces.pieces) worst = std::max(worst, diameter(*f.source, p));
        const double bound = 3.0 * (3 * std::ldexp(1.0, R) - 2);
        bounded = bounded && worst <= bound;
        monotone = monotone && worst >= last;
        last = worst;
        if (previous.count(R)) stable = stable && previous[R] == worst;
        previous[R] = worst;
        if (n == 100000) o.detail << "R=" << R << ": max diameter " << worst << " (bound " << bound << ") ";
      }
    }
    o.require(bounded, "exponential bound");
    o.require(monotone, "monotone in R");
    o.require(stable, "same diameters at n = 2e4 and 1e5");
  });

  criterion(6, "escalation on the H2 tiling at radius 10", kInfinity, [](Outcome& o) {
    const Tiling t = build_h2_tiling(1.0, TilingWindow{10, 0});
    NetOptions no;
    no.window_radius = 10;
    const auto d = tiling_to_decomposition(t, generate_net(no));
    const auto rep = escalation(to_cover(d), 2, 3);
    for (const auto& s : rep.steps)
      o.detail << "m=" << s.m << ": " << s.growth.fitted_exponent << " (residual " << s.growth.fit_residual << ") ";
    o.require(rep.non_decreasing, "non-decreasing");
    o.require(rep.steps.size() > 1 && rep.steps[1].growth.fitted_exponent > 2.5, "m = 1 exponent");
  });

  criterion(7, "comb growth exponents", kInfinity, [](Outcome& o) {
    const std::map<int, int> extent{{1, 200}, {2, 200}, {3, 60}};
    for (int d = 1; d <= 3; ++d) {
      const int e = extent.at(d);
      const auto s = make_comb(d, e);
      const auto& g = dynamic_cast<const CombGeometry&>(s->geometry());
      const int r_max = e / 2;
      const auto rep = growth_report(*s, g.origin(), r_max);
      const auto oracle = comb_oracle(d, e, r_max);
      bool same = true;
      for (int r = 0; r <= r_max; ++r) same = same && rep.counts[static_cast<std::size_t>(r)] == oracle[static_cast<std::size_t>(r)];
      const double exponent = fit_growth(rep).exponent;
      o.detail << "C" << d << ": " << exponent << " ";
      o.require(same, "BFS oracle for C" + std::to_string(d));
      o.require(std::abs(exponent - d) <= 0.4, "exponent of C" + std::to_string(d));
    }
  });

  criterion(8, "nerve map", kInfinity, [](Outcome& o) {
    std::vector<double> lip;
    for (int radius : {8, 10}) {
      const Cover c = ball_cover(make_tree_ball(radius), 2);
      const auto nerve = nerve_map(c);
      const Membership mem = membership(c);
      bool exact = true;
      for (PointId p = 0; p < c.space->size(); ++p) {
        double sum = 0;
        const auto& coords = nerve.coordinates[p];
        exact = exact && coords.size() == mem.of(p).size();
        for (std::size_t i = 0; exact && i < coords.size(); ++i) {
          exact = exact && coords[i].first == mem.of(p)[i] && coords[i].second > 0;
          sum += coords[i].second;
        }
        exact = exact && std::abs(sum - 1) < 1e-9;
      }
      o.require(exact, "coordinates at radius " + std::to_string(radius));
      lip.push_back(nerve_lipschitz(nerve, *c.space));
    }
    o.detail << "Lipschitz " << lip[0] << " and " << lip[1];
    o.require(std::abs(lip[1] - lip[0]) <= 0.1 * lip[0], "Lipschitz stability");
  });

  criterion(9, "analysis calibration", kInfinity, [](Outcome& o) {
    double worst = 0;
    for (int d = 1; d <= 4; ++d) {
      std::vector<std::size_t> counts;
      for (int n = 0; n <= 60; ++n) counts.push_back(static_cast<std::size_t>(std::llround(std::pow(std::max(n, 1), d))));
      worst = std::max(worst, std::abs(fit_growth(counts_report(counts)).exponent - d));
    }
    double stat_err = 0;
    for (int top = 20; top <= 40; ++top) {
      std::vector<std::size_t> counts;
      for (int n = 0; n <= top; ++n) counts.push_back(std::size_t{1} << n);
      stat_err = std::max(stat_err, std::abs(subexp_stat(counts_report(counts)).stat / std::log(2.0) - 1));
    }
    o.detail << "worst exponent error " << worst << ", worst relative subexp error " << stat_err;
    o.require(worst <= 0.1, "fit_growth");
    o.require(stat_err <= 0.05, "subexp_stat");
  });

  criterion(10, "byte-identical re-runs", kInfinity, [](Outcome& o) {
    const fs::path root = fs::temp_directory_path() / "coarselab-acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    ::setenv("COARSELAB_CACHE", (root / "cache").c_str(), 1);
    const auto pipeline = [&](const std::string& tag) {
      const std::string dir = (root / tag).string();
      bool ok = true;
      ok = ok && cli({"--out", dir + "/walk", "build", "walk", "--n", "20000"}) == 0;
      ok = ok && cli({"--out", dir + "/tiling", "build", "tiling", "--r", "1", "--window", "ball:8"}) == 0;
      ok = ok && cli({"--out", dir + "/amp", "build", "amplify", "--decomp", dir + "/tiling/decomp.json", "--n", "1"}) == 0;
      ok = ok && cli({"--out", dir + "/dist", "--pair-cap", "20000", "analyze", "distortion", "--map",
                      dir + "/walk/walk.json", "--anchored", "0"}) == 0;
      ok = ok && cli({"--out", dir + "/esc", "analyze", "escalation", "--decomp", dir + "/tiling/decomp.json", "--m", "1"}) != 1;
      return ok;
    };
    o.require(pipeline("a") && pipeline("b"), "pipeline runs");
    std::size_t files = 0, differing = 0;
    for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
      if (!e.is_regular_file() || e.path().filename() == "run.json") continue;
      const fs::path twin = root / "b" / fs::relative(e.path(), root / "a");
      ++files;
      differing += slurp(e.path()) != slurp(twin);
    }
    std::size_t reproduced = 0, runs = 0;
    for (const char* stage : {"walk", "tiling", "amp", "dist", "esc"}) {
      ++runs;
      std::string text;
      reproduced += cli({"report", (root / "a" / stage / "run.json").string(), "--rerun"}, &text) == 0;
    }
    o.detail << files << " artifacts compared, " << differing << " differ; " << reproduced << "/" << runs
             << " runs reproduced from their manifests";
    o.require(files > 0 && differing == 0, "hash equality across runs");
    o.require(reproduced == runs, "report --rerun");
    fs::remove_all(root);
  });

  std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
  return failures == 0 ? 0 : 1;
}
