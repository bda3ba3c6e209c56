// Serial reference vs OpenMP timings for the hot kernels.
// Usage: bench_kernels [window_radius] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

#include "coarselab/geometries.hpp"
#include "coarselab/kernels.hpp"
#include "coarselab/tiling.hpp"
#include "coarselab/walk.hpp"

using namespace coarselab;

namespace {

double best_of(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, int repeats, const std::function<bool()>& serial, const std::function<bool()>& parallel) {
  bool same = true;
  const double ts = best_of(repeats, [&] { same = serial() && same; });
  const double tp = best_of(repeats, [&] { same = parallel() && same; });
  std::printf("%-22s %10.4f %10.4f %8.2fx %s\n", name, ts, tp, ts / tp, same ? "" : "(mismatch)");
}

}  // namespace

int main(int argc, char** argv) {
  const double radius = argc > 1 ? std::atof(argv[1]) : 10.0;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

  NetOptions o;
  o.window_radius = radius;
  const auto net = generate_net(o);
  const auto d = tiling_to_decomposition(build_h2_tiling(1.0, TilingWindow{radius, 0}), net);
  const Membership mem = membership(d);
  std::printf("H2 net radius %.1f: %zu points, %zu pieces, %d threads\n", radius, net->size(), d.pieces.size(),
              omp_get_max_threads());
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial s", "openmp s", "speedup");

  MultiplicityResult ms, mp;
  row("multiplicity R=2", repeats,
      [&] { ms = kernels::multiplicity_serial(*net, mem, 2, Metric::Graph); return true; },
      [&] { mp = kernels::multiplicity(*net, mem, 2, Metric::Graph); return mp.value == ms.value && mp.center == ms.center; });

  std::size_t vs = 0;
  row("disjointness r=1.5", repeats,
      [&] { vs = kernels::disjointness_serial(*net, mem, d.colour, 1.5).size(); return true; },
      [&] { return kernels::disjointness(*net, mem, d.colour, 1.5).size() == vs; });

  std::size_t largest = 0;
  for (std::size_t j = 0; j < d.pieces.size(); ++j)
    if (d.pieces[j].size() > d.pieces[largest].size()) largest = j;
  const auto& big = d.pieces[largest];
  double ds = 0;
  row("diameter (largest)", repeats, [&] { ds = kernels::diameter_serial(*net, big); return true; },
      [&] { return kernels::diameter(*net, big) == ds; });

  std::vector<PointId> centers;
  for (PointId p = 0; p < net->size(); p += std::max<std::size_t>(1, net->size() / 64)) centers.push_back(p);
  std::vector<std::vector<std::size_t>> gs;
  row("set growth (64 centres)", repeats, [&] { gs = kernels::set_growth_serial(*net, big, centers, 10); return true; },
      [&] { return kernels::set_growth(*net, big, centers, 10) == gs; });

  const MapRecord walk = tree_walk(100000);
  std::mt19937_64 rng(1);
  std::vector<std::pair<PointId, PointId>> pairs(1'000'000);
  for (auto& p : pairs)
    p = {static_cast<PointId>(rng() % walk.source->size()), static_cast<PointId>(rng() % walk.source->size())};
  std::vector<double> s1, t1, s2, t2;
  row("pair distances (1e6)", repeats, [&] { kernels::pair_distances_serial(walk, pairs, s1, t1); return true; },
      [&] { kernels::pair_distances(walk, pairs, s2, t2); return s1 == s2 && t1 == t2; });
  return 0;
}
