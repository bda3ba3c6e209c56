#include "coarselab/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace coarselab::kernels {

namespace {

// Reusable BFS state for one thread.
struct BallScratch {
  std::vector<std::uint32_t> seen;
  std::vector<std::uint32_t> piece_seen;
  std::uint32_t stamp = 0;
  std::vector<PointId> frontier, next, members, adj;
  std::vector<Neighbor> nb;

  BallScratch(std::size_t n, std::size_t pieces) : seen(n, 0), piece_seen(pieces, 0) {}

  void collect(const SpaceGraph& space, PointId c, double R, Metric metric) {
    members.clear();
    if (metric == Metric::Model) {
      space.geometry().within(c, R, nb);
      for (const auto& e : nb) members.push_back(e.id);
      return;
    }
    ++stamp;
    const int radius = static_cast<int>(std::floor(R + kTolerance));
    seen[c] = stamp;
    frontier.assign(1, c);
    members.push_back(c);
    for (int level = 0; level < radius && !frontier.empty(); ++level) {
      next.clear();
      for (PointId u : frontier) {
        std::span<const PointId> nbrs;
        if (space.has_edges()) {
          nbrs = space.neighbors(u);
        } else {
          space.geometry().adjacent(u, adj);
          nbrs = adj;
        }
        for (PointId v : nbrs)
          if (seen[v] != stamp) {
            seen[v] = stamp;
            next.push_back(v);
          }
      }
      members.insert(members.end(), next.begin(), next.end());
      frontier.swap(next);
    }
  }

  int distinct_pieces(const Membership& mem) {
    ++stamp;
    int count = 0;
    for (PointId p : members)
      for (PieceId q : mem.of(p))
        if (piece_seen[q] != stamp) {
          piece_seen[q] = stamp;
          ++count;
        }
    return count;
  }
};

bool better(const MultiplicityResult& a, const MultiplicityResult& b) {
  return a.value != b.value ? a.value > b.value : a.center < b.center;
}

std::size_t piece_count(const Membership& mem) {
  PieceId m = 0;
  for (PieceId p : mem.pieces) m = std::max(m, p + 1);
  return m;
}

void scan_point(const SpaceGraph& space, const Membership& mem, const std::vector<int>& colour, double r, PointId p,
                std::vector<Neighbor>& nb, std::vector<Violation>& out) {
  const auto mine = mem.of(p);
  if (mine.empty()) return;
  space.geometry().within(p, r, nb);
  for (const auto& e : nb) {
    if (e.dist >= r - kTolerance) continue;
    for (PieceId P : mine)
      for (PieceId Q : mem.of(e.id)) {
        if (P == Q || colour[P] != colour[Q]) continue;
        Violation v;
        if (P < Q) v = {P, Q, p, e.id, e.dist};
        else v = {Q, P, e.id, p, e.dist};
        out.push_back(v);
      }
  }
}

std::vector<Violation> reduce_violations(std::vector<Violation> all) {
  std::sort(all.begin(), all.end(), [](const Violation& x, const Violation& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    if (x.distance != y.distance) return x.distance < y.distance;
    if (x.point_a != y.point_a) return x.point_a < y.point_a;
    return x.point_b < y.point_b;
  });
  std::vector<Violation> out;
  for (const auto& v : all)
    if (out.empty() || out.back().a != v.a || out.back().b != v.b) out.push_back(v);
  return out;
}

void growth_one(const SpaceGraph& space, std::span<const PointId> set, PointId c, int r_max,
                std::vector<std::size_t>& counts) {
  counts.assign(static_cast<std::size_t>(r_max) + 1, 0);
  const Geometry& g = space.geometry();
  for (PointId p : set) {
    const double d = p == c ? 0.0 : g.distance(c, p);
    const double b = std::ceil(d - kTolerance);
    if (b <= r_max) ++counts[static_cast<std::size_t>(std::max(0.0, b))];
  }
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
}

}  // namespace

MultiplicityResult multiplicity_serial(const SpaceGraph& space, const Membership& mem, double R, Metric metric) {
  BallScratch s(space.size(), piece_count(mem));
  MultiplicityResult best;
  for (std::size_t c = 0; c < space.size(); ++c) {
    s.collect(space, static_cast<PointId>(c), R, metric);
    const MultiplicityResult cur{s.distinct_pieces(mem), static_cast<PointId>(c)};
    if (better(cur, best)) best = cur;
  }
  return best;
}

MultiplicityResult multiplicity(const SpaceGraph& space, const Membership& mem, double R, Metric metric) {
  const std::size_t pieces = piece_count(mem);
  const auto n = static_cast<std::int64_t>(space.size());
  MultiplicityResult best;
#pragma omp parallel
  {
    BallScratch s(space.size(), pieces);
    MultiplicityResult local;
#pragma omp for schedule(dynamic, 256) nowait
    for (std::int64_t c = 0; c < n; ++c) {
      s.collect(space, static_cast<PointId>(c), R, metric);
      const MultiplicityResult cur{s.distinct_pieces(mem), static_cast<PointId>(c)};
      if (better(cur, local)) local = cur;
    }
#pragma omp critical
    if (better(local, best)) best = local;
  }
  return best;
}

std::vector<Violation> disjointness_serial(const SpaceGraph& space, const Membership& mem,
                                           const std::vector<int>& colour, double r) {
  std::vector<Violation> all;
  std::vector<Neighbor> nb;
  for (std::size_t p = 0; p < space.size(); ++p) scan_point(space, mem, colour, r, static_cast<PointId>(p), nb, all);
  return reduce_violations(std::move(all));
}

std::vector<Violation> disjointness(const SpaceGraph& space, const Membership& mem, const std::vector<int>& colour,
                                    double r) {
  std::vector<Violation> all;
  const auto n = static_cast<std::int64_t>(space.size());
#pragma omp parallel
  {
    std::vector<Violation> local;
    std::vector<Neighbor> nb;
#pragma omp for schedule(dynamic, 512) nowait
    for (std::int64_t p = 0; p < n; ++p) scan_point(space, mem, colour, r, static_cast<PointId>(p), nb, local);
#pragma omp critical
    all.insert(all.end(), local.begin(), local.end());
  }
  return reduce_violations(std::move(all));
}

double diameter_serial(const SpaceGraph& space, std::span<const PointId> set) {
  double best = 0;
  const Geometry& g = space.geometry();
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j) best = std::max(best, g.distance(set[i], set[j]));
  return best;
}

double diameter(const SpaceGraph& space, std::span<const PointId> set) {
  if (set.size() < 512) return diameter_serial(space, set);
  double best = 0;
  const Geometry& g = space.geometry();
  const auto n = static_cast<std::int64_t>(set.size());
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i + 1; j < n; ++j) best = std::max(best, g.distance(set[i], set[j]));
  return best;
}

std::vector<std::vector<std::size_t>> set_growth_serial(const SpaceGraph& space, std::span<const PointId> set,
                                                        std::span<const PointId> centers, int r_max) {
  std::vector<std::vector<std::size_t>> out(centers.size());
  for (std::size_t c = 0; c < centers.size(); ++c) growth_one(space, set, centers[c], r_max, out[c]);
  return out;
}

std::vector<std::vector<std::size_t>> set_growth(const SpaceGraph& space, std::span<const PointId> set,
                                                 std::span<const PointId> centers, int r_max) {
  std::vector<std::vector<std::size_t>> out(centers.size());
  const auto n = static_cast<std::int64_t>(centers.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < n; ++c) growth_one(space, set, centers[c], r_max, out[c]);
  return out;
}

void pair_distances_serial(const MapRecord& f, std::span<const std::pair<PointId, PointId>> pairs,
                           std::vector<double>& source, std::vector<double>& target) {
  source.resize(pairs.size());
  target.resize(pairs.size());
  const Geometry& gs = f.source->geometry();
  const Geometry& gt = f.target->geometry();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [a, b] = pairs[i];
    source[i] = a == b ? 0.0 : gs.distance(a, b);
    const PointId fa = f.assignment[a], fb = f.assignment[b];
    target[i] = fa == fb ? 0.0 : gt.distance(fa, fb);
  }
}

void pair_distances(const MapRecord& f, std::span<const std::pair<PointId, PointId>> pairs,
                    std::vector<double>& source, std::vector<double>& target) {
  source.resize(pairs.size());
  target.resize(pairs.size());
  const Geometry& gs = f.source->geometry();
  const Geometry& gt = f.target->geometry();
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto [a, b] = pairs[i];
    source[i] = a == b ? 0.0 : gs.distance(a, b);
    const PointId fa = f.assignment[a], fb = f.assignment[b];
    target[i] = fa == fb ? 0.0 : gt.distance(fa, fb);
  }
}

}  // namespace coarselab::kernels
