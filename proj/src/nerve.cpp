#include "coarselab/nerve.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace coarselab {

namespace {

template <class F>
void neighbours(const SpaceGraph& space, PointId p, std::vector<PointId>& scratch, F&& fn) {
  if (space.has_edges()) {
    for (PointId q : space.neighbors(p)) fn(q);
  } else {
    space.geometry().adjacent(p, scratch);
    for (PointId q : scratch) fn(q);
  }
}

}  // namespace

NerveComplex nerve_map(const Cover& cover, double cap) {
  const SpaceGraph& space = *cover.space;
  if (!space.has_edges() && !space.geometry().provides_adjacency())
    throw Error(ErrorKind::Precondition, "nerve coordinates need the window graph");
  validate(cover);
  const std::size_t n = space.size();
  NerveComplex nerve;
  nerve.vertices = cover.pieces.size();
  nerve.coordinates.assign(n, {});

  // distance from x in U to the complement: BFS inside U from points with an outside neighbour
  std::vector<std::int32_t> dist(n, -1);
  std::vector<std::uint8_t> inside(n, 0);
  std::vector<PointId> frontier, next, scratch;
  for (std::size_t j = 0; j < cover.pieces.size(); ++j) {
    const auto& piece = cover.pieces[j];
    for (PointId p : piece) inside[p] = 1;
    frontier.clear();
    for (PointId p : piece) {
      bool edge = false;
      neighbours(space, p, scratch, [&](PointId q) { edge = edge || !inside[q]; });
      if (edge) {
        dist[p] = 1;
        frontier.push_back(p);
      }
    }
    for (std::int32_t level = 1; !frontier.empty(); ++level) {
      next.clear();
      for (PointId p : frontier)
        neighbours(space, p, scratch, [&](PointId q) {
          if (inside[q] && dist[q] < 0) {
            dist[q] = level + 1;
            next.push_back(q);
          }
        });
      frontier.swap(next);
    }
    for (PointId p : piece) {
      const double value = dist[p] < 0 ? cap : static_cast<double>(dist[p]);
      nerve.coordinates[p].emplace_back(static_cast<PieceId>(j), value);
      dist[p] = -1;
      inside[p] = 0;
    }
  }
  std::set<std::vector<PieceId>> supports;
  std::size_t multiplicity = 0;
  for (auto& coords : nerve.coordinates) {
    double total = 0;
    for (const auto& [piece, v] : coords) total += v;
    std::vector<PieceId> support;
    for (auto& [piece, v] : coords) {
      v /= total;
      support.push_back(piece);
    }
    multiplicity = std::max(multiplicity, support.size());
    supports.insert(std::move(support));
  }
  nerve.simplices.assign(supports.begin(), supports.end());
  nerve.dimension = static_cast<int>(multiplicity) - 1;
  return nerve;
}

double nerve_lipschitz(const NerveComplex& nerve, const SpaceGraph& space) {
  double best = 0;
  const auto n = static_cast<std::int64_t>(space.size());
#pragma omp parallel reduction(max : best)
  {
    std::vector<PointId> scratch;
#pragma omp for schedule(dynamic, 512)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto p = static_cast<PointId>(i);
      const auto& a = nerve.coordinates[p];
      neighbours(space, p, scratch, [&](PointId q) {
        if (q <= p) return;
        const auto& b = nerve.coordinates[q];
        double sq = 0;
        std::size_t ia = 0, ib = 0;
        while (ia < a.size() || ib < b.size()) {
          if (ib == b.size() || (ia < a.size() && a[ia].first < b[ib].first)) {
            sq += a[ia].second * a[ia].second;
            ++ia;
          } else if (ia == a.size() || b[ib].first < a[ia].first) {
            sq += b[ib].second * b[ib].second;
            ++ib;
          } else {
            const double d = a[ia].second - b[ib].second;
            sq += d * d;
            ++ia;
            ++ib;
          }
        }
        best = std::max(best, std::sqrt(sq));  // adjacent points are one hop apart
      });
    }
  }
  return best;
}

Json nerve_to_json(const NerveComplex& nerve) {
  Json j;
  j["version"] = 1;
  j["kind"] = "nerve";
  j["vertices"] = nerve.vertices;
  j["dimension"] = nerve.dimension;
  j["simplices"] = nerve.simplices;
  Json coords = Json::array();
  for (const auto& c : nerve.coordinates) {
    Json row = Json::array();
    for (const auto& [piece, v] : c) row.push_back(Json::array({piece, v}));
    coords.push_back(std::move(row));
  }
  j["coordinates"] = std::move(coords);
  return j;
}

}  // namespace coarselab
