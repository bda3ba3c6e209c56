#include "coarselab/map_record.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "coarselab/geometries.hpp"

namespace coarselab {

void check_total(const MapRecord& f) {
  if (!f.source || !f.target) throw Error(ErrorKind::Domain, "map without source or target");
  if (f.assignment.size() != f.source->size())
    throw Error(ErrorKind::Domain, "assignment is not total on the source",
                Json{{"assigned", f.assignment.size()}, {"source_size", f.source->size()}});
  for (std::size_t p = 0; p < f.assignment.size(); ++p)
    if (f.assignment[p] >= f.target->size())
      throw Error(ErrorKind::Domain, "image outside the target window", Json{{"point", p}, {"image", f.assignment[p]}});
}

void measure_map(MapRecord& f, const MeasureOptions& opts) {
  check_total(f);
  const SpaceGraph& src = *f.source;
  const Geometry& gs = src.geometry();
  const Geometry& gt = f.target->geometry();
  const std::size_t n = src.size();

  std::vector<std::uint32_t> fibre(f.target->size(), 0);
  for (PointId q : f.assignment) ++fibre[q];
  f.measured_max_fiber = n == 0 ? 0 : *std::max_element(fibre.begin(), fibre.end());

  // Points whose neighbourhoods are examined: all of them, or a seeded sample.
  const std::size_t degree = std::max<std::size_t>(1, src.has_edges() ? src.degree_bound() : 8);
  const std::size_t point_cap = std::max<std::size_t>(1, opts.pair_cap / degree);
  std::vector<PointId> points(n);
  std::iota(points.begin(), points.end(), 0);
  if (n > point_cap) {
    std::mt19937_64 rng(opts.seed);
    std::shuffle(points.begin(), points.end(), rng);
    points.resize(point_cap);
    std::sort(points.begin(), points.end());
  }

  const double threshold = src.edge_threshold();
  const bool use_edges = src.has_edges();
  const bool use_adjacent = !use_edges && gs.provides_adjacency();
  double best = 0;
  const auto m = static_cast<std::int64_t>(points.size());
#pragma omp parallel reduction(max : best)
  {
    std::vector<Neighbor> nb;
    std::vector<PointId> adj;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < m; ++i) {
      const PointId p = points[static_cast<std::size_t>(i)];
      auto visit = [&](PointId q, double ds) {
        if (q <= p || ds <= 0) return;
        const PointId fp = f.assignment[p], fq = f.assignment[q];
        const double dt = fp == fq ? 0.0 : gt.distance(fp, fq);
        best = std::max(best, dt / ds);
      };
      if (use_edges) {
        for (PointId q : src.neighbors(p)) visit(q, gs.distance(p, q));
      } else if (use_adjacent) {
        gs.adjacent(p, adj);
        for (PointId q : adj) visit(q, gs.distance(p, q));
      } else {
        gs.within(p, threshold, nb);
        for (const auto& e : nb) visit(e.id, e.dist);
      }
    }
  }
  f.measured_lipschitz = best;
}

MapRecord identity_map(const SpacePtr& space) {
  MapRecord f;
  f.source = space;
  f.target = space;
  f.assignment.resize(space->size());
  std::iota(f.assignment.begin(), f.assignment.end(), 0);
  f.provenance = Json{{"construction", "identity"}};
  measure_map(f);
  return f;
}

MapRecord compose(const MapRecord& g, const MapRecord& f) {
  check_total(f);
  check_total(g);
  if (f.target->ref() != g.source->ref())
    throw Error(ErrorKind::Domain, "maps are not composable");
  MapRecord h;
  h.source = f.source;
  h.target = g.target;
  h.assignment.resize(f.assignment.size());
  for (std::size_t p = 0; p < f.assignment.size(); ++p) h.assignment[p] = g.assignment[f.assignment[p]];
  h.provenance = Json{{"construction", "compose"}, {"outer", g.provenance}, {"inner", f.provenance}};
  measure_map(h);
  return h;
}

MapRecord product_map(const std::vector<const MapRecord*>& maps, const SpacePtr& source_product,
                      const SpacePtr& target_product) {
  const auto* ps = dynamic_cast<const ProductGeometry*>(&source_product->geometry());
  const auto* pt = dynamic_cast<const ProductGeometry*>(&target_product->geometry());
  if (ps == nullptr || pt == nullptr) throw Error(ErrorKind::Arity, "product map needs product spaces");
  if (ps->arity() != maps.size() || pt->arity() != maps.size())
    throw Error(ErrorKind::Arity, "arity mismatch", Json{{"maps", maps.size()}});
  Json prov = Json::array();
  for (std::size_t i = 0; i < maps.size(); ++i) {
    check_total(*maps[i]);
    if (maps[i]->source->ref() != ps->factor(i).ref() || maps[i]->target->ref() != pt->factor(i).ref())
      throw Error(ErrorKind::Domain, "factor map does not match the product factor", Json{{"factor", i}});
    prov.push_back(maps[i]->provenance);
  }
  MapRecord h;
  h.source = source_product;
  h.target = target_product;
  h.assignment.resize(source_product->size());
  std::vector<PointId> parts(maps.size());
  for (std::size_t p = 0; p < h.assignment.size(); ++p) {
    for (std::size_t i = 0; i < maps.size(); ++i)
      parts[i] = maps[i]->assignment[ps->component(static_cast<PointId>(p), i)];
    h.assignment[p] = pt->compose(parts);
  }
  h.provenance = Json{{"construction", "product"}, {"factors", prov}};
  measure_map(h);
  return h;
}

}  // namespace coarselab
