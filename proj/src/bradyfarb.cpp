#include "coarselab/bradyfarb.hpp"

#include <map>

#include "coarselab/geometries.hpp"

namespace coarselab {

MapRecord brady_farb(const SpacePtr& source, const std::vector<SpacePtr>& factors, SpacePtr product,
                     const MeasureOptions& measure) {
  const auto* src = dynamic_cast<const HalfSpaceGeometry*>(&source->geometry());
  if (src == nullptr) throw Error(ErrorKind::Domain, "source is not an H^d net");
  const int d = src->dim();
  if (d < 2 || static_cast<int>(factors.size()) != d - 1)
    throw Error(ErrorKind::Arity, "need d - 1 factor planes", Json{{"dim", d}, {"factors", factors.size()}});
  std::vector<const HalfSpaceGeometry*> planes;
  for (const auto& f : factors) {
    const auto* g = dynamic_cast<const HalfSpaceGeometry*>(&f->geometry());
    if (g == nullptr || g->dim() != 2) throw Error(ErrorKind::Domain, "factor is not an H^2 net");
    planes.push_back(g);
  }
  if (!product) product = build_product(factors);
  const auto* pg = dynamic_cast<const ProductGeometry*>(&product->geometry());
  if (pg == nullptr || pg->arity() != factors.size()) throw Error(ErrorKind::Arity, "target is not the factor product");

  MapRecord f;
  f.source = source;
  f.target = product;
  f.assignment.resize(source->size());
  const auto n = static_cast<std::int64_t>(source->size());
  const std::size_t k = factors.size();
  std::int64_t outside = -1;
#pragma omp parallel
  {
    std::vector<double> x(static_cast<std::size_t>(d - 1));
    std::vector<PointId> parts(k);
#pragma omp for schedule(dynamic, 1024)
    for (std::int64_t p = 0; p < n; ++p) {
      double y;
      src->coords(static_cast<PointId>(p), x.data(), y);
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) {
        const double xi = x[i];
        if (planes[i]->distance_to_center({&xi, 1}, y) > planes[i]->window_radius() + kTolerance) {
          ok = false;
          break;
        }
        parts[i] = planes[i]->nearest({&xi, 1}, y);
      }
      if (!ok) {
#pragma omp critical
        if (outside < 0 || p < outside) outside = p;
        continue;
      }
      f.assignment[static_cast<std::size_t>(p)] = pg->compose(parts);
    }
  }
  if (outside >= 0)
    throw Error(ErrorKind::Window, "projection outside the factor window", Json{{"point", outside}});
  f.provenance = Json{{"construction", "brady_farb"}, {"dim", d}, {"source", source->ref()}};
  measure_map(f, measure);
  return f;
}

ColoredDecomposition pullback_product(const MapRecord& f, const std::vector<const ColoredDecomposition*>& factors) {
  check_total(f);
  const auto* pg = dynamic_cast<const ProductGeometry*>(&f.target->geometry());
  if (pg == nullptr || pg->arity() != factors.size()) throw Error(ErrorKind::Arity, "map target is not the factor product");
  const int d = factors.front()->d;
  double r = kInfinity;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i]->d != d) throw Error(ErrorKind::Arity, "factor decompositions have different colour counts");
    if (factors[i]->space->ref() != pg->factor(i).ref())
      throw Error(ErrorKind::Arity, "decomposition does not live on the product factor", Json{{"factor", i}});
    r = std::min(r, factors[i]->r);
  }
  // per factor point and colour: the piece of that colour containing it, -1 if none
  std::vector<std::vector<std::int64_t>> owner(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& dec = *factors[i];
    owner[i].assign(dec.space->size() * static_cast<std::size_t>(d + 1), -1);
    for (std::size_t j = 0; j < dec.pieces.size(); ++j)
      for (PointId p : dec.pieces[j]) {
        auto& slot = owner[i][p * static_cast<std::size_t>(d + 1) + static_cast<std::size_t>(dec.colour[j])];
        if (slot >= 0) throw Error(ErrorKind::Invariant, "same-colour pieces overlap", Json{{"factor", i}, {"point", p}});
        slot = static_cast<std::int64_t>(j);
      }
  }
  ColoredDecomposition out;
  out.space = f.source;
  out.d = d;
  out.partition = false;
  out.r = f.measured_lipschitz > 0 ? r / f.measured_lipschitz : r;
  std::map<std::vector<std::int64_t>, std::size_t> index;  // (colour, P_1, ..., P_k) -> piece
  std::vector<std::int64_t> key(factors.size() + 1);
  for (std::size_t p = 0; p < f.assignment.size(); ++p) {
    const PointId image = f.assignment[p];
    for (int c = 0; c <= d; ++c) {
      key[0] = c;
      bool all = true;
      for (std::size_t i = 0; i < factors.size() && all; ++i) {
        const PointId q = pg->component(image, i);
        key[i + 1] = owner[i][q * static_cast<std::size_t>(d + 1) + static_cast<std::size_t>(c)];
        all = key[i + 1] >= 0;
      }
      if (!all) continue;
      auto [it, fresh] = index.emplace(key, out.pieces.size());
      if (fresh) {
        out.pieces.emplace_back();
        out.colour.push_back(c);
        std::vector<PieceId> parents;
        std::string label;
        for (std::size_t i = 0; i < factors.size(); ++i) {
          parents.push_back(static_cast<PieceId>(key[i + 1]));
          const auto& labels = factors[i]->labels;
          if (!labels.empty()) label += (i ? "x" : "") + labels[static_cast<std::size_t>(key[i + 1])];
        }
        out.parents.push_back(std::move(parents));
        if (!label.empty()) out.labels.push_back(std::move(label));
      }
      out.pieces[it->second].push_back(static_cast<PointId>(p));
    }
  }
  if (!out.labels.empty() && out.labels.size() != out.pieces.size()) out.labels.clear();
  return out;
}

HdCover hd_cover(const HdCoverOptions& opts) {
  if (opts.dim < 2) throw Error(ErrorKind::Precondition, "dimension must be at least 2");
  HdCover out;
  const double factor_radius = opts.window_radius + 1;
  out.tiling = build_h2_tiling(opts.r, TilingWindow{factor_radius, 0.0});
  NetOptions fo;
  fo.dim = 2;
  fo.window_radius = factor_radius;
  fo.sep = opts.sep;
  fo.build_edges = false;
  out.factor_net = generate_net(fo);
  ColoredDecomposition dec = tiling_to_decomposition(out.tiling, out.factor_net);
  // k - 1 factors of dimension 1 need k colours in the product
  for (int step = 0; step < opts.dim - 2; ++step) dec = kolmogorov_amplify(dec, 1);
  out.factor_decomposition = std::move(dec);

  NetOptions so;
  so.dim = opts.dim;
  so.window_radius = opts.window_radius;
  so.sep = opts.sep;
  so.build_edges = false;
  const SpacePtr source = generate_net(so);
  const std::vector<SpacePtr> factors(static_cast<std::size_t>(opts.dim - 1), out.factor_net);
  out.alpha = brady_farb(source, factors, nullptr, opts.measure);
  const std::vector<const ColoredDecomposition*> parts(factors.size(), &out.factor_decomposition);
  out.decomposition = pullback_product(out.alpha, parts);
  return out;
}

}  // namespace coarselab
