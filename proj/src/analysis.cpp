#include "coarselab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "coarselab/geometries.hpp"
#include "coarselab/kernels.hpp"
#include "coarselab/hyperbolic.hpp"

namespace coarselab {

namespace {

struct Line {
  double slope = 0, intercept = 0, rms = 0;
};

Line ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line l;
  l.slope = sxx > 0 ? sxy / sxx : 0;
  l.intercept = my - l.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (l.slope * x[i] + l.intercept);
    ss += e * e;
  }
  l.rms = std::sqrt(ss / n);
  return l;
}

template <class F>
void for_neighbours(const SpaceGraph& space, PointId p, std::vector<PointId>& scratch, F&& fn) {
  if (space.has_edges()) {
    for (PointId q : space.neighbors(p)) fn(q);
  } else {
    space.geometry().adjacent(p, scratch);
    for (PointId q : scratch) fn(q);
  }
}

std::vector<std::size_t> usable(const GrowthReport& g, int r_min) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.radii.size(); ++i)
    if (!g.truncated[i] && g.radii[i] >= std::max(r_min, 1) && g.counts[i] > 0) idx.push_back(i);
  return idx;
}

}  // namespace

// ---------------------------------------------------------------------------
// Growth

GrowthReport growth_report(const SpaceGraph& space, PointId center, int r_max) {
  space.check_index(center);
  if (r_max < 0) throw Error(ErrorKind::Precondition, "negative radius");
  if (!space.has_edges() && !space.geometry().provides_adjacency())
    throw Error(ErrorKind::Precondition, "graph balls need the window graph");
  GrowthReport g;
  g.center = center;
  std::vector<int> dist(space.size(), -1);
  std::vector<PointId> frontier{center}, next, scratch;
  dist[center] = 0;
  std::size_t total = 1;
  bool shallow = false;  // some vertex at distance < r lies near the boundary
  for (int r = 0; r <= r_max; ++r) {
    if (r > 0) {
      for (PointId u : frontier)
        if (space.depth(u) < space.edge_threshold()) shallow = true;
      next.clear();
      for (PointId u : frontier)
        for_neighbours(space, u, scratch, [&](PointId v) {
          if (dist[v] < 0) {
            dist[v] = r;
            next.push_back(v);
          }
        });
      total += next.size();
      frontier.swap(next);
    }
    g.radii.push_back(r);
    g.counts.push_back(total);
    g.truncated.push_back(shallow);
  }
  annotate(g);
  return g;
}

GrowthReport set_growth_report(const SpaceGraph& space, const PointSet& set, PointId center, int r_max) {
  space.check_index(center);
  const double depth = space.depth(center);
  if (r_max < 0) {
    if (!std::isfinite(depth)) throw Error(ErrorKind::Precondition, "r_max needed for an unbounded window");
    r_max = static_cast<int>(std::floor(depth + kTolerance)) + 1;
  }
  const std::vector<PointId> centers{center};
  const auto counts = kernels::set_growth(space, set, centers, r_max);
  GrowthReport g;
  g.center = center;
  for (int r = 0; r <= r_max; ++r) {
    g.radii.push_back(r);
    g.counts.push_back(counts[0][static_cast<std::size_t>(r)]);
    g.truncated.push_back(r > depth + kTolerance);
  }
  annotate(g);
  return g;
}

GrowthReport counts_report(const std::vector<std::size_t>& counts) {
  GrowthReport g;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    g.radii.push_back(static_cast<int>(i));
    g.counts.push_back(counts[i]);
    g.truncated.push_back(false);
  }
  annotate(g);
  return g;
}

GrowthFit fit_growth(const GrowthReport& report, int r_min) {
  const auto idx = usable(report, r_min);
  if (idx.size() < 4)
    throw Error(ErrorKind::Data, "fewer than 4 untruncated radii", Json{{"usable", idx.size()}, {"r_min", r_min}});
  std::vector<double> x, y;
  for (std::size_t i : idx) {
    x.push_back(std::log(static_cast<double>(report.radii[i])));
    y.push_back(std::log(static_cast<double>(report.counts[i])));
  }
  const Line l = ols(x, y);
  return GrowthFit{l.slope, l.rms, idx.size()};
}

SubexpStat subexp_stat(const GrowthReport& report) {
  const auto idx = usable(report, 1);
  if (idx.size() < 4) throw Error(ErrorKind::Data, "fewer than 4 untruncated radii", Json{{"usable", idx.size()}});
  SubexpStat s;
  const std::size_t last = idx.back();
  s.stat = std::log(static_cast<double>(report.counts[last])) / report.radii[last];
  std::vector<double> x, y;
  for (std::size_t i = idx.size() / 2; i < idx.size(); ++i) {
    x.push_back(report.radii[idx[i]]);
    y.push_back(std::log(static_cast<double>(report.counts[idx[i]])));
  }
  s.tail_slope = ols(x, y).slope;
  s.consistent = s.tail_slope < kSubexpThreshold;
  return s;
}

void annotate(GrowthReport& report, int r_min) {
  report.fitted = false;
  if (usable(report, r_min).size() < 4) return;
  const GrowthFit f = fit_growth(report, r_min);
  const SubexpStat s = subexp_stat(report);
  report.fitted_exponent = f.exponent;
  report.fit_residual = f.residual;
  report.subexp_stat = s.stat;
  report.tail_slope = s.tail_slope;
  report.fitted = true;
}

std::vector<PieceGrowth> piece_growth(const Cover& cover, int r_min) {
  const SpaceGraph& space = *cover.space;
  std::vector<PieceGrowth> out(cover.pieces.size());
  const auto n = static_cast<std::int64_t>(cover.pieces.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t j = 0; j < n; ++j) {
    const auto& piece = cover.pieces[static_cast<std::size_t>(j)];
    PointId center = piece.front();
    for (PointId p : piece)
      if (space.depth(p) > space.depth(center)) center = p;
    PieceGrowth pg;
    pg.piece = static_cast<PieceId>(j);
    pg.size = piece.size();
    std::vector<double> dist(piece.size());
    double far = 0;
    for (std::size_t i = 0; i < piece.size(); ++i) {
      dist[i] = piece[i] == center ? 0.0 : space.geometry().distance(center, piece[i]);
      far = std::max(far, dist[i]);
    }
    const double depth = space.depth(center);
    const int r_max = std::isfinite(depth) ? std::max(0, static_cast<int>(std::floor(depth + kTolerance)))
                                           : static_cast<int>(std::ceil(far - kTolerance));
    pg.growth.center = center;
    std::vector<std::size_t> counts(static_cast<std::size_t>(r_max) + 1, 0);
    for (double d : dist) {
      const double b = std::ceil(d - kTolerance);
      if (b <= r_max) ++counts[static_cast<std::size_t>(std::max(0.0, b))];
    }
    for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
    for (int r = 0; r <= r_max; ++r) {
      pg.growth.radii.push_back(r);
      pg.growth.counts.push_back(counts[static_cast<std::size_t>(r)]);
      pg.growth.truncated.push_back(false);
    }
    annotate(pg.growth, r_min);
    out[static_cast<std::size_t>(j)] = std::move(pg);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distortion

DistortionFit fit_distortion(const std::vector<double>& source, const std::vector<double>& target) {
  DistortionFit fit;
  fit.pairs = source.size();
  if (source.empty()) return fit;
  auto bucket_of = [](double s) { return s < 1 ? 0 : 1 + static_cast<int>(std::floor(std::log2(s))); };
  int top = 0;
  for (double s : source) top = std::max(top, bucket_of(s));
  fit.buckets.resize(static_cast<std::size_t>(top) + 1);
  std::vector<double> source_min(fit.buckets.size(), kInfinity);
  for (int b = 0; b <= top; ++b) {
    auto& bk = fit.buckets[static_cast<std::size_t>(b)];
    bk.lo = b == 0 ? 0 : std::ldexp(1.0, b - 1);
    bk.hi = std::ldexp(1.0, b);
    bk.min = kInfinity;
  }
  for (std::size_t i = 0; i < source.size(); ++i) {
    const double s = source[i], t = target[i];
    auto& bk = fit.buckets[static_cast<std::size_t>(bucket_of(s))];
    ++bk.pairs;
    auto& lo = source_min[static_cast<std::size_t>(bucket_of(s))];
    lo = std::min(lo, s);
    bk.source_max = std::max(bk.source_max, s);
    bk.min = std::min(bk.min, t);
    bk.max = std::max(bk.max, t);
    bk.mean += t;
    fit.log_c_envelope = std::max(fit.log_c_envelope, t / (std::log1p(s) + 1));
  }
  std::erase_if(source_min, [](double v) { return !std::isfinite(v); });
  std::erase_if(fit.buckets, [](const DistortionBucket& b) { return b.pairs == 0; });
  for (auto& bk : fit.buckets) bk.mean /= static_cast<double>(bk.pairs);

  // log model t = C (log(1 + s) + 1) and affine model on bucket maxima
  double num = 0, den = 0;
  std::vector<double> xs, maxima, minima, xs_low(source_min);
  for (const auto& bk : fit.buckets) {
    const double g = std::log1p(bk.source_max) + 1;
    num += bk.max * g;
    den += g * g;
    xs.push_back(bk.source_max);
    maxima.push_back(bk.max);
    minima.push_back(bk.min);
  }
  fit.log_c_lsq = den > 0 ? num / den : 0;
  double ss = 0;
  for (const auto& bk : fit.buckets) {
    const double e = bk.max - fit.log_c_lsq * (std::log1p(bk.source_max) + 1);
    ss += e * e;
  }
  fit.log_residual = std::sqrt(ss / static_cast<double>(fit.buckets.size()));
  if (fit.buckets.size() >= 2) {
    const Line upper = ols(xs, maxima);
    const Line lower = ols(xs_low, minima);
    fit.affine_residual = upper.rms;
    const double inv = lower.slope > 0 ? 1 / lower.slope : kInfinity;
    fit.affine_l = std::max({1.0, upper.slope, inv});
  } else {
    fit.affine_residual = 0;
    fit.affine_l = 1;
  }
  fit.log_fit_ok = fit.log_residual < fit.affine_residual;
  if (std::isfinite(fit.affine_l)) {
    double d = 0;
    for (std::size_t i = 0; i < source.size(); ++i) {
      d = std::max(d, target[i] - fit.affine_l * source[i]);
      d = std::max(d, source[i] / fit.affine_l - target[i]);
    }
    fit.affine_d = d;
  } else {
    fit.affine_d = kInfinity;
  }
  return fit;
}

DistortionProfile distortion_profile(const MapRecord& f, const DistortionOptions& opts) {
  check_total(f);
  DistortionProfile prof;
  prof.map_ref = Json{{"source", f.source->ref()}, {"target", f.target->ref()}, {"provenance", f.provenance}};
  const std::size_t n = f.source->size();
  const std::size_t total = n * (n - 1) / 2;
  std::vector<std::pair<PointId, PointId>> pairs;
  if (total <= opts.pair_cap) {
    prof.exhaustive = true;
    pairs.reserve(total);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(static_cast<PointId>(a), static_cast<PointId>(b));
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    pairs.reserve(opts.pair_cap);
    while (pairs.size() < opts.pair_cap) {
      const std::size_t a = pick(rng), b = pick(rng);
      if (a != b) pairs.emplace_back(static_cast<PointId>(std::min(a, b)), static_cast<PointId>(std::max(a, b)));
    }
  }
  std::vector<double> s, t;
  kernels::pair_distances(f, pairs, s, t);
  prof.all_pairs = fit_distortion(s, t);
  if (opts.anchor) {
    f.source->check_index(*opts.anchor);
    prof.anchor = opts.anchor;
    pairs.clear();
    for (std::size_t b = 0; b < n; ++b)
      if (b != *opts.anchor) pairs.emplace_back(*opts.anchor, static_cast<PointId>(b));
    kernels::pair_distances(f, pairs, s, t);
    prof.anchored = fit_distortion(s, t);
  }
  return prof;
}

// ---------------------------------------------------------------------------
// Radial sublinearity

SublinearityReport radial_sublinearity(const Cover& cover, PointId basepoint, const std::vector<int>& m_grid) {
  const SpaceGraph& space = *cover.space;
  space.check_index(basepoint);
  if (m_grid.empty()) throw Error(ErrorKind::Precondition, "empty m grid");
  const std::size_t k = cover.pieces.size();
  std::vector<double> diam(k), reach(k);
  std::vector<bool> clipped(k, false);
  const auto n = static_cast<std::int64_t>(k);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t j = 0; j < n; ++j) {
    const auto& piece = cover.pieces[static_cast<std::size_t>(j)];
    diam[static_cast<std::size_t>(j)] = diameter(space, piece);
    double near = kInfinity;
    bool edge = false;
    for (PointId p : piece) {
      near = std::min(near, p == basepoint ? 0.0 : space.geometry().distance(basepoint, p));
      edge = edge || space.depth(p) < space.edge_threshold();
    }
    reach[static_cast<std::size_t>(j)] = near;
    clipped[static_cast<std::size_t>(j)] = edge;
  }
  SublinearityReport rep;
  rep.basepoint = basepoint;
  rep.m_grid = m_grid;
  for (int m : m_grid) {
    if (m <= 0) throw Error(ErrorKind::Precondition, "m grid must be positive");
    double best = 0;
    bool trunc = false;
    for (std::size_t j = 0; j < k; ++j)
      if (reach[j] <= m + kTolerance) {
        best = std::max(best, diam[j]);
        trunc = trunc || clipped[j];
      }
    rep.max_diam.push_back(best);
    rep.ratio.push_back(best / m);
    rep.truncated.push_back(trunc);
  }
  std::vector<double> xs(m_grid.begin(), m_grid.end());
  rep.trend = xs.size() >= 2 ? ols(xs, rep.ratio).slope : 0;
  const std::size_t half = rep.ratio.size() / 2;
  rep.consistent = rep.ratio.size() >= 2;
  for (std::size_t i = std::max<std::size_t>(half, 1); i < rep.ratio.size(); ++i)
    if (!(rep.ratio[i] < rep.ratio[i - 1])) rep.consistent = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Quasi-convexity defect

namespace {
constexpr std::size_t kFullShuffle = 20'000'000;
}

DefectReport quasi_convexity_defect(const SpaceGraph& net, const PointSet& subset, double r, const DefectOptions& opts) {
  const auto* g = dynamic_cast<const HalfSpaceGeometry*>(&net.geometry());
  if (g == nullptr) throw Error(ErrorKind::Domain, "defect needs a half-space net");
  if (subset.size() < 2) throw Error(ErrorKind::Precondition, "subset needs two points");
  // r-connectivity of the subset
  {
    Cover c;
    c.space = std::shared_ptr<const SpaceGraph>(std::shared_ptr<const SpaceGraph>{}, &net);
    c.pieces = {subset};
    const Cover parts = refine_connected(c, r);
    if (parts.pieces.size() > 1) {
      std::vector<std::size_t> order(parts.pieces.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return parts.pieces[a].size() > parts.pieces[b].size(); });
      throw Error(ErrorKind::Precondition, "subset is not r-connected",
                  Json{{"components", parts.pieces.size()},
                       {"largest", parts.pieces[order[0]].front()},
                       {"second", parts.pieces[order[1]].front()}});
    }
  }
  const int m = g->dim() - 1;
  std::vector<std::uint8_t> member(net.size(), 0);
  for (PointId p : subset) member[p] = 1;

  const std::size_t n = subset.size();
  const std::size_t total = n * (n - 1) / 2;
  // A fixed seeded order of all pairs: a full shuffle for moderate counts, otherwise a
  // stream of distinct random pairs. Either way a larger cap extends a smaller one.
  const std::size_t used = std::min(total, opts.pair_cap);
  std::vector<std::uint64_t> order;
  std::mt19937_64 rng(opts.seed);
  if (total <= kFullShuffle) {
    order.resize(total);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(used);
  } else {
    std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
    std::unordered_set<std::uint64_t> seen;
    while (order.size() < used) {
      const std::uint64_t code = pick(rng);
      if (seen.insert(code).second) order.push_back(code);
    }
  }
  DefectReport rep;
  rep.pairs = used;
  rep.exhaustive = used == total;
  // pair index -> (i, j) with i < j, row-major over the upper triangle
  std::vector<std::pair<std::size_t, std::size_t>> pair_of(used);
  {
    std::vector<std::uint64_t> row_start(n, 0);
    for (std::size_t i = 1; i < n; ++i) row_start[i] = row_start[i - 1] + (n - i);
    for (std::size_t q = 0; q < used; ++q) {
      const std::uint64_t code = order[q];
      const std::size_t i = static_cast<std::size_t>(std::upper_bound(row_start.begin(), row_start.end(), code) -
                                                     row_start.begin()) - 1;
      pair_of[q] = {i, i + 1 + static_cast<std::size_t>(code - row_start[i])};
    }
  }
  const double step = net.separation() / 2;
  std::vector<double> best(used, 0.0);
  std::vector<std::vector<double>> where(used);
  const auto count = static_cast<std::int64_t>(used);
#pragma omp parallel
  {
    std::vector<double> px(static_cast<std::size_t>(m)), qx(static_cast<std::size_t>(m)), sx(static_cast<std::size_t>(m));
    std::vector<Neighbor> nb;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t q = 0; q < count; ++q) {
      const auto [i, j] = pair_of[static_cast<std::size_t>(q)];
      double py, qy, sy;
      g->coords(subset[i], px.data(), py);
      g->coords(subset[j], qx.data(), qy);
      const double len = g->distance(subset[i], subset[j]);
      const int samples = static_cast<int>(std::ceil(len / step));
      double worst = 0;
      std::vector<double> at;
      for (int k = 0; k <= samples; ++k) {
        const double t = std::min(len, k * step);
        hyp::geodesic_point(px, py, qx, qy, t, sx, sy);
        double d = kInfinity;
        for (double radius = net.separation(); !std::isfinite(d); radius *= 2) {
          g->within_point(sx, sy, radius, nb);
          for (const auto& e : nb)
            if (member[e.id]) d = std::min(d, e.dist);
          if (radius > 4 * g->window_radius() + 4) break;
        }
        if (d > worst) {
          worst = d;
          at.assign(sx.begin(), sx.end());
          at.push_back(sy);
        }
      }
      best[static_cast<std::size_t>(q)] = worst;
      where[static_cast<std::size_t>(q)] = std::move(at);
    }
  }
  for (std::size_t q = 0; q < used; ++q)
    if (best[q] > rep.defect) {
      rep.defect = best[q];
      rep.a = subset[pair_of[q].first];
      rep.b = subset[pair_of[q].second];
      rep.witness = where[q];
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Escalation

EscalationReport escalation(const Cover& cover, double s, int m_max, std::optional<PieceId> base, int r_min) {
  const SpaceGraph& space = *cover.space;
  if (s < 1) throw Error(ErrorKind::Precondition, "s must be at least 1");
  EscalationReport rep;
  rep.s = s;
  if (base) {
    if (*base >= cover.pieces.size()) throw Error(ErrorKind::Index, "base piece out of range");
    rep.base = *base;
  } else {
    double deepest = -kInfinity;
    bool found = false;
    for (std::size_t j = 0; j < cover.pieces.size(); ++j) {
      if (!cover.labels.empty()) {
        const auto& l = cover.labels[j];
        if (l.empty() || l[0] != 'B' || l.rfind("B1", 0) == 0) continue;
      }
      for (PointId p : cover.pieces[j])
        if (space.depth(p) > deepest) {
          deepest = space.depth(p);
          rep.base = static_cast<PieceId>(j);
          found = true;
        }
    }
    if (!found) throw Error(ErrorKind::Precondition, "no B-labelled piece");
  }
  rep.center = cover.pieces[rep.base].front();
  for (PointId p : cover.pieces[rep.base])
    if (space.depth(p) > space.depth(rep.center)) rep.center = p;
  const NeighborhoodChain chain = iterated_neighborhood(cover, rep.base, s, m_max);
  rep.non_decreasing = true;
  double previous = -kInfinity;
  for (int m = 0; m <= m_max; ++m) {
    EscalationStep step;
    step.m = m;
    step.size = chain.levels[static_cast<std::size_t>(m)].size();
    step.level_truncated = chain.level_truncated[static_cast<std::size_t>(m)];
    step.growth = set_growth_report(space, chain.levels[static_cast<std::size_t>(m)], rep.center);
    annotate(step.growth, r_min);
    if (!step.growth.fitted)
      throw Error(ErrorKind::Truncation, "all radii truncated; enlarge the window or reduce m",
                  Json{{"m", m}, {"center_depth", space.depth(rep.center)}});
    if (step.growth.fitted_exponent < previous) rep.non_decreasing = false;
    previous = step.growth.fitted_exponent;
    rep.steps.push_back(std::move(step));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Serialisation

Json to_json(const GrowthReport& g) {
  Json j;
  j["version"] = 1;
  j["kind"] = "growth";
  j["center"] = g.center;
  j["radii"] = g.radii;
  j["counts"] = g.counts;
  j["truncated"] = g.truncated;
  j["fitted"] = g.fitted;
  if (g.fitted) {
    j["fitted_exponent"] = g.fitted_exponent;
    j["fit_residual"] = g.fit_residual;
    j["subexp_stat"] = g.subexp_stat;
    j["tail_slope"] = g.tail_slope;
  }
  return j;
}

std::string growth_csv(const GrowthReport& g) {
  std::ostringstream os;
  os << "r,count,truncated\n";
  for (std::size_t i = 0; i < g.radii.size(); ++i)
    os << g.radii[i] << ',' << g.counts[i] << ',' << (g.truncated[i] ? 1 : 0) << '\n';
  return os.str();
}

namespace {

Json fit_json(const DistortionFit& f) {
  Json buckets = Json::array();
  for (const auto& b : f.buckets)
    buckets.push_back(Json{{"lo", b.lo}, {"hi", b.hi}, {"pairs", b.pairs}, {"source_max", b.source_max},
                           {"min", b.min}, {"max", b.max}, {"mean", b.mean}});
  auto finite = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return Json{{"pairs", f.pairs},
              {"buckets", buckets},
              {"log_c_envelope", f.log_c_envelope},
              {"log_c_lsq", f.log_c_lsq},
              {"log_residual", f.log_residual},
              {"affine_residual", f.affine_residual},
              {"log_fit_ok", f.log_fit_ok},
              {"affine_l", finite(f.affine_l)},
              {"affine_d", finite(f.affine_d)}};
}

void fit_csv(std::ostringstream& os, const char* set, const DistortionFit& f) {
  for (const auto& b : f.buckets)
    os << set << ',' << b.lo << ',' << b.hi << ',' << b.pairs << ',' << b.source_max << ',' << b.min << ','
       << b.max << ',' << b.mean << '\n';
}

}  // namespace

Json to_json(const DistortionProfile& p) {
  Json j;
  j["version"] = 1;
  j["kind"] = "distortion";
  j["map"] = p.map_ref;
  j["exhaustive"] = p.exhaustive;
  j["all_pairs"] = fit_json(p.all_pairs);
  if (p.anchor) {
    j["anchor"] = *p.anchor;
    j["anchored"] = fit_json(p.anchored);
  }
  return j;
}

std::string distortion_csv(const DistortionProfile& p) {
  std::ostringstream os;
  os.precision(17);
  os << "set,lo,hi,pairs,source_max,min,max,mean\n";
  fit_csv(os, "all", p.all_pairs);
  if (p.anchor) fit_csv(os, "anchored", p.anchored);
  return os.str();
}

Json to_json(const SublinearityReport& s) {
  Json j;
  j["version"] = 1;
  j["kind"] = "sublinearity";
  j["basepoint"] = s.basepoint;
  j["m_grid"] = s.m_grid;
  j["max_diam"] = s.max_diam;
  j["ratio"] = s.ratio;
  j["truncated"] = s.truncated;
  j["trend"] = s.trend;
  j["consistent"] = s.consistent;
  return j;
}

std::string sublinearity_csv(const SublinearityReport& s) {
  std::ostringstream os;
  os.precision(17);
  os << "m,max_diam,ratio,truncated\n";
  for (std::size_t i = 0; i < s.m_grid.size(); ++i)
    os << s.m_grid[i] << ',' << s.max_diam[i] << ',' << s.ratio[i] << ',' << (s.truncated[i] ? 1 : 0) << '\n';
  return os.str();
}

Json to_json(const DefectReport& d) {
  return Json{{"version", 1},       {"kind", "defect"}, {"defect", d.defect}, {"pairs", d.pairs},
              {"exhaustive", d.exhaustive}, {"a", d.a},   {"b", d.b},           {"witness", d.witness}};
}

Json to_json(const EscalationReport& e) {
  Json steps = Json::array();
  for (const auto& s : e.steps) {
    Json g = to_json(s.growth);
    g.erase("version");
    g.erase("kind");
    steps.push_back(Json{{"m", s.m}, {"size", s.size}, {"level_truncated", s.level_truncated}, {"growth", g}});
  }
  return Json{{"version", 1},
              {"kind", "escalation"},
              {"base", e.base},
              {"center", e.center},
              {"s", e.s},
              {"non_decreasing", e.non_decreasing},
              {"steps", steps}};
}

std::string escalation_csv(const EscalationReport& e) {
  std::ostringstream os;
  os.precision(17);
  os << "m,size,exponent,residual,fitted,level_truncated\n";
  for (const auto& s : e.steps)
    os << s.m << ',' << s.size << ',' << s.growth.fitted_exponent << ',' << s.growth.fit_residual << ','
       << (s.growth.fitted ? 1 : 0) << ',' << (s.level_truncated ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace coarselab
