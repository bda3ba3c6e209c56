#include "coarselab/levelsets.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace coarselab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double semicircle_height(const Arc& arc, double x) {
  const double dx = x - arc.centre;
  return std::sqrt(std::max(0.0, arc.radius * arc.radius - dx * dx));
}

// Geodesic arc between p and q; a boundary endpoint has imaginary part 0 and
// the point at infinity has an infinite real part.
Arc geodesic_arc(std::complex<double> p, std::complex<double> q) {
  Arc arc;
  if (std::isinf(p.real())) std::swap(p, q);
  if (std::isinf(q.real())) {
    arc.vertical = true;
    arc.centre = p.real();
    arc.lo = p.imag();
    arc.hi = kInf;
    return arc;
  }
  const double scale = std::max({1.0, std::abs(p.real()), std::abs(q.real())});
  if (std::abs(p.real() - q.real()) <= 1e-14 * scale) {
    arc.vertical = true;
    arc.centre = p.real();
    arc.lo = std::min(p.imag(), q.imag());
    arc.hi = std::max(p.imag(), q.imag());
    return arc;
  }
  arc.centre = (std::norm(p) - std::norm(q)) / (2 * (p.real() - q.real()));
  arc.radius = std::abs(p - arc.centre);
  arc.lo = std::min(p.real(), q.real());
  arc.hi = std::max(p.real(), q.real());
  return arc;
}

// Parts of the arc at height <= h.
int sublevel(const Arc& arc, double h, Arc out[2]) {
  if (arc.vertical) {
    if (arc.lo > h) return 0;
    out[0] = arc;
    out[0].hi = std::min(arc.hi, h);
    return 1;
  }
  if (arc.radius <= h) {
    out[0] = arc;
    return 1;
  }
  const double w = std::sqrt(arc.radius * arc.radius - h * h);
  int n = 0;
  if (arc.lo <= arc.centre - w) {
    out[n] = arc;
    out[n].hi = std::min(arc.hi, arc.centre - w);
    ++n;
  }
  if (arc.hi >= arc.centre + w) {
    out[n] = arc;
    out[n].lo = std::max(arc.lo, arc.centre + w);
    ++n;
  }
  return n;
}

bool contains(const Arc& arc, std::complex<double> z) {
  const double v = arc.vertical ? z.imag() : z.real();
  const double slack = 1e-9 * std::max(1.0, std::abs(v));
  return v >= arc.lo - slack && v <= arc.hi + slack;
}

std::complex<double> world(const Tile& tile, std::complex<double> z) {
  std::complex<double> w = tile.frame.apply(z);
  if (tile.side < 0) w = {-w.real(), w.imag()};
  return w;
}

std::complex<double> world_boundary(const Tile& tile, double t) {
  double x = tile.frame.apply_boundary(t);
  if (std::isinf(x)) return {kInf, 0};
  return {tile.side < 0 ? -x : x, 0};
}

}  // namespace

double Arc::max_height() const {
  if (vertical) return hi;
  if (centre >= lo && centre <= hi) return radius;
  return std::max(semicircle_height(*this, lo), semicircle_height(*this, hi));
}

int Arc::crossings(double h) const {
  if (vertical) return (h >= lo && h <= hi) ? 1 : 0;
  if (h > radius) return 0;
  const double w = std::sqrt(radius * radius - h * h);
  if (w == 0) return (centre >= lo && centre <= hi) ? 1 : 0;
  return static_cast<int>(centre - w >= lo && centre - w <= hi) + static_cast<int>(centre + w >= lo && centre + w <= hi);
}

Comb tile_comb(const Tiling& t, const Tile& tile, double c_min) {
  if (tile.kind != TileKind::B) throw Error(ErrorKind::Precondition, "combs belong to B tiles");
  const double rho = t.dilation;
  Comb comb;
  comb.spacing = std::log(rho);
  comb.base = geodesic_arc(world_boundary(tile, 0.0), world_boundary(tile, kInf));
  if (!comb.base.vertical) {
    comb.base.lo = comb.base.centre - comb.base.radius;
    comb.base.hi = comb.base.centre + comb.base.radius;
  } else {
    comb.base.lo = 0;
    comb.base.hi = kInf;
  }
  const double floor_h = std::exp(c_min);
  auto add = [&](int i) {
    const double s = std::pow(rho, i);
    const std::complex<double> foot = world(tile, {0.0, s});
    const Arc hair = geodesic_arc(foot, world_boundary(tile, s));
    if (hair.max_height() < floor_h) return false;
    comb.hairs.push_back(hair);
    comb.feet.push_back(foot);
    return true;
  };
  for (int dir : {1, -1}) {
    int misses = 0;
    for (int i = dir > 0 ? 0 : -1; misses < 5 && std::abs(i) < 100000; i += dir) misses = add(i) ? 0 : misses + 1;
  }
  return comb;
}

LevelSetReport check_level_sets(const Comb& comb, const LevelSetOptions& opts) {
  LevelSetReport rep;
  rep.combs = 1;
  const double D = comb.spacing;
  const double base_term = 3 + 2 * std::log(2.0) / D;
  std::vector<std::vector<Arc>> components;
  for (double a = opts.a_min; a <= opts.a_max + 1e-12; a += opts.a_step) {
    const double h = std::exp(a);
    components.clear();
    Arc parts[2];
    const int nb = sublevel(comb.base, h, parts);
    std::size_t base_component[2] = {0, 0};
    for (int k = 0; k < nb; ++k) {
      base_component[k] = components.size();
      components.push_back({parts[k]});
    }
    for (std::size_t i = 0; i < comb.hairs.size(); ++i) {
      const int nh = sublevel(comb.hairs[i], h, parts);
      for (int k = 0; k < nh; ++k) {
        std::size_t target = components.size();
        if (comb.feet[i].imag() <= h && contains(parts[k], comb.feet[i]))
          for (int b = 0; b < nb; ++b)
            if (contains(components[base_component[b]].front(), comb.feet[i])) target = base_component[b];
        if (target == components.size()) components.push_back({});
        components[target].push_back(parts[k]);
      }
    }
    for (const auto& comp : components) {
      ++rep.components;
      double top = 0;
      for (const auto& arc : comp) top = std::max(top, arc.max_height());
      const double a0 = std::min(a, std::log(top));
      for (int j = 0;; ++j) {
        const double c = a0 - (j + 0.5) * opts.c_step;
        if (c < opts.c_min) break;
        const double level = std::exp(c);
        int count = 0;
        for (const auto& arc : comp) count += arc.crossings(level);
        const double bound = base_term + 2 * (a0 - c) / D;
        ++rep.checks;
        rep.worst_ratio = std::max(rep.worst_ratio, count / bound);
        if (count > bound) {
          if (rep.violations == 0)
            rep.witness = Json{{"a", a}, {"a0", a0}, {"c", c}, {"count", count}, {"bound", bound}};
          ++rep.violations;
        }
      }
    }
  }
  return rep;
}

LevelSetReport check_tiling_level_sets(const Tiling& t, const LevelSetOptions& opts) {
  std::vector<const Tile*> combs;
  for (const auto& tile : t.tiles)
    if (tile.kind == TileKind::B) combs.push_back(&tile);
  std::vector<LevelSetReport> parts(combs.size());
  const auto n = static_cast<std::int64_t>(combs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    parts[static_cast<std::size_t>(i)] = check_level_sets(tile_comb(t, *combs[static_cast<std::size_t>(i)], opts.c_min), opts);
  }
  LevelSetReport rep;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    rep.combs += p.combs;
    rep.components += p.components;
    rep.checks += p.checks;
    rep.worst_ratio = std::max(rep.worst_ratio, p.worst_ratio);
    if (p.violations > 0 && rep.violations == 0) {
      rep.witness = p.witness;
      rep.witness["tile"] = tile_key(*combs[i]);
    }
    rep.violations += p.violations;
  }
  return rep;
}

}  // namespace coarselab
