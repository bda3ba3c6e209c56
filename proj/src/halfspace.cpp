#include <algorithm>
#include <array>
#include <cmath>

#include "coarselab/geometries.hpp"

namespace coarselab {

namespace {

constexpr int kMaxHorizontal = 6;
using Index = std::array<std::int32_t, kMaxHorizontal>;

// Visits every integer vector in the box [lo, hi] (inclusive) in lex order.
template <class F>
void for_box(int m, const Index& lo, const Index& hi, F&& f) {
  for (int i = 0; i < m; ++i)
    if (lo[i] > hi[i]) return;
  Index cur = lo;
  while (true) {
    f(cur);
    int i = m - 1;
    while (i >= 0 && cur[i] == hi[i]) {
      cur[i] = lo[i];
      --i;
    }
    if (i < 0) return;
    ++cur[i];
  }
}

double sq_half_space(const double* xa, double ya, const double* xb, double yb, int m) {
  double sq = (ya - yb) * (ya - yb);
  for (int i = 0; i < m; ++i) sq += (xa[i] - xb[i]) * (xa[i] - xb[i]);
  return sq;
}

double dist_from_sq(double sq, double ya, double yb) { return 2.0 * std::asinh(std::sqrt(sq) / (2.0 * std::sqrt(ya * yb))); }

struct LayerGrid {
  std::int32_t k = 0;
  double y = 0;
  std::int32_t extent = -1;
  std::vector<std::uint8_t> occupied;

  std::size_t cell(const Index& j, int m) const {
    std::size_t c = 0;
    const std::size_t side = 2 * static_cast<std::size_t>(extent) + 1;
    for (int i = 0; i < m; ++i) c = c * side + static_cast<std::size_t>(j[i] + extent);
    return c;
  }
};

}  // namespace

HalfSpaceGeometry::HalfSpaceGeometry(int dim, double window_radius, double sep)
    : dim_(dim), radius_(window_radius), sep_(sep), step_(sep / 2.0) {
  if (dim < 2 || dim - 1 > kMaxHorizontal) throw Error(ErrorKind::Precondition, "half-space dimension out of range");
  if (!(window_radius > 0)) throw Error(ErrorKind::EmptySpace, "window radius must be positive");
  const int m = dim - 1;
  k_min_ = static_cast<std::int32_t>(std::ceil(-radius_ / step_ - 1e-12));
  const auto k_max = static_cast<std::int32_t>(std::floor(radius_ / step_ + 1e-12));
  const double ch = std::cosh(radius_), sh = std::sinh(radius_);
  const double conflict = 2.0 * std::sinh(sep_ / 2.0);

  LayerGrid prev, cur;
  std::array<double, kMaxHorizontal> x{};
  for (std::int32_t k = k_min_; k <= k_max; ++k) {
    const double y = std::exp(k * step_);
    layer_y_.push_back(y);
    const double half2 = sh * sh - (y - ch) * (y - ch);
    const double spacing = sep_ * y;
    std::int32_t extent = -1;
    if (half2 >= 0) extent = static_cast<std::int32_t>(std::floor(std::sqrt(half2) / spacing + 1e-9));
    if (extent > 0 && std::pow(2.0 * extent + 1.0, m) > 4e8)
      throw Error(ErrorKind::Size, "net layer too large", Json{{"layer", k}, {"extent", extent}});
    prev = std::move(cur);
    cur = LayerGrid{};
    cur.k = k;
    cur.y = y;
    cur.extent = extent;
    if (extent < 0) continue;
    cur.occupied.assign(static_cast<std::size_t>(std::pow(2.0 * extent + 1.0, m) + 0.5), 0);
    Index lo{}, hi{};
    for (int i = 0; i < m; ++i) {
      lo[i] = -extent;
      hi[i] = extent;
    }
    const std::array<const LayerGrid*, 2> grids{&prev, &cur};
    for_box(m, lo, hi, [&](const Index& j) {
      for (int i = 0; i < m; ++i) x[i] = j[i] * spacing;
      if (distance_to_center({x.data(), static_cast<std::size_t>(m)}, y) > radius_ + kTolerance) return;
      for (const LayerGrid* g : grids) {
        if (g->extent < 0 || g->k < k - 1) continue;
        const double bound = conflict * std::sqrt(y * g->y) + 1e-12;
        const double gs = sep_ * g->y;
        Index glo{}, ghi{};
        for (int i = 0; i < m; ++i) {
          glo[i] = std::max(-g->extent, static_cast<std::int32_t>(std::ceil((x[i] - bound) / gs)));
          ghi[i] = std::min(g->extent, static_cast<std::int32_t>(std::floor((x[i] + bound) / gs)));
        }
        bool clash = false;
        std::array<double, kMaxHorizontal> gx{};
        for_box(m, glo, ghi, [&](const Index& gj) {
          if (clash || !g->occupied[g->cell(gj, m)]) return;
          for (int i = 0; i < m; ++i) gx[i] = gj[i] * gs;
          const double d = dist_from_sq(sq_half_space(x.data(), y, gx.data(), g->y, m), y, g->y);
          if (d < sep_ - kTolerance) clash = true;
        });
        if (clash) return;
      }
      cur.occupied[cur.cell(j, m)] = 1;
      keys_.push_back(k);
      for (int i = 0; i < m; ++i) keys_.push_back(j[i]);
    });
  }
  if (keys_.size() / static_cast<std::size_t>(dim_) > 0xFFFFFFF0ULL) throw Error(ErrorKind::Size, "net too large");

  // rows: maximal runs sharing (k, j_1 .. j_{m-1})
  const std::size_t n = size();
  const int plen = dim_ - 1;
  for (std::size_t p = 0; p < n; ++p) {
    const std::int32_t* key = keys_.data() + p * dim_;
    const bool fresh = row_start_.empty() ||
                       !std::equal(key, key + plen, row_keys_.data() + (row_start_.size() - 1) * plen);
    if (fresh) {
      row_keys_.insert(row_keys_.end(), key, key + plen);
      row_start_.push_back(static_cast<PointId>(p));
    }
  }
  row_start_.push_back(static_cast<PointId>(n));
}

double HalfSpaceGeometry::y(PointId p) const { return layer_y_[keys_[static_cast<std::size_t>(p) * dim_] - k_min_]; }

double HalfSpaceGeometry::x(PointId p, int i) const {
  const std::size_t base = static_cast<std::size_t>(p) * dim_;
  return keys_[base + 1 + i] * sep_ * layer_y_[keys_[base] - k_min_];
}

void HalfSpaceGeometry::coords(PointId p, double* xs, double& yv) const {
  const std::size_t base = static_cast<std::size_t>(p) * dim_;
  yv = layer_y_[keys_[base] - k_min_];
  for (int i = 0; i < dim_ - 1; ++i) xs[i] = keys_[base + 1 + i] * sep_ * yv;
}

double HalfSpaceGeometry::distance(PointId p, PointId q) const {
  std::array<double, kMaxHorizontal> xp{}, xq{};
  double yp, yq;
  coords(p, xp.data(), yp);
  coords(q, xq.data(), yq);
  return dist_from_sq(sq_half_space(xp.data(), yp, xq.data(), yq, dim_ - 1), yp, yq);
}

double HalfSpaceGeometry::distance_to(PointId p, std::span<const double> xs, double yv) const {
  std::array<double, kMaxHorizontal> xp{};
  double yp;
  coords(p, xp.data(), yp);
  return dist_from_sq(sq_half_space(xp.data(), yp, xs.data(), yv, dim_ - 1), yp, yv);
}

double HalfSpaceGeometry::distance_to_center(std::span<const double> xs, double yv) const {
  double sq = (yv - 1.0) * (yv - 1.0);
  for (double v : xs) sq += v * v;
  return dist_from_sq(sq, yv, 1.0);
}

ModelPoint HalfSpaceGeometry::point(PointId p) const {
  HalfPlane h;
  h.x.resize(static_cast<std::size_t>(dim_ - 1));
  coords(p, h.x.data(), h.y);
  return h;
}

double HalfSpaceGeometry::depth(PointId p) const {
  std::array<double, kMaxHorizontal> xp{};
  double yp;
  coords(p, xp.data(), yp);
  return radius_ - distance_to_center({xp.data(), static_cast<std::size_t>(dim_ - 1)}, yp);
}

std::int64_t HalfSpaceGeometry::find_row(std::int32_t k, const std::int32_t* prefix) const {
  const int plen = dim_ - 1;
  std::size_t lo = 0, hi = row_start_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const std::int32_t* rk = row_keys_.data() + mid * plen;
    bool less = rk[0] < k;
    if (rk[0] == k) {
      less = std::lexicographical_compare(rk + 1, rk + plen, prefix, prefix + plen - 1);
    }
    if (less) lo = mid + 1;
    else hi = mid;
  }
  if (lo >= row_start_.size() - 1) return -1;
  const std::int32_t* rk = row_keys_.data() + lo * plen;
  if (rk[0] != k || !std::equal(rk + 1, rk + plen, prefix)) return -1;
  return static_cast<std::int64_t>(lo);
}

void HalfSpaceGeometry::within_point(std::span<const double> xs, double yv, double radius,
                                     std::vector<Neighbor>& out) const {
  out.clear();
  if (row_start_.size() < 2) return;
  const int m = dim_ - 1;
  const double ly = std::log(yv);
  const std::int32_t k_top = k_min_ + static_cast<std::int32_t>(layer_y_.size()) - 1;
  const auto kl = std::max(k_min_, static_cast<std::int32_t>(std::ceil((ly - radius) / step_ - 1e-9)));
  const auto kh = std::min(k_top, static_cast<std::int32_t>(std::floor((ly + radius) / step_ + 1e-9)));
  const double s = std::sinh(radius / 2.0);
  std::array<double, kMaxHorizontal> px{};
  for (std::int32_t k = kl; k <= kh; ++k) {
    const double y2 = layer_y_[k - k_min_];
    const double bound = 2.0 * std::sqrt(yv * y2) * s * (1 + 1e-12) + 1e-12;
    const double gs = sep_ * y2;
    Index lo{}, hi{};
    for (int i = 0; i < m; ++i) {
      lo[i] = static_cast<std::int32_t>(std::ceil((xs[i] - bound) / gs));
      hi[i] = static_cast<std::int32_t>(std::floor((xs[i] + bound) / gs));
    }
    Index plo = lo, phi = hi;
    for_box(m - 1, plo, phi, [&](const Index& prefix) {
      const std::int64_t row = find_row(k, prefix.data());
      if (row < 0) return;
      std::size_t a = row_start_[row], b = row_start_[row + 1];
      // lower bound on the last coordinate
      while (a < b) {
        const std::size_t mid = (a + b) / 2;
        if (keys_[mid * dim_ + m] < lo[m - 1]) a = mid + 1;
        else b = mid;
      }
      for (std::size_t p = a; p < row_start_[row + 1]; ++p) {
        if (keys_[p * dim_ + m] > hi[m - 1]) break;
        double py;
        coords(static_cast<PointId>(p), px.data(), py);
        const double d = dist_from_sq(sq_half_space(px.data(), py, xs.data(), yv, m), py, yv);
        if (d <= radius + kTolerance) out.push_back({static_cast<PointId>(p), d});
      }
    });
  }
}

void HalfSpaceGeometry::within(PointId p, double radius, std::vector<Neighbor>& out) const {
  std::array<double, kMaxHorizontal> xp{};
  double yp;
  coords(p, xp.data(), yp);
  within_point({xp.data(), static_cast<std::size_t>(dim_ - 1)}, yp, radius, out);
  for (auto& e : out)
    if (e.id == p) e.dist = 0.0;
}

PointId HalfSpaceGeometry::nearest(std::span<const double> xs, double yv) const {
  std::vector<Neighbor> nb;
  for (double r = sep_; r <= 4.0 * radius_ + 4.0 * sep_; r *= 2.0) {
    within_point(xs, yv, r, nb);
    if (nb.empty()) continue;
    const auto best = std::min_element(nb.begin(), nb.end(), [](const Neighbor& a, const Neighbor& b) {
      return a.dist != b.dist ? a.dist < b.dist : a.id < b.id;
    });
    return best->id;
  }
  throw Error(ErrorKind::Window, "no net point near the query");
}

}  // namespace coarselab
