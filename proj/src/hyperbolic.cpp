#include "coarselab/hyperbolic.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace coarselab::hyp {

double distance(std::span<const double> x1, double y1, std::span<const double> x2, double y2) {
  assert(x1.size() == x2.size());
  double sq = (y1 - y2) * (y1 - y2);
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double dx = x1[i] - x2[i];
    sq += dx * dx;
  }
  return 2.0 * std::asinh(std::sqrt(sq) / (2.0 * std::sqrt(y1 * y2)));
}

std::vector<double> to_hyperboloid(std::span<const double> x, double y) {
  double norm2 = y * y;
  for (double v : x) norm2 += v * v;
  std::vector<double> h(x.size() + 2);
  h.front() = (norm2 + 1.0) / (2.0 * y);
  for (std::size_t i = 0; i < x.size(); ++i) h[i + 1] = x[i] / y;
  h.back() = (norm2 - 1.0) / (2.0 * y);
  return h;
}

void from_hyperboloid(std::span<const double> h, std::span<double> x, double& y) {
  y = 1.0 / (h.front() - h.back());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = h[i + 1] * y;
}

void geodesic_point(std::span<const double> px, double py, std::span<const double> qx, double qy,
                    double t, std::span<double> out_x, double& out_y) {
  const double len = distance(px, py, qx, qy);
  if (len <= 0.0) {
    for (std::size_t i = 0; i < out_x.size(); ++i) out_x[i] = px[i];
    out_y = py;
    return;
  }
  const auto p = to_hyperboloid(px, py);
  const auto q = to_hyperboloid(qx, qy);
  const double s = std::sinh(len);
  const double wp = std::sinh(len - t) / s;
  const double wq = std::sinh(t) / s;
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = wp * p[i] + wq * q[i];
  from_hyperboloid(g, out_x, out_y);
}

double distance_to_geodesic(std::complex<double> z, double center, double radius) {
  const double y = z.imag();
  if (radius <= 0.0) return std::asinh(std::abs(z.real() - center) / y);
  const double dx = z.real() - center;
  const double num = std::abs(dx * dx + y * y - radius * radius);
  return std::asinh(num / (2.0 * radius * y));
}

Mobius Mobius::onto_half_disc(double lo, double hi) {
  // z -> (hi z + lo) / (z + 1): 0 -> lo, inf -> hi, 1 -> (lo + hi) / 2.
  return Mobius{hi, lo, 1.0, 1.0}.normalized();
}

Mobius Mobius::normalized() const {
  const double s = std::sqrt(det());
  return {a / s, b / s, c / s, d / s};
}

std::complex<double> Mobius::apply(std::complex<double> z) const { return (a * z + b) / (c * z + d); }

double Mobius::apply_boundary(double t) const {
  if (std::isinf(t)) return c == 0.0 ? std::numeric_limits<double>::infinity() : a / c;
  const double den = c * t + d;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return (a * t + b) / den;
}

Mobius operator*(const Mobius& l, const Mobius& r) {
  return Mobius{l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c,
                l.c * r.b + l.d * r.d}
      .normalized();
}

}  // namespace coarselab::hyp
