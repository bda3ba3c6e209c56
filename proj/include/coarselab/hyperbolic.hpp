#pragma once

// Upper half-space geometry. A point of H^d is (x_1, ..., x_{d-1}; y) with
// y > 0; H^2 is the d = 2 case with a single horizontal coordinate.

#include <complex>
#include <span>
#include <vector>

namespace coarselab::hyp {

/// Hyperbolic distance between (x1; y1) and (x2; y2), evaluated as
/// 2 asinh(|p - q|_euclid / (2 sqrt(y1 y2))), which is the arcosh formula
/// without its cancellation near zero.
double distance(std::span<const double> x1, double y1, std::span<const double> x2, double y2);

inline double distance(double x1, double y1, double x2, double y2) {
  return distance(std::span<const double>(&x1, 1), y1, std::span<const double>(&x2, 1), y2);
}

/// Minkowski coordinates (X_0, X_1..X_{d-1}, X_d) on the hyperboloid.
std::vector<double> to_hyperboloid(std::span<const double> x, double y);
void from_hyperboloid(std::span<const double> h, std::span<double> x, double& y);

/// Point at arclength t along the geodesic from p to q (0 <= t <= d(p, q)).
void geodesic_point(std::span<const double> px, double py, std::span<const double> qx, double qy,
                    double t, std::span<double> out_x, double& out_y);

/// Distance from z to the complete geodesic of H^2 which is the semicircle
/// |w - center| = radius (or the vertical line x = center when radius <= 0).
double distance_to_geodesic(std::complex<double> z, double center, double radius);

/// Orientation-preserving isometry z -> (a z + b) / (c z + d) of H^2, stored
/// with determinant 1.
struct Mobius {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Mobius identity() { return {}; }
  /// The isometry carrying 0 to lo and infinity to hi (lo < hi), mapping the
  /// right half-plane onto the half-disc under the semicircle [lo, hi].
  static Mobius onto_half_disc(double lo, double hi);

  Mobius normalized() const;
  Mobius inverse() const { return {d, -b, -c, a}; }
  double det() const { return a * d - b * c; }
  std::complex<double> apply(std::complex<double> z) const;
  /// Image of a point of the real boundary; returns +inf for the pole.
  double apply_boundary(double t) const;
};

Mobius operator*(const Mobius& lhs, const Mobius& rhs);

}  // namespace coarselab::hyp
