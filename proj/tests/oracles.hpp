#pragma once

// Reference computations written independently of the library: closed forms
// and brute-force searches over explicit point lists.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

using Point = std::vector<double>;

inline double dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

/// min over x1 <= x2, z of ‖(m1+m2)/2 - mz‖ / ((‖m1-mz‖² + ‖m2-mz‖²)/2).
inline double curvature_n2(const std::vector<Point>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a; b < pts.size(); ++b)
      for (std::size_t z = 0; z < pts.size(); ++z) {
        const double da = dist(pts[a], pts[z]), db = dist(pts[b], pts[z]);
        const double den = 0.5 * (da * da + db * db);
        if (den < 1e-14) continue;
        Point mid(pts[a].size());
        for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = 0.5 * (pts[a][k] + pts[b][k]);
        best = std::min(best, dist(mid, pts[z]) / den);
      }
  return best;
}

inline std::vector<Point> circle_points(std::size_t n, double R) {
  std::vector<Point> p;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    p.push_back({R * std::cos(t), R * std::sin(t)});
  }
  return p;
}

/// Distortion of the radius-R circle as a function of arc distance d, sampled
/// densely: max over d of max(chord/d, d/chord), chord = 2R sin(d/2).
inline double circle_distortion(double R, std::size_t samples = 200000) {
  double best = 1.0;
  for (std::size_t i = 1; i <= samples; ++i) {
    const double d = std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
    const double chord = 2.0 * R * std::sin(d / 2.0);
    best = std::max({best, chord / d, d / chord});
  }
  return best;
}

/// Nearest distance from (0, h) to {(x, x²) : |x| <= 1} on a dense grid.
inline double parabola_distance_dense(double h, std::size_t samples = 2000001) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(samples - 1);
    best = std::min(best, std::hypot(x, h - x * x));
  }
  return best;
}

/// Distance from x to conv(vertices) by a dense barycentric grid (k <= 3).
inline double simplex_distance_dense(const Point& x, const std::vector<Point>& v, int steps = 400) {
  double best = std::numeric_limits<double>::infinity();
  const auto k = v.size();
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= (k >= 3 ? steps - i : 0); ++j) {
      const double a = static_cast<double>(i) / steps;
      const double b = k >= 3 ? static_cast<double>(j) / steps : 1.0 - a;
      const double c = k >= 3 ? 1.0 - a - b : 0.0;
      if (k == 1 && i > 0) continue;
      Point p(x.size(), 0.0);
      for (std::size_t d = 0; d < x.size(); ++d) {
        p[d] = (k == 1 ? v[0][d] : a * v[0][d] + b * v[1][d]);
        if (k >= 3) p[d] += c * v[2][d];
      }
      best = std::min(best, dist(p, x));
    }
  return best;
}

/// Von Mises mean resultant length I1(κ)/I0(κ).
inline double bessel_ratio(double kappa) { return std::cyl_bessel_i(1.0, kappa) / std::cyl_bessel_i(0.0, kappa); }

/// Fisher density on S² with f² ∝ e^{λ cos θ}: ‖τ‖ = coth λ - 1/λ.
inline double langevin(double lambda) { return 1.0 / std::tanh(lambda) - 1.0 / lambda; }

/// var_F · var_A for the Fisher family: energy λA/2, var_A = (1 - A²)/A².
inline double fisher_product(double lambda) {
  const double A = langevin(lambda);
  return lambda * A / 2.0 * (1.0 - A * A) / (A * A);
}

/// ∫₀^{2π} (1 + cos x)⁴ dx = 35π/4, so for f = (1 + cos x)/√(3π):
/// ∫ f⁴ = 35π/4 / (9π²) = 35/(36π); sup |f'| = 1/√(3π).
inline double inverse_reference_rhs() {
  const double pi = std::numbers::pi;
  const double f4 = 35.0 / (36.0 * pi);
  return (f4 - 1.0 / (2.0 * pi)) / std::pow(1.0 + 1.0 / std::sqrt(3.0 * pi), 7);
}

/// E[Z² | α < Z < β] for a standard normal.
inline double truncated_second_moment(double alpha, double beta) {
  auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); };
  auto Phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  return 1.0 + (alpha * phi(alpha) - beta * phi(beta)) / (Phi(beta) - Phi(alpha));
}

}  // namespace oracle
