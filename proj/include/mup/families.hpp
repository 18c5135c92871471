#pragma once

// Test-function families. Every generator returns an L2-normalized Field on
// the grid it was given and is deterministic given its parameters and seed.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mup/admissibility.hpp"
#include "mup/error.hpp"
#include "mup/grid.hpp"

namespace mup {

namespace detail {

inline void require_family_grid(bool ok, const std::string& family) {
  if (!ok) throw Error(ErrorCode::configuration, "family " + family + " does not fit this grid");
}

inline double standard_normal_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

}  // namespace detail

inline Field constant_field(const ManifoldGrid& grid) {
  return normalize_field(grid, std::vector<double>(grid.size(), 1.0));
}

/// f² = e^{κ cos(t - t0)} / (2π I0(κ)), evaluated as e^{κ(cos - 1)/2} before
/// normalizing so large κ does not overflow.
inline Field von_mises_field(const ManifoldGrid& grid, double kappa, double t0 = 0.0) {
  detail::require_family_grid(grid.kind() == GridKind::circle, "von-mises");
  if (!(kappa >= 0.0)) throw Error(ErrorCode::invalid_parameter, "von Mises needs kappa >= 0");
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(0.5 * kappa * (std::cos(grid.node(i)[0] - t0) - 1.0));
  return normalize_field(grid, std::move(v));
}

/// f(t) = a_0 + Σ_k a_k cos(kt) + b_k sin(kt), normalized.
inline Field fourier_mix_field(const ManifoldGrid& grid, const std::vector<double>& cos_coeffs,
                               const std::vector<double>& sin_coeffs = {}) {
  detail::require_family_grid(grid.kind() == GridKind::circle, "fourier-mix");
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = grid.node(i)[0];
    for (std::size_t k = 0; k < cos_coeffs.size(); ++k) v[i] += cos_coeffs[k] * std::cos(static_cast<double>(k) * t);
    for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
      v[i] += sin_coeffs[k] * std::sin(static_cast<double>(k + 1) * t);
  }
  return normalize_field(grid, std::move(v));
}

/// Real trigonometric polynomial of degree <= D with standard normal
/// coefficients; member `index` of the family seeded by `seed`.
inline Field random_trig_field(const ManifoldGrid& grid, int degree, std::uint64_t seed, std::size_t index) {
  detail::require_family_grid(grid.kind() == GridKind::circle, "random-trig");
  if (degree < 0) throw Error(ErrorCode::invalid_parameter, "degree must be >= 0");
  auto rng = detail::stream(seed, 0x7419000ULL + index);
  std::normal_distribution<double> normal;
  std::vector<double> a(static_cast<std::size_t>(degree) + 1);
  std::vector<double> b(static_cast<std::size_t>(degree));
  for (auto& x : a) x = normal(rng);
  for (auto& x : b) x = normal(rng);
  return fourier_mix_field(grid, a, b);
}

/// Zonal density on S² with f² ∝ e^{λ cos θ}.
inline Field fisher_field(const ManifoldGrid& grid, double lambda) {
  detail::require_family_grid(grid.kind() == GridKind::sphere2, "spherical-fisher");
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(0.5 * lambda * (std::cos(grid.node(i)[0]) - 1.0));
  return normalize_field(grid, std::move(v));
}

/// Gaussian bump on the flat ball or an interval: f² ∝ exp(-|x - c|² / 2σ²),
/// so σ is the standard deviation of the density f² along each axis.
inline Field radial_gaussian_field(const ManifoldGrid& grid, double sigma, std::array<double, 2> center = {0.0, 0.0}) {
  detail::require_family_grid(grid.kind() == GridKind::ball || grid.kind() == GridKind::interval, "radial-gaussian");
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_parameter, "sigma must be positive");
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto x = grid.ambient(i);
    const double r2 = (x[0] - center[0]) * (x[0] - center[0]) + (x[1] - center[1]) * (x[1] - center[1]);
    v[i] = std::exp(-r2 / (4.0 * sigma * sigma));
  }
  return normalize_field(grid, std::move(v));
}

/// Mass of the untruncated 1-d Gaussian density N(c, σ²) outside [-1, 1].
inline double gaussian_truncation_mass(double sigma, double center) {
  return detail::standard_normal_tail((1.0 - center) / sigma) + detail::standard_normal_tail((1.0 + center) / sigma);
}

/// C¹ raised-cosine bump supported on the parameter arc [lo, hi] of a circle.
inline Field arc_bump_field(const ManifoldGrid& grid, double lo, double hi) {
  detail::require_family_grid(grid.kind() == GridKind::circle, "arc-bump");
  if (!(hi > lo)) throw Error(ErrorCode::invalid_parameter, "arc bump needs lo < hi");
  const double width = hi - lo;
  const double mid = 0.5 * (lo + hi);
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    double s = std::remainder(grid.node(i)[0] - mid, 2.0 * std::numbers::pi);
    if (std::abs(s) < 0.5 * width) v[i] = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * s / width));
  }
  return normalize_field(grid, std::move(v));
}

/// Field on a disjoint union of circles: mass `alpha` on component 0 shaped
/// as a von Mises bump (κ, t0), and the remaining mass spread as constants
/// over the other components in proportion to their volume. κ = 0 gives
/// per-component constants.
inline Field two_component_field(const ManifoldGrid& grid, double alpha, double kappa, double t0) {
  detail::require_family_grid(!grid.connected(), "two-component");
  for (const auto& p : grid.patches()) detail::require_family_grid(p.kind == GridKind::circle, "two-component");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_parameter, "alpha must lie in (0, 1)");
  const auto w = grid.weights();
  const auto& patches = grid.patches();
  std::vector<double> v(grid.size(), 0.0);

  const auto& p0 = patches.front();
  double m0 = 0.0;
  for (std::size_t i = p0.offset; i < p0.offset + p0.size(); ++i) {
    v[i] = std::exp(0.5 * kappa * (std::cos(grid.node(i)[0] - t0) - 1.0));
    m0 += w[i] * v[i] * v[i];
  }
  for (std::size_t i = p0.offset; i < p0.offset + p0.size(); ++i) v[i] *= std::sqrt(alpha / m0);

  double rest_volume = 0.0;
  for (std::size_t c = 1; c < patches.size(); ++c) rest_volume += patches[c].volume;
  const double level = std::sqrt((1.0 - alpha) / rest_volume);
  for (std::size_t c = 1; c < patches.size(); ++c)
    for (std::size_t i = patches[c].offset; i < patches[c].offset + patches[c].size(); ++i) v[i] = level;
  return normalize_field(grid, std::move(v));
}

/// A named family with a swept parameter list and fixed options.
struct FamilySpec {
  std::string name;
  std::vector<double> parameters;
  std::map<std::string, double> options;
  std::uint64_t seed = 0;
  std::size_t count = 0;

  double option(const std::string& key, double fallback) const {
    const auto it = options.find(key);
    return it == options.end() ? fallback : it->second;
  }
};

struct FamilyMember {
  std::string label;
  double parameter = 0.0;
  Field field;
};

/// Members of `spec` on `grid`:
///   constant         one member
///   von-mises        κ ∈ parameters, option t0
///   fourier-mix      one member, cos coefficients = parameters
///   random-trig      `count` members, option degree, seeded
///   spherical-fisher λ ∈ parameters
///   radial-gaussian  σ ∈ parameters, options cx, cy
///   two-component    κ ∈ parameters, options alpha, t0
///   arc-bump         one member, options lo, hi
inline std::vector<FamilyMember> make_family(const ManifoldGrid& grid, const FamilySpec& spec) {
  std::vector<FamilyMember> out;
  const auto& n = spec.name;
  auto label = [&](double x) { return n + ":" + std::to_string(x); };
  if (n == "constant") {
    out.push_back({n, 0.0, constant_field(grid)});
  } else if (n == "von-mises") {
    for (double k : spec.parameters) out.push_back({label(k), k, von_mises_field(grid, k, spec.option("t0", 0.0))});
  } else if (n == "fourier-mix") {
    out.push_back({n, 0.0, fourier_mix_field(grid, spec.parameters)});
  } else if (n == "random-trig") {
    const int degree = static_cast<int>(spec.option("degree", 8.0));
    for (std::size_t j = 0; j < spec.count; ++j)
      out.push_back({n + ":" + std::to_string(j), static_cast<double>(j), random_trig_field(grid, degree, spec.seed, j)});
  } else if (n == "spherical-fisher") {
    for (double l : spec.parameters) out.push_back({label(l), l, fisher_field(grid, l)});
  } else if (n == "radial-gaussian") {
    const std::array<double, 2> c{spec.option("cx", 0.0), spec.option("cy", 0.0)};
    for (double s : spec.parameters) out.push_back({label(s), s, radial_gaussian_field(grid, s, c)});
  } else if (n == "two-component") {
    const double alpha = spec.option("alpha", 0.5);
    const double t0 = spec.option("t0", std::numbers::pi / 2.0);
    for (double k : spec.parameters) out.push_back({label(k), k, two_component_field(grid, alpha, k, t0)});
  } else if (n == "arc-bump") {
    out.push_back({n, 0.0, arc_bump_field(grid, spec.option("lo", 0.0), spec.option("hi", std::numbers::pi))});
  } else {
    throw Error(ErrorCode::configuration, "unknown family: " + n);
  }
  if (out.empty()) throw Error(ErrorCode::configuration, "family " + n + " has no members");
  return out;
}

}  // namespace mup
