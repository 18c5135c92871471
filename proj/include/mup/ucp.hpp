#pragma once

// Uncertainty functionals: the three-factor product for an admissible
// embedding, Breitenberger's product on the circle, the Goh–Goodman product
// on S², and the disconnected-manifold variant.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "mup/admissibility.hpp"
#include "mup/embed.hpp"
#include "mup/error.hpp"
#include "mup/grid.hpp"
#include "mup/linalg.hpp"
#include "mup/simplex.hpp"
#include "mup/spectral.hpp"

namespace mup {

inline constexpr double kDegenerateTau = 1e-12;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// τ = ∫ m(x) f(x)² dg.
inline Vec center_of_mass(const ManifoldGrid& grid, const Embedding& emb, const Field& f) {
  require_normalized(grid, f);
  if (emb.size() != grid.size()) throw Error(ErrorCode::invalid_input, "embedding does not match grid");
  const auto w = grid.weights();
  Vec tau(emb.ambient_dim(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m = w[i] * f[i] * f[i];
    const auto p = emb.point(i);
    for (std::size_t k = 0; k < tau.size(); ++k) tau[k] += m * p[k];
  }
  return tau;
}

struct NearestPoint {
  std::size_t node = 0;
  double distance = kInfinity;       // refined
  double node_distance = kInfinity;  // best over nodes only
  std::optional<double> parameter;   // refined parameter on 1-d components
};

namespace detail {

/// Image of a 1-d component parameter by linear interpolation between nodes.
inline void interpolate_curve(const ManifoldGrid& grid, const Embedding& emb, const Patch& p, double t,
                              std::span<double> out) {
  const double u = (t - (p.kind == GridKind::circle ? 0.0 : p.lo)) / p.step1;
  auto i0 = static_cast<std::ptrdiff_t>(std::floor(u));
  double frac = u - static_cast<double>(i0);
  const auto n = static_cast<std::ptrdiff_t>(p.n1);
  std::ptrdiff_t i1 = i0 + 1;
  if (p.periodic()) {
    i0 = ((i0 % n) + n) % n;
    i1 = ((i1 % n) + n) % n;
  } else {
    if (i0 < 0) { i0 = 0; i1 = 0; frac = 0.0; }
    if (i1 >= n) { i0 = n - 1; i1 = n - 1; frac = 0.0; }
  }
  (void)grid;
  const auto a = emb.point(p.offset + static_cast<std::size_t>(i0));
  const auto b = emb.point(p.offset + static_cast<std::size_t>(i1));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (1.0 - frac) * a[k] + frac * b[k];
}

}  // namespace detail

/// inf_z ‖m(z) - τ‖: exact minimum over nodes, then a golden-section search
/// along the parameter on one-dimensional components.
inline NearestPoint nearest_embedded_point(const ManifoldGrid& grid, const Embedding& emb,
                                           std::span<const double> tau) {
  if (tau.size() != emb.ambient_dim()) throw Error(ErrorCode::invalid_input, "tau dimension mismatch");
  NearestPoint out;
  for (std::size_t i = 0; i < emb.size(); ++i) {
    const double d = distance(emb.point(i), tau);
    if (d < out.node_distance) {
      out.node_distance = d;
      out.node = i;
    }
  }
  out.distance = out.node_distance;
  const auto& p = grid.patch_of(out.node);
  if (p.dim != 1) return out;

  const std::size_t comp = static_cast<std::size_t>(grid.component_ids()[out.node]);
  std::vector<double> buf(emb.ambient_dim());
  auto dist_at = [&](double t) {
    if (emb.has_curve()) emb.evaluate(comp, t, buf);
    else detail::interpolate_curve(grid, emb, p, t, buf);
    return distance(buf, tau);
  };
  const double t0 = grid.node(out.node)[0];
  double lo = t0 - p.step1;
  double hi = t0 + p.step1;
  if (!p.periodic()) {
    lo = std::max(lo, p.lo);
    hi = std::min(hi, p.hi);
  }
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = dist_at(c);
  double fd = dist_at(d);
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = dist_at(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = dist_at(d);
    }
  }
  const double tm = 0.5 * (lo + hi);
  const double fm = dist_at(tm);
  if (fm < out.distance) {
    out.distance = fm;
    out.parameter = tm;
  }
  return out;
}

struct UncertaintyReport {
  Vec tau;
  double tau_norm = 0.0;
  std::size_t nearest_node = 0;
  double nearest_dist = 0.0;
  double dirichlet = 0.0;
  double term_infdist = 0.0;
  double term_invtau2 = 0.0;
  double term_energy = 0.0;
  double U = 0.0;
  double ref_bound = 0.0;
  bool degenerate_tau = false;

  /// U / (C_hat / L_hat^4).
  double ratio_to_bound() const { return U / ref_bound; }
};

/// (inf_z ‖m(z) - τ‖) · ‖τ‖^{-2} · ∫|∇f|² for a connected grid. When ‖τ‖ is
/// below 1e-12 the report is flagged degenerate and U is +∞.
inline UncertaintyReport uncertainty_product(const ManifoldGrid& grid, const Embedding& emb, const Field& f,
                                             const AdmissibilityReport& adm) {
  if (!grid.connected())
    throw Error(ErrorCode::invalid_input, "disconnected grid: use disconnected_uncertainty");
  UncertaintyReport r;
  r.tau = center_of_mass(grid, emb, f);
  r.tau_norm = norm(r.tau);
  const auto nearest = nearest_embedded_point(grid, emb, r.tau);
  r.nearest_node = nearest.node;
  r.nearest_dist = nearest.distance;
  r.dirichlet = dirichlet_energy(grid, f);
  r.term_infdist = r.nearest_dist;
  r.term_energy = r.dirichlet;
  r.ref_bound = adm.ref_bound();
  if (r.tau_norm < kDegenerateTau) {
    r.degenerate_tau = true;
    r.term_invtau2 = kInfinity;
    r.U = kInfinity;
    return r;
  }
  r.term_invtau2 = 1.0 / (r.tau_norm * r.tau_norm);
  r.U = r.term_infdist * r.term_invtau2 * r.term_energy;
  return r;
}

/// ∫ f² dg over nodes within geodesic distance `radius` of `center`.
inline double local_mass(const ManifoldGrid& grid, const Field& f, std::size_t center, double radius) {
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.geodesic(center, i) <= radius) s += w[i] * f[i] * f[i];
  return s;
}

struct BreitenbergerReport {
  std::array<double, 2> tau{};
  double tau_abs = 0.0;
  double var_F = 0.0;
  double var_A = kInfinity;
  double product = kInfinity;
  double modified_product = kInfinity;  // (1 - |τ|)/|τ|² · var_F
  std::vector<double> coefficients;     // |c_k|, k = 0..n/2
  double parseval = 0.0;                // Σ |c_k|² over all k
  bool degenerate_tau = false;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Breitenberger's quantities under dx on [0, 2π): c_k against e^{ikx}/√(2π),
/// τ = ∫ e^{ix} f² dx, var_F = Σ k²|c_k|² - (Σ k|c_k|²)², var_A = (1-|τ|²)/|τ|².
inline BreitenbergerReport breitenberger(const ManifoldGrid& grid, const Field& f) {
  detail::require_kind(grid, GridKind::circle, "breitenberger needs a circle grid");
  require_normalized(grid, f);
  const std::size_t n = grid.size();
  if (!is_power_of_two(n)) throw Error(ErrorCode::invalid_resolution, "breitenberger needs n a power of two");

  BreitenbergerReport r;
  const auto half = spectral::half_spectrum(f.values());
  const double scale = std::sqrt(2.0 * std::numbers::pi);
  double k2 = 0.0;
  double mass = 0.0;
  r.coefficients.resize(half.size());
  for (std::size_t k = 0; k < half.size(); ++k) {
    const double c2 = std::norm(half[k]) * scale * scale;
    r.coefficients[k] = std::sqrt(c2);
    // Real f: |c_{-k}| = |c_k|, so Σ k|c_k|² vanishes and each k > 0 counts twice.
    const double mult = (k == 0 || spectral::is_nyquist(k, n)) ? 1.0 : 2.0;
    const auto kk = static_cast<double>(k);
    k2 += mult * kk * kk * c2;
    mass += mult * c2;
  }
  r.parseval = mass;
  r.var_F = k2;

  const auto w = grid.weights();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.node(i)[0];
    const double m = w[i] * f[i] * f[i];
    r.tau[0] += m * std::cos(t);
    r.tau[1] += m * std::sin(t);
  }
  r.tau_abs = std::hypot(r.tau[0], r.tau[1]);
  if (r.tau_abs < kDegenerateTau) {
    r.degenerate_tau = true;
    return r;
  }
  const double t2 = r.tau_abs * r.tau_abs;
  r.var_A = (1.0 - t2) / t2;
  r.product = r.var_F * r.var_A;
  r.modified_product = (1.0 - r.tau_abs) / t2 * r.var_F;
  return r;
}

struct GohGoodmanReport {
  Vec tau;
  double tau_norm = 0.0;
  double var_F = 0.0;
  double var_A = kInfinity;
  double product = kInfinity;
  double bound = 1.0;  // d²/4 with d = 2
  bool degenerate_tau = false;
  bool holds() const { return degenerate_tau || product >= bound; }
};

/// Goh–Goodman quantities on S². The normalized surface measure rescales f by
/// √(4π), which leaves τ and ⟨-Δf, f⟩ unchanged, so both are computed under
/// the grid's area measure.
inline GohGoodmanReport goh_goodman(const ManifoldGrid& grid, const Field& f) {
  detail::require_kind(grid, GridKind::sphere2, "goh_goodman needs a sphere grid");
  require_normalized(grid, f);
  GohGoodmanReport r;
  r.tau = center_of_mass(grid, canonical_sphere(grid), f);
  r.tau_norm = norm(r.tau);
  r.var_F = dirichlet_energy(grid, f);
  if (r.tau_norm < kDegenerateTau) {
    r.degenerate_tau = true;
    return r;
  }
  const double t2 = r.tau_norm * r.tau_norm;
  r.var_A = (1.0 - t2) / t2;
  r.product = r.var_F * r.var_A;
  return r;
}

/// p_i = |M_i|^{-1} ∫_{M_i} m dg.
inline std::vector<Vec> component_centroids(const ManifoldGrid& grid, const Embedding& emb) {
  const auto w = grid.weights();
  std::vector<Vec> out;
  for (const auto& p : grid.patches()) {
    Vec c(emb.ambient_dim(), 0.0);
    for (std::size_t i = p.offset; i < p.offset + p.size(); ++i) {
      const auto x = emb.point(i);
      for (std::size_t k = 0; k < c.size(); ++k) c[k] += w[i] * x[k];
    }
    for (auto& v : c) v /= p.volume;
    out.push_back(std::move(c));
  }
  return out;
}

/// σ = min over node pairs in different components of ‖m(x) - m(y)‖.
inline double separation(const ManifoldGrid& grid, const Embedding& emb) {
  if (grid.connected()) throw Error(ErrorCode::invalid_input, "separation needs >= 2 components");
  double best = kInfinity;
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for reduction(min : best) schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < grid.size(); ++j)
      if (grid.cross_component(i, j)) best = std::min(best, squared_distance(emb.point(i), emb.point(j)));
  }
  return std::sqrt(best);
}

struct DisconnectedReport {
  Vec tau;
  std::vector<Vec> centroids;
  SimplexProjection simplex;
  double simplex_dist = 0.0;
  double sigma = 0.0;
  double nearest_dist = 0.0;
  double dirichlet = 0.0;
  std::vector<double> component_masses;
  double term_infdist = 0.0;
  double term_invsimplex2 = 0.0;
  double term_energy = 0.0;
  double U = 0.0;
  double ref_bound = 0.0;
  bool degenerate = false;  // τ ∈ S
};

/// (inf_z ‖m(z) - τ‖) · (inf_{s∈S} ‖s - τ‖)^{-2} · ∫|∇f|² where S is the
/// convex hull of the component centroids.
inline DisconnectedReport disconnected_uncertainty(const ManifoldGrid& grid, const Embedding& emb, const Field& f,
                                                   const AdmissibilityReport& adm, double sigma = -1.0) {
  if (grid.component_count() < 2) throw Error(ErrorCode::invalid_input, "grid must have >= 2 components");
  if (grid.component_count() > 4)
    throw Error(ErrorCode::unsupported_component_count, "at most 4 components are supported");
  DisconnectedReport r;
  r.tau = center_of_mass(grid, emb, f);
  r.centroids = component_centroids(grid, emb);
  r.simplex = simplex_distance(r.tau, r.centroids);
  r.simplex_dist = r.simplex.distance;
  r.sigma = sigma >= 0.0 ? sigma : separation(grid, emb);
  r.nearest_dist = nearest_embedded_point(grid, emb, r.tau).distance;
  r.dirichlet = dirichlet_energy(grid, f);
  const auto w = grid.weights();
  for (const auto& p : grid.patches()) {
    double m = 0.0;
    for (std::size_t i = p.offset; i < p.offset + p.size(); ++i) m += w[i] * f[i] * f[i];
    r.component_masses.push_back(m);
  }
  r.term_infdist = r.nearest_dist;
  r.term_energy = r.dirichlet;
  r.ref_bound = adm.ref_bound();
  if (r.simplex_dist < kDegenerateTau) {
    r.degenerate = true;
    r.term_invsimplex2 = kInfinity;
    r.U = kInfinity;
    return r;
  }
  r.term_invsimplex2 = 1.0 / (r.simplex_dist * r.simplex_dist);
  r.U = r.term_infdist * r.term_invsimplex2 * r.term_energy;
  return r;
}

}  // namespace mup
