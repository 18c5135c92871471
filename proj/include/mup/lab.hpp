#pragma once

// Experiments: sharp scaling on the stretched circle, Euclidean reduction via
// the paraboloid, the constructive inverse map, the degenerate k-th power
// graph, and sweep harnesses for the connected and disconnected products.

#include <gsl/gsl_fit.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "mup/admissibility.hpp"
#include "mup/embed.hpp"
#include "mup/error.hpp"
#include "mup/families.hpp"
#include "mup/grid.hpp"
#include "mup/spectral.hpp"
#include "mup/ucp.hpp"

namespace mup {

struct Verdict {
  std::string name;
  double value = 0.0;
  double lo = -kInfinity;
  double hi = kInfinity;
  bool passed = false;
};

inline Verdict check_range(std::string name, double value, double lo, double hi) {
  return {std::move(name), value, lo, hi, value >= lo && value <= hi};
}

struct SlopeFit {
  std::string name;
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (log x, log y).
inline SlopeFit fit_loglog(std::string name, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::invalid_input, "slope fit needs >= 2 points");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::invalid_input, "log-log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double c0, c1, cov00, cov01, cov11, sumsq;
  gsl_fit_linear(lx.data(), 1, ly.data(), 1, lx.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
  SlopeFit f;
  f.name = std::move(name);
  f.slope = c1;
  f.intercept = c0;
  f.stderr_slope = lx.size() > 2 ? std::sqrt(cov11) : 0.0;
  f.points = lx.size();
  return f;
}

/// Tabular output of one experiment. Rows are numeric; flags are stored as 0/1.
struct ExperimentResult {
  std::string id;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<SlopeFit> slopes;
  std::map<std::string, double> summary;
  std::vector<Verdict> verdicts;

  bool passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
  }
  std::vector<double> column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw Error(ErrorCode::invalid_input, "no column " + name);
    const auto k = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
  }
};

inline double min_positive_finite(const std::vector<double>& xs) {
  double m = kInfinity;
  for (double x : xs)
    if (std::isfinite(x) && x > 0.0) m = std::min(m, x);
  return m;
}

inline double relative_change(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// ---------------------------------------------------------------------------
// Embedding catalog by descriptor.

inline EmbeddingKind parse_embedding_kind(const std::string& s) {
  static const std::map<std::string, EmbeddingKind> table{
      {"canonical-circle", EmbeddingKind::canonical_circle}, {"canonical-sphere", EmbeddingKind::canonical_sphere},
      {"helix", EmbeddingKind::helix},                       {"paraboloid-graph", EmbeddingKind::paraboloid_graph},
      {"lp-sphere", EmbeddingKind::lp_sphere},               {"scaled-circle", EmbeddingKind::scaled_circle},
      {"kth-power-graph", EmbeddingKind::kth_power_graph},   {"component-circles", EmbeddingKind::component_circles},
  };
  const auto it = table.find(s);
  if (it == table.end()) throw Error(ErrorCode::configuration, "unknown embedding kind: " + s);
  return it->second;
}

inline Embedding build_embedding(const ManifoldGrid& grid, const EmbeddingDescriptor& d) {
  auto get = [&](const std::string& k, double fallback) {
    const auto it = d.params.find(k);
    return it == d.params.end() ? fallback : it->second;
  };
  switch (d.kind) {
    case EmbeddingKind::canonical_circle: return canonical_circle(grid, get("R", 1.0));
    case EmbeddingKind::canonical_sphere: return canonical_sphere(grid);
    case EmbeddingKind::helix: return helix_circle(grid, get("amplitude", 0.5), get("frequency", 2.0));
    case EmbeddingKind::paraboloid_graph: return paraboloid_graph(grid);
    case EmbeddingKind::lp_sphere: return lp_sphere(grid, get("p", 2.0));
    case EmbeddingKind::scaled_circle: return scaled_circle_example(grid, get("L", 8.0));
    case EmbeddingKind::kth_power_graph: return kth_power_graph(grid, static_cast<int>(get("k", 2.0)));
    case EmbeddingKind::component_circles: {
      std::vector<std::array<double, 2>> centers;
      for (std::size_t k = 0; k < grid.component_count(); ++k)
        centers.push_back({get("cx" + std::to_string(k), 0.0), get("cy" + std::to_string(k), 0.0)});
      return component_circles(grid, centers, get("R", 1.0));
    }
    case EmbeddingKind::function_graph:
    case EmbeddingKind::custom: break;
  }
  throw Error(ErrorCode::configuration, "embedding kind " + to_string(d.kind) + " cannot be built from a descriptor");
}

// ---------------------------------------------------------------------------
// Sharp scaling on the stretched circle.

struct ScalingOptions {
  std::size_t n = 4096;
  AdmissibilityBudget budget;
  double slope_tol = 0.3;
  double band = 10.0;
};

/// For each L: stretched circle of radius L, raised-cosine bump on the parameter
/// arc between a and b, the three factors of U and C_hat / L_hat^4.
inline ExperimentResult scaling_experiment(const std::vector<double>& L_list, const ScalingOptions& opt = {}) {
  if (L_list.size() < 2) throw Error(ErrorCode::configuration, "scaling needs at least 2 values of L");
  std::vector<double> Ls(L_list);
  std::sort(Ls.begin(), Ls.end());
  ExperimentResult r;
  r.id = "scaling";
  r.columns = {"L", "chord_ab", "term_infdist", "term_invtau2", "term_energy", "U", "c_hat", "l_hat", "ref_bound",
               "ratio"};
  const auto grid = build_circle_grid(opt.n);
  const double pi = std::numbers::pi;
  const auto f = arc_bump_field(grid, 5.0 * pi / 4.0, 7.0 * pi / 4.0);
  for (double L : Ls) {
    const auto m = scaled_circle_example(grid, L);
    std::vector<double> pa(2), pb(2);
    m.evaluate(0, 5.0 * pi / 4.0, pa);
    m.evaluate(0, 7.0 * pi / 4.0, pb);
    const auto adm = check_admissible(grid, m, opt.budget);
    const auto u = uncertainty_product(grid, m, f, adm);
    r.rows.push_back({L, distance(pa, pb), u.term_infdist, u.term_invtau2, u.term_energy, u.U, adm.c_hat, adm.l_hat,
                      u.ref_bound, u.ratio_to_bound()});
  }
  r.slopes.push_back(fit_loglog("term_infdist", Ls, r.column("term_infdist")));
  r.slopes.push_back(fit_loglog("term_invtau2", Ls, r.column("term_invtau2")));
  r.slopes.push_back(fit_loglog("U", Ls, r.column("U")));
  r.slopes.push_back(fit_loglog("c_hat", Ls, r.column("c_hat")));
  r.slopes.push_back(fit_loglog("l_hat", Ls, r.column("l_hat")));
  const auto ratios = r.column("ratio");
  const double band = *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end());
  r.summary["ratio_band"] = band;
  r.verdicts.push_back(check_range("slope_term_infdist", r.slopes[0].slope, -3.0 - opt.slope_tol, -3.0 + opt.slope_tol));
  r.verdicts.push_back(check_range("slope_term_invtau2", r.slopes[1].slope, -2.0 - opt.slope_tol, -2.0 + opt.slope_tol));
  r.verdicts.push_back(check_range("slope_U", r.slopes[2].slope, -5.0 - opt.slope_tol, -5.0 + opt.slope_tol));
  r.verdicts.push_back(check_range("ratio_band", band, 1.0, opt.band));
  return r;
}

// ---------------------------------------------------------------------------
// Euclidean reduction on the 1-d ball.

struct EuclideanOptions {
  std::size_t n_r = 4000;
  double truncation_cap = 1e-6;
  double parabola_tol = 0.01;
  double variation_tol = 0.2;
  double closed_form_tol = 0.05;
  double offset_lo = 0.5;
  double offset_hi = 2.0;
};

/// ∫(x-c)²f² · ∫f'² for f² the N(c, σ²) density restricted to [-1, 1]:
/// both factors are σ²·E[Z² | trunc] up to the 1/(4σ⁴) in the energy.
inline double truncated_gaussian_product(double sigma, double center) {
  const double lo = (-1.0 - center) / sigma;
  const double hi = (1.0 - center) / sigma;
  const double phi_lo = std::exp(-0.5 * lo * lo) / std::sqrt(2.0 * std::numbers::pi);
  const double phi_hi = std::exp(-0.5 * hi * hi) / std::sqrt(2.0 * std::numbers::pi);
  const double mass = 1.0 - detail::standard_normal_tail(hi) - detail::standard_normal_tail(-lo);
  const double v = 1.0 + (lo * phi_lo - hi * phi_hi) / mass;
  return v * v / 4.0;
}

inline ExperimentResult euclidean_reduction(const std::vector<double>& eps_list, const std::vector<double>& centers,
                                            const EuclideanOptions& opt = {}) {
  ExperimentResult r;
  r.id = "euclidean";
  r.columns = {"center", "eps", "second_moment", "energy", "product", "closed_form", "nearest_dist", "ratio",
               "truncation_mass"};
  const auto grid = build_ball_grid(opt.n_r, 1, 1);
  const auto m = paraboloid_graph(grid);
  std::vector<double> cs(centers), es(eps_list);
  std::sort(cs.begin(), cs.end());
  std::sort(es.begin(), es.end(), std::greater<>());
  for (double c : cs) {
    if (std::abs(c) > 0.5) throw Error(ErrorCode::configuration, "centers must satisfy |a| <= 0.5");
    for (double eps : es) {
      const double trunc = gaussian_truncation_mass(eps, c);
      if (trunc >= opt.truncation_cap)
        throw Error(ErrorCode::configuration, "Gaussian mass outside the ball exceeds the truncation cap");
      const auto f = radial_gaussian_field(grid, eps, {c, 0.0});
      std::vector<double> moment(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i)[0] - c;
        moment[i] = x * x * f[i] * f[i];
      }
      const double second = integrate(grid, moment);
      const double energy = dirichlet_energy(grid, f);
      const auto tau = center_of_mass(grid, m, f);
      const double nearest = nearest_embedded_point(grid, m, tau).distance;
      r.rows.push_back({c, eps, second, energy, second * energy, truncated_gaussian_product(eps, c), nearest,
                        nearest / second, trunc});
    }
  }
  // Per-center verdicts.
  for (double c : cs) {
    double pmin = kInfinity, pmax = 0.0, worst_cf = 0.0, rmin = kInfinity, rmax = 0.0;
    for (const auto& row : r.rows) {
      if (row[0] != c) continue;
      pmin = std::min(pmin, row[4]);
      pmax = std::max(pmax, row[4]);
      worst_cf = std::max(worst_cf, std::abs(row[4] / row[5] - 1.0));
      rmin = std::min(rmin, row[7]);
      rmax = std::max(rmax, row[7]);
    }
    const std::string tag = "center=" + std::to_string(c);
    r.verdicts.push_back(check_range("product_variation " + tag, (pmax - pmin) / pmax, 0.0, opt.variation_tol));
    r.verdicts.push_back(check_range("closed_form_error " + tag, worst_cf, 0.0, opt.closed_form_tol));
    if (c == 0.0)
      r.verdicts.push_back(
          check_range("parabola_ratio_min " + tag, rmin, std::sqrt(3.0) / 2.0 - opt.parabola_tol, kInfinity));
    else {
      r.verdicts.push_back(check_range("offset_ratio_min " + tag, rmin, opt.offset_lo, opt.offset_hi));
      r.verdicts.push_back(check_range("offset_ratio_max " + tag, rmax, opt.offset_lo, opt.offset_hi));
    }
  }
  return r;
}

/// Distance from (0, h) to the parabola y = x² over x ∈ [-1, 1] by golden
/// section on x ≥ 0 (the problem is symmetric).
inline double parabola_distance(double h) {
  auto d2 = [h](double x) { return x * x + (h - x * x) * (h - x * x); };
  double lo = 0.0, hi = 1.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double a = hi - g * (hi - lo);
    const double b = lo + g * (hi - lo);
    if (d2(a) < d2(b)) hi = b;
    else lo = a;
  }
  return std::sqrt(std::min({d2(0.5 * (lo + hi)), d2(0.0), d2(1.0)}));
}

// ---------------------------------------------------------------------------
// Constructive inverse map.

struct InverseReport {
  std::vector<double> tau;
  double tau_norm = 0.0;
  double f4 = 0.0;      // ∫ f⁴ dx
  double excess = 0.0;  // ∫ f⁴ dx - 1/2π
  double grad_sup = 0.0;
  double c_hat = 0.0;
  double l_hat = 1.0;
  double lhs = 0.0;             // (C/L⁵) ‖τ‖²
  double lhs_unsquared = 0.0;   // (C/L⁵) ‖τ‖
  double rhs = 0.0;             // (1 + ‖f'‖∞)^{-7} · excess
  double pythagorean = 0.0;     // excess², a lower bound for ‖τ‖²
  double third_identity = 0.0;  // |τ₃ - excess|
  double constant = kInfinity;  // lhs / rhs
};

inline InverseReport inverse_constructive(const ManifoldGrid& grid, const Field& f,
                                          const AdmissibilityBudget& budget = {},
                                          const CurvatureOptions& options = {}) {
  detail::require_kind(grid, GridKind::circle, "inverse_constructive needs a circle grid");
  require_normalized(grid, f);
  InverseReport r;
  const auto m = function_graph_circle(grid, f);
  const auto adm = check_admissible(grid, m, budget, options);
  r.c_hat = adm.c_hat;
  r.l_hat = adm.l_hat;
  r.tau = center_of_mass(grid, m, f);
  r.tau_norm = norm(r.tau);
  std::vector<double> f4(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f4[i] = int_pow(f[i], 4);
  r.f4 = integrate(grid, f4);
  r.excess = r.f4 - 1.0 / (2.0 * std::numbers::pi);
  for (double d : spectral::derivative(f.values())) r.grad_sup = std::max(r.grad_sup, std::abs(d));
  const double scale = r.c_hat / std::pow(r.l_hat, 5);
  r.lhs = scale * r.tau_norm * r.tau_norm;
  r.lhs_unsquared = scale * r.tau_norm;
  r.rhs = r.excess / std::pow(1.0 + r.grad_sup, 7);
  r.pythagorean = r.excess * r.excess;
  r.third_identity = std::abs(r.tau[2] - r.excess);
  if (r.rhs > 0.0) r.constant = r.lhs / r.rhs;
  return r;
}

struct InverseOptions {
  std::size_t n = 512;
  std::size_t members = 20;
  int degree = 3;
  std::uint64_t seed = 1;
  double stability_tol = 0.2;
  AdmissibilityBudget budget;
};

/// Inverse bound across a band-limited random family at n and 2n. The reported
/// constant is min over members of LHS / RHS; it must be positive and stable.
inline ExperimentResult inverse_experiment(const InverseOptions& opt = {}) {
  ExperimentResult r;
  r.id = "inverse";
  r.columns = {"n", "member", "f4", "excess", "grad_sup", "c_hat", "l_hat", "tau_norm", "lhs", "rhs", "constant",
               "third_identity"};
  std::map<std::size_t, double> cmin;
  for (std::size_t n : {opt.n, 2 * opt.n}) {
    const auto grid = build_circle_grid(n);
    double best = kInfinity;
    for (std::size_t j = 0; j < opt.members; ++j) {
      const auto f = random_trig_field(grid, opt.degree, opt.seed, j);
      const auto rep = inverse_constructive(grid, f, opt.budget);
      r.rows.push_back({static_cast<double>(n), static_cast<double>(j), rep.f4, rep.excess, rep.grad_sup, rep.c_hat,
                        rep.l_hat, rep.tau_norm, rep.lhs, rep.rhs, rep.constant, rep.third_identity});
      best = std::min(best, rep.constant);
    }
    cmin[n] = best;
  }
  const double c1 = cmin[opt.n];
  const double c2 = cmin[2 * opt.n];
  r.summary["constant_n"] = c1;
  r.summary["constant_2n"] = c2;
  double worst_identity = 0.0;
  for (const auto& row : r.rows) worst_identity = std::max(worst_identity, row[11]);
  r.verdicts.push_back(check_range("constant_positive", c1, std::numeric_limits<double>::min(), kInfinity));
  r.verdicts.push_back(check_range("constant_stability", relative_change(c1, c2), 0.0, opt.stability_tol));
  r.verdicts.push_back(check_range("third_coordinate_identity", worst_identity, 0.0, 1e-8));
  return r;
}

// ---------------------------------------------------------------------------
// Degenerate curvature: the k-th power graph.

struct DegenerateRow {
  int k = 2;
  double center = 0.0;
  double eps = 0.0;
  UncertaintyReport report;
  double modified = 0.0;    // nearest^{2/k} · ‖τ‖^{-2} · energy
  double unmodified = 0.0;  // nearest · ‖τ‖^{-2} · energy
};

inline DegenerateRow degenerate_point(const ManifoldGrid& grid, int k, double center, double eps,
                                      const AdmissibilityReport& adm) {
  const auto m = kth_power_graph(grid, k);
  const auto f = radial_gaussian_field(grid, eps, {center, 0.0});
  DegenerateRow row{k, center, eps, uncertainty_product(grid, m, f, adm), 0.0, 0.0};
  const auto& u = row.report;
  row.unmodified = u.U;
  row.modified = std::pow(u.term_infdist, 2.0 / static_cast<double>(k)) * u.term_invtau2 * u.term_energy;
  return row;
}

struct DegenerateOptions {
  std::size_t n_r = 4000;
  double modified_tol = 0.3;
  double decay_min = 0.6;
};

/// Modified (exponent 2/k) and unmodified products over Gaussian bumps on
/// [-1, 1]. For each (k, center) the ε sweep contrasts decay and no decay.
inline ExperimentResult degenerate_k_experiment(const std::vector<int>& k_list, const std::vector<double>& eps_list,
                                                const std::vector<double>& centers,
                                                const DegenerateOptions& opt = {}) {
  ExperimentResult r;
  r.id = "degenerate";
  r.columns = {"k", "center", "eps", "term_infdist", "term_invtau2", "term_energy", "modified", "unmodified"};
  const auto grid = build_ball_grid(opt.n_r, 1, 1);
  AdmissibilityReport unit;  // the products here carry no constants
  std::vector<double> es(eps_list);
  std::sort(es.begin(), es.end(), std::greater<>());
  for (int k : k_list) {
    if (k < 2) throw Error(ErrorCode::configuration, "k must be >= 2");
    for (double c : centers) {
      std::vector<double> mod, unmod;
      for (double eps : es) {
        const auto row = degenerate_point(grid, k, c, eps, unit);
        r.rows.push_back({static_cast<double>(k), c, eps, row.report.term_infdist, row.report.term_invtau2,
                          row.report.term_energy, row.modified, row.unmodified});
        mod.push_back(row.modified);
        unmod.push_back(row.unmodified);
      }
      const std::string tag = "k=" + std::to_string(k) + " center=" + std::to_string(c);
      if (k == 2) {
        r.verdicts.push_back(check_range("exponent_identity " + tag,
                                         std::abs(mod.front() - unmod.front()), 0.0, 1e-12 * unmod.front()));
        const auto f = radial_gaussian_field(grid, es.front(), {c, 0.0});
        const auto para = uncertainty_product(grid, paraboloid_graph(grid), f, unit);
        r.verdicts.push_back(check_range("paraboloid_agreement " + tag, std::abs(para.U - unmod.front()), 0.0,
                                         1e-10 * para.U));
      } else if (c == 0.0 && es.size() >= 2) {
        const double mmax = *std::max_element(mod.begin(), mod.end());
        const double mmin = *std::min_element(mod.begin(), mod.end());
        r.verdicts.push_back(check_range("modified_variation " + tag, (mmax - mmin) / mmax, 0.0, opt.modified_tol));
        r.verdicts.push_back(check_range("unmodified_decay " + tag, 1.0 - unmod.back() / unmod.front(),
                                         opt.decay_min, 1.0));
      } else {
        double worst = 1.0;
        for (std::size_t i = 0; i < mod.size(); ++i)
          worst = std::max({worst, mod[i] / unmod[i], unmod[i] / mod[i]});
        r.summary["max_factor " + tag] = worst;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sweeps.

struct SweepOptions {
  AdmissibilityBudget budget;
  double stability_tol = 0.1;
  bool refine = true;
};

/// Full per-member reports at the base resolution.
struct SweepReports {
  AdmissibilityReport admissibility;
  std::vector<UncertaintyReport> uncertainty;
  std::vector<DisconnectedReport> disconnected;
  std::vector<BreitenbergerReport> breitenberger;
  std::vector<GohGoodmanReport> goh_goodman;
};

/// Rows of uncertainty_product over `family` at the grid resolution and at
/// twice it. Circle and sphere grids also report the Breitenberger and
/// Goh–Goodman products.
inline ExperimentResult uncertainty_sweep(const GridSpec& spec, const EmbeddingDescriptor& desc, const FamilySpec& family,
                                      const SweepOptions& opt = {}, SweepReports* reports = nullptr) {
  ExperimentResult r;
  r.id = "verify";
  r.columns = {"n", "member", "parameter", "tau_norm", "nearest_dist", "dirichlet", "U", "ref_bound", "ratio",
               "degenerate", "classical_product", "modified_product"};
  std::vector<GridSpec> specs{spec};
  if (opt.refine) specs.push_back(spec.refined());
  std::vector<double> min_u;
  double classical_min = kInfinity;
  double min_ratio = kInfinity;
  std::size_t degenerate = 0;
  for (const auto& s : specs) {
    const auto grid = s.build();
    const auto m = build_embedding(grid, desc);
    const auto adm = check_admissible(grid, m, opt.budget);
    const bool base = &s == &specs.front();
    if (base && reports) reports->admissibility = adm;
    const auto members = make_family(grid, family);
    double best = kInfinity;
    for (std::size_t j = 0; j < members.size(); ++j) {
      const auto& f = members[j].field;
      const auto u = uncertainty_product(grid, m, f, adm);
      double classical = kInfinity, modified = kInfinity;
      if (grid.kind() == GridKind::circle && is_power_of_two(grid.size())) {
        const auto b = breitenberger(grid, f);
        classical = b.product;
        modified = b.modified_product;
        if (base && reports) reports->breitenberger.push_back(b);
      } else if (grid.kind() == GridKind::sphere2) {
        const auto g = goh_goodman(grid, f);
        classical = g.product;
        if (base && reports) reports->goh_goodman.push_back(g);
      }
      if (base && reports) reports->uncertainty.push_back(u);
      r.rows.push_back({static_cast<double>(grid.resolution()), static_cast<double>(j), members[j].parameter,
                        u.tau_norm, u.nearest_dist, u.dirichlet, u.U, u.ref_bound, u.ratio_to_bound(),
                        u.degenerate_tau ? 1.0 : 0.0, classical, modified});
      if (u.degenerate_tau) {
        if (base) ++degenerate;
        continue;
      }
      best = std::min(best, u.U);
      if (base) {
        min_ratio = std::min(min_ratio, u.ratio_to_bound());
        classical_min = std::min(classical_min, classical);
      }
    }
    min_u.push_back(best);
  }
  r.summary["min_U"] = min_u.front();
  r.summary["min_ratio"] = min_ratio;
  r.summary["degenerate_count"] = static_cast<double>(degenerate);
  if (std::isfinite(min_u.front()))
    r.verdicts.push_back(check_range("min_U_positive", min_u.front(), std::numeric_limits<double>::min(), kInfinity));
  if (min_u.size() == 2 && std::isfinite(min_u[0]) && std::isfinite(min_u[1])) {
    r.summary["min_U_refined"] = min_u[1];
    r.verdicts.push_back(check_range("refinement_stability", relative_change(min_u[0], min_u[1]), 0.0,
                                     opt.stability_tol));
  }
  if (std::isfinite(classical_min)) {
    r.summary["min_classical_product"] = classical_min;
    if (spec.kind == GridKind::circle)
      r.verdicts.push_back(check_range("breitenberger_floor", classical_min, 0.25 - 1e-6, kInfinity));
    if (spec.kind == GridKind::sphere2)
      r.verdicts.push_back(check_range("goh_goodman_floor", classical_min, 1.0 - 0.02, kInfinity));
  }
  return r;
}

/// Disconnected product across a family on a disjoint union, at n and 2n.
inline ExperimentResult disconnected_sweep(const GridSpec& spec, const EmbeddingDescriptor& desc,
                                           const FamilySpec& family, const SweepOptions& opt = {},
                                           SweepReports* reports = nullptr) {
  if (spec.kind != GridKind::disjoint_union) throw Error(ErrorCode::configuration, "disconnected sweep needs a union");
  ExperimentResult r;
  r.id = "disconnected";
  r.columns = {"n", "member", "parameter", "simplex_dist", "sigma", "nearest_dist", "dirichlet", "U", "ratio",
               "degenerate", "mass0", "mass1"};
  std::vector<GridSpec> specs{spec};
  if (opt.refine) specs.push_back(spec.refined());
  std::vector<double> min_u;
  std::size_t degenerate = 0;
  double worst_mass = 0.0;
  for (const auto& s : specs) {
    const auto grid = s.build();
    const auto m = build_embedding(grid, desc);
    const auto adm = check_admissible(grid, m, opt.budget);
    const double sigma = separation(grid, m);
    const bool base = &s == &specs.front();
    if (base && reports) reports->admissibility = adm;
    const auto members = make_family(grid, family);
    double best = kInfinity;
    for (std::size_t j = 0; j < members.size(); ++j) {
      const auto u = disconnected_uncertainty(grid, m, members[j].field, adm, sigma);
      if (base && reports) reports->disconnected.push_back(u);
      double mass = 0.0;
      for (double x : u.component_masses) mass += x;
      worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
      r.rows.push_back({static_cast<double>(grid.resolution()), static_cast<double>(j), members[j].parameter,
                        u.simplex_dist, u.sigma, u.nearest_dist, u.dirichlet, u.U, u.U / u.ref_bound,
                        u.degenerate ? 1.0 : 0.0, u.component_masses[0], u.component_masses[1]});
      if (u.degenerate) {
        if (base) ++degenerate;
        continue;
      }
      best = std::min(best, u.U);
    }
    min_u.push_back(best);
  }
  r.summary["min_U"] = min_u.front();
  r.summary["degenerate_count"] = static_cast<double>(degenerate);
  r.verdicts.push_back(check_range("mass_partition", worst_mass, 0.0, 1e-8));
  if (std::isfinite(min_u.front()))
    r.verdicts.push_back(check_range("min_U_positive", min_u.front(), std::numeric_limits<double>::min(), kInfinity));
  if (min_u.size() == 2 && std::isfinite(min_u[0]) && std::isfinite(min_u[1])) {
    r.summary["min_U_refined"] = min_u[1];
    r.verdicts.push_back(check_range("refinement_stability", relative_change(min_u[0], min_u[1]), 0.0,
                                     opt.stability_tol));
  }
  return r;
}

}  // namespace mup
