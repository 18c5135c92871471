#pragma once

// Sampling estimates of the bilipschitz constant L and the curvature constant
// C of an embedding. L_hat is a lower bound on the true L and C_hat an upper
// bound on the true C; both move monotonically as samples are added.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "mup/embed.hpp"
#include "mup/error.hpp"
#include "mup/grid.hpp"
#include "mup/linalg.hpp"

namespace mup {

inline constexpr double kDegenerateDenominator = 1e-14;

namespace detail {

inline double pair_ratio(double chord, double geo) { return std::max(chord / geo, geo / chord); }

/// Deterministic per-N stream so samples for one N nest across sample counts.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

}  // namespace detail

/// L_hat = max over all stencil-adjacent pairs and `n_pairs` random same-component
/// pairs of max(chord / geodesic, geodesic / chord).
inline double estimate_lipschitz(const ManifoldGrid& grid, const Embedding& emb, std::size_t n_pairs,
                                 std::uint64_t seed) {
  if (emb.size() != grid.size()) throw Error(ErrorCode::invalid_input, "embedding does not match grid");
  double best = 1.0;
  auto consider = [&](std::size_t i, std::size_t j) {
    const double geo = grid.geodesic(i, j);
    const double chord = distance(emb.point(i), emb.point(j));
    if (geo == 0.0) {
      if (chord > 0.0) throw Error(ErrorCode::degenerate_pair, "coincident nodes with distinct images");
      return;
    }
    if (chord == 0.0) {
      best = std::numeric_limits<double>::infinity();
      return;
    }
    best = std::max(best, detail::pair_ratio(chord, geo));
  };
  for (const auto& e : grid.edges()) consider(e.a, e.b);

  auto rng = detail::stream(seed, 0x4c);
  std::uniform_int_distribution<std::size_t> any(0, grid.size() - 1);
  for (std::size_t s = 0; s < n_pairs; ++s) {
    const std::size_t i = any(rng);
    const auto& p = grid.patch_of(i);
    std::uniform_int_distribution<std::size_t> within(p.offset, p.offset + p.size() - 1);
    const std::size_t j = within(rng);
    if (i != j) consider(i, j);
  }
  return best;
}

struct CurvatureOptions {
  std::size_t coarse_nodes = 64;
  /// Restricts every configuration point to these nodes; empty means all nodes.
  std::vector<std::size_t> candidates;
};

struct CurvatureEstimate {
  double c_hat = std::numeric_limits<double>::infinity();
  std::map<int, double> per_n;
  std::map<int, std::size_t> evaluated;
  bool n2_exhaustive = false;
};

/// ‖mean m(x_i) - m(z)‖ / mean ‖m(x_i) - m(z)‖²; negative when the
/// denominator is below the degeneracy cutoff.
inline double curvature_ratio(const Embedding& emb, std::span<const std::size_t> xs, std::size_t z) {
  const std::size_t d = emb.ambient_dim();
  const auto mz = emb.point(z);
  double mean[16] = {};
  std::vector<double> big;
  double* acc = mean;
  if (d > 16) {
    big.assign(d, 0.0);
    acc = big.data();
  }
  double den = 0.0;
  for (std::size_t x : xs) {
    const auto mx = emb.point(x);
    for (std::size_t k = 0; k < d; ++k) acc[k] += mx[k] - mz[k];
    den += squared_distance(mx, mz);
  }
  const double inv = 1.0 / static_cast<double>(xs.size());
  den *= inv;
  if (den < kDegenerateDenominator) return -1.0;
  double num = 0.0;
  for (std::size_t k = 0; k < d; ++k) num += (acc[k] * inv) * (acc[k] * inv);
  return std::sqrt(num) / den;
}

/// C_hat = min over evaluated configurations (x_1..x_N, z) of the curvature
/// ratio. N = 1 and N = 2 are searched exhaustively on a coarsened node set;
/// larger N use `n_samples` seeded random configurations each.
inline CurvatureEstimate estimate_curvature(const ManifoldGrid& grid, const Embedding& emb,
                                            const std::vector<int>& n_list, std::size_t n_samples,
                                            std::uint64_t seed, const CurvatureOptions& options = {}) {
  if (emb.size() != grid.size()) throw Error(ErrorCode::invalid_input, "embedding does not match grid");
  if (n_list.empty()) throw Error(ErrorCode::invalid_input, "configuration size list is empty");
  if (n_samples < 1) throw Error(ErrorCode::invalid_input, "n_samples must be >= 1");

  std::vector<std::size_t> pool = options.candidates;
  if (pool.empty()) {
    pool.resize(grid.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  }
  const auto coarse = coarse_nodes(grid, options.coarse_nodes, options.candidates);
  const auto nc = static_cast<std::ptrdiff_t>(coarse.size());

  CurvatureEstimate out;
  for (int n : n_list) {
    if (n < 1) throw Error(ErrorCode::invalid_input, "configuration sizes must be >= 1");
    double best = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    if (n <= 2) {
#pragma omp parallel for reduction(min : best) reduction(+ : count) schedule(static)
      for (std::ptrdiff_t zi = 0; zi < nc; ++zi) {
        const std::size_t z = coarse[static_cast<std::size_t>(zi)];
        for (std::ptrdiff_t a = 0; a < nc; ++a) {
          if (n == 1) {
            const std::size_t xs[1] = {coarse[static_cast<std::size_t>(a)]};
            const double r = curvature_ratio(emb, xs, z);
            if (r >= 0.0) {
              best = std::min(best, r);
              ++count;
            }
            continue;
          }
          for (std::ptrdiff_t b = a; b < nc; ++b) {
            const std::size_t xs[2] = {coarse[static_cast<std::size_t>(a)], coarse[static_cast<std::size_t>(b)]};
            const double r = curvature_ratio(emb, xs, z);
            if (r >= 0.0) {
              best = std::min(best, r);
              ++count;
            }
          }
        }
      }
      if (n == 2) out.n2_exhaustive = true;
    } else {
      const auto un = static_cast<std::size_t>(n);
      auto rng = detail::stream(seed, static_cast<std::uint64_t>(n));
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      std::vector<std::size_t> configs(n_samples * (un + 1));
      for (auto& c : configs) c = pool[pick(rng)];
      const auto ns = static_cast<std::ptrdiff_t>(n_samples);
#pragma omp parallel for reduction(min : best) reduction(+ : count) schedule(static)
      for (std::ptrdiff_t s = 0; s < ns; ++s) {
        const std::size_t* c = configs.data() + static_cast<std::size_t>(s) * (un + 1);
        const double r = curvature_ratio(emb, {c, un}, c[un]);
        if (r >= 0.0) {
          best = std::min(best, r);
          ++count;
        }
      }
    }
    out.per_n[n] = best;
    out.evaluated[n] = count;
    out.c_hat = std::min(out.c_hat, best);
  }
  std::size_t total = 0;
  for (const auto& [n, c] : out.evaluated) total += c;
  if (total == 0) throw Error(ErrorCode::degenerate_embedding, "every configuration was degenerate");
  return out;
}

inline double estimate_curvature_constant(const ManifoldGrid& grid, const Embedding& emb,
                                          const std::vector<int>& n_list, std::size_t n_samples,
                                          std::uint64_t seed, const CurvatureOptions& options = {}) {
  return estimate_curvature(grid, emb, n_list, n_samples, seed, options).c_hat;
}

/// Work caps for one admissibility check.
struct AdmissibilityBudget {
  std::size_t n_pairs = 20000;
  std::vector<int> n_list = {2, 3, 5, 10, 50};
  std::size_t n_samples = 20000;
  std::size_t coarse_nodes = 64;
  std::uint64_t seed = 1;

  /// Configuration evaluations this budget implies.
  std::size_t evaluations() const {
    std::size_t total = 0;
    for (int n : n_list) {
      if (n == 1) total += coarse_nodes * coarse_nodes;
      else if (n == 2) total += coarse_nodes * coarse_nodes * (coarse_nodes + 1) / 2;
      else total += n_samples;
    }
    return total + n_pairs;
  }
};

struct AdmissibilityReport {
  double l_hat = 1.0;
  double c_hat = 0.0;
  double centering_residual = 0.0;
  bool n2_exhaustive = false;
  std::map<int, std::size_t> samples_used;
  std::map<int, double> c_per_n;
  std::uint64_t seed = 0;

  /// C_hat / L_hat^4, the reference lower-bound scale.
  double ref_bound() const { return c_hat / std::pow(l_hat, 4); }
};

inline AdmissibilityReport check_admissible(const ManifoldGrid& grid, const Embedding& emb,
                                            const AdmissibilityBudget& budget = {},
                                            const CurvatureOptions& options = {}) {
  AdmissibilityReport r;
  r.seed = budget.seed;
  r.l_hat = estimate_lipschitz(grid, emb, budget.n_pairs, budget.seed);
  CurvatureOptions opts = options;
  opts.coarse_nodes = budget.coarse_nodes;
  const auto c = estimate_curvature(grid, emb, budget.n_list, budget.n_samples, budget.seed, opts);
  r.c_hat = c.c_hat;
  r.c_per_n = c.per_n;
  r.samples_used = c.evaluated;
  r.n2_exhaustive = c.n2_exhaustive;
  r.centering_residual = centering_residual(grid, emb);
  return r;
}

struct SufficiencyReport {
  double c_n2 = 0.0;
  double c_sampled = 0.0;
  double ratio = 0.0;
  bool violation = false;  // ratio > 2
};

/// Compares C_hat from the exhaustive N = 2 search with C_hat over sampled
/// N ∈ {3, 5, 10, 50}.
inline SufficiencyReport test_n2_sufficiency(const ManifoldGrid& grid, const Embedding& emb,
                                             const AdmissibilityBudget& budget = {}) {
  CurvatureOptions opts;
  opts.coarse_nodes = budget.coarse_nodes;
  SufficiencyReport r;
  r.c_n2 = estimate_curvature(grid, emb, {2}, budget.n_samples, budget.seed, opts).c_hat;
  r.c_sampled = estimate_curvature(grid, emb, {3, 5, 10, 50}, budget.n_samples, budget.seed, opts).c_hat;
  r.ratio = r.c_n2 / r.c_sampled;
  r.violation = r.ratio > 2.0;
  return r;
}

}  // namespace mup
