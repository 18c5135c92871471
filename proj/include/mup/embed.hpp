#pragma once

// Catalog of maps m: M -> R^d evaluated on grid nodes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mup/error.hpp"
#include "mup/grid.hpp"
#include "mup/linalg.hpp"

namespace mup {

enum class EmbeddingKind {
  canonical_circle,
  canonical_sphere,
  helix,
  paraboloid_graph,
  lp_sphere,
  scaled_circle,
  kth_power_graph,
  function_graph,
  component_circles,
  custom,
};

inline std::string to_string(EmbeddingKind k) {
  switch (k) {
    case EmbeddingKind::canonical_circle: return "canonical-circle";
    case EmbeddingKind::canonical_sphere: return "canonical-sphere";
    case EmbeddingKind::helix: return "helix";
    case EmbeddingKind::paraboloid_graph: return "paraboloid-graph";
    case EmbeddingKind::lp_sphere: return "lp-sphere";
    case EmbeddingKind::scaled_circle: return "scaled-circle";
    case EmbeddingKind::kth_power_graph: return "kth-power-graph";
    case EmbeddingKind::function_graph: return "function-graph";
    case EmbeddingKind::component_circles: return "component-circles";
    case EmbeddingKind::custom: return "custom";
  }
  return "unknown";
}

struct EmbeddingDescriptor {
  EmbeddingKind kind = EmbeddingKind::custom;
  std::map<std::string, double> params;
};

/// Evaluates the map at an arbitrary parameter of a one-dimensional component
/// (circle angle or interval coordinate). Writes ambient_dim values.
using CurveFn = std::function<void(std::size_t component, double param, std::span<double> out)>;

class Embedding {
 public:
  Embedding(std::size_t ambient_dim, std::vector<double> coords, EmbeddingDescriptor descriptor,
            bool centered = false)
      : dim_(ambient_dim), coords_(std::move(coords)), descriptor_(std::move(descriptor)),
        offset_(ambient_dim, 0.0), centered_(centered) {
    if (dim_ == 0) throw Error(ErrorCode::invalid_parameter, "ambient dimension must be >= 1");
    if (coords_.size() % dim_ != 0)
      throw Error(ErrorCode::invalid_input, "coordinate count is not a multiple of the dimension");
    for (double v : coords_)
      if (!std::isfinite(v)) throw Error(ErrorCode::invalid_input, "non-finite embedding point");
  }

  std::size_t ambient_dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / dim_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<const double> coords() const { return coords_; }
  const EmbeddingDescriptor& descriptor() const { return descriptor_; }
  bool centered() const { return centered_; }

  /// Vector already subtracted from every point to center the map.
  std::span<const double> center_offset() const { return offset_; }

  bool has_curve() const { return static_cast<bool>(curve_); }

  /// Continuous evaluation with the centering offset applied.
  void evaluate(std::size_t component, double param, std::span<double> out) const {
    curve_(component, param, out);
    for (std::size_t k = 0; k < dim_; ++k) out[k] -= offset_[k];
  }

  Embedding& with_curve(CurveFn fn) {
    curve_ = std::move(fn);
    return *this;
  }

  /// Subtracts the quadrature mean from the coordinates selected by `mask`
  /// (all coordinates when empty).
  Embedding& center(const ManifoldGrid& grid, std::vector<bool> mask = {}) {
    const auto w = grid.weights();
    std::vector<double> mean(dim_, 0.0);
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t k = 0; k < dim_; ++k) mean[k] += w[i] * coords_[i * dim_ + k];
    for (std::size_t k = 0; k < dim_; ++k) {
      if (!mask.empty() && !mask[k]) continue;
      const double shift = mean[k] / grid.total_volume();
      offset_[k] += shift;
      for (std::size_t i = 0; i < size(); ++i) coords_[i * dim_ + k] -= shift;
    }
    centered_ = true;
    return *this;
  }

  /// Copy with every point mapped through x -> A x (row-major d x d).
  Embedding transformed(std::span<const double> matrix) const {
    std::vector<double> c(coords_.size(), 0.0);
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t k = 0; k < dim_; ++k) c[i * dim_ + r] += matrix[r * dim_ + k] * coords_[i * dim_ + k];
    Embedding e(dim_, std::move(c), {EmbeddingKind::custom, descriptor_.params}, centered_);
    if (curve_) {
      std::vector<double> a(matrix.begin(), matrix.end());
      e.curve_ = [src = *this, a = std::move(a)](std::size_t comp, double t, std::span<double> out) {
        const std::size_t d = src.dim_;
        std::vector<double> x(d);
        src.evaluate(comp, t, x);
        for (std::size_t r = 0; r < d; ++r) {
          out[r] = 0.0;
          for (std::size_t k = 0; k < d; ++k) out[r] += a[r * d + k] * x[k];
        }
      };
    }
    return e;
  }

  Embedding scaled(double lambda) const {
    std::vector<double> c(coords_);
    for (auto& v : c) v *= lambda;
    Embedding e(dim_, std::move(c), {EmbeddingKind::custom, descriptor_.params}, centered_);
    if (curve_)
      e.curve_ = [src = *this, lambda](std::size_t comp, double t, std::span<double> out) {
        src.evaluate(comp, t, out);
        for (auto& v : out) v *= lambda;
      };
    return e;
  }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  EmbeddingDescriptor descriptor_;
  std::vector<double> offset_;
  bool centered_;
  CurveFn curve_;
};

/// ‖∫ m dg‖.
inline double centering_residual(const ManifoldGrid& grid, const Embedding& emb) {
  const auto w = grid.weights();
  std::vector<double> s(emb.ambient_dim(), 0.0);
  for (std::size_t i = 0; i < emb.size(); ++i) {
    const auto p = emb.point(i);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += w[i] * p[k];
  }
  return norm(s);
}

/// sup_z ‖m(z)‖ over nodes.
inline double max_radius(const Embedding& emb) {
  double r = 0.0;
  for (std::size_t i = 0; i < emb.size(); ++i) r = std::max(r, norm(emb.point(i)));
  return r;
}

namespace detail {

inline void require_kind(const ManifoldGrid& grid, GridKind kind, const char* what) {
  if (grid.kind() != kind) throw Error(ErrorCode::unsupported_manifold, what);
}

/// Builds node coordinates by evaluating a curve at every node parameter.
inline std::vector<double> sample_curve(const ManifoldGrid& grid, std::size_t dim, const CurveFn& fn) {
  std::vector<double> c(grid.size() * dim);
  for (std::size_t i = 0; i < grid.size(); ++i)
    fn(static_cast<std::size_t>(grid.component_ids()[i]), grid.node(i)[0], {c.data() + i * dim, dim});
  return c;
}

inline Embedding from_curve(const ManifoldGrid& grid, std::size_t dim, CurveFn fn,
                            EmbeddingDescriptor d, bool centered) {
  Embedding e(dim, sample_curve(grid, dim, fn), std::move(d), centered);
  e.with_curve(std::move(fn));
  return e;
}

}  // namespace detail

/// (R cos t, R sin t). Centered by symmetry.
inline Embedding canonical_circle(const ManifoldGrid& grid, double radius = 1.0) {
  detail::require_kind(grid, GridKind::circle, "canonical_circle needs a circle grid");
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_parameter, "radius must be positive");
  auto fn = [radius](std::size_t, double t, std::span<double> out) {
    out[0] = radius * std::cos(t);
    out[1] = radius * std::sin(t);
  };
  return detail::from_curve(grid, 2, fn, {EmbeddingKind::canonical_circle, {{"R", radius}}}, true);
}

/// Inclusion S² ⊂ R³.
inline Embedding canonical_sphere(const ManifoldGrid& grid) {
  detail::require_kind(grid, GridKind::sphere2, "canonical_sphere needs a sphere grid");
  std::vector<double> c(grid.size() * 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto a = grid.ambient(i);
    std::copy(a.begin(), a.end(), c.begin() + static_cast<std::ptrdiff_t>(3 * i));
  }
  return Embedding(3, std::move(c), {EmbeddingKind::canonical_sphere, {}}, true);
}

/// (cos t, sin t, φ(t)) with the third coordinate mean-centered.
inline Embedding helix_circle(const ManifoldGrid& grid, std::function<double(double)> phi,
                              std::map<std::string, double> params = {}) {
  detail::require_kind(grid, GridKind::circle, "helix_circle needs a circle grid");
  auto fn = [phi = std::move(phi)](std::size_t, double t, std::span<double> out) {
    out[0] = std::cos(t);
    out[1] = std::sin(t);
    out[2] = phi(t);
  };
  auto e = detail::from_curve(grid, 3, fn, {EmbeddingKind::helix, std::move(params)}, false);
  e.center(grid, {false, false, true});
  return e;
}

/// φ(t) = amplitude · cos(frequency · t).
inline Embedding helix_circle(const ManifoldGrid& grid, double amplitude, double frequency) {
  return helix_circle(
      grid, [amplitude, frequency](double t) { return amplitude * std::cos(frequency * t); },
      {{"amplitude", amplitude}, {"frequency", frequency}});
}

namespace detail {

inline Embedding power_graph(const ManifoldGrid& grid, int k, EmbeddingDescriptor d) {
  if (!grid.connected() || grid.dim() != 1 ||
      (grid.kind() != GridKind::interval && grid.kind() != GridKind::ball))
    throw Error(ErrorCode::unsupported_manifold, "graph embeddings need an interval grid");
  auto fn = [k](std::size_t, double x, std::span<double> out) {
    out[0] = x;
    out[1] = int_pow(std::abs(x), k);
  };
  auto e = from_curve(grid, 2, fn, std::move(d), false);
  e.center(grid, {false, true});
  return e;
}

}  // namespace detail

/// (x, |x|^k - mean |x|^k) on [-1, 1]; the mean is the quadrature mean, which
/// equals 1/(k+1) up to quadrature error.
inline Embedding kth_power_graph(const ManifoldGrid& grid, int k) {
  if (k < 2) throw Error(ErrorCode::invalid_parameter, "kth_power_graph needs k >= 2");
  return detail::power_graph(grid, k, {EmbeddingKind::kth_power_graph, {{"k", static_cast<double>(k)}}});
}

/// (x, |x|² - mean |x|²) on the flat unit ball of dimension 1 or 2.
inline Embedding paraboloid_graph(const ManifoldGrid& grid) {
  detail::require_kind(grid, GridKind::ball, "paraboloid_graph needs a ball grid");
  if (grid.dim() == 1) return detail::power_graph(grid, 2, {EmbeddingKind::paraboloid_graph, {{"dim", 1.0}}});
  std::vector<double> c(grid.size() * 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto a = grid.ambient(i);
    c[3 * i] = a[0];
    c[3 * i + 1] = a[1];
    c[3 * i + 2] = a[0] * a[0] + a[1] * a[1];
  }
  Embedding e(3, std::move(c), {EmbeddingKind::paraboloid_graph, {{"dim", 2.0}}}, false);
  e.center(grid, {false, false, true});
  return e;
}

/// Radial projection of (cos t, sin t) onto the unit sphere of ℓ^p in R², centered.
inline Embedding lp_sphere(const ManifoldGrid& grid, double p) {
  detail::require_kind(grid, GridKind::circle, "lp_sphere needs a circle grid");
  if (!(p >= 1.0)) throw Error(ErrorCode::invalid_parameter, "lp_sphere needs p >= 1");
  auto fn = [p](std::size_t, double t, std::span<double> out) {
    const double x = std::cos(t);
    const double y = std::sin(t);
    const double np = std::pow(std::pow(std::abs(x), p) + std::pow(std::abs(y), p), 1.0 / p);
    out[0] = x / np;
    out[1] = y / np;
  };
  auto e = detail::from_curve(grid, 2, fn, {EmbeddingKind::lp_sphere, {{"p", p}}}, false);
  e.center(grid);
  return e;
}

/// Image angle for the sharp-scaling example: the quarter arcs centered at
/// t = π/2 and t = 3π/2 are compressed to image arcs of length 1/L on a circle
/// of radius L, and the two remaining quarters expand to fill the rest.
/// Marked points: a = 5π/4, b = 7π/4, c = 3π/4, d = π/4.
inline double scaled_circle_angle(double t, double L) {
  const double pi = std::numbers::pi;
  const double short_angle = 1.0 / (L * L);  // arc length 1/L at radius L
  const double long_angle = pi - short_angle;
  // Piecewise-linear and monotone, anchored so d = π/4 maps to -short/2 + π/2.
  // Segment boundaries in the parameter: d, c, a, b.
  const double q = pi / 2.0;
  double s = std::fmod(t - pi / 4.0, 2.0 * pi);
  if (s < 0.0) s += 2.0 * pi;
  const double start = pi / 2.0 - short_angle / 2.0;  // image of d
  if (s < q) return start + s / q * short_angle;                                  // d -> c (short)
  if (s < 2 * q) return start + short_angle + (s - q) / q * long_angle;           // c -> a (long)
  if (s < 3 * q) return start + short_angle + long_angle + (s - 2 * q) / q * short_angle;  // a -> b
  return start + 2 * short_angle + long_angle + (s - 3 * q) / q * long_angle;      // b -> d (long)
}

/// Circle mapped onto a circle of radius L whose arcs between a, b and between
/// c, d have image length 1/L.
inline Embedding scaled_circle_example(const ManifoldGrid& grid, double L) {
  detail::require_kind(grid, GridKind::circle, "scaled_circle_example needs a circle grid");
  if (!(L >= 2.0)) throw Error(ErrorCode::invalid_parameter, "scaled_circle_example needs L >= 2");
  auto fn = [L](std::size_t, double t, std::span<double> out) {
    const double psi = scaled_circle_angle(t, L);
    out[0] = L * std::cos(psi);
    out[1] = L * std::sin(psi);
  };
  auto e = detail::from_curve(grid, 2, fn, {EmbeddingKind::scaled_circle, {{"L", L}}}, false);
  e.center(grid);
  return e;
}

/// (cos t, sin t, f(t)² - 1/2π) for an L2-normalized f on the circle. Centered
/// by construction since ∫ f² dx = 1 and the circle has length 2π.
inline Embedding function_graph_circle(const ManifoldGrid& grid, const Field& f) {
  detail::require_kind(grid, GridKind::circle, "function_graph_circle needs a circle grid");
  require_normalized(grid, f);
  std::vector<double> c(grid.size() * 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.node(i)[0];
    c[3 * i] = std::cos(t);
    c[3 * i + 1] = std::sin(t);
    c[3 * i + 2] = f[i] * f[i] - 1.0 / (2.0 * std::numbers::pi);
  }
  return Embedding(3, std::move(c), {EmbeddingKind::function_graph, {}}, true);
}

/// Each circle component k mapped to a circle of radius R about centers[k];
/// globally centered afterwards.
inline Embedding component_circles(const ManifoldGrid& grid, const std::vector<std::array<double, 2>>& centers,
                                   double radius = 1.0) {
  for (const auto& p : grid.patches())
    if (p.kind != GridKind::circle)
      throw Error(ErrorCode::unsupported_manifold, "component_circles needs circle components");
  if (centers.size() != grid.component_count())
    throw Error(ErrorCode::invalid_parameter, "one center per component required");
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_parameter, "radius must be positive");
  auto fn = [centers, radius](std::size_t comp, double t, std::span<double> out) {
    out[0] = centers[comp][0] + radius * std::cos(t);
    out[1] = centers[comp][1] + radius * std::sin(t);
  };
  std::map<std::string, double> params{{"R", radius}};
  for (std::size_t k = 0; k < centers.size(); ++k) {
    params["cx" + std::to_string(k)] = centers[k][0];
    params["cy" + std::to_string(k)] = centers[k][1];
  }
  auto e = detail::from_curve(grid, 2, fn, {EmbeddingKind::component_circles, params}, false);
  e.center(grid);
  return e;
}

/// Arbitrary map given by a function of the node index's ambient position.
inline Embedding custom_embedding(const ManifoldGrid& grid, std::size_t dim,
                                  const std::function<void(std::size_t node, std::span<double>)>& fn,
                                  bool center = true) {
  std::vector<double> c(grid.size() * dim);
  for (std::size_t i = 0; i < grid.size(); ++i) fn(i, {c.data() + i * dim, dim});
  Embedding e(dim, std::move(c), {EmbeddingKind::custom, {}}, false);
  if (center) e.center(grid);
  return e;
}

}  // namespace mup
