#pragma once

// Discretized compact manifolds: quadrature, geodesic distance and the
// Dirichlet form. Every grid is a list of tensor-product patches, one per
// connected component.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mup/error.hpp"
#include "mup/spectral.hpp"

namespace mup {

enum class GridKind { circle, sphere2, interval, ball, disjoint_union };

inline std::string to_string(GridKind k) {
  switch (k) {
    case GridKind::circle: return "circle";
    case GridKind::sphere2: return "sphere2";
    case GridKind::interval: return "interval";
    case GridKind::ball: return "ball";
    case GridKind::disjoint_union: return "disjoint-union";
  }
  return "unknown";
}

/// One connected tensor-product component. Node (i, j) of the patch is global
/// node offset + i * n2 + j; one-dimensional patches have n2 == 1.
///
/// Axis meaning per kind:
///   circle    i: t = 2πi/n1
///   interval  i: x = lo + i * step1 (ball of dimension 1 is the interval [-1, 1])
///   sphere2   i: θ = (i + 1/2) step1, j: φ = j * step2
///   ball (2d) i: r = (i + 1/2) step1, j: θ = j * step2
struct Patch {
  GridKind kind = GridKind::circle;
  int dim = 1;
  std::size_t offset = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 1;
  double lo = 0.0;
  double hi = 0.0;
  double step1 = 0.0;
  double step2 = 0.0;
  double volume = 0.0;

  std::size_t size() const { return n1 * n2; }
  bool contains(std::size_t node) const { return node >= offset && node < offset + size(); }
  bool periodic() const { return kind == GridKind::circle; }
  bool is_ball2() const { return kind == GridKind::ball && dim == 2; }
};

/// A directed-once edge of the finite-difference stencil. The Dirichlet form
/// is Σ weight * ((f_a - f_b) / length)^2.
struct Edge {
  std::size_t a;
  std::size_t b;
  double length;
  double weight;
};

class ManifoldGrid {
 public:
  ManifoldGrid() = default;

  GridKind kind() const {
    return patches_.size() > 1 ? GridKind::disjoint_union : patches_.front().kind;
  }
  std::size_t size() const { return weights_.size(); }
  int dim() const { return patches_.front().dim; }
  bool connected() const { return patches_.size() == 1; }
  std::size_t component_count() const { return patches_.size(); }
  double total_volume() const { return total_volume_; }

  std::span<const double> weights() const { return weights_; }
  std::span<const int> component_ids() const { return component_id_; }
  const std::vector<Patch>& patches() const { return patches_; }
  const Patch& patch_of(std::size_t node) const { return patches_[component_id_[node]]; }

  /// Intrinsic coordinates: (t) circle, (x) interval, (θ, φ) sphere, (r, θ) disc.
  const std::array<double, 2>& node(std::size_t i) const { return nodes_[i]; }

  /// Position in the natural ambient space of the manifold: the unit vector
  /// for sphere nodes, Cartesian (x, y) for disc nodes, (x) for intervals and
  /// (cos t, sin t) for circle nodes.
  std::array<double, 3> ambient(std::size_t i) const {
    const auto& p = patch_of(i);
    const auto& c = nodes_[i];
    switch (p.kind) {
      case GridKind::circle: return {std::cos(c[0]), std::sin(c[0]), 0.0};
      case GridKind::sphere2:
        return {std::sin(c[0]) * std::cos(c[1]), std::sin(c[0]) * std::sin(c[1]), std::cos(c[0])};
      case GridKind::ball:
        if (p.dim == 2) return {c[0] * std::cos(c[1]), c[0] * std::sin(c[1]), 0.0};
        return {c[0], 0.0, 0.0};
      default: return {c[0], 0.0, 0.0};
    }
  }

  /// Geodesic distance; +∞ between nodes of different components.
  double geodesic(std::size_t i, std::size_t j) const {
    if (component_id_[i] != component_id_[j]) return std::numeric_limits<double>::infinity();
    const auto& p = patch_of(i);
    const auto& a = nodes_[i];
    const auto& b = nodes_[j];
    switch (p.kind) {
      case GridKind::circle: {
        const double d = std::abs(a[0] - b[0]);
        return std::min(d, 2.0 * std::numbers::pi - d);
      }
      case GridKind::sphere2: {
        const auto u = ambient(i);
        const auto v = ambient(j);
        const double cx = u[1] * v[2] - u[2] * v[1];
        const double cy = u[2] * v[0] - u[0] * v[2];
        const double cz = u[0] * v[1] - u[1] * v[0];
        const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
        return std::atan2(cross, u[0] * v[0] + u[1] * v[1] + u[2] * v[2]);
      }
      case GridKind::ball:
        if (p.dim == 2) {
          const auto u = ambient(i);
          const auto v = ambient(j);
          return std::hypot(u[0] - v[0], u[1] - v[1]);
        }
        return std::abs(a[0] - b[0]);
      default: return std::abs(a[0] - b[0]);
    }
  }

  bool cross_component(std::size_t i, std::size_t j) const {
    return component_id_[i] != component_id_[j];
  }

  /// Diameter of one component under the intrinsic metric.
  double component_diameter(std::size_t component) const {
    const auto& p = patches_[component];
    switch (p.kind) {
      case GridKind::circle: return std::numbers::pi;
      case GridKind::sphere2: return std::numbers::pi;
      case GridKind::ball: return 2.0;
      default: return p.hi - p.lo;
    }
  }

  double diameter() const {
    double d = 0.0;
    for (std::size_t c = 0; c < patches_.size(); ++c) d = std::max(d, component_diameter(c));
    return d;
  }

  /// Edges of the finite-difference stencil, patch by patch.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (const auto& p : patches_) append_edges(p, out);
    return out;
  }

  static void append_edges(const Patch& p, std::vector<Edge>& out);

  /// Largest node count along a patch axis; used to label outputs.
  std::size_t resolution() const {
    std::size_t r = 0;
    for (const auto& p : patches_) r = std::max({r, p.n1, p.n2});
    return r;
  }

  // Builders are friends so the invariants above are established in one place.
  friend ManifoldGrid build_circle_grid(std::size_t n);
  friend ManifoldGrid build_sphere2_grid(std::size_t n_theta, std::size_t n_phi);
  friend ManifoldGrid build_interval_grid(std::size_t n, double a, double b);
  friend ManifoldGrid build_ball_grid(std::size_t n_r, std::size_t n_ang, int dim);
  friend ManifoldGrid disjoint_union(const std::vector<ManifoldGrid>& grids);

 private:
  void push_node(double c0, double c1, double w, int component) {
    nodes_.push_back({c0, c1});
    weights_.push_back(w);
    component_id_.push_back(component);
  }

  void finish() {
    total_volume_ = 0.0;
    for (const auto& p : patches_) total_volume_ += p.volume;
  }

  std::vector<Patch> patches_;
  std::vector<std::array<double, 2>> nodes_;
  std::vector<double> weights_;
  std::vector<int> component_id_;
  double total_volume_ = 0.0;
};

inline void ManifoldGrid::append_edges(const Patch& p, std::vector<Edge>& out) {
  const auto at = [&](std::size_t i, std::size_t j) { return p.offset + i * p.n2 + j; };
  switch (p.kind) {
    case GridKind::circle:
      for (std::size_t i = 0; i < p.n1; ++i)
        out.push_back({at(i, 0), at((i + 1) % p.n1, 0), p.step1, p.step1});
      break;
    case GridKind::interval:
    case GridKind::ball:
      if (p.dim == 1) {
        for (std::size_t i = 0; i + 1 < p.n1; ++i)
          out.push_back({at(i, 0), at(i + 1, 0), p.step1, p.step1});
        break;
      }
      // Polar disc: radial edges weighted by r_{i+1/2}, angular edges by r_i.
      for (std::size_t i = 0; i < p.n1; ++i) {
        const double r = (static_cast<double>(i) + 0.5) * p.step1;
        for (std::size_t j = 0; j < p.n2; ++j) {
          if (i + 1 < p.n1) {
            const double rm = r + 0.5 * p.step1;
            out.push_back({at(i, j), at(i + 1, j), p.step1, rm * p.step1 * p.step2});
          }
          out.push_back({at(i, j), at(i, (j + 1) % p.n2), r * p.step2, r * p.step1 * p.step2});
        }
      }
      break;
    case GridKind::sphere2:
      for (std::size_t i = 0; i < p.n1; ++i) {
        const double th = (static_cast<double>(i) + 0.5) * p.step1;
        const double cell = std::sin(th) * 2.0 * std::sin(0.5 * p.step1) * p.step2;
        for (std::size_t j = 0; j < p.n2; ++j) {
          if (i + 1 < p.n1) {
            const double band = p.step2 * (std::cos(th) - std::cos(th + p.step1));
            out.push_back({at(i, j), at(i + 1, j), p.step1, band});
          }
          out.push_back({at(i, j), at(i, (j + 1) % p.n2), std::sin(th) * p.step2, cell});
        }
      }
      break;
    case GridKind::disjoint_union: break;
  }
}

/// Uniform circle of length 2π.
inline ManifoldGrid build_circle_grid(std::size_t n) {
  if (n < 8) throw Error(ErrorCode::invalid_resolution, "circle grid needs n >= 8");
  ManifoldGrid g;
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  g.patches_.push_back({GridKind::circle, 1, 0, n, 1, 0.0, 2.0 * std::numbers::pi, h, 0.0,
                        2.0 * std::numbers::pi});
  for (std::size_t i = 0; i < n; ++i) g.push_node(h * static_cast<double>(i), 0.0, h, 0);
  g.finish();
  return g;
}

/// Latitude-longitude grid on the unit sphere with midpoint latitudes. Each
/// weight is the exact area of its cell, sin θ_i · 2 sin(Δθ/2) · Δφ, so the
/// weights sum to 4π and no node sits on a pole.
inline ManifoldGrid build_sphere2_grid(std::size_t n_theta, std::size_t n_phi) {
  if (n_theta < 16 || n_phi < 16)
    throw Error(ErrorCode::invalid_resolution, "sphere grid needs n_theta, n_phi >= 16");
  ManifoldGrid g;
  const double dth = std::numbers::pi / static_cast<double>(n_theta);
  const double dph = 2.0 * std::numbers::pi / static_cast<double>(n_phi);
  g.patches_.push_back(
      {GridKind::sphere2, 2, 0, n_theta, n_phi, 0.0, 0.0, dth, dph, 4.0 * std::numbers::pi});
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double th = (static_cast<double>(i) + 0.5) * dth;
    const double w = std::sin(th) * 2.0 * std::sin(0.5 * dth) * dph;
    for (std::size_t j = 0; j < n_phi; ++j) g.push_node(th, dph * static_cast<double>(j), w, 0);
  }
  g.finish();
  return g;
}

/// Uniform nodes on [a, b] with trapezoid weights.
inline ManifoldGrid build_interval_grid(std::size_t n, double a, double b) {
  if (!(a < b)) throw Error(ErrorCode::invalid_input, "interval needs a < b");
  if (n < 3) throw Error(ErrorCode::invalid_resolution, "interval grid needs n >= 3");
  ManifoldGrid g;
  const double h = (b - a) / static_cast<double>(n - 1);
  g.patches_.push_back({GridKind::interval, 1, 0, n, 1, a, b, h, 0.0, b - a});
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 * h : h;
    const double x = (i + 1 == n) ? b : a + h * static_cast<double>(i);
    g.push_node(x, 0.0, w, 0);
  }
  g.finish();
  return g;
}

/// Flat unit ball. Dimension 1 is [-1, 1] with 2 n_r + 1 nodes (the origin is a
/// node); dimension 2 is a polar midpoint grid with weights r Δr Δθ.
inline ManifoldGrid build_ball_grid(std::size_t n_r, std::size_t n_ang, int dim) {
  if (dim != 1 && dim != 2)
    throw Error(ErrorCode::unsupported_manifold, "ball grids exist for dim 1 and 2 only");
  if (dim == 1) {
    ManifoldGrid g = build_interval_grid(2 * n_r + 1, -1.0, 1.0);
    g.patches_.front().kind = GridKind::ball;
    return g;
  }
  if (n_r < 4 || n_ang < 8)
    throw Error(ErrorCode::invalid_resolution, "disc grid needs n_r >= 4, n_ang >= 8");
  ManifoldGrid g;
  const double dr = 1.0 / static_cast<double>(n_r);
  const double da = 2.0 * std::numbers::pi / static_cast<double>(n_ang);
  g.patches_.push_back({GridKind::ball, 2, 0, n_r, n_ang, 0.0, 1.0, dr, da, std::numbers::pi});
  for (std::size_t i = 0; i < n_r; ++i) {
    const double r = (static_cast<double>(i) + 0.5) * dr;
    for (std::size_t j = 0; j < n_ang; ++j) g.push_node(r, da * static_cast<double>(j), r * dr * da, 0);
  }
  g.finish();
  return g;
}

/// Concatenate connected grids into one disconnected manifold.
inline ManifoldGrid disjoint_union(const std::vector<ManifoldGrid>& grids) {
  if (grids.size() < 2) throw Error(ErrorCode::invalid_input, "disjoint union needs >= 2 grids");
  ManifoldGrid g;
  for (const auto& part : grids) {
    if (!part.connected())
      throw Error(ErrorCode::invalid_input, "disjoint union parts must be connected");
    Patch p = part.patches_.front();
    p.offset = g.size();
    const int id = static_cast<int>(g.patches_.size());
    g.patches_.push_back(p);
    for (std::size_t i = 0; i < part.size(); ++i)
      g.push_node(part.nodes_[i][0], part.nodes_[i][1], part.weights_[i], id);
  }
  g.finish();
  return g;
}

/// Construction parameters for a grid, so experiments can rebuild at 2n.
struct GridSpec {
  GridKind kind = GridKind::circle;
  std::size_t n = 0;   // circle n, interval n, sphere n_theta, ball n_r
  std::size_t n2 = 0;  // sphere n_phi, ball n_ang
  double a = -1.0;
  double b = 1.0;
  int ball_dim = 1;
  std::vector<GridSpec> parts;

  ManifoldGrid build() const {
    switch (kind) {
      case GridKind::circle: return build_circle_grid(n);
      case GridKind::sphere2: return build_sphere2_grid(n, n2 == 0 ? n : n2);
      case GridKind::interval: return build_interval_grid(n, a, b);
      case GridKind::ball: return build_ball_grid(n, n2 == 0 ? n : n2, ball_dim);
      case GridKind::disjoint_union: {
        std::vector<ManifoldGrid> grids;
        for (const auto& p : parts) grids.push_back(p.build());
        return disjoint_union(grids);
      }
    }
    throw Error(ErrorCode::unsupported_manifold, "unknown grid kind");
  }

  /// Same manifold at `factor` times the resolution.
  GridSpec refined(std::size_t factor = 2) const {
    GridSpec s = *this;
    s.n *= factor;
    s.n2 *= factor;
    if (kind == GridKind::interval) s.n = (n - 1) * factor + 1;
    for (auto& p : s.parts) p = p.refined(factor);
    return s;
  }
};

/// Real values on grid nodes. `normalized` records ∫ f² dg = 1 under the
/// grid's quadrature.
class Field {
 public:
  Field() = default;
  explicit Field(std::vector<double> values, bool normalized = false)
      : values_(std::move(values)), normalized_(normalized) {}

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  bool normalized() const { return normalized_; }

  Field negated() const {
    std::vector<double> v(values_);
    for (auto& x : v) x = -x;
    return Field(std::move(v), normalized_);
  }

 private:
  std::vector<double> values_;
  bool normalized_ = false;
};

inline void require_finite(std::span<const double> values) {
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_field, "non-finite field value");
}

inline void require_matches(const ManifoldGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size())
    throw Error(ErrorCode::invalid_field, "field size does not match grid");
}

/// Σ w_i v_i.
inline double integrate(const ManifoldGrid& grid, std::span<const double> values) {
  require_matches(grid, values);
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i];
  return s;
}

inline double integrate(const ManifoldGrid& grid, const Field& f) { return integrate(grid, f.values()); }

/// ∫ f² dg.
inline double l2_mass(const ManifoldGrid& grid, std::span<const double> values) {
  require_matches(grid, values);
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i] * values[i];
  return s;
}

inline Field normalize_field(const ManifoldGrid& grid, std::vector<double> raw) {
  require_matches(grid, raw);
  require_finite(raw);
  const double mass = l2_mass(grid, raw);
  if (!(mass > 0.0)) throw Error(ErrorCode::zero_mass, "cannot normalize the zero field");
  const double s = 1.0 / std::sqrt(mass);
  for (auto& v : raw) v *= s;
  return Field(std::move(raw), true);
}

/// Throws unless f is flagged normalized and its quadrature mass is 1.
inline void require_normalized(const ManifoldGrid& grid, const Field& f) {
  require_matches(grid, f.values());
  if (!f.normalized() || std::abs(l2_mass(grid, f.values()) - 1.0) > 1e-8)
    throw Error(ErrorCode::normalization, "field is not L2-normalized on this grid");
}

/// Dirichlet energy from the finite-difference stencil (centered second
/// differences after summation by parts).
inline double dirichlet_energy_fd(const ManifoldGrid& grid, const Field& f) {
  require_matches(grid, f.values());
  require_finite(f.values());
  double s = 0.0;
  for (const auto& e : grid.edges()) {
    const double d = (f[e.a] - f[e.b]) / e.length;
    s += e.weight * d * d;
  }
  return s;
}

/// Both circle energies; `spectral` is set only when every component is a circle.
struct EnergyPair {
  double finite_difference = 0.0;
  std::optional<double> spectral;
};

inline EnergyPair dirichlet_energy_pair(const ManifoldGrid& grid, const Field& f) {
  EnergyPair out;
  out.finite_difference = dirichlet_energy_fd(grid, f);
  bool all_circles = true;
  double spec = 0.0;
  for (const auto& p : grid.patches()) {
    if (p.kind != GridKind::circle) {
      all_circles = false;
      break;
    }
    spec += spectral::energy(f.values().subspan(p.offset, p.size()));
  }
  if (all_circles) out.spectral = spec;
  return out;
}

/// ∫ |∇f|² dg: spectral on circle components, finite differences elsewhere,
/// summed over components.
inline double dirichlet_energy(const ManifoldGrid& grid, const Field& f) {
  require_matches(grid, f.values());
  require_finite(f.values());
  double total = 0.0;
  for (const auto& p : grid.patches()) {
    if (p.kind == GridKind::circle) {
      total += spectral::energy(f.values().subspan(p.offset, p.size()));
    } else {
      std::vector<Edge> edges;
      double s = 0.0;
      ManifoldGrid::append_edges(p, edges);
      for (const auto& e : edges) {
        const double d = (f[e.a] - f[e.b]) / e.length;
        s += e.weight * d * d;
      }
      total += s;
    }
  }
  return total;
}

/// Evenly strided subset of at most `max_nodes` nodes, split across components
/// in proportion to their node counts. Two-dimensional patches are strided
/// along both axes.
inline std::vector<std::size_t> coarse_nodes(const ManifoldGrid& grid, std::size_t max_nodes,
                                             std::span<const std::size_t> candidates = {}) {
  std::vector<std::size_t> out;
  if (!candidates.empty()) {
    const std::size_t stride = std::max<std::size_t>(1, (candidates.size() + max_nodes - 1) / max_nodes);
    for (std::size_t k = 0; k < candidates.size(); k += stride) out.push_back(candidates[k]);
    return out;
  }
  const double total = static_cast<double>(grid.size());
  for (const auto& p : grid.patches()) {
    const auto share = std::max<std::size_t>(
        1, static_cast<std::size_t>(static_cast<double>(max_nodes) * static_cast<double>(p.size()) / total));
    if (p.n2 == 1) {
      const std::size_t stride = std::max<std::size_t>(1, (p.n1 + share - 1) / share);
      for (std::size_t i = 0; i < p.n1; i += stride) out.push_back(p.offset + i);
    } else {
      const auto per_axis = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(share))));
      const std::size_t s1 = std::max<std::size_t>(1, (p.n1 + per_axis - 1) / per_axis);
      const std::size_t s2 = std::max<std::size_t>(1, (p.n2 + per_axis - 1) / per_axis);
      for (std::size_t i = s1 / 2; i < p.n1; i += s1)
        for (std::size_t j = 0; j < p.n2; j += s2) out.push_back(p.offset + i * p.n2 + j);
    }
  }
  return out;
}

}  // namespace mup
