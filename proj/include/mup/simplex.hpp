#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "mup/error.hpp"
#include "mup/linalg.hpp"

namespace mup {

struct SimplexProjection {
  double distance = std::numeric_limits<double>::infinity();
  std::vector<double> weights;  // barycentric, one per vertex
  std::vector<double> point;
};

/// Nearest point of conv{vertices} to `x` by enumerating every face: an
/// affine least-squares solve per vertex subset, kept when its barycentric
/// weights are feasible. Exact for the small vertex counts used here (k <= 4).
inline SimplexProjection simplex_distance(std::span<const double> x, const std::vector<Vec>& vertices) {
  const std::size_t k = vertices.size();
  if (k == 0) throw Error(ErrorCode::invalid_input, "simplex needs at least one vertex");
  if (k > 4) throw Error(ErrorCode::unsupported_component_count, "simplex distance supports k <= 4");
  const auto d = static_cast<Eigen::Index>(x.size());
  const Eigen::Map<const Eigen::VectorXd> target(x.data(), d);

  SimplexProjection best;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::size_t> face;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) face.push_back(i);
    const Eigen::Map<const Eigen::VectorXd> p0(vertices[face[0]].data(), d);
    std::vector<double> alpha(k, 0.0);
    Eigen::VectorXd point = p0;
    if (face.size() == 1) {
      alpha[face[0]] = 1.0;
    } else {
      Eigen::MatrixXd basis(d, static_cast<Eigen::Index>(face.size() - 1));
      for (std::size_t j = 1; j < face.size(); ++j)
        basis.col(static_cast<Eigen::Index>(j - 1)) =
            Eigen::Map<const Eigen::VectorXd>(vertices[face[j]].data(), d) - p0;
      const Eigen::VectorXd beta = basis.colPivHouseholderQr().solve(target - p0);
      double rest = 1.0;
      bool feasible = true;
      for (std::size_t j = 1; j < face.size(); ++j) {
        const double b = beta(static_cast<Eigen::Index>(j - 1));
        if (b < -1e-12) feasible = false;
        alpha[face[j]] = b;
        rest -= b;
      }
      if (rest < -1e-12 || !feasible) continue;
      alpha[face[0]] = rest;
      point = p0 + basis * beta;
    }
    const double dist = (point - target).norm();
    if (dist < best.distance) {
      best.distance = dist;
      best.weights = alpha;
      best.point.assign(point.data(), point.data() + d);
    }
  }
  return best;
}

}  // namespace mup
