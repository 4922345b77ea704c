#include "racetrack/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "racetrack/errors.hpp"

namespace racetrack {

double circle_distance(double theta, double theta_prime, double radius) {
  const double gap = std::abs(theta - theta_prime);
  return radius * std::min(gap, 2.0 * std::numbers::pi - gap);
}

Grid::Grid(int node_count, double radius)
    : node_count_(node_count), radius_(radius) {
  if (node_count < 4 || node_count % 2 != 0) {
    throw ConfigError("grid: node count must be even and >= 4, got " + std::to_string(node_count));
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ConfigError("grid: radius must be > 0, got " + std::to_string(radius));
  }
  spacing_ = 2.0 * std::numbers::pi / node_count;
  weight_ = radius * spacing_;
  angles_.resize(node_count);
  for (int i = 0; i < node_count; ++i) angles_[i] = -std::numbers::pi + i * spacing_;

  // Distances depend only on the index gap, so build them from the gap to
  // keep the matrix exactly symmetric and circulant.
  distances_.resize(node_count, node_count);
  for (int i = 0; i < node_count; ++i) {
    for (int j = 0; j < node_count; ++j) {
      const int gap = std::abs(i - j);
      const int steps = std::min(gap, node_count - gap);
      distances_(i, j) = radius * steps * spacing_;
    }
  }
}

double Grid::circumference() const { return 2.0 * std::numbers::pi * radius_; }

double Grid::integrate(const Field& values) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) sum += values[i];
  return sum * weight_;
}

KernelMatrix::KernelMatrix(const Grid& grid, double decay) : decay_(decay) {
  if (!(decay >= 0.0) || !std::isfinite(decay)) {
    throw ConfigError("kernel: decay must be >= 0, got " + std::to_string(decay));
  }
  // One value per index gap: vectorized exp does not round identically in
  // every lane, so evaluating it entrywise would break exact symmetry.
  const int n = grid.size();
  std::vector<double> by_gap(n / 2 + 1);
  for (int gap = 0; gap <= n / 2; ++gap) by_gap[gap] = std::exp(-decay * grid.distances()(0, gap));
  values_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int gap = std::abs(i - j);
      values_(i, j) = by_gap[std::min(gap, n - gap)];
    }
  }
}

}  // namespace racetrack
