#pragma once

#include <Eigen/Dense>

namespace racetrack {

using Field = Eigen::VectorXd;

/// Shorter-arc distance between two points of a circle of the given radius.
double circle_distance(double theta, double theta_prime, double radius);

/// Uniform discretization of the racetrack circle.
///
/// Nodes sit at theta_i = -pi + i * dtheta (i = 0..I-1), each carrying the
/// quadrature weight radius * dtheta. The pairwise distance matrix is
/// computed once at construction; a Grid is immutable afterwards.
class Grid {
 public:
  Grid(int node_count, double radius);

  int size() const { return node_count_; }
  double radius() const { return radius_; }
  double spacing() const { return spacing_; }
  double weight() const { return weight_; }
  double circumference() const;

  const Field& angles() const { return angles_; }
  double angle(int i) const { return angles_[i]; }
  double distance(int i, int j) const { return distances_(i, j); }
  const Eigen::MatrixXd& distances() const { return distances_; }

  /// Riemann sum of a nodal field against the quadrature weights.
  double integrate(const Field& values) const;

 private:
  int node_count_;
  double radius_;
  double spacing_;
  double weight_;
  Field angles_;
  Eigen::MatrixXd distances_;
};

/// Entries exp(-decay * d_ij) on a grid.
class KernelMatrix {
 public:
  KernelMatrix(const Grid& grid, double decay);

  double decay() const { return decay_; }
  int size() const { return static_cast<int>(values_.rows()); }
  double operator()(int i, int j) const { return values_(i, j); }
  const Eigen::MatrixXd& matrix() const { return values_; }

 private:
  double decay_;
  Eigen::MatrixXd values_;
};

inline Grid build_grid(int node_count, double radius) { return Grid(node_count, radius); }

inline KernelMatrix kernel_matrix(const Grid& grid, double decay) { return KernelMatrix(grid, decay); }

}  // namespace racetrack
