#pragma once

#include <optional>

#include "racetrack/geometry.hpp"
#include "racetrack/model_params.hpp"

namespace racetrack {

/// Nodal density on a grid. Densities integrate to one over the circle.
struct PopulationField {
  Field values;

  static PopulationField homogeneous(const Grid& grid);

  /// Throws ConfigError unless values are finite, >= 0, sized to the grid
  /// and of unit mass to within tol.
  void validate(const Grid& grid, double tol = 1e-9) const;
};

struct SolverOptions {
  double tol = 1e-10;
  long max_iter = 100000;
  bool normalize_wages = true;
  double damping = 1.0;  // 1.0 is the plain fixed-point update
};

struct Equilibrium {
  Field income;       // Y
  Field wage_agri;    // w^A
  Field wage_manu;    // w^M
  Field price_agri;   // G^A
  Field price_manu;   // G^M
  Field real_wage;    // omega^M
  Field power_agri;   // W^A = (w^A)^eta
  Field power_manu;   // W^M = (w^M)^sigma
  long iterations = 0;
  double residual = 0.0;
};

/// Kernels for one parameter set on one grid, shared across solver calls.
class EquilibriumSolver {
 public:
  EquilibriumSolver(const Grid& grid, const ModelParams& params, SolverOptions options = {});

  const Grid& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  const SolverOptions& options() const { return options_; }

  /// Fixed-point iteration on (W^A, W^M). A previous equilibrium may be
  /// passed to warm-start the iteration.
  Equilibrium solve(const Field& lambda, const Field& phi, const Equilibrium* warm_start = nullptr) const;

  /// Y, G^A, G^M and omega^M recomputed from wages and densities.
  Equilibrium from_wages(const Field& lambda, const Field& phi, const Field& wage_agri, const Field& wage_manu) const;

  /// Largest relative sup-norm mismatch over the six static equations.
  double residual(const Equilibrium& eq, const Field& lambda, const Field& phi) const;

 private:
  Grid grid_;
  ModelParams params_;
  SolverOptions options_;
  Eigen::MatrixXd kernel_agri_;
  Eigen::MatrixXd kernel_manu_;
};

Equilibrium solve_instantaneous(const Grid& grid, const PopulationField& lambda, const PopulationField& phi,
                                const ModelParams& params, const SolverOptions& options = {});

double equilibrium_residual(const Grid& grid, const Equilibrium& eq, const PopulationField& lambda,
                            const PopulationField& phi, const ModelParams& params);

}  // namespace racetrack
