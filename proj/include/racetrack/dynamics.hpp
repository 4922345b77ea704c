#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "racetrack/equilibrium.hpp"

namespace racetrack {

struct SpikeOptions {
  double rel_height = 0.1;  // kappa: spikes must reach this fraction of the maximum
  int min_separation = 2;   // maxima this close (in nodes) merge into the higher one
  double min_excess = 1e-3; // spikes must exceed the homogeneous level by this relative margin
};

struct Spikes {
  int count = 0;
  std::vector<int> locations;  // node indices, ascending
};

/// Strict local maxima on the circular grid that reach rel_height * max and
/// exceed the homogeneous level by min_excess (relative). Plateaus count once,
/// at their leftmost node.
Spikes count_spikes(const Grid& grid, const Field& lambda, const SpikeOptions& options = {});

struct SimulationConfig {
  double dt = 0.01;
  double stop_tol = 1e-10;
  long max_steps = 10'000'000;
  SolverOptions solver;
  SpikeOptions spikes;
  long snapshot_every = 0;  // 0 disables snapshots
};

struct Snapshot {
  long step;
  Field lambda;
};

struct StationaryResult {
  Field lambda;
  long steps = 0;
  bool converged = false;
  double last_change = 0.0;  // sup-norm of the final step's update
  Spikes spikes;
  double max_mass_drift = 0.0;
  double min_lambda = 0.0;
  long solver_iterations = 0;  // summed over all steps
  std::vector<Snapshot> snapshots;
};

/// Master seed mixed with a run index (splitmix64 finalizer). Used to derive
/// independent per-run streams.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

/// Homogeneous density times (1 + amplitude * u_i), u_i uniform on [-1, 1] from
/// mt19937_64 seeded with `seed`, rescaled to unit mass.
PopulationField random_initial(std::uint64_t seed, double amplitude, const Grid& grid);

/// Homogeneous density times (1 + amplitude * cos(n theta_i)), rescaled to unit mass.
PopulationField cosine_seed(int n, double amplitude, const Grid& grid);

/// One explicit Euler step of the migration equation.
/// Throws NumericalError if any density turns negative.
Field euler_step(const Grid& grid, const Field& lambda, const Equilibrium& eq, double gamma, double dt);

using SnapshotSink = std::function<void(const Snapshot&)>;

/// Alternates instantaneous equilibrium and Euler steps until the sup-norm
/// change falls below config.stop_tol or max_steps is reached.
StationaryResult run_to_stationary(const Grid& grid, const PopulationField& initial, const PopulationField& phi,
                                   const ModelParams& params, const SimulationConfig& config = {},
                                   const SnapshotSink& sink = {});

/// |sum_j lambda_j exp(-i n theta_j)| * dtheta.
double fourier_amplitude(const Grid& grid, const Field& lambda, int n);

struct GrowthMeasurement {
  double rate = 0.0;               // least-squares slope of log amplitude over time
  std::vector<double> amplitudes;  // one per step, starting at t = 0
};

/// Linear-response probe: seeds a pure cosine mode and fits its exponential rate
/// under the full nonlinear dynamics.
GrowthMeasurement measured_growth_rate(int n, const Grid& grid, const ModelParams& params,
                                       const SimulationConfig& config = {}, double amplitude = 1e-4,
                                       int horizon = 50);

}  // namespace racetrack
