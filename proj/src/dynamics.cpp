#include "racetrack/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "racetrack/errors.hpp"

namespace racetrack {

namespace {

PopulationField with_unit_mass(const Grid& grid, Field values) {
  values /= grid.integrate(values);
  return {std::move(values)};
}

int circular_gap(int i, int j, int size) {
  const int gap = std::abs(i - j);
  return std::min(gap, size - gap);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PopulationField random_initial(std::uint64_t seed, double amplitude, const Grid& grid) {
  if (!(amplitude >= 0.0 && amplitude < 1.0)) throw ConfigError("amplitude must lie in [0, 1)");
  std::mt19937_64 engine(seed);
  const double base = 1.0 / grid.circumference();
  Field values(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    // 53 high bits -> [0, 1); avoids the implementation-defined std distributions.
    const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    values[i] = base * (1.0 + amplitude * (2.0 * unit - 1.0));
  }
  if (amplitude == 0.0) return {values};
  return with_unit_mass(grid, std::move(values));
}

PopulationField cosine_seed(int n, double amplitude, const Grid& grid) {
  if (n == 0) throw ConfigError("n: mode 0 is excluded");
  if (!(amplitude >= 0.0 && amplitude < 1.0)) throw ConfigError("amplitude must lie in [0, 1)");
  const double base = 1.0 / grid.circumference();
  Field values(grid.size());
  for (int i = 0; i < grid.size(); ++i) values[i] = base * (1.0 + amplitude * std::cos(n * grid.angle(i)));
  if (amplitude == 0.0) return {values};
  return with_unit_mass(grid, std::move(values));
}

Field euler_step(const Grid& grid, const Field& lambda, const Equilibrium& eq, double gamma, double dt) {
  if (lambda.size() != grid.size() || eq.real_wage.size() != grid.size()) {
    throw ConfigError("euler_step: field size does not match grid");
  }
  const double average = grid.integrate(eq.real_wage.cwiseProduct(lambda));
  Field next = lambda + (dt * gamma) * (eq.real_wage.array() - average).matrix().cwiseProduct(lambda);
  if (next.minCoeff() < 0.0) {
    std::ostringstream msg;
    msg << "euler_step: negative density (min " << next.minCoeff() << "); reduce dt";
    throw NumericalError(msg.str());
  }
  return next;
}

Spikes count_spikes(const Grid& grid, const Field& lambda, const SpikeOptions& options) {
  const int size = static_cast<int>(lambda.size());
  const double top = lambda.maxCoeff();
  const double level = (1.0 + options.min_excess) / grid.circumference();
  const double floor = options.rel_height * top;

  std::vector<int> peaks;
  for (int i = 0; i < size; ++i) {
    const double here = lambda[i];
    const double left = lambda[(i - 1 + size) % size];
    if (!(here > left)) continue;  // not rising into i, or i continues a plateau
    int k = 1;
    while (k < size && lambda[(i + k) % size] == here) ++k;
    if (k == size) continue;
    if (lambda[(i + k) % size] < here && here >= floor && here > level) peaks.push_back(i);
  }

  // Merge maxima closer than min_separation, keeping the taller one.
  std::vector<int> order = peaks;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return lambda[a] > lambda[b]; });
  std::vector<int> kept;
  for (int candidate : order) {
    const bool clear = std::none_of(kept.begin(), kept.end(), [&](int other) {
      return circular_gap(candidate, other, size) <= options.min_separation;
    });
    if (clear) kept.push_back(candidate);
  }
  std::sort(kept.begin(), kept.end());
  return {static_cast<int>(kept.size()), kept};
}

StationaryResult run_to_stationary(const Grid& grid, const PopulationField& initial, const PopulationField& phi,
                                   const ModelParams& params, const SimulationConfig& config,
                                   const SnapshotSink& sink) {
  if (!(config.dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(config.stop_tol > 0.0)) throw ConfigError("stop_tol must be > 0");
  initial.validate(grid);
  phi.validate(grid);
  const EquilibriumSolver solver(grid, params, config.solver);

  StationaryResult result;
  Field lambda = initial.values;
  result.max_mass_drift = std::abs(grid.integrate(lambda) - 1.0);
  result.min_lambda = lambda.minCoeff();

  auto record = [&](long step) {
    Snapshot snap{step, lambda};
    if (sink) sink(snap);
    result.snapshots.push_back(std::move(snap));
  };
  if (config.snapshot_every > 0) record(0);

  Equilibrium eq;
  Equilibrium guess;
  Field prev_agri;
  Field prev_manu;
  for (long step = 1; step <= config.max_steps; ++step) {
    Field next;
    try {
      eq = solver.solve(lambda, phi.values, step > 1 ? &guess : nullptr);
      next = euler_step(grid, lambda, eq, params.gamma, config.dt);
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << "step " << step << ": " << e.what();
      throw NumericalError(msg.str());
    }
    // Warm start for the next solve: linear extrapolation of log W in time.
    if (prev_agri.size() == eq.power_agri.size()) {
      guess.power_agri = eq.power_agri.array().square() / prev_agri.array();
      guess.power_manu = eq.power_manu.array().square() / prev_manu.array();
    } else {
      guess.power_agri = eq.power_agri;
      guess.power_manu = eq.power_manu;
    }
    prev_agri = eq.power_agri;
    prev_manu = eq.power_manu;
    result.solver_iterations += eq.iterations;
    result.last_change = (next - lambda).cwiseAbs().maxCoeff();
    lambda.swap(next);
    result.steps = step;
    result.max_mass_drift = std::max(result.max_mass_drift, std::abs(grid.integrate(lambda) - 1.0));
    result.min_lambda = std::min(result.min_lambda, lambda.minCoeff());
    if (config.snapshot_every > 0 && step % config.snapshot_every == 0) record(step);
    if (result.last_change < config.stop_tol) {
      result.converged = true;
      break;
    }
  }
  result.spikes = count_spikes(grid, lambda, config.spikes);
  result.lambda = std::move(lambda);
  return result;
}

double fourier_amplitude(const Grid& grid, const Field& lambda, int n) {
  double re = 0.0;
  double im = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    re += lambda[j] * std::cos(n * grid.angle(j));
    im -= lambda[j] * std::sin(n * grid.angle(j));
  }
  return std::hypot(re, im) * grid.spacing();
}

GrowthMeasurement measured_growth_rate(int n, const Grid& grid, const ModelParams& params,
                                       const SimulationConfig& config, double amplitude, int horizon) {
  if (horizon < 2) throw ConfigError("horizon must be >= 2 steps");
  if (!(amplitude > 0.0 && amplitude < 1.0)) throw ConfigError("probe amplitude must lie in (0, 1)");
  const EquilibriumSolver solver(grid, params, config.solver);
  const Field phi = PopulationField::homogeneous(grid).values;
  Field lambda = cosine_seed(n, amplitude, grid).values;

  // Roundoff floor for a mode of the homogeneous density.
  const double floor = 1e-13 * grid.spacing() * grid.size() / grid.circumference();

  GrowthMeasurement out;
  out.amplitudes.reserve(horizon + 1);
  out.amplitudes.push_back(fourier_amplitude(grid, lambda, n));
  Equilibrium eq;
  for (int step = 1; step <= horizon; ++step) {
    eq = solver.solve(lambda, phi, step > 1 ? &eq : nullptr);
    lambda = euler_step(grid, lambda, eq, params.gamma, config.dt);
    const double a = fourier_amplitude(grid, lambda, n);
    if (!(a > floor)) throw NumericalError("probe: mode amplitude underflowed; shorten the horizon");
    out.amplitudes.push_back(a);
  }

  // Least-squares slope of log(amplitude) against t = k dt.
  const int count = static_cast<int>(out.amplitudes.size());
  double mean_t = 0.0;
  double mean_y = 0.0;
  for (int k = 0; k < count; ++k) {
    mean_t += k * config.dt;
    mean_y += std::log(out.amplitudes[k]);
  }
  mean_t /= count;
  mean_y /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (int k = 0; k < count; ++k) {
    const double dt = k * config.dt - mean_t;
    sxy += dt * (std::log(out.amplitudes[k]) - mean_y);
    sxx += dt * dt;
  }
  out.rate = sxy / sxx;
  return out;
}

}  // namespace racetrack
