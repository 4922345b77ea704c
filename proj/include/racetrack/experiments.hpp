#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "racetrack/dynamics.hpp"

namespace racetrack {

enum class Family { tau_a, eta };

std::string to_string(Family family);
Family parse_family(const std::string& name);

/// The sixteen manufacturing transport costs of the published spike-count sweep.
std::vector<double> default_tau_m_list();

struct SweepPlan {
  std::vector<double> tau_m = default_tau_m_list();
  Family family = Family::tau_a;
  std::vector<double> family_values{2.0};
  int seeds = 5;
  ModelParams base;
  std::uint64_t master_seed = 1;
  int nodes = 128;
  double amplitude = 0.01;
  SimulationConfig sim;
  int jobs = 1;  // worker threads; results do not depend on it

  void validate() const;
};

struct SweepRecord {
  std::size_t family_index = 0;
  std::size_t tau_index = 0;
  int seed_index = 0;
  double family_value = 0.0;
  double tau_m = 0.0;
  std::uint64_t seed = 0;
  int spikes = 0;
  long steps = 0;
  bool converged = false;
  double max_mass_drift = 0.0;
  std::string error;  // solver failure message, empty otherwise
};

struct AggregateRow {
  double family_value = 0.0;
  double tau_m = 0.0;
  std::optional<double> mean_spikes;  // empty when no record converged
  int min_spikes = 0;
  int max_spikes = 0;
  int n_converged = 0;
  int n_failed = 0;
};

/// Seed for one cell: master seed mixed with the family, tau_m and seed indices.
std::uint64_t cell_seed(std::uint64_t master, std::size_t family_index, std::size_t tau_index, int seed_index);

/// Runs one simulation for a single cell of the plan.
SweepRecord run_cell(const SweepPlan& plan, std::size_t family_index, std::size_t tau_index, int seed_index);

using ProgressSink = std::function<void(const SweepRecord&)>;

struct SweepResult {
  std::vector<SweepRecord> records;  // ordered by (family, tau_m, seed) index
  std::vector<AggregateRow> table;
};

SweepResult run_sweep(const SweepPlan& plan, const ProgressSink& progress = {});

/// Per-(family value, tau_m) statistics over converged records, sorted by family
/// value ascending then tau_m descending. Throws ConfigError for an empty list.
std::vector<AggregateRow> aggregate(const std::vector<SweepRecord>& records);

}  // namespace racetrack
