#include "racetrack/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include "racetrack/errors.hpp"

namespace racetrack {

std::string to_string(Family family) { return family == Family::tau_a ? "tau_a" : "eta"; }

Family parse_family(const std::string& name) {
  if (name == "tau_a" || name == "tau-a") return Family::tau_a;
  if (name == "eta") return Family::eta;
  throw ConfigError("family must be tau_a or eta, got '" + name + "'");
}

std::vector<double> default_tau_m_list() {
  return {6.0, 5.5, 5.0, 4.5, 4.0, 3.5, 3.0, 2.5, 2.0, 1.5, 1.0, 0.8, 0.6, 0.4, 0.2, 0.1};
}

void SweepPlan::validate() const {
  if (tau_m.empty()) throw ConfigError("sweep: tau_m list is empty");
  for (double t : tau_m) {
    if (!(t > 0.0)) throw ConfigError("sweep: every tau_m must be > 0");
  }
  if (family_values.empty()) throw ConfigError("sweep: family value list is empty");
  if (seeds < 1) throw ConfigError("sweep: seeds must be >= 1");
  if (jobs < 1) throw ConfigError("sweep: jobs must be >= 1");
  for (double v : family_values) {
    ModelParams p = base;
    (family == Family::tau_a ? p.tau_a : p.eta) = v;
    p.validate();
  }
  base.validate();
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t family_index, std::size_t tau_index, int seed_index) {
  return mix_seed(mix_seed(mix_seed(master, family_index), tau_index), static_cast<std::uint64_t>(seed_index));
}

SweepRecord run_cell(const SweepPlan& plan, std::size_t family_index, std::size_t tau_index, int seed_index) {
  SweepRecord rec;
  rec.family_index = family_index;
  rec.tau_index = tau_index;
  rec.seed_index = seed_index;
  rec.family_value = plan.family_values[family_index];
  rec.tau_m = plan.tau_m[tau_index];
  rec.seed = cell_seed(plan.master_seed, family_index, tau_index, seed_index);

  ModelParams params = plan.base.with_tau_m(rec.tau_m);
  (plan.family == Family::tau_a ? params.tau_a : params.eta) = rec.family_value;

  SimulationConfig sim = plan.sim;
  sim.snapshot_every = 0;
  const Grid grid(plan.nodes, params.radius);
  try {
    const auto result = run_to_stationary(grid, random_initial(rec.seed, plan.amplitude, grid),
                                          PopulationField::homogeneous(grid), params, sim);
    rec.spikes = result.spikes.count;
    rec.steps = result.steps;
    rec.converged = result.converged;
    rec.max_mass_drift = result.max_mass_drift;
  } catch (const NumericalError& e) {
    rec.converged = false;
    rec.error = e.what();
  }
  return rec;
}

SweepResult run_sweep(const SweepPlan& plan, const ProgressSink& progress) {
  plan.validate();
  const std::size_t per_family = plan.tau_m.size() * static_cast<std::size_t>(plan.seeds);
  const std::size_t total = plan.family_values.size() * per_family;

  SweepResult out;
  out.records.resize(total);
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
      const std::size_t family_index = k / per_family;
      const std::size_t rest = k % per_family;
      const std::size_t tau_index = rest / plan.seeds;
      const int seed_index = static_cast<int>(rest % plan.seeds);
      out.records[k] = run_cell(plan, family_index, tau_index, seed_index);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(out.records[k]);
      }
    }
  };

  const int workers = static_cast<int>(std::min<std::size_t>(plan.jobs, total));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  out.table = aggregate(out.records);
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<SweepRecord>& records) {
  if (records.empty()) throw ConfigError("aggregate: no records");

  struct Key {
    double family_value;
    double tau_m;
    bool operator<(const Key& o) const {
      if (family_value != o.family_value) return family_value < o.family_value;
      return tau_m > o.tau_m;
    }
  };
  struct Acc {
    long sum = 0;
    int min = 0;
    int max = 0;
    int converged = 0;
    int failed = 0;
  };
  std::map<Key, Acc> groups;
  for (const auto& r : records) {
    Acc& acc = groups[{r.family_value, r.tau_m}];
    if (!r.converged) {
      ++acc.failed;
      continue;
    }
    if (acc.converged == 0) {
      acc.min = r.spikes;
      acc.max = r.spikes;
    }
    acc.min = std::min(acc.min, r.spikes);
    acc.max = std::max(acc.max, r.spikes);
    acc.sum += r.spikes;
    ++acc.converged;
  }

  std::vector<AggregateRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, acc] : groups) {
    AggregateRow row;
    row.family_value = key.family_value;
    row.tau_m = key.tau_m;
    row.n_converged = acc.converged;
    row.n_failed = acc.failed;
    if (acc.converged > 0) {
      row.mean_spikes = static_cast<double>(acc.sum) / acc.converged;
      row.min_spikes = acc.min;
      row.max_spikes = acc.max;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace racetrack
