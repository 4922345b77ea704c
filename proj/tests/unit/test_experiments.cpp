#include <doctest.h>

#include <algorithm>
#include <random>

#include "racetrack/errors.hpp"
#include "racetrack/experiments.hpp"

using namespace racetrack;

namespace {

SweepRecord rec(double family_value, double tau_m, int spikes, bool converged = true) {
  SweepRecord r;
  r.family_value = family_value;
  r.tau_m = tau_m;
  r.spikes = spikes;
  r.converged = converged;
  return r;
}

SweepPlan small_plan() {
  SweepPlan plan;
  plan.tau_m = {5.0, 2.0};
  plan.family_values = {2.0, 2.5};
  plan.seeds = 2;
  plan.nodes = 16;
  plan.sim.max_steps = 20000;
  plan.sim.dt = 0.05;
  return plan;
}

bool same(const std::vector<AggregateRow>& a, const std::vector<AggregateRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].family_value != b[i].family_value || a[i].tau_m != b[i].tau_m || a[i].mean_spikes != b[i].mean_spikes ||
        a[i].min_spikes != b[i].min_spikes || a[i].max_spikes != b[i].max_spikes ||
        a[i].n_converged != b[i].n_converged || a[i].n_failed != b[i].n_failed)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("family names") {
  CHECK(to_string(Family::tau_a) == "tau_a");
  CHECK(to_string(Family::eta) == "eta");
  CHECK(parse_family("eta") == Family::eta);
  CHECK(parse_family("tau_a") == Family::tau_a);
  CHECK_THROWS_AS(parse_family("sigma"), ConfigError);
}

TEST_CASE("default tau_m list") {
  const auto list = default_tau_m_list();
  REQUIRE(list.size() == 16);
  CHECK(list.front() == 6.0);
  CHECK(list.back() == 0.1);
  CHECK(std::is_sorted(list.rbegin(), list.rend()));
}

TEST_CASE("aggregate examples") {
  std::vector<SweepRecord> five;
  for (int s : {5, 5, 5, 4, 5}) five.push_back(rec(2.0, 5.0, s));
  const auto rows = aggregate(five);
  REQUIRE(rows.size() == 1);
  CHECK(*rows[0].mean_spikes == doctest::Approx(4.8).epsilon(1e-15));
  CHECK(rows[0].min_spikes == 4);
  CHECK(rows[0].max_spikes == 5);
  CHECK(rows[0].n_converged == 5);

  const auto single = aggregate({rec(1.5, 3.0, 7)});
  CHECK(*single[0].mean_spikes == 7.0);

  const auto mixed = aggregate({rec(2.0, 4.0, 3, true), rec(2.0, 4.0, 9, false)});
  CHECK(*mixed[0].mean_spikes == 3.0);
  CHECK(mixed[0].n_converged == 1);
  CHECK(mixed[0].n_failed == 1);

  const auto failed = aggregate({rec(2.0, 4.0, 0, false)});
  CHECK_FALSE(failed[0].mean_spikes.has_value());
  CHECK(failed[0].n_converged == 0);

  CHECK_THROWS_AS(aggregate({}), ConfigError);
}

TEST_CASE("aggregate ordering and reorder invariance") {
  std::vector<SweepRecord> records;
  std::mt19937_64 rng(5);
  for (double f : {2.5, 1.5, 2.0})
    for (double t : {0.1, 6.0, 2.5})
      for (int s = 0; s < 5; ++s) records.push_back(rec(f, t, static_cast<int>(rng() % 7), rng() % 4 != 0));

  const auto base = aggregate(records);
  REQUIRE(base.size() == 9);
  CHECK(base[0].family_value == 1.5);
  CHECK(base[0].tau_m == 6.0);
  CHECK(base[2].tau_m == 0.1);
  CHECK(base[8].family_value == 2.5);

  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(records.begin(), records.end(), rng);
    CHECK(same(aggregate(records), base));
  }
}

TEST_CASE("cell seeds differ across cells") {
  CHECK(cell_seed(1, 0, 0, 0) != cell_seed(1, 0, 0, 1));
  CHECK(cell_seed(1, 0, 0, 0) != cell_seed(1, 0, 1, 0));
  CHECK(cell_seed(1, 0, 0, 0) != cell_seed(1, 1, 0, 0));
  CHECK(cell_seed(1, 0, 0, 0) != cell_seed(2, 0, 0, 0));
}

TEST_CASE("plan validation") {
  SweepPlan plan = small_plan();
  CHECK_NOTHROW(plan.validate());
  plan.seeds = 0;
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = small_plan();
  plan.tau_m = {1.0, -1.0};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = small_plan();
  plan.family = Family::eta;
  plan.family_values = {0.5};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
}

TEST_CASE("sweep is deterministic and independent of the worker count") {
  SweepPlan plan = small_plan();
  int seen = 0;
  const SweepResult a = run_sweep(plan, [&](const SweepRecord&) { ++seen; });
  CHECK(seen == 8);
  REQUIRE(a.records.size() == 8);
  CHECK(a.records[0].family_value == 2.0);
  CHECK(a.records[0].tau_m == 5.0);
  CHECK(a.records[1].seed_index == 1);
  CHECK(a.records[7].family_value == 2.5);
  CHECK(a.table.size() == 4);

  plan.jobs = 3;
  const SweepResult b = run_sweep(plan);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].seed == b.records[i].seed);
    CHECK(a.records[i].spikes == b.records[i].spikes);
    CHECK(a.records[i].steps == b.records[i].steps);
    CHECK(a.records[i].converged == b.records[i].converged);
  }
  CHECK(same(a.table, b.table));

  const SweepRecord one = run_cell(plan, 1, 0, 1);
  CHECK(one.seed == a.records[5].seed);
  CHECK(one.spikes == a.records[5].spikes);
}

TEST_CASE("numerical failure in a cell is recorded, not thrown") {
  SweepPlan plan = small_plan();
  plan.sim.dt = 1e4;
  plan.tau_m = {5.0};
  plan.family_values = {2.0};
  plan.seeds = 1;
  const SweepResult r = run_sweep(plan);
  REQUIRE(r.records.size() == 1);
  CHECK_FALSE(r.records[0].converged);
  CHECK_FALSE(r.records[0].error.empty());
  CHECK(r.table[0].n_failed == 1);
  CHECK_FALSE(r.table[0].mean_spikes.has_value());
}
