#include "racetrack/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "racetrack/csv.hpp"
#include "racetrack/dynamics.hpp"
#include "racetrack/errors.hpp"
#include "racetrack/experiments.hpp"
#include "racetrack/spectral.hpp"

#ifndef RACETRACK_VERSION
#define RACETRACK_VERSION "unknown"
#endif

namespace racetrack::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(trim(text), &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": not a number: '" + text + "'");
  }
  if (used != trim(text).size()) throw ConfigError(what + ": not a number: '" + text + "'");
  return value;
}

int parse_int(const std::string& text, const std::string& what) {
  const double value = parse_double(text, what);
  if (value != static_cast<int>(value)) throw ConfigError(what + ": not an integer: '" + text + "'");
  return static_cast<int>(value);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::vector<double> linear_grid(const GridSpec& g) {
  std::vector<double> v(g.count);
  for (int k = 0; k < g.count; ++k) v[k] = g.lo + (g.hi - g.lo) * k / (g.count - 1);
  return v;
}

json params_json(const ModelParams& p) {
  return {{"mu", p.mu},         {"sigma", p.sigma},   {"eta", p.eta},       {"tau_a", p.tau_a},
          {"tau_m", p.tau_m},   {"rho", p.radius},    {"gamma", p.gamma},   {"alpha", p.alpha()},
          {"beta", p.beta()},   {"no_black_hole", p.no_black_hole()}};
}

// Options shared by every subcommand.
struct Common {
  ModelParams params;
  int nodes = 128;
  std::string out_root;
};

struct SimOptions {
  double dt = 0.01;
  double stop_tol = 1e-10;
  long max_steps = 10'000'000;
  double solver_tol = 1e-10;
  long solver_max_iter = 100000;
  double damping = 1.0;
  double rel_height = 0.1;
  int min_separation = 2;
  double min_excess = 1e-3;

  SimulationConfig config() const {
    SimulationConfig c;
    c.dt = dt;
    c.stop_tol = stop_tol;
    c.max_steps = max_steps;
    c.solver.tol = solver_tol;
    c.solver.max_iter = solver_max_iter;
    c.solver.damping = damping;
    c.spikes.rel_height = rel_height;
    c.spikes.min_separation = min_separation;
    c.spikes.min_excess = min_excess;
    return c;
  }

  json to_json() const {
    return {{"dt", dt},
            {"stop_tol", stop_tol},
            {"max_steps", max_steps},
            {"solver_tol", solver_tol},
            {"solver_max_iter", solver_max_iter},
            {"damping", damping},
            {"spike_rel_height", rel_height},
            {"spike_min_separation", min_separation},
            {"spike_min_excess", min_excess}};
  }
};

void add_sim_options(CLI::App* cmd, SimOptions& s) {
  cmd->add_option("--dt", s.dt, "Euler time step")->capture_default_str();
  cmd->add_option("--stop-tol", s.stop_tol, "Sup-norm change that ends a run")->capture_default_str();
  cmd->add_option("--max-steps", s.max_steps, "Step budget per run")->capture_default_str();
  cmd->add_option("--solver-tol", s.solver_tol, "Fixed-point tolerance on W")->capture_default_str();
  cmd->add_option("--solver-max-iter", s.solver_max_iter, "Fixed-point iteration budget")->capture_default_str();
  cmd->add_option("--damping", s.damping, "Fixed-point damping in (0, 1]")->capture_default_str();
  cmd->add_option("--rel-height", s.rel_height, "Spike threshold as a fraction of the maximum")->capture_default_str();
  cmd->add_option("--min-separation", s.min_separation, "Spike merge distance in nodes")->capture_default_str();
  cmd->add_option("--min-excess", s.min_excess, "Relative margin a spike must clear above the mean density")
      ->capture_default_str();
}

// One invocation's output directory plus its metadata record.
class Run {
 public:
  Run(const std::string& command, const Common& common, json config)
      : command_(command), config_(std::move(config)) {
    config_["model"] = params_json(common.params);
    config_["nodes"] = common.nodes;
    std::ostringstream name;
    name << command << '-' << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config_.dump());
    dir_ = fs::path(common.out_root) / name.str();
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  const fs::path& dir() const { return dir_; }
  fs::path file(const std::string& name) const { return dir_ / name; }
  json& results() { return results_; }

  void write_metadata() const {
    json meta;
    meta["command"] = command_;
    meta["code_version"] = RACETRACK_VERSION;
    meta["config"] = config_;
    meta["results"] = results_;
    meta["created"] = utc_timestamp();
    const fs::path path = file("metadata.json");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << meta.dump(2) << '\n';
    if (!out) throw IoError("write failed on " + path.string());
  }

 private:
  std::string command_;
  json config_;
  json results_;
  fs::path dir_;
};

int run_eigen(const Common& common, const std::string& modes, const std::string& grid_text, const std::string& scale,
              std::ostream& out) {
  const auto ns = parse_mode_list(modes);
  const auto spec = parse_grid_spec(grid_text);
  if (scale != "linear" && scale != "geometric") throw ConfigError("tau-m-scale must be linear or geometric");
  std::vector<double> grid = scale == "linear" ? linear_grid(spec) : geometric_grid(spec.lo, spec.hi, spec.count);
  if (scale == "geometric") std::reverse(grid.begin(), grid.end());
  if (grid.front() < 0.0) throw ConfigError("tau-m-grid: values must be >= 0");

  Run run("eigen", common, {{"n", modes}, {"tau_m_grid", grid_text}, {"tau_m_scale", scale}});
  CsvWriter csv(run.file("eigen.csv"), {"n", "tau_m", "H_alpha", "H_beta", "b", "D", "B", "Q", "Omega", "eigenvalue"});
  json sign_changes = json::object();
  for (int n : ns) {
    int changes = 0;
    double prev = 0.0;
    bool first = true;
    for (double tau : grid) {
      const auto r = mode_growth(n, common.params.with_tau_m(tau));
      csv.row(n, tau, r.h_alpha, r.h_beta, r.b, r.d, r.big_b, r.q, r.omega, r.eigenvalue);
      if (!first && ((r.eigenvalue > 0.0) != (prev > 0.0))) ++changes;
      prev = r.eigenvalue;
      first = false;
    }
    sign_changes[std::to_string(n)] = changes;
  }
  csv.close();
  run.results()["sign_changes"] = sign_changes;
  run.write_metadata();
  out << run.dir().string() << '\n';
  return ok;
}

int run_critical(const Common& common, const std::string& modes, const ScanOptions& scan, std::ostream& out) {
  const auto ns = parse_mode_list(modes);
  Run run("critical", common,
          {{"n", modes}, {"tau_lo", scan.tau_lo}, {"tau_hi", scan.tau_hi}, {"points", scan.points}, {"tol", scan.tol}});
  CsvWriter csv(run.file("critical.csv"), {"n", "tau_lower", "tau_upper", "status"});
  json crossings = json::object();
  for (int n : ns) {
    const auto cp = critical_points(n, common.params, scan);
    std::ostringstream lower, upper;
    lower << std::setprecision(17);
    upper << std::setprecision(17);
    if (cp.lower) lower << *cp.lower;
    if (cp.upper) upper << *cp.upper;
    csv.row(n, lower.str(), upper.str(), to_string(cp.status));
    crossings[std::to_string(n)] = cp.crossings;
  }
  csv.close();
  run.results()["crossings"] = crossings;
  run.write_metadata();
  out << run.dir().string() << '\n';
  return ok;
}

int run_curve(const std::string& command, const Common& common, const std::string& modes, const std::string& plane_name,
              const std::string& x_text, std::string y_text, std::ostream& out) {
  const auto ns = parse_mode_list(modes);
  Plane plane;
  if (plane_name == "tau_a" || plane_name == "tau-a") {
    plane = Plane::tau_m_tau_a;
    if (y_text.empty()) y_text = "0.1:5:99";
  } else if (plane_name == "eta") {
    plane = Plane::tau_m_eta;
    if (y_text.empty()) y_text = "1.05:5:80";
  } else {
    throw ConfigError("plane must be tau_a or eta, got '" + plane_name + "'");
  }
  const auto xs = parse_grid_spec(x_text);
  const auto ys = parse_grid_spec(y_text);
  const bool with_curve = command == "curve";

  Run run(command, common, {{"n", modes}, {"plane", plane_name}, {"x_range", x_text}, {"y_range", y_text}});
  json points = json::object();
  for (int n : ns) {
    const auto curve = critical_curve(n, common.params, plane, {xs.lo, xs.hi, xs.count}, {ys.lo, ys.hi, ys.count});
    CsvWriter heat(run.file("heatmap_n" + std::to_string(n) + ".csv"), {"x", "y", "eigenvalue"});
    for (std::size_t row = 0; row < curve.ys.size(); ++row) {
      for (std::size_t col = 0; col < curve.xs.size(); ++col) heat.row(curve.xs[col], curve.ys[row], curve.at(row, col));
    }
    heat.close();
    if (with_curve) {
      CsvWriter line(run.file("curve_n" + std::to_string(n) + ".csv"), {"x", "y"});
      for (const auto& p : curve.polyline) line.row(p.x, p.y);
      line.close();
    }
    points[std::to_string(n)] = curve.polyline.size();
  }
  run.results()["curve_points"] = points;
  run.write_metadata();
  out << run.dir().string() << '\n';
  return ok;
}

int run_simulate(const Common& common, const SimOptions& sim, std::uint64_t seed, double amplitude,
                 const std::string& init, int mode, long snapshot_every, std::ostream& out) {
  const Grid grid(common.nodes, common.params.radius);
  common.params.validate();
  PopulationField initial;
  if (init == "random") {
    initial = random_initial(seed, amplitude, grid);
  } else if (init == "cosine") {
    initial = cosine_seed(mode, amplitude, grid);
  } else {
    throw ConfigError("init must be random or cosine, got '" + init + "'");
  }
  if (snapshot_every < 0) throw ConfigError("snapshot-every must be >= 0");

  json cfg = sim.to_json();
  cfg["seed"] = seed;
  cfg["amplitude"] = amplitude;
  cfg["init"] = init;
  if (init == "cosine") cfg["mode"] = mode;
  cfg["snapshot_every"] = snapshot_every;
  Run run("simulate", common, cfg);

  SimulationConfig config = sim.config();
  config.snapshot_every = snapshot_every;
  const auto result = run_to_stationary(grid, initial, PopulationField::homogeneous(grid), common.params, config);

  CsvWriter stationary(run.file("stationary.csv"), {"theta", "lambda"});
  for (int i = 0; i < grid.size(); ++i) stationary.row(grid.angle(i), result.lambda[i]);
  stationary.close();
  if (!result.snapshots.empty()) {
    CsvWriter snaps(run.file("snapshots.csv"), {"step", "theta", "lambda"});
    for (const auto& s : result.snapshots) {
      for (int i = 0; i < grid.size(); ++i) snaps.row(s.step, grid.angle(i), s.lambda[i]);
    }
    snaps.close();
  }

  auto& res = run.results();
  res["steps"] = result.steps;
  res["converged"] = result.converged;
  res["last_change"] = result.last_change;
  res["spikes"] = result.spikes.count;
  res["spike_locations"] = result.spikes.locations;
  res["max_mass_drift"] = result.max_mass_drift;
  res["min_lambda"] = result.min_lambda;
  res["solver_iterations"] = result.solver_iterations;
  run.write_metadata();
  out << run.dir().string() << '\n' << "spikes=" << result.spikes.count << " steps=" << result.steps
      << " converged=" << (result.converged ? "true" : "false") << '\n';
  return result.converged ? ok : numerical_error;
}

int run_probe(const Common& common, const SimOptions& sim, const std::string& modes, double amplitude, int horizon,
              std::ostream& out) {
  const auto ns = parse_mode_list(modes);
  const Grid grid(common.nodes, common.params.radius);
  json cfg = sim.to_json();
  cfg["n"] = modes;
  cfg["amplitude"] = amplitude;
  cfg["horizon"] = horizon;
  Run run("probe", common, cfg);
  CsvWriter csv(run.file("probe.csv"), {"n", "tau_m", "measured", "analytic", "rel_error"});
  for (int n : ns) {
    const double measured = measured_growth_rate(n, grid, common.params, sim.config(), amplitude, horizon).rate;
    const double analytic = mode_growth(n, common.params).eigenvalue;
    csv.row(n, common.params.tau_m, measured, analytic, std::abs(measured - analytic) / std::abs(analytic));
  }
  csv.close();
  run.write_metadata();
  out << run.dir().string() << '\n';
  return ok;
}

int run_sweep_command(const Common& common, const SimOptions& sim, const std::string& family,
                      const std::string& values, const std::string& tau_list, int seeds, std::uint64_t master_seed,
                      double amplitude, int jobs, std::ostream& out, std::ostream& err) {
  SweepPlan plan;
  plan.family = parse_family(family);
  plan.family_values = parse_number_list(values);
  if (!tau_list.empty()) plan.tau_m = parse_number_list(tau_list);
  plan.seeds = seeds;
  plan.base = common.params;
  plan.master_seed = master_seed;
  plan.nodes = common.nodes;
  plan.amplitude = amplitude;
  plan.sim = sim.config();
  plan.jobs = jobs > 0 ? jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  plan.validate();

  json cfg = sim.to_json();
  cfg["family"] = to_string(plan.family);
  cfg["family_values"] = plan.family_values;
  cfg["tau_m"] = plan.tau_m;
  cfg["seeds"] = seeds;
  cfg["master_seed"] = master_seed;
  cfg["amplitude"] = amplitude;
  Run run("sweep", common, cfg);

  std::size_t done = 0;
  const std::size_t total = plan.family_values.size() * plan.tau_m.size() * plan.seeds;
  const auto result = run_sweep(plan, [&](const SweepRecord& r) {
    ++done;
    err << "[" << done << "/" << total << "] " << to_string(plan.family) << '=' << r.family_value
        << " tau_m=" << r.tau_m << " seed#" << r.seed_index << " spikes=" << r.spikes
        << (r.converged ? "" : " (not converged)") << '\n';
  });

  CsvWriter records(run.file("sweep.csv"),
                    {"family_name", "family_value", "tau_m", "seed", "spikes", "steps", "converged"});
  for (const auto& r : result.records) {
    records.row(to_string(plan.family), r.family_value, r.tau_m, r.seed, r.spikes, r.steps, r.converged ? 1 : 0);
  }
  records.close();
  CsvWriter table(run.file("aggregate.csv"), {"family_value", "tau_m", "mean_spikes", "min", "max", "n_converged"});
  int failed = 0;
  for (const auto& row : result.table) {
    std::ostringstream mean;
    mean << std::setprecision(17);
    if (row.mean_spikes) mean << *row.mean_spikes;
    if (row.n_converged > 0) {
      table.row(row.family_value, row.tau_m, mean.str(), row.min_spikes, row.max_spikes, row.n_converged);
    } else {
      table.row(row.family_value, row.tau_m, "", "", "", 0);
    }
    failed += row.n_failed;
  }
  table.close();
  double drift = 0.0;
  for (const auto& r : result.records) drift = std::max(drift, r.max_mass_drift);
  run.results()["non_converged_cells"] = failed;
  run.results()["max_mass_drift"] = drift;
  run.write_metadata();
  out << run.dir().string() << '\n';
  return ok;
}

}  // namespace

std::vector<int> parse_mode_list(const std::string& text) {
  std::vector<int> modes;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = parse_int(text.substr(0, dots), "n");
    const int hi = parse_int(text.substr(dots + 2), "n");
    if (hi < lo) throw ConfigError("n: empty range '" + text + "'");
    for (int n = lo; n <= hi; ++n) {
      if (n != 0) modes.push_back(n);
    }
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const int n = parse_int(item, "n");
      if (n == 0) throw ConfigError("n: mode 0 is excluded");
      modes.push_back(n);
    }
  }
  if (modes.empty()) throw ConfigError("n: no modes given");
  return modes;
}

GridSpec parse_grid_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw ConfigError("grid: expected lo:hi:count, got '" + text + "'");
  GridSpec g{parse_double(parts[0], "grid lo"), parse_double(parts[1], "grid hi"), parse_int(parts[2], "grid count")};
  if (!(g.hi > g.lo)) throw ConfigError("grid: hi must exceed lo in '" + text + "'");
  if (g.count < 2) throw ConfigError("grid: count must be >= 2 in '" + text + "'");
  return g;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(parse_double(item, "list"));
  if (values.empty()) throw ConfigError("empty list");
  return values;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuous racetrack core-periphery model: stability analysis and simulation"};
  app.set_version_flag("--version", RACETRACK_VERSION);
  app.set_config("--config", "", "INI/TOML file with key = value settings");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  Common common;
  ModelParams& p = common.params;
  const char* env_root = std::getenv(kOutputRootEnv);
  common.out_root = env_root != nullptr && *env_root != '\0' ? env_root : "racetrack-out";
  app.add_option("--mu", p.mu, "Manufacturing expenditure share")->capture_default_str();
  app.add_option("--sigma", p.sigma, "Manufacturing elasticity of substitution")->capture_default_str();
  app.add_option("--eta", p.eta, "Agricultural elasticity of substitution")->capture_default_str();
  app.add_option("--tau-a", p.tau_a, "Agricultural transport cost")->capture_default_str();
  app.add_option("--tau-m", p.tau_m, "Manufacturing transport cost")->capture_default_str();
  app.add_option("--rho", p.radius, "Circle radius")->capture_default_str();
  app.add_option("--gamma", p.gamma, "Migration adjustment speed")->capture_default_str();
  app.add_option("--nodes", common.nodes, "Grid nodes I (even, >= 4)")->capture_default_str();
  app.add_option("--out", common.out_root, std::string("Output root (default from ") + kOutputRootEnv + ")");

  std::string modes = "1..6";
  std::string tau_grid = "0.05:10:200";
  std::string tau_scale = "linear";
  auto* eigen = app.add_subcommand("eigen", "Eigenvalue table over n and a tau_m grid")->fallthrough();
  eigen->add_option("--n", modes, "Modes: 1..6 or 1,2,5")->capture_default_str();
  eigen->add_option("--tau-m-grid", tau_grid, "lo:hi:count")->capture_default_str();
  eigen->add_option("--tau-m-scale", tau_scale, "linear or geometric")->capture_default_str();

  ScanOptions scan;
  auto* critical = app.add_subcommand("critical", "Critical transport costs per mode")->fallthrough();
  critical->add_option("--n", modes, "Modes")->capture_default_str();
  critical->add_option("--tau-lo", scan.tau_lo, "Scan lower bound")->capture_default_str();
  critical->add_option("--tau-hi", scan.tau_hi, "Scan upper bound")->capture_default_str();
  critical->add_option("--points", scan.points, "Geometric scan points")->capture_default_str();
  critical->add_option("--tol", scan.tol, "Bisection tolerance")->capture_default_str();

  std::string plane = "tau_a";
  std::string x_range = "0.1:6:120";
  std::string y_range;
  auto add_plane_options = [&](CLI::App* cmd) {
    cmd->add_option("--n", modes, "Modes")->capture_default_str();
    cmd->add_option("--plane", plane, "Second axis: tau_a or eta")->capture_default_str();
    cmd->add_option("--x-range", x_range, "tau_m axis lo:hi:count")->capture_default_str();
    cmd->add_option("--y-range", y_range, "Second axis lo:hi:count");
  };
  auto* curve = app.add_subcommand("curve", "Critical curve and heatmap in a parameter plane")->fallthrough();
  add_plane_options(curve);
  auto* heatmap = app.add_subcommand("heatmap", "Eigenvalue heatmap in a parameter plane")->fallthrough();
  add_plane_options(heatmap);

  SimOptions sim;
  std::uint64_t seed = 1;
  double amplitude = 0.01;
  std::string init = "random";
  int init_mode = 1;
  long snapshot_every = 1000;
  auto* simulate = app.add_subcommand("simulate", "Run the dynamics to a stationary state")->fallthrough();
  add_sim_options(simulate, sim);
  simulate->add_option("--seed", seed, "Initial-condition seed")->capture_default_str();
  simulate->add_option("--amplitude", amplitude, "Initial perturbation amplitude")->capture_default_str();
  simulate->add_option("--init", init, "random or cosine")->capture_default_str();
  simulate->add_option("--mode", init_mode, "Frequency for --init cosine")->capture_default_str();
  simulate->add_option("--snapshot-every", snapshot_every, "Steps between snapshots, 0 disables")
      ->capture_default_str();

  double probe_amplitude = 1e-4;
  int horizon = 50;
  std::string probe_modes = "1..4";
  auto* probe = app.add_subcommand("probe", "Measured vs analytic growth rates")->fallthrough();
  add_sim_options(probe, sim);
  probe->add_option("--n", probe_modes, "Modes")->capture_default_str();
  probe->add_option("--amplitude", probe_amplitude, "Cosine seed amplitude")->capture_default_str();
  probe->add_option("--horizon", horizon, "Steps in the fit")->capture_default_str();

  std::string family = "tau_a";
  std::string family_values = "2.0";
  std::string tau_list;
  int seeds = 5;
  int jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "Average spike counts over seeds and tau_m")->fallthrough();
  add_sim_options(sweep, sim);
  sweep->add_option("--family", family, "tau_a or eta")->capture_default_str();
  sweep->add_option("--values", family_values, "Family values, comma separated")->capture_default_str();
  sweep->add_option("--tau-m-list", tau_list, "tau_m values (default: the 16-point list)");
  sweep->add_option("--seeds", seeds, "Runs per cell")->capture_default_str();
  sweep->add_option("--seed", seed, "Master seed")->capture_default_str();
  sweep->add_option("--amplitude", amplitude, "Initial perturbation amplitude")->capture_default_str();
  sweep->add_option("--jobs", jobs, "Worker threads (0: hardware concurrency)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::CallForVersion& e) {
    out << RACETRACK_VERSION << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  }

  try {
    common.params.validate();
    if (common.nodes < 4 || common.nodes % 2 != 0) throw ConfigError("nodes must be even and >= 4");
    if (*eigen) return run_eigen(common, modes, tau_grid, tau_scale, out);
    if (*critical) return run_critical(common, modes, scan, out);
    if (*curve) return run_curve("curve", common, modes, plane, x_range, y_range, out);
    if (*heatmap) return run_curve("heatmap", common, modes, plane, x_range, y_range, out);
    if (*simulate) return run_simulate(common, sim, seed, amplitude, init, init_mode, snapshot_every, out);
    if (*probe) return run_probe(common, sim, probe_modes, probe_amplitude, horizon, out);
    if (*sweep) {
      return run_sweep_command(common, sim, family, family_values, tau_list, seeds, seed, amplitude, jobs, out, err);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return numerical_error;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return io_error;
  }
  return config_error;
}

}  // namespace racetrack::cli
