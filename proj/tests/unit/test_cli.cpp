#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "racetrack/cli.hpp"
#include "racetrack/errors.hpp"

using namespace racetrack;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;

  fs::path dir() const { return fs::path(out.substr(0, out.find('\n'))); }
};

fs::path scratch_root() {
  const char* env = std::getenv(cli::kOutputRootEnv);
  return env ? fs::path(env) : fs::temp_directory_path() / "racetrack-cli-test";
}

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "racetrack");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("parse_mode_list") {
  CHECK(cli::parse_mode_list("1..6") == std::vector<int>{1, 2, 3, 4, 5, 6});
  CHECK(cli::parse_mode_list("1,3,5") == std::vector<int>{1, 3, 5});
  CHECK(cli::parse_mode_list("4") == std::vector<int>{4});
  CHECK(cli::parse_mode_list("-2..-1") == std::vector<int>{-2, -1});
  CHECK(cli::parse_mode_list("-1..1") == std::vector<int>{-1, 1});
  CHECK_THROWS_AS(cli::parse_mode_list("0..0"), ConfigError);
  CHECK_THROWS_AS(cli::parse_mode_list("1,0"), ConfigError);
  CHECK_THROWS_AS(cli::parse_mode_list("a"), ConfigError);
  CHECK_THROWS_AS(cli::parse_mode_list("5..2"), ConfigError);
}

TEST_CASE("parse_grid_spec and parse_number_list") {
  const auto g = cli::parse_grid_spec("0.05:10:400");
  CHECK(g.lo == 0.05);
  CHECK(g.hi == 10.0);
  CHECK(g.count == 400);
  CHECK_THROWS_AS(cli::parse_grid_spec("1:2"), ConfigError);
  CHECK_THROWS_AS(cli::parse_grid_spec("1:2:1"), ConfigError);
  CHECK_THROWS_AS(cli::parse_grid_spec("3:2:10"), ConfigError);
  CHECK_THROWS_AS(cli::parse_grid_spec("1:2:x"), ConfigError);

  CHECK(cli::parse_number_list("1.5, 2,2.5") == std::vector<double>{1.5, 2.0, 2.5});
  CHECK_THROWS_AS(cli::parse_number_list("1,,2"), ConfigError);
}

TEST_CASE("eigen reproduces two sign changes for n = 1") {
  const auto root = scratch_root() / "eigen";
  const Outcome r = run({"eigen", "--mu", "0.5", "--sigma", "3", "--eta", "2", "--tau-a", "2.0", "--rho", "1",
                         "--n", "1..6", "--tau-m-grid", "0.05:10:400", "--out", root.string()});
  REQUIRE(r.code == cli::ok);
  const auto rows = read_csv(r.dir() / "eigen.csv");
  REQUIRE(rows.size() == 1 + 6 * 400);
  CHECK(rows[0] == std::vector<std::string>{"n", "tau_m", "H_alpha", "H_beta", "b", "D", "B", "Q", "Omega",
                                            "eigenvalue"});
  int changes = 0;
  double prev = 0.0;
  for (std::size_t i = 1; i <= 400; ++i) {
    REQUIRE(rows[i][0] == "1");
    const double e = std::stod(rows[i][9]);
    if (i > 1 && ((e > 0) != (prev > 0))) ++changes;
    prev = e;
  }
  CHECK(changes == 2);

  const auto meta = nlohmann::json::parse(slurp(r.dir() / "metadata.json"));
  CHECK(meta["command"] == "eigen");
  CHECK(meta["config"]["model"]["tau_a"] == 2.0);
  CHECK(meta["results"]["sign_changes"]["1"] == 2);
  CHECK(meta.contains("code_version"));
}

TEST_CASE("exit codes") {
  const auto root = (scratch_root() / "codes").string();
  const Outcome bad_sigma = run({"eigen", "--sigma", "0.5", "--out", root});
  CHECK(bad_sigma.code == cli::config_error);
  CHECK(bad_sigma.err.find("sigma must be > 1") != std::string::npos);

  CHECK(run({"eigen", "--n", "0", "--out", root}).code == cli::config_error);
  CHECK(run({"nosuch"}).code == cli::config_error);
  CHECK(run({"eigen", "--bogus", "1"}).code == cli::config_error);
  CHECK(run({"eigen", "--nodes", "7", "--out", root}).code == cli::config_error);
  CHECK(run({"--help"}).code == cli::ok);

  const Outcome stuck = run({"simulate", "--nodes", "16", "--max-steps", "5", "--out", root});
  CHECK(stuck.code == cli::numerical_error);

  const Outcome blowup = run({"simulate", "--nodes", "16", "--dt", "1e4", "--out", root});
  CHECK(blowup.code == cli::numerical_error);
  CHECK(blowup.err.find("step 1") != std::string::npos);

  // a regular file where the output directory should go
  const fs::path blocker = scratch_root() / "blocker";
  fs::create_directories(scratch_root());
  std::ofstream(blocker) << "x";
  CHECK(run({"eigen", "--n", "1", "--tau-m-grid", "1:2:3", "--out", (blocker / "sub").string()}).code ==
        cli::io_error);
}

TEST_CASE("config file sets options and rejects unknown keys") {
  const fs::path dir = scratch_root() / "config";
  fs::create_directories(dir);
  const fs::path good = dir / "good.ini";
  std::ofstream(good) << "tau-a = 2.5\nsigma = 3\n[critical]\nn = \"1\"\n";
  const Outcome r = run({"--config", good.string(), "critical", "--out", (dir / "out").string()});
  REQUIRE(r.code == cli::ok);
  const auto rows = read_csv(r.dir() / "critical.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][3] == "none");

  const fs::path bad = dir / "bad.ini";
  std::ofstream(bad) << "tau-a = 2.5\nunknown_key = 1\n";
  const Outcome rejected = run({"--config", bad.string(), "eigen", "--out", (dir / "out").string()});
  CHECK(rejected.code == cli::config_error);
}

TEST_CASE("critical, curve, heatmap and probe write their tables") {
  const auto root = (scratch_root() / "tables").string();
  const Outcome c = run({"critical", "--n", "1..2", "--out", root});
  REQUIRE(c.code == cli::ok);
  const auto crit = read_csv(c.dir() / "critical.csv");
  REQUIRE(crit.size() == 3);
  CHECK(crit[1][3] == "two");
  CHECK(std::stod(crit[1][1]) == doctest::Approx(0.574).epsilon(1e-3));

  const Outcome cv = run({"curve", "--n", "1", "--x-range", "0.1:6:20", "--y-range", "0.1:5:20", "--out", root});
  REQUIRE(cv.code == cli::ok);
  CHECK(read_csv(cv.dir() / "heatmap_n1.csv").size() == 401);
  CHECK(read_csv(cv.dir() / "curve_n1.csv").size() > 1);

  const Outcome hm = run({"heatmap", "--n", "2", "--plane", "eta", "--x-range", "0.1:6:16", "--y-range",
                          "1.05:5:16", "--out", root});
  REQUIRE(hm.code == cli::ok);
  CHECK(fs::exists(hm.dir() / "heatmap_n2.csv"));
  CHECK_FALSE(fs::exists(hm.dir() / "curve_n2.csv"));

  const Outcome pr = run({"probe", "--n", "1,4", "--tau-m", "4", "--horizon", "20", "--out", root});
  REQUIRE(pr.code == cli::ok);
  const auto probe = read_csv(pr.dir() / "probe.csv");
  REQUIRE(probe.size() == 3);
  CHECK(std::stod(probe[1][2]) < 0.0);
  CHECK(std::stod(probe[2][2]) > 0.0);
}

TEST_CASE("simulate and sweep outputs") {
  const auto root = (scratch_root() / "runs").string();
  const Outcome s = run({"simulate", "--nodes", "16", "--tau-m", "3", "--dt", "0.05", "--seed", "7",
                         "--snapshot-every", "5000", "--out", root});
  REQUIRE(s.code == cli::ok);
  CHECK(s.out.find("spikes=") != std::string::npos);
  CHECK(read_csv(s.dir() / "stationary.csv").size() == 17);
  CHECK(fs::exists(s.dir() / "snapshots.csv"));
  const auto meta = nlohmann::json::parse(slurp(s.dir() / "metadata.json"));
  CHECK(meta["config"]["seed"] == 7);
  CHECK(meta["results"]["converged"] == true);
  CHECK(meta["results"].contains("spikes"));
  CHECK(meta["results"].contains("max_mass_drift"));

  const Outcome w = run({"sweep", "--nodes", "16", "--dt", "0.05", "--values", "2.0", "--tau-m-list", "5,3",
                         "--seeds", "2", "--max-steps", "20000", "--out", root});
  REQUIRE(w.code == cli::ok);
  const auto records = read_csv(w.dir() / "sweep.csv");
  REQUIRE(records.size() == 5);
  CHECK(records[0] == std::vector<std::string>{"family_name", "family_value", "tau_m", "seed", "spikes", "steps",
                                               "converged"});
  CHECK(records[1][0] == "tau_a");
  const auto agg = read_csv(w.dir() / "aggregate.csv");
  REQUIRE(agg.size() == 3);
  CHECK(agg[0] == std::vector<std::string>{"family_value", "tau_m", "mean_spikes", "min", "max", "n_converged"});
}

TEST_CASE("reruns produce byte-identical tables") {
  const auto root_a = (scratch_root() / "rerun-a").string();
  const auto root_b = (scratch_root() / "rerun-b").string();
  const std::vector<std::string> sim = {"simulate", "--nodes", "16", "--tau-m", "4", "--dt", "0.05", "--seed", "3"};
  auto with_out = [&](std::vector<std::string> args, const std::string& root) {
    args.push_back("--out");
    args.push_back(root);
    return run(args);
  };
  const Outcome a = with_out(sim, root_a);
  const Outcome b = with_out(sim, root_b);
  REQUIRE(a.code == cli::ok);
  REQUIRE(b.code == cli::ok);
  CHECK(a.dir().filename() == b.dir().filename());
  CHECK(slurp(a.dir() / "stationary.csv") == slurp(b.dir() / "stationary.csv"));
  CHECK(slurp(a.dir() / "snapshots.csv") == slurp(b.dir() / "snapshots.csv"));

  const std::vector<std::string> eig = {"eigen", "--n", "1..3", "--tau-m-grid", "0.1:5:50"};
  const Outcome c = with_out(eig, root_a);
  const Outcome d = with_out(eig, root_b);
  CHECK(slurp(c.dir() / "eigen.csv") == slurp(d.dir() / "eigen.csv"));

  // a different configuration lands in a different directory
  const Outcome e = with_out({"eigen", "--n", "1..3", "--tau-m-grid", "0.1:5:51"}, root_a);
  CHECK(e.dir() != c.dir());
}

TEST_CASE("output root falls back to the environment") {
  if (std::getenv(cli::kOutputRootEnv) == nullptr) return;
  const Outcome r = run({"critical", "--n", "1"});
  REQUIRE(r.code == cli::ok);
  CHECK(r.dir().parent_path() == fs::path(std::getenv(cli::kOutputRootEnv)));
}
