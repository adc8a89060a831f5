#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "frozone/cli_io.hpp"

using namespace frozone;
using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("frozone_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "frozone");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string cell;
  while (std::getline(s, cell, ',')) out.push_back(cell);
  return out;
}

bool is_number(const std::string& s) {
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return !s.empty() && end == s.c_str() + s.size();
}

void check_round_trip(const ScenarioConfig& cfg) {
  const Json first = serialize_config(cfg);
  const ScenarioConfig again = parse_config(first);
  CHECK(serialize_config(again).dump() == first.dump());
}

RunReport short_run(const char* name, PlannerKind kind, std::uint64_t seed) {
  ScenarioConfig cfg = *find_builtin(name);
  cfg.planner = kind;
  return run_scenario(cfg, seed);
}

}  // namespace

TEST_CASE("parse_config examples") {
  CHECK(load_scenario("1ped-3m").pedestrians.at(0).start == Vec2{3, 0});

  const fs::path eta2 = write_file("eta2.json", R"({"scenario": "1ped-3m", "frozone": {"eta": 2.0}})");
  const ScenarioConfig cfg = load_scenario(eta2.string());
  CHECK(cfg.frozone.eta == 2.0);
  CHECK(cfg.pedestrians.size() == 1);

  const fs::path bad = write_file("eta_neg.json", R"({"scenario": "1ped-3m", "frozone": {"eta": -1}})");
  CHECK_THROWS_WITH_AS(load_scenario(bad.string()), doctest::Contains("eta must be > f"), ConfigError);
}

TEST_CASE("parse_config rejects bad documents") {
  CHECK_THROWS_WITH_AS(parse_config(Json::parse(R"({"scenario": "corridor", "speed": 1})")),
                       doctest::Contains("unknown key 'speed'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(Json::parse(R"({"scenario": "corridor", "frozone": {"foo": 1}})")),
                       doctest::Contains("frozone.foo"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(Json::parse(R"({"scenario": "x", "robot": {"goal": [5, 0]}, "pedestrians": [{"start": [1, 1], "bogus": 0}]})")),
      doctest::Contains("pedestrians[0].bogus"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(Json::parse(R"({"scenario": "corridor", "seed": "x"})")),
                       doctest::Contains("seed"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(Json::parse(R"({"seed": 3})")), doctest::Contains("scenario"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(Json::parse(R"({"scenario": "custom"})")), doctest::Contains("robot"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(Json::parse(R"({"scenario": "corridor", "robot": {"position": [1]}})")),
                       doctest::Contains("robot.position"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(Json::parse(R"({"scenario": "corridor", "planner": {"kind": "dwa"}})")),
                       doctest::Contains("planner.kind"), ConfigError);
  CHECK_THROWS_AS(load_scenario(write_file("broken.json", "{ nope").string()), ConfigError);
  CHECK_THROWS_AS(load_scenario((scratch_dir() / "missing.json").string()), IoError);
  CHECK_THROWS_AS(load_scenario("no-such-scenario"), ConfigError);
}

TEST_CASE("custom scenario from a file") {
  const fs::path p = write_file("custom.json", R"({
    "scenario": "lane",
    "seed": 7,
    "runs": 2,
    "robot": {"position": [0, 0], "goal": [6, 0]},
    "planner": {"kind": "baseline", "w_goal": 3.0},
    "pedestrians": [{"start": [6, 0.2], "waypoints": [[0, 0.2]], "pref_speed": 0.8}],
    "random_crowd": null
  })");
  const ScenarioConfig cfg = load_scenario(p.string());
  CHECK(cfg.name == "lane");
  CHECK(cfg.seed == 7);
  CHECK(cfg.runs == 2);
  CHECK(cfg.planner == PlannerKind::Baseline);
  CHECK(cfg.planner_params.w_goal == 3.0);
  CHECK(cfg.planner_params.w_clear == PlannerConfig{}.w_clear);
  REQUIRE(cfg.pedestrians.size() == 1);
  CHECK(cfg.pedestrians[0].pref_speed == 0.8);
  CHECK(cfg.pedestrians[0].radius == 0.25);
  check_round_trip(cfg);
}

TEST_CASE("property: config round-trips") {
  for (const ScenarioConfig& cfg : builtin_scenarios()) check_round_trip(cfg);
  std::mt19937_64 rng(401);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const std::vector<ScenarioConfig> all = builtin_scenarios();
    ScenarioConfig cfg = all[static_cast<std::size_t>(i) % all.size()];
    cfg.seed = static_cast<std::uint64_t>(i) * 7919u;
    cfg.frozone.eta = 0.6 + 2.0 * unit(rng);
    cfg.frozone.pred_dt = 0.1 + unit(rng);
    cfg.sensing.pos_noise_sigma = 0.1 * unit(rng);
    cfg.planner_params.w_vel = unit(rng);
    cfg.robot.goal = {20 * unit(rng) - 10, 20 * unit(rng) - 10};
    cfg.planner = unit(rng) < 0.5 ? PlannerKind::Baseline : PlannerKind::Hybrid;
    check_round_trip(cfg);
    // Text round trip as well.
    const ScenarioConfig from_text = parse_config(Json::parse(serialize_config(cfg).dump()));
    CHECK(serialize_config(from_text).dump() == serialize_config(cfg).dump());
  }
}

TEST_CASE("trajectory CSV") {
  const RunReport r = short_run("1ped-3m", PlannerKind::Hybrid, 1);
  const std::string csv = trajectory_csv(r);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  const std::vector<std::string> cols = split(header);
  CHECK(cols.front() == "t");
  CHECK(cols.size() == 16);
  CHECK(cols[14] == "ped_0_x");
  std::string line;
  std::size_t rows = 0;
  double last_t = -1.0;
  while (std::getline(lines, line)) {
    const std::vector<std::string> cells = split(line);
    REQUIRE(cells.size() == cols.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cols[c] == "branch") {
        CHECK((cells[c] == "Frozone" || cells[c] == "Baseline"));
      } else {
        CHECK(is_number(cells[c]));
      }
    }
    const double t = std::stod(cells[0]);
    CHECK(t > last_t);
    last_t = t;
    ++rows;
  }
  CHECK(rows == r.trajectory.size());
  CHECK(trajectory_csv(short_run("1ped-3m", PlannerKind::Hybrid, 1)) == csv);
}

TEST_CASE("report JSON is self-consistent") {
  ScenarioConfig cfg = *find_builtin("random-5");
  cfg.planner = PlannerKind::Hybrid;
  const BatchResult batch = run_batch(cfg, 4);
  const Json doc = report_json(cfg, batch);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["scenario"] == "random-5");
  CHECK(doc["planner"] == "hybrid");
  REQUIRE(doc["runs"].size() == 4);
  int success = 0, frozen = 0, collision = 0, timeout = 0;
  double pf = 0.0, time = 0.0;
  for (const Json& run : doc["runs"]) {
    const std::string outcome = run["outcome"];
    success += outcome == "success";
    frozen += outcome == "frozen";
    collision += outcome == "collision";
    timeout += outcome == "timeout";
    pf += run["pf"].get<double>();
    if (outcome == "success") time += run["time_to_goal"].get<double>();
    CHECK((outcome == "success") == !run["time_to_goal"].is_null());
  }
  const Json& agg = doc["aggregate"];
  CHECK(agg["runs"] == 4);
  CHECK(agg["success_rate"].get<double>() == doctest::Approx(success / 4.0));
  CHECK(agg["freezing_rate"].get<double>() == doctest::Approx(frozen / 4.0));
  CHECK(agg["collision_rate"].get<double>() == doctest::Approx(collision / 4.0));
  CHECK(agg["timeout_rate"].get<double>() == doctest::Approx(timeout / 4.0));
  CHECK(agg["mean_pf"].get<double>() == doctest::Approx(pf / 4.0));
  if (success > 0) {
    CHECK(agg["mean_time"].get<double>() == doctest::Approx(time / success));
  } else {
    CHECK(agg["mean_time"].is_null());
  }
  // The echoed config reproduces the batch.
  const ScenarioConfig echo = parse_config(doc["config"]);
  CHECK(echo.runs == 4);
  const BatchResult again = run_batch(echo, echo.runs);
  CHECK(report_json(echo, again).dump() == doc.dump());
}

TEST_CASE("SVG rendering") {
  const ScenarioConfig cfg = *find_builtin("1ped-3m");
  const RunReport baseline = short_run("1ped-3m", PlannerKind::Baseline, 1);
  for (const TrajectorySample& s : baseline.trajectory) REQUIRE_FALSE(s.triggered);
  const std::string plain = render_svg(cfg, baseline);
  CHECK(plain.find("class=\"pfz\"") == std::string::npos);
  CHECK(plain.find("red") == std::string::npos);
  CHECK(plain.find("stroke=\"green\"") != std::string::npos);
  CHECK(plain.find("stroke=\"gray\"") != std::string::npos);
  CHECK(plain.find("class=\"goal\"") != std::string::npos);

  ScenarioConfig hcfg = cfg;
  hcfg.planner = PlannerKind::Hybrid;
  const RunReport hybrid = run_scenario(hcfg, 1);
  std::size_t triggers = 0;
  for (const TrajectorySample& s : hybrid.trajectory) triggers += s.triggered ? 1 : 0;
  REQUIRE(triggers > 0);
  const std::string zones = render_svg(hcfg, hybrid);
  std::size_t count = 0;
  for (std::size_t pos = zones.find("class=\"pfz\""); pos != std::string::npos;
       pos = zones.find("class=\"pfz\"", pos + 1)) {
    ++count;
  }
  CHECK(count == triggers);
  CHECK(zones.find("opacity=\"0.3\"") != std::string::npos);
  CHECK(render_svg(hcfg, hybrid) == zones);
}

TEST_CASE("CLI exit codes and outputs") {
  const fs::path out = scratch_dir() / "out";
  CHECK(cli({"list-scenarios"}) == 0);
  CHECK(cli({"--help"}) == 0);
  CHECK(cli({}) == 1);
  CHECK(cli({"run", "--scenario", "1ped-3m", "--planner", "hybrid", "--seeds", "2", "--out", out.string(), "--svg"}) == 0);
  CHECK(fs::exists(out / "1ped-3m_hybrid.json"));
  CHECK(fs::exists(out / "1ped-3m_hybrid_seed1.csv"));
  CHECK(fs::exists(out / "1ped-3m_hybrid_seed2.svg"));
  const Json doc = Json::parse(read_file(out / "1ped-3m_hybrid.json"));
  CHECK(doc["seeds"] == Json::array({1, 2}));

  CHECK(cli({"run", "--scenario", "1ped-3m", "--planner", "dwa", "--out", out.string()}) == 1);
  CHECK(cli({"run", "--scenario", "nope", "--out", out.string()}) == 1);
  CHECK(cli({"run", "--scenario", "1ped-3m", "--sim-dt", "0.5", "--out", out.string()}) == 1);
  const fs::path bad = write_file("cli_eta.json", R"({"scenario": "1ped-3m", "frozone": {"eta": 0.1}})");
  CHECK(cli({"run", "--scenario", bad.string(), "--out", out.string()}) == 1);
  CHECK(cli({"run", "--scenario", (scratch_dir() / "absent.json").string(), "--out", out.string()}) == 2);
  const fs::path blocker = write_file("not_a_dir", "x");
  CHECK(cli({"run", "--scenario", "1ped-3m", "--seeds", "1", "--out", (blocker / "sub").string()}) == 2);
  CHECK(cli({"compare", "--scenario", "1ped-3m", "--seeds", "1"}) == 0);
}
