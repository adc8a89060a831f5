#include "frozone/cli_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <type_traits>

#include <CLI11.hpp>

namespace frozone {

namespace {

using Json = nlohmann::ordered_json;

// Planner kind and parameters share the "planner" object.
struct PlannerBlock {
  PlannerKind kind{PlannerKind::Hybrid};
  PlannerConfig params;
};

// Field lists. One list drives both parsing and serialization, so the two
// cannot drift apart.
template <class V>
void fields(V& v, RobotState& r) {
  v("position", r.position);
  v("heading", r.heading);
  v("lin_vel", r.lin_vel);
  v("ang_vel", r.ang_vel);
  v("goal", r.goal);
  v("radius", r.radius);
  v("v_max", r.v_max);
  v("w_max", r.w_max);
  v("lin_accel", r.lin_accel);
  v("ang_accel", r.ang_accel);
}

template <class V>
void fields(V& v, SensorConfig& s) {
  v("side", s.side);
  v("offset", s.offset);
  v("fov", s.fov);
  v("image_w", s.image_w);
  v("image_h", s.image_h);
  v("pos_noise_sigma", s.pos_noise_sigma);
  v("frame_dt", s.frame_dt);
  v("motion_window", s.motion_window);
  v("motion_min_frames", s.motion_min_frames);
}

template <class V>
void fields(V& v, RangeSensorConfig& s) {
  v("range", s.range);
  v("fov", s.fov);
  v("noise_sigma", s.noise_sigma);
}

template <class V>
void fields(V& v, FrozoneConfig& f) {
  v("eta", f.eta);
  v("pred_dt", f.pred_dt);
  v("single_ped_radius", f.single_ped_radius);
  v("segment_inflation", f.segment_inflation);
  v("sweep_step", f.sweep_step);
  v("min_dist_threshold", f.min_dist_threshold);
  v("head_on_band", f.head_on_band);
  v("axis_tolerance", f.axis_tolerance);
  v("goal_tie_tolerance", f.goal_tie_tolerance);
  v("deviation_hold", f.deviation_hold);
}

template <class V>
void fields(V& v, PlannerBlock& p) {
  v("kind", p.kind);
  v("w_goal", p.params.w_goal);
  v("w_clear", p.params.w_clear);
  v("w_vel", p.params.w_vel);
  v("v_samples", p.params.v_samples);
  v("w_samples", p.params.w_samples);
  v("horizon", p.params.horizon);
  v("rollout_dt", p.params.rollout_dt);
  v("min_clearance", p.params.min_clearance);
  v("clearance_cap", p.params.clearance_cap);
  v("heading_gain", p.params.heading_gain);
}

template <class V>
void fields(V& v, FdParams& f) {
  v("alpha", f.alpha);
  v("beta", f.beta);
  v("height_factor", f.height_factor);
}

template <class V>
void fields(V& v, SimParams& s) {
  v("dt", s.dt);
  v("goal_tolerance", s.goal_tolerance);
  v("freeze_window", s.freeze_window);
  v("freeze_displacement", s.freeze_displacement);
  v("freeze_goal_margin", s.freeze_goal_margin);
  v("pf_n_inf", s.pf_n_inf);
  v("front_space_cap", s.front_space_cap);
  v("wall_spacing", s.wall_spacing);
  v("wall_radius", s.wall_radius);
  v("bounds_margin", s.bounds_margin);
}

template <class V>
void fields(V& v, PedestrianScript& p) {
  v("start", p.start);
  v("waypoints", p.waypoints);
  v("pref_speed", p.pref_speed);
  v("radius", p.radius);
}

template <class V>
void fields(V& v, WallSegment& w) {
  v("from", w.from);
  v("to", w.to);
}

template <class V>
void fields(V& v, RandomCrowd& c) {
  v("count", c.count);
  v("region_min", c.region_min);
  v("region_max", c.region_max);
  v("legs", c.legs);
  v("pref_speed", c.pref_speed);
  v("keep_out", c.keep_out);
}

// Everything except "scenario", which parse_config handles first.
template <class V>
void fields(V& v, ScenarioConfig& c, PlannerBlock& planner) {
  v("seed", c.seed);
  v("runs", c.runs);
  v("duration_limit", c.duration_limit);
  v("robot", c.robot);
  v("sensing", c.sensing);
  v("lidar", c.lidar);
  v("frozone", c.frozone);
  v("planner", planner);
  v("pedestrian_model", c.fd);
  v("sim", c.sim);
  v("pedestrians", c.pedestrians);
  v("walls", c.walls);
  v("random_crowd", c.random_crowd);
}

struct Probe {
  template <class T>
  void operator()(const char*, T&) {}
};

template <class T>
concept Record = requires(Probe& p, T& t) { fields(p, t); };

[[noreturn]] void type_error(const std::string& path, const char* expected) {
  throw ConfigError(path + ": expected " + expected);
}

void read(const Json& j, const std::string& path, double& out) {
  if (!j.is_number()) type_error(path, "a number");
  out = j.get<double>();
}

void read(const Json& j, const std::string& path, int& out) {
  if (!j.is_number_integer()) type_error(path, "an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    type_error(path, "an integer in range");
  }
  out = static_cast<int>(v);
}

void read(const Json& j, const std::string& path, std::uint64_t& out) {
  if (!j.is_number_unsigned()) type_error(path, "a non-negative integer");
  out = j.get<std::uint64_t>();
}

void read(const Json& j, const std::string& path, Vec2& out) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    type_error(path, "[x, y]");
  }
  out = {j[0].get<double>(), j[1].get<double>()};
}

void read(const Json& j, const std::string& path, std::string& out) {
  if (!j.is_string()) type_error(path, "a string");
  out = j.get<std::string>();
}

void read(const Json& j, const std::string& path, PlannerKind& out) {
  if (j == "baseline") {
    out = PlannerKind::Baseline;
  } else if (j == "hybrid") {
    out = PlannerKind::Hybrid;
  } else {
    type_error(path, "\"baseline\" or \"hybrid\"");
  }
}

template <Record T>
void read(const Json& j, const std::string& path, T& out);

template <class T>
void read(const Json& j, const std::string& path, std::vector<T>& out) {
  if (!j.is_array()) type_error(path, "an array");
  std::vector<T> items(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    read(j[i], path + "[" + std::to_string(i) + "]", items[i]);
  }
  out = std::move(items);
}

template <class T>
void read(const Json& j, const std::string& path, std::optional<T>& out) {
  if (j.is_null()) {
    out.reset();
    return;
  }
  T value = out.value_or(T{});
  read(j, path, value);
  out = std::move(value);
}

// Pulls known keys out of one JSON object; finish() rejects the rest.
class Reader {
 public:
  Reader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) type_error(path_.empty() ? "config" : path_, "an object");
  }

  template <class T>
  void operator()(const char* key, T& field) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it != obj_.end()) read(*it, child(key), field);
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.contains(item.key())) throw ConfigError("unknown key '" + child(item.key()) + "'");
    }
  }

 private:
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <Record T>
void read(const Json& j, const std::string& path, T& out) {
  Reader r(j, path);
  fields(r, out);
  r.finish();
}

Json write(double v) { return v; }
Json write(int v) { return v; }
Json write(std::uint64_t v) { return v; }
Json write(const Vec2& v) { return Json::array({v.x, v.y}); }
Json write(PlannerKind k) { return to_string(k); }

template <Record T>
Json write(const T& v);

template <class T>
Json write(const std::vector<T>& items) {
  Json out = Json::array();
  for (const T& item : items) out.push_back(write(item));
  return out;
}

template <class T>
Json write(const std::optional<T>& v) {
  return v ? write(*v) : Json(nullptr);
}

class Writer {
 public:
  template <class T>
  void operator()(const char* key, T& field) {
    obj[key] = write(field);
  }
  Json obj = Json::object();
};

template <Record T>
Json write(const T& v) {
  T copy = v;
  Writer w;
  fields(w, copy);
  return w.obj;
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  // Avoid "-0.000000" so equal runs print equal text regardless of sign noise.
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string safe_name(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

}  // namespace

ScenarioConfig parse_config(const Json& doc) {
  if (!doc.is_object()) type_error("config", "an object");
  const auto name_it = doc.find("scenario");
  if (name_it == doc.end()) throw ConfigError("scenario: required key missing");
  if (!name_it->is_string()) type_error("scenario", "a string");
  const std::string name = name_it->get<std::string>();

  ScenarioConfig cfg;
  if (auto builtin = find_builtin(name)) {
    cfg = *builtin;
  } else {
    if (!doc.contains("robot")) throw ConfigError("robot: required when scenario is not a builtin");
    cfg.name = name;
  }
  PlannerBlock planner{cfg.planner, cfg.planner_params};
  Reader r(doc, "");
  std::string ignored;
  r("scenario", ignored);
  fields(r, cfg, planner);
  r.finish();
  cfg.planner = planner.kind;
  cfg.planner_params = planner.params;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ScenarioConfig parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

ScenarioConfig load_scenario(const std::string& name_or_path) {
  if (auto builtin = find_builtin(name_or_path)) return *builtin;
  const std::filesystem::path path(name_or_path);
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) return parse_scenario_file(path);
  const bool looks_like_path = name_or_path.find('/') != std::string::npos || path.extension() == ".json";
  if (looks_like_path) throw IoError("cannot read " + name_or_path);
  throw ConfigError("unknown scenario '" + name_or_path + "' (see list-scenarios)");
}

Json serialize_config(const ScenarioConfig& cfg) {
  ScenarioConfig copy = cfg;
  PlannerBlock planner{cfg.planner, cfg.planner_params};
  Writer w;
  w.obj["scenario"] = cfg.name;
  fields(w, copy, planner);
  return w.obj;
}

std::string trajectory_csv(const RunReport& report) {
  const std::size_t n_peds = report.trajectory.empty() ? 0 : report.trajectory.front().peds.size();
  std::ostringstream out;
  out << "t,robot_x,robot_y,robot_heading,cmd_v,cmd_w,branch,ped_count,triggered,phi,"
         "sweep_feasible,lookahead_x,lookahead_y,frp";
  for (std::size_t i = 0; i < n_peds; ++i) out << ",ped_" << i << "_x,ped_" << i << "_y";
  out << '\n';
  for (const TrajectorySample& s : report.trajectory) {
    out << fixed(s.t, 3) << ',' << fixed(s.robot.position.x) << ',' << fixed(s.robot.position.y) << ','
        << fixed(s.robot.heading) << ',' << fixed(s.cmd_v) << ',' << fixed(s.cmd_w) << ','
        << to_string(s.branch) << ',' << s.ped_count << ',' << (s.triggered ? 1 : 0) << ','
        << fixed(s.phi) << ',' << (s.sweep_feasible ? 1 : 0) << ',' << fixed(s.lookahead.x) << ','
        << fixed(s.lookahead.y) << ',' << (s.frp ? 1 : 0);
    for (std::size_t i = 0; i < n_peds; ++i) {
      const Vec2 p = i < s.peds.size() ? s.peds[i] : Vec2{};
      out << ',' << fixed(p.x) << ',' << fixed(p.y);
    }
    out << '\n';
  }
  return out.str();
}

Json report_json(const ScenarioConfig& cfg, const BatchResult& batch) {
  const auto number_or_null = [](std::optional<double> v) {
    return v && std::isfinite(*v) ? Json(*v) : Json(nullptr);
  };
  Json doc = Json::object();
  doc["schema_version"] = kSchemaVersion;
  doc["scenario"] = cfg.name;
  doc["planner"] = to_string(cfg.planner);
  Json seeds = Json::array();
  Json runs = Json::array();
  for (const RunReport& r : batch.runs) {
    seeds.push_back(r.seed);
    Json run = Json::object();
    run["seed"] = r.seed;
    run["outcome"] = to_string(r.outcome);
    run["time_to_goal"] = number_or_null(r.time_to_goal);
    run["duration"] = r.duration;
    run["avg_speed"] = r.avg_speed;
    run["pf"] = r.pf;
    run["min_ped_dist"] = number_or_null(r.min_ped_dist);
    run["froze"] = r.froze;
    run["frp_ticks"] = r.frp_ticks;
    runs.push_back(std::move(run));
  }
  doc["seeds"] = std::move(seeds);
  doc["runs"] = std::move(runs);
  const Aggregate& a = batch.aggregate;
  Json agg = Json::object();
  agg["runs"] = a.runs;
  agg["success_rate"] = a.success_rate;
  agg["collision_rate"] = a.collision_rate;
  agg["freezing_rate"] = a.freezing_rate;
  agg["timeout_rate"] = a.timeout_rate;
  agg["mean_time"] = number_or_null(a.mean_time);
  agg["avg_velocity"] = number_or_null(a.avg_velocity);
  agg["mean_pf"] = a.mean_pf;
  doc["aggregate"] = std::move(agg);
  ScenarioConfig echo = cfg;
  echo.runs = std::max(1, static_cast<int>(batch.runs.size()));
  if (!batch.runs.empty()) echo.seed = batch.runs.front().seed;
  doc["config"] = serialize_config(echo);
  return doc;
}

std::string render_svg(const ScenarioConfig& cfg, const RunReport& report) {
  const WorldState world = make_world(cfg, report.seed);
  Vec2 lo = cfg.robot.position;
  Vec2 hi = cfg.robot.position;
  const auto grow = [&](const Vec2& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  };
  grow(cfg.robot.goal);
  for (const TrajectorySample& s : report.trajectory) {
    grow(s.robot.position);
    for (const Vec2& p : s.peds) grow(p);
  }
  for (const WallSegment& w : cfg.walls) {
    grow(w.from);
    grow(w.to);
  }
  const double margin = 1.0;
  lo = lo - Vec2{margin, margin};
  hi = hi + Vec2{margin, margin};
  const double k = kSvgPxPerMeter;
  const double width = (hi.x - lo.x) * k;
  const double height = (hi.y - lo.y) * k;
  // World y points up, SVG y points down.
  const auto px = [&](const Vec2& p) { return fixed((p.x - lo.x) * k, 2) + "," + fixed((hi.y - p.y) * k, 2); };
  const auto sx = [&](const Vec2& p) { return fixed((p.x - lo.x) * k, 2); };
  const auto sy = [&](const Vec2& p) { return fixed((hi.y - p.y) * k, 2); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 2) << "\" height=\""
      << fixed(height, 2) << "\" viewBox=\"0 0 " << fixed(width, 2) << ' ' << fixed(height, 2) << "\">\n";
  out << "<title>" << cfg.name << " " << to_string(cfg.planner) << " seed " << report.seed << " ("
      << to_string(report.outcome) << ")</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const WallSegment& w : cfg.walls) {
    out << "<line class=\"wall\" x1=\"" << sx(w.from) << "\" y1=\"" << sy(w.from) << "\" x2=\"" << sx(w.to)
        << "\" y2=\"" << sy(w.to) << "\" stroke=\"#444444\" stroke-width=\""
        << fixed(2.0 * cfg.sim.wall_radius * k, 2) << "\" stroke-linecap=\"round\"/>\n";
  }

  const std::size_t n_peds = report.trajectory.empty() ? 0 : report.trajectory.front().peds.size();
  for (std::size_t i = 0; i < n_peds; ++i) {
    out << "<polyline class=\"ped\" fill=\"none\" stroke=\"gray\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const TrajectorySample& s : report.trajectory) {
      if (i >= s.peds.size()) continue;
      out << (first ? "" : " ") << px(s.peds[i]);
      first = false;
    }
    out << "\"/>\n";
  }

  for (const TrajectorySample& s : report.trajectory) {
    if (!s.triggered || !s.pfz) continue;
    const auto to_world = [&](const Vec2& p) { return s.robot.position + rotate(p, s.robot.heading); };
    if (const auto* c = std::get_if<Circle>(&*s.pfz)) {
      const Vec2 center = to_world(c->center);
      out << "<circle class=\"pfz\" cx=\"" << sx(center) << "\" cy=\"" << sy(center) << "\" r=\""
          << fixed(c->radius * k, 2) << "\" fill=\"red\" fill-opacity=\"0.3\"/>\n";
    } else if (const auto* g = std::get_if<InflatedSegment>(&*s.pfz)) {
      const Vec2 a = to_world(g->a);
      const Vec2 b = to_world(g->b);
      out << "<line class=\"pfz\" x1=\"" << sx(a) << "\" y1=\"" << sy(a) << "\" x2=\"" << sx(b) << "\" y2=\""
          << sy(b) << "\" stroke=\"red\" stroke-opacity=\"0.3\" stroke-width=\""
          << fixed(2.0 * g->inflation * k, 2) << "\" stroke-linecap=\"round\"/>\n";
    } else if (const auto* poly = std::get_if<ConvexPolygon>(&*s.pfz)) {
      out << "<polygon class=\"pfz\" fill=\"red\" fill-opacity=\"0.3\" points=\"";
      bool first = true;
      for (const Vec2& v : poly->vertices()) {
        out << (first ? "" : " ") << px(to_world(v));
        first = false;
      }
      out << "\"/>\n";
    }
  }

  out << "<polyline class=\"robot\" fill=\"none\" stroke=\"green\" stroke-width=\"2\" points=\"";
  bool first = true;
  for (const TrajectorySample& s : report.trajectory) {
    out << (first ? "" : " ") << px(s.robot.position);
    first = false;
  }
  out << "\"/>\n";
  out << "<circle class=\"start\" cx=\"" << sx(world.robot.position) << "\" cy=\"" << sy(world.robot.position)
      << "\" r=\"" << fixed(cfg.robot.radius * k, 2) << "\" fill=\"none\" stroke=\"green\" stroke-width=\"2\"/>\n";
  const Vec2 g = cfg.robot.goal;
  const double arm = 0.25;
  out << "<g class=\"goal\" stroke=\"blue\" stroke-width=\"3\">"
      << "<line x1=\"" << sx(g - Vec2{arm, arm}) << "\" y1=\"" << sy(g - Vec2{arm, arm}) << "\" x2=\""
      << sx(g + Vec2{arm, arm}) << "\" y2=\"" << sy(g + Vec2{arm, arm}) << "\"/>"
      << "<line x1=\"" << sx(g + Vec2{-arm, arm}) << "\" y1=\"" << sy(g + Vec2{-arm, arm}) << "\" x2=\""
      << sx(g + Vec2{arm, -arm}) << "\" y2=\"" << sy(g + Vec2{arm, -arm}) << "\"/></g>\n";
  out << "</svg>\n";
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

void write_trajectory(const RunReport& report, const std::filesystem::path& path) {
  write_text(path, trajectory_csv(report));
}

void write_report(const ScenarioConfig& cfg, const BatchResult& batch, const std::filesystem::path& path) {
  write_text(path, report_json(cfg, batch).dump(2) + "\n");
}

void write_svg(const ScenarioConfig& cfg, const RunReport& report, const std::filesystem::path& path) {
  write_text(path, render_svg(cfg, report));
}

namespace {

void validated(const ScenarioConfig& cfg) {
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string rate_or_dash(std::optional<double> v) { return v ? fixed(*v, 3) : "-"; }

int cmd_run(const std::string& scenario, const std::string& planner, int seeds, const std::string& out_dir,
            bool svg, double sim_dt) {
  ScenarioConfig cfg = load_scenario(scenario);
  cfg.planner = planner == "baseline" ? PlannerKind::Baseline : PlannerKind::Hybrid;
  if (sim_dt > 0.0) cfg.sim.dt = sim_dt;
  if (seeds > 0) cfg.runs = seeds;
  validated(cfg);

  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + out_dir);

  const BatchResult batch = run_batch(cfg, cfg.runs);
  const std::string stem = safe_name(cfg.name) + "_" + to_string(cfg.planner);
  for (const RunReport& r : batch.runs) {
    const std::string base = stem + "_seed" + std::to_string(r.seed);
    write_trajectory(r, dir / (base + ".csv"));
    if (svg) write_svg(cfg, r, dir / (base + ".svg"));
  }
  write_report(cfg, batch, dir / (stem + ".json"));

  const Aggregate& a = batch.aggregate;
  std::cout << cfg.name << ' ' << to_string(cfg.planner) << ": " << a.runs << " runs, success "
            << fixed(a.success_rate, 2) << ", freezing " << fixed(a.freezing_rate, 2) << ", collision "
            << fixed(a.collision_rate, 2) << ", mean PF " << fixed(a.mean_pf, 2) << '\n'
            << "wrote " << (dir / (stem + ".json")).string() << '\n';
  return 0;
}

int cmd_list() {
  for (const ScenarioConfig& cfg : builtin_scenarios()) {
    std::string peds = std::to_string(cfg.pedestrians.size()) + " scripted";
    if (cfg.random_crowd) peds = std::to_string(cfg.random_crowd->count) + " random";
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %-12s goal (%g, %g)%s\n", cfg.name.c_str(), peds.c_str(),
                  cfg.robot.goal.x, cfg.robot.goal.y, cfg.walls.empty() ? "" : ", walls");
    std::cout << line;
  }
  return 0;
}

int cmd_compare(const std::string& scenario, int seeds, double sim_dt) {
  ScenarioConfig cfg = load_scenario(scenario);
  if (sim_dt > 0.0) cfg.sim.dt = sim_dt;
  if (seeds > 0) cfg.runs = seeds;
  validated(cfg);
  cfg.planner = PlannerKind::Baseline;
  const Aggregate base = run_batch(cfg, cfg.runs).aggregate;
  cfg.planner = PlannerKind::Hybrid;
  const Aggregate hyb = run_batch(cfg, cfg.runs).aggregate;

  std::cout << cfg.name << ", seeds " << cfg.seed << ".." << cfg.seed + cfg.runs - 1 << '\n';
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %10s %10s %10s\n", "metric", "baseline", "hybrid", "delta");
  std::cout << line;
  const auto row = [&](const char* name, std::optional<double> b, std::optional<double> h) {
    const std::string delta = b && h ? (*h - *b >= 0.0 ? "+" : "") + fixed(*h - *b, 3) : "-";
    std::snprintf(line, sizeof line, "%-16s %10s %10s %10s\n", name, rate_or_dash(b).c_str(),
                  rate_or_dash(h).c_str(), delta.c_str());
    std::cout << line;
  };
  row("success_rate", base.success_rate, hyb.success_rate);
  row("freezing_rate", base.freezing_rate, hyb.freezing_rate);
  row("collision_rate", base.collision_rate, hyb.collision_rate);
  row("timeout_rate", base.timeout_rate, hyb.timeout_rate);
  row("mean_time", base.mean_time, hyb.mean_time);
  row("avg_velocity", base.avg_velocity, hyb.avg_velocity);
  row("mean_pf", base.mean_pf, hyb.mean_pf);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Frozone crowd-navigation simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string planner = "hybrid";
  std::string out_dir;
  int seeds = 0;
  bool svg = false;
  double sim_dt = 0.0;

  auto* run = app.add_subcommand("run", "Run one planner on a scenario and write CSV, JSON and SVG");
  run->add_option("--scenario", scenario, "Builtin name or JSON config path")->required();
  run->add_option("--planner", planner, "baseline or hybrid")->check(CLI::IsMember({"baseline", "hybrid"}));
  run->add_option("--seeds", seeds, "Number of seeds (default: the config's runs)")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--svg", svg, "Also write one SVG plot per seed");
  run->add_option("--sim-dt", sim_dt, "Simulation step, s")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-scenarios", "List the builtin scenarios");

  auto* compare = app.add_subcommand("compare", "Run both planners and print the metric deltas");
  compare->add_option("--scenario", scenario, "Builtin name or JSON config path")->required();
  compare->add_option("--seeds", seeds, "Number of seeds")->check(CLI::PositiveNumber);
  compare->add_option("--sim-dt", sim_dt, "Simulation step, s")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*list) return cmd_list();
    // sim_dt stays 0 unless --sim-dt was given (the flag must be positive).
    if (*run) return cmd_run(scenario, planner, seeds, out_dir, svg, sim_dt);
    return cmd_compare(scenario, seeds, sim_dt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace frozone
