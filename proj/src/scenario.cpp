#include "rcgp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rcgp/errors.hpp"

namespace rcgp {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& source, const std::string& field, const std::string& what) {
  throw ParseError(source + ": field '" + field + "': " + what);
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& value, const std::string& source, const std::string& field) {
  if (!value.is_number()) field_error(source, field, "expected a number");
  return value.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& source,
                 const std::string& prefix = "") {
  const json* v = find(obj, key);
  return v ? number(*v, source, prefix + key) : fallback;
}

const json& require(const json& obj, const char* key, const std::string& source, const std::string& prefix = "") {
  const json* v = find(obj, key);
  if (!v) field_error(source, prefix + key, "missing");
  return *v;
}

Point2d point(const json& value, const std::string& source, const std::string& field) {
  if (!value.is_array() || value.size() != 2) field_error(source, field, "expected [x, y]");
  return Point2d(number(value[0], source, field + "[0]"), number(value[1], source, field + "[1]"));
}

json to_json(const Point2d& p) { return json::array({p.x(), p.y()}); }

NoiseKind noise_kind(const std::string& text, const std::string& source) {
  if (text == "additive") return NoiseKind::Additive;
  if (text == "multiplicative") return NoiseKind::Multiplicative;
  field_error(source, "noise.kind", "expected \"additive\" or \"multiplicative\"");
}

void check_on_grid(const Scenario& s, const Point2d& p, const std::string& what) {
  const Bounds& b = s.workspace.bounds;
  const double fc = (p.x() - b.x_min) / s.spacing;
  const double fr = (p.y() - b.y_min) / s.spacing;
  const bool lattice = std::abs(fc - std::round(fc)) <= 1e-9 && std::abs(fr - std::round(fr)) <= 1e-9;
  if (!lattice || !s.workspace.in_bounds(p))
    throw ValidationError(what + " (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                          ") does not lie on the sampling grid");
  if (s.workspace.blocked(p))
    throw ValidationError(what + " (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                          ") lies inside an obstacle");
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ParseError(source + ": line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError(source + ": top level must be a JSON object");

  Scenario s;
  const json& name = require(doc, "name", source);
  if (!name.is_string()) field_error(source, "name", "expected a string");
  s.name = name.get<std::string>();

  const json& ws = require(doc, "workspace", source);
  const json& bounds = require(ws, "bounds", source, "workspace.");
  if (!bounds.is_array() || bounds.size() != 4) field_error(source, "workspace.bounds", "expected [x_min, y_min, x_max, y_max]");
  s.workspace.bounds = {number(bounds[0], source, "workspace.bounds[0]"), number(bounds[1], source, "workspace.bounds[1]"),
                        number(bounds[2], source, "workspace.bounds[2]"), number(bounds[3], source, "workspace.bounds[3]")};
  if (const json* obstacles = find(ws, "obstacles")) {
    if (!obstacles->is_array()) field_error(source, "workspace.obstacles", "expected an array of polygons");
    for (std::size_t k = 0; k < obstacles->size(); ++k) {
      const std::string field = "workspace.obstacles[" + std::to_string(k) + "]";
      const json& poly = (*obstacles)[k];
      if (!poly.is_array()) field_error(source, field, "expected an array of [x, y] vertices");
      Polygon polygon;
      for (std::size_t v = 0; v < poly.size(); ++v)
        polygon.push_back(point(poly[v], source, field + "[" + std::to_string(v) + "]"));
      s.workspace.obstacles.push_back(std::move(polygon));
    }
  }

  s.spacing = number_or(doc, "spacing", 1.0, source);
  s.connect_radius = number_or(doc, "connect_radius", 2.0, source);
  s.sensing_radius = number(require(doc, "sensing_radius", source), source, "sensing_radius");
  if (const json* noise = find(doc, "noise")) {
    if (const json* kind = find(*noise, "kind")) {
      if (!kind->is_string()) field_error(source, "noise.kind", "expected a string");
      s.noise.kind = noise_kind(kind->get<std::string>(), source);
    }
    s.noise.sigma = number_or(*noise, "sigma", s.noise.sigma, source, "noise.");
  }
  s.min_rigidity = number_or(doc, "min_rigidity", 0.1, source);

  const json& agents = require(doc, "agents", source);
  if (!agents.is_array()) field_error(source, "agents", "expected an array");
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const std::string prefix = "agents[" + std::to_string(k) + "].";
    AgentSpec agent;
    agent.start = point(require(agents[k], "start", source, prefix), source, prefix + "start");
    agent.goal = point(require(agents[k], "goal", source, prefix), source, prefix + "goal");
    s.agents.push_back(agent);
  }
  if (const json* order = find(doc, "priority_order")) {
    if (!order->is_array()) field_error(source, "priority_order", "expected an array of agent ids");
    for (const json& id : *order) {
      if (!id.is_number_integer()) field_error(source, "priority_order", "expected integer agent ids");
      s.priority_order.push_back(id.get<int>());
    }
  }
  if (const json* cap = find(doc, "horizon_cap")) {
    if (!cap->is_number_integer()) field_error(source, "horizon_cap", "expected an integer");
    s.horizon_cap = cap->get<int>();
  }
  s.rrt.step_size = s.spacing;
  if (const json* rrt = find(doc, "rrt")) {
    s.rrt.step_size = number_or(*rrt, "step_size", s.rrt.step_size, source, "rrt.");
    s.rrt.goal_bias = number_or(*rrt, "goal_bias", s.rrt.goal_bias, source, "rrt.");
    if (const json* it = find(*rrt, "max_iterations")) {
      if (!it->is_number_integer()) field_error(source, "rrt.max_iterations", "expected an integer");
      s.rrt.max_iterations = it->get<int>();
    }
    if (const json* seed = find(*rrt, "seed")) {
      if (!seed->is_number_unsigned()) field_error(source, "rrt.seed", "expected an unsigned integer");
      s.rrt.seed = seed->get<std::uint64_t>();
    }
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.string());
}

std::string dump_scenario(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  json obstacles = json::array();
  for (const Polygon& poly : s.workspace.obstacles) {
    json vertices = json::array();
    for (const Point2d& v : poly) vertices.push_back(to_json(v));
    obstacles.push_back(std::move(vertices));
  }
  const Bounds& b = s.workspace.bounds;
  doc["workspace"] = {{"bounds", {b.x_min, b.y_min, b.x_max, b.y_max}}, {"obstacles", std::move(obstacles)}};
  doc["spacing"] = s.spacing;
  doc["connect_radius"] = s.connect_radius;
  doc["sensing_radius"] = s.sensing_radius;
  doc["noise"] = {{"kind", s.noise.kind == NoiseKind::Additive ? "additive" : "multiplicative"},
                  {"sigma", s.noise.sigma}};
  doc["min_rigidity"] = s.min_rigidity;
  json agents = json::array();
  for (const AgentSpec& a : s.agents) agents.push_back({{"start", to_json(a.start)}, {"goal", to_json(a.goal)}});
  doc["agents"] = std::move(agents);
  if (!s.priority_order.empty()) doc["priority_order"] = s.priority_order;
  if (s.horizon_cap) doc["horizon_cap"] = *s.horizon_cap;
  doc["rrt"] = {{"step_size", s.rrt.step_size},
                {"goal_bias", s.rrt.goal_bias},
                {"max_iterations", s.rrt.max_iterations},
                {"seed", s.rrt.seed}};
  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write scenario file " + path.string());
  out << dump_scenario(scenario);
  if (!out) throw IoError("failed writing scenario file " + path.string());
}

void validate_scenario(const Scenario& s) {
  s.workspace.validate();
  if (!(s.spacing > 0)) throw ValidationError("spacing must be positive");
  if (!(s.connect_radius >= s.spacing)) throw ValidationError("connect_radius must be at least the spacing");
  if (!(s.sensing_radius > 0)) throw ValidationError("sensing_radius must be positive");
  if (!(s.noise.sigma > 0)) throw ValidationError("noise.sigma must be positive");
  if (!(s.min_rigidity >= 0)) throw ValidationError("min_rigidity must be non-negative");
  if (s.agents.empty()) throw ValidationError("scenario has no agents");
  if (s.min_rigidity > 0 && s.agents.size() < 3)
    throw ValidationError("at least 3 agents are required when min_rigidity > 0");
  if (s.horizon_cap && *s.horizon_cap < 1) throw ValidationError("horizon_cap must be positive");
  s.rrt.validate();
  for (std::size_t k = 0; k < s.agents.size(); ++k) {
    check_on_grid(s, s.agents[k].start, "agents[" + std::to_string(k) + "].start");
    check_on_grid(s, s.agents[k].goal, "agents[" + std::to_string(k) + "].goal");
  }
  if (!s.priority_order.empty()) {
    std::vector<int> sorted = s.priority_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k)
      if (sorted.size() != s.agents.size() || sorted[k] != static_cast<int>(k))
        throw ValidationError("priority_order is not a permutation of the agent ids");
  }
}

PlanningProblem make_problem(const Scenario& scenario, std::shared_ptr<const PlanningGraph> graph) {
  std::vector<NodeId> starts;
  std::vector<NodeId> goals;
  for (std::size_t k = 0; k < scenario.agents.size(); ++k) {
    const auto s = graph->find_node(scenario.agents[k].start);
    const auto g = graph->find_node(scenario.agents[k].goal);
    if (!s || !g) throw ValidationError("agent " + std::to_string(k) + " start or goal is not a planning-graph node");
    starts.push_back(*s);
    goals.push_back(*g);
  }
  return make_planning_problem(std::move(graph), std::move(starts), std::move(goals), scenario.sensing_radius,
                               scenario.noise, scenario.min_rigidity, scenario.priority_order,
                               scenario.horizon_cap.value_or(0));
}

}  // namespace rcgp
