#include "rcgp/trajectory_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "rcgp/errors.hpp"
#include "rcgp/localization.hpp"
#include "rcgp/rigidity.hpp"

namespace rcgp {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

double parse_double(std::string_view text, int line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("trajectory csv line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
  return value;
}

long parse_index(std::string_view text, int line) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0)
    throw ParseError("trajectory csv line " + std::to_string(line) + ": bad index '" + std::string(text) + "'");
  return value;
}

Motion from_agent_lists(const std::vector<std::vector<Point2d>>& agents, std::size_t horizon) {
  Motion motion;
  for (std::size_t t = 0; t < horizon; ++t) {
    Configurationd frame(2, static_cast<Eigen::Index>(agents.size()));
    for (std::size_t a = 0; a < agents.size(); ++a) frame.col(static_cast<Eigen::Index>(a)) = agents[a][t];
    motion.frames.push_back(std::move(frame));
  }
  return motion;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_trajectories_csv(const Motion& motion) {
  std::string out = "t,agent,x,y\n";
  for (int t = 0; t < motion.horizon(); ++t) {
    const Configurationd& frame = motion.frames[static_cast<std::size_t>(t)];
    for (Eigen::Index a = 0; a < frame.cols(); ++a) {
      out += std::to_string(t) + ',' + std::to_string(a) + ',' + format_double(frame(0, a)) + ',' +
             format_double(frame(1, a)) + '\n';
    }
  }
  return out;
}

std::string format_trajectories_json(const Motion& motion) {
  nlohmann::json agents = nlohmann::json::array();
  for (std::size_t a = 0; a < motion.agents(); ++a) {
    nlohmann::json path = nlohmann::json::array();
    for (const Configurationd& frame : motion.frames) {
      const auto col = static_cast<Eigen::Index>(a);
      path.push_back({frame(0, col), frame(1, col)});
    }
    agents.push_back(std::move(path));
  }
  nlohmann::json doc{{"horizon", motion.horizon()}, {"agents", std::move(agents)}};
  return doc.dump() + "\n";
}

Motion parse_trajectories_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,agent,x,y") throw ParseError("trajectory csv: missing header t,agent,x,y");
  std::map<std::pair<long, long>, Point2d> cells;
  long max_t = -1;
  long max_agent = -1;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
      fields.push_back(rest.substr(0, pos));
    fields.push_back(rest);
    if (fields.size() != 4) throw ParseError("trajectory csv line " + std::to_string(number) + ": expected 4 fields");
    const long t = parse_index(fields[0], number);
    const long agent = parse_index(fields[1], number);
    if (!cells.emplace(std::pair{t, agent}, Point2d(parse_double(fields[2], number), parse_double(fields[3], number))).second)
      throw ParseError("trajectory csv line " + std::to_string(number) + ": duplicate (t, agent)");
    max_t = std::max(max_t, t);
    max_agent = std::max(max_agent, agent);
  }
  const auto horizon = static_cast<std::size_t>(max_t + 1);
  const auto agents = static_cast<std::size_t>(max_agent + 1);
  if (cells.size() != horizon * agents) throw ParseError("trajectory csv: missing (t, agent) rows");
  std::vector<std::vector<Point2d>> lists(agents, std::vector<Point2d>(horizon));
  for (const auto& [key, p] : cells) lists[static_cast<std::size_t>(key.second)][static_cast<std::size_t>(key.first)] = p;
  return from_agent_lists(lists, horizon);
}

Motion parse_trajectories_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("trajectory json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("horizon") || !doc.contains("agents"))
    throw ParseError("trajectory json: expected {\"horizon\", \"agents\"}");
  if (!doc["horizon"].is_number_integer() || doc["horizon"].get<long>() < 0)
    throw ParseError("trajectory json: horizon must be a non-negative integer");
  const auto horizon = doc["horizon"].get<std::size_t>();
  std::vector<std::vector<Point2d>> lists;
  for (const auto& path : doc["agents"]) {
    if (!path.is_array() || path.size() != horizon) throw ParseError("trajectory json: agent path length differs from horizon");
    std::vector<Point2d> list;
    for (const auto& p : path) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ParseError("trajectory json: positions must be [x, y]");
      list.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    lists.push_back(std::move(list));
  }
  return from_agent_lists(lists, horizon);
}

void export_trajectories(const Motion& motion, const std::filesystem::path& path, TrajectoryFormat format) {
  write_file(path, format == TrajectoryFormat::Csv ? format_trajectories_csv(motion) : format_trajectories_json(motion));
}

Motion import_trajectories(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".csv") return parse_trajectories_csv(read_file(path));
  if (ext == ".json") return parse_trajectories_json(read_file(path));
  throw IoError("unknown trajectory file extension '" + ext + "' (expected .csv or .json)");
}

void emit_plot_data(const Motion& motion, double sensing_radius, const NoiseModel& noise,
                    const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());

  std::string positions = "# t agent x y\n";
  std::string edges = "# t i j\n";
  for (int t = 0; t < motion.horizon(); ++t) {
    const Configurationd& frame = motion.frames[static_cast<std::size_t>(t)];
    for (Eigen::Index a = 0; a < frame.cols(); ++a)
      positions += std::to_string(t) + ' ' + std::to_string(a) + ' ' + format_double(frame(0, a)) + ' ' +
                   format_double(frame(1, a)) + '\n';
    for (const Edge& e : sensing_edges(frame, sensing_radius))
      edges += std::to_string(t) + ' ' + std::to_string(e.i) + ' ' + std::to_string(e.j) + '\n';
  }
  std::string rigidity = "# t rigidity_eigenvalue\n";
  const std::vector<double> series = rigidity_series(motion, sensing_radius, noise);
  for (std::size_t t = 0; t < series.size(); ++t) rigidity += std::to_string(t) + ' ' + format_double(series[t]) + '\n';

  write_file(directory / "positions.txt", positions);
  write_file(directory / "edges.txt", edges);
  write_file(directory / "rigidity.txt", rigidity);
}

}  // namespace rcgp
