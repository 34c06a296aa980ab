#include "rcgp/environment.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "rcgp/errors.hpp"
#include "rcgp/geometry.hpp"

namespace rcgp {

namespace {

constexpr double kGridSnap = 1e-9;

int grid_count(double extent, double spacing) {
  return static_cast<int>(std::floor(extent / spacing + kGridSnap)) + 1;
}

}  // namespace

void Workspace::validate() const {
  if (!(bounds.x_min < bounds.x_max) || !(bounds.y_min < bounds.y_max))
    throw ValidationError("workspace bounds must satisfy x_min < x_max and y_min < y_max");
  for (std::size_t k = 0; k < obstacles.size(); ++k) {
    if (obstacles[k].size() < 3)
      throw ValidationError("obstacle " + std::to_string(k) + " has fewer than 3 vertices");
    if (!polygon_is_simple(obstacles[k]))
      throw ValidationError("obstacle " + std::to_string(k) + " is not a simple polygon");
  }
}

bool Workspace::in_bounds(const Point2d& p) const {
  return p.x() >= bounds.x_min && p.x() <= bounds.x_max && p.y() >= bounds.y_min && p.y() <= bounds.y_max;
}

bool Workspace::blocked(const Point2d& p) const {
  return std::any_of(obstacles.begin(), obstacles.end(),
                     [&](const Polygon& poly) { return point_in_polygon(p, poly); });
}

bool Workspace::segment_free(const Point2d& p, const Point2d& q) const {
  if (!in_bounds(p) || !in_bounds(q)) return false;
  return std::none_of(obstacles.begin(), obstacles.end(),
                      [&](const Polygon& poly) { return segment_intersects_polygon(p, q, poly); });
}

std::vector<Point2d> sample_grid(const Workspace& workspace, double spacing) {
  if (!(spacing > 0)) throw std::invalid_argument("grid spacing must be positive");
  const Bounds& b = workspace.bounds;
  const int cols = grid_count(b.x_max - b.x_min, spacing);
  const int rows = grid_count(b.y_max - b.y_min, spacing);
  std::vector<Point2d> points;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Point2d p(b.x_min + c * spacing, b.y_min + r * spacing);
      if (!workspace.blocked(p)) points.push_back(p);
    }
  }
  return points;
}

PlanningGraph::PlanningGraph(std::vector<Point2d> nodes, std::vector<std::vector<NodeId>> adjacency, double spacing,
                             double connect_radius, Bounds bounds)
    : nodes_(std::move(nodes)),
      adjacency_(std::move(adjacency)),
      spacing_(spacing),
      connect_radius_(connect_radius),
      bounds_(bounds) {
  columns_ = grid_count(bounds_.x_max - bounds_.x_min, spacing_);
  const int rows = grid_count(bounds_.y_max - bounds_.y_min, spacing_);
  grid_lookup_.assign(static_cast<std::size_t>(columns_) * static_cast<std::size_t>(rows), -1);
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const long c = std::lround((nodes_[id].x() - bounds_.x_min) / spacing_);
    const long r = std::lround((nodes_[id].y() - bounds_.y_min) / spacing_);
    grid_lookup_[static_cast<std::size_t>(r * columns_ + c)] = static_cast<NodeId>(id);
  }
}

bool PlanningGraph::adjacent(NodeId a, NodeId b) const {
  const auto adj = neighbors(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::size_t PlanningGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

std::optional<NodeId> PlanningGraph::find_node(const Point2d& p) const {
  const double fc = (p.x() - bounds_.x_min) / spacing_;
  const double fr = (p.y() - bounds_.y_min) / spacing_;
  const double c = std::round(fc);
  const double r = std::round(fr);
  if (std::abs(fc - c) > kGridSnap || std::abs(fr - r) > kGridSnap) return std::nullopt;
  if (c < 0 || r < 0 || c >= columns_) return std::nullopt;
  const auto index = static_cast<std::size_t>(r) * static_cast<std::size_t>(columns_) + static_cast<std::size_t>(c);
  if (index >= grid_lookup_.size() || grid_lookup_[index] < 0) return std::nullopt;
  return grid_lookup_[index];
}

Configurationd PlanningGraph::positions(std::span<const NodeId> ids) const {
  Configurationd config(2, static_cast<Eigen::Index>(ids.size()));
  for (std::size_t k = 0; k < ids.size(); ++k) config.col(static_cast<Eigen::Index>(k)) = position(ids[k]);
  return config;
}

int PlanningGraph::diameter_steps() const {
  int diameter = 0;
  std::vector<int> dist(nodes_.size());
  std::deque<NodeId> queue;
  for (std::size_t source = 0; source < nodes_.size(); ++source) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[source] = 0;
    queue.assign(1, static_cast<NodeId>(source));
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (NodeId v : neighbors(u)) {
        if (dist[static_cast<std::size_t>(v)] >= 0) continue;
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        diameter = std::max(diameter, dist[static_cast<std::size_t>(v)]);
        queue.push_back(v);
      }
    }
  }
  return diameter;
}

PlanningGraph build_planning_graph(const Workspace& workspace, double spacing, double connect_radius) {
  if (!(connect_radius > 0)) throw std::invalid_argument("connect radius must be positive");
  std::vector<Point2d> nodes = sample_grid(workspace, spacing);
  if (nodes.empty()) throw EmptyGraph("no grid node survives obstacle removal");

  const Bounds& b = workspace.bounds;
  const int cols = grid_count(b.x_max - b.x_min, spacing);
  const int rows = grid_count(b.y_max - b.y_min, spacing);
  std::vector<NodeId> lookup(static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows), -1);
  std::vector<std::pair<int, int>> cell(nodes.size());
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const int c = static_cast<int>(std::lround((nodes[id].x() - b.x_min) / spacing));
    const int r = static_cast<int>(std::lround((nodes[id].y() - b.y_min) / spacing));
    cell[id] = {c, r};
    lookup[static_cast<std::size_t>(r * cols + c)] = static_cast<NodeId>(id);
  }

  // integer offsets whose length is within the connection radius
  const int reach = static_cast<int>(std::floor(connect_radius / spacing + kGridSnap));
  const double limit = connect_radius * connect_radius * (1.0 + 1e-12);
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -reach; dy <= reach; ++dy)
    for (int dx = -reach; dx <= reach; ++dx)
      if ((dx != 0 || dy != 0) && (dx * dx + dy * dy) * spacing * spacing <= limit) offsets.emplace_back(dx, dy);

  std::vector<std::vector<NodeId>> adjacency(nodes.size());
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const auto [c, r] = cell[id];
    for (const auto& [dx, dy] : offsets) {
      const int nc = c + dx;
      const int nr = r + dy;
      if (nc < 0 || nr < 0 || nc >= cols || nr >= rows) continue;
      const NodeId other = lookup[static_cast<std::size_t>(nr * cols + nc)];
      if (other < 0 || other < static_cast<NodeId>(id)) continue;
      if (!workspace.segment_free(nodes[id], nodes[static_cast<std::size_t>(other)])) continue;
      adjacency[id].push_back(other);
      adjacency[static_cast<std::size_t>(other)].push_back(static_cast<NodeId>(id));
    }
  }
  for (auto& adj : adjacency) std::sort(adj.begin(), adj.end());
  return PlanningGraph(std::move(nodes), std::move(adjacency), spacing, connect_radius, workspace.bounds);
}

}  // namespace rcgp
