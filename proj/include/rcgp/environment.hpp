#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rcgp/types.hpp"

namespace rcgp {

struct Bounds {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Rectangular workspace with polygonal obstacles.
struct Workspace {
  Bounds bounds;
  std::vector<Polygon> obstacles;

  /// Throws ValidationError on an empty rectangle or a non-simple obstacle.
  void validate() const;

  bool in_bounds(const Point2d& p) const;
  /// Inside or on any obstacle.
  bool blocked(const Point2d& p) const;
  /// Segment stays in bounds and clear of every obstacle.
  bool segment_free(const Point2d& p, const Point2d& q) const;

  friend bool operator==(const Workspace&, const Workspace&) = default;
};

/// Grid points at (x_min + a*spacing, y_min + b*spacing) that avoid every obstacle, y-major.
std::vector<Point2d> sample_grid(const Workspace& workspace, double spacing);

/// Immutable roadmap shared by all agents.
class PlanningGraph {
 public:
  PlanningGraph(std::vector<Point2d> nodes, std::vector<std::vector<NodeId>> adjacency, double spacing,
                double connect_radius, Bounds bounds);

  std::size_t size() const { return nodes_.size(); }
  const Point2d& position(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<Point2d>& nodes() const { return nodes_; }
  std::span<const NodeId> neighbors(NodeId id) const { return adjacency_[static_cast<std::size_t>(id)]; }
  bool adjacent(NodeId a, NodeId b) const;
  double spacing() const { return spacing_; }
  double connect_radius() const { return connect_radius_; }
  std::size_t edge_count() const;

  /// Node sitting exactly (to rounding) on p, if any.
  std::optional<NodeId> find_node(const Point2d& p) const;

  Configurationd positions(std::span<const NodeId> ids) const;

  /// Longest shortest-path hop count between connected node pairs.
  int diameter_steps() const;

 private:
  std::vector<Point2d> nodes_;
  std::vector<std::vector<NodeId>> adjacency_;
  double spacing_;
  double connect_radius_;
  Bounds bounds_;
  int columns_ = 0;
  std::vector<NodeId> grid_lookup_;  // (row * columns + col) -> node id or -1
};

PlanningGraph build_planning_graph(const Workspace& workspace, double spacing, double connect_radius);

}  // namespace rcgp
