#pragma once

#include <filesystem>
#include <string>

#include "rcgp/motion.hpp"
#include "rcgp/types.hpp"

namespace rcgp {

enum class TrajectoryFormat { Csv, Json };

/// CSV: header "t,agent,x,y", rows ordered by t then agent.
std::string format_trajectories_csv(const Motion& motion);
/// JSON: {"horizon": H, "agents": [[[x, y], ...], ...]}.
std::string format_trajectories_json(const Motion& motion);

Motion parse_trajectories_csv(const std::string& text);
Motion parse_trajectories_json(const std::string& text);

/// Throws IoError.
void export_trajectories(const Motion& motion, const std::filesystem::path& path, TrajectoryFormat format);
/// Format picked from the extension (.csv or .json). Throws IoError / ParseError.
Motion import_trajectories(const std::filesystem::path& path);

/// Writes positions.txt, edges.txt and rigidity.txt under `directory` for external plotting.
void emit_plot_data(const Motion& motion, double sensing_radius, const NoiseModel& noise,
                    const std::filesystem::path& directory);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace rcgp
