#pragma once

#include <string>
#include <vector>

#include "routegame/scenario.hpp"

namespace routegame {

/// RFC 4180 CSV with LF line endings; NaN cells are written empty.
void write_metrics_csv(const std::string& path, const MetricsTable& table);

/// JSON-lines trajectory dump, one record per step with the full plan tensor
/// flattened agent-major (agent, slot, path).
void write_trajectory_dump(const std::string& path, const Trajectory& traj);

/// JSON-lines event log of the applied fault/repair schedule.
void write_event_log(const std::string& path, const std::vector<EventSpec>& events);

struct DumpState {
    int t = 0;
    int theta = 0;
    int agents = 0, slots = 0, paths = 0;
    std::vector<double> x;
};
/// Last record of a trajectory dump. Throws std::runtime_error when the file
/// is missing, empty or malformed.
DumpState read_last_dump_state(const std::string& path);

struct Series {
    std::string label;
    std::vector<double> y;  // NaN = gap
};
/// Static line chart of one or more series over the step index.
void write_series_svg(const std::string& path, const std::string& title,
                      const std::vector<Series>& series);

/// Convenience: the two standard charts (potential, strategy variation) from
/// a metrics table. Returns the written file paths.
std::vector<std::string> write_standard_plots(const std::string& out_dir,
                                              const MetricsTable& table);

}  // namespace routegame
