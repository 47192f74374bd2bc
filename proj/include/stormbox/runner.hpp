#pragma once

#include "stormbox/controllers.hpp"
#include "stormbox/environment.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace stormbox {

struct RunSummary {
  std::string controller;
  double performance = 0.0;
  double peak_outfall_flow = 0.0;   // m^3/s, largest logged outfall inflow
  double total_flood_volume = 0.0;  // m^3, all nodes
};

/// Drives `env` to completion with `controller`, observing before every step.
RunSummary run_controller(Environment& env, Controller& controller, std::string name = {});

/// Loads the scenario and runs the named controller on it. Self-contained per call,
/// so several calls may run on different threads.
RunSummary run_named(std::string_view scenario, std::string_view controller, const EnvOptions& options = {},
                     std::string* csv = nullptr);

/// One run per controller, executed concurrently; results keep the input order.
std::vector<RunSummary> compare(std::string_view scenario, const std::vector<std::string>& controllers,
                                const EnvOptions& options = {});

/// Header plus one row per control step, LF line endings, shortest round-trip numbers.
void write_trace_csv(const SimTrace& trace, std::ostream& out);

void write_comparison_table(const std::vector<RunSummary>& rows, std::ostream& out);
void write_comparison_csv(const std::vector<RunSummary>& rows, std::ostream& out);

}  // namespace stormbox
