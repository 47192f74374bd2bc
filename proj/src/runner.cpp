#include "stormbox/runner.hpp"

#include "stormbox/format.hpp"

#include <algorithm>
#include <future>
#include <iomanip>
#include <sstream>

namespace stormbox {

RunSummary run_controller(Environment& env, Controller& controller, std::string name) {
  RunSummary summary;
  summary.controller = std::move(name);
  while (!env.done()) {
    const Vector actions = controller.act(env.state(), env.time());
    env.step(actions);
    const auto& rec = env.trace().records.back();
    if (rec.outfall_flow.size() > 0) summary.peak_outfall_flow = std::max(summary.peak_outfall_flow, rec.outfall_flow.maxCoeff());
    summary.total_flood_volume += rec.flood_volume.sum();
  }
  summary.performance = env.performance();
  return summary;
}

RunSummary run_named(std::string_view scenario, std::string_view controller, const EnvOptions& options,
                     std::string* csv) {
  auto env = load_scenario(scenario, options);
  auto ctl = make_controller(controller, env.metadata());
  auto summary = run_controller(env, *ctl, std::string(controller));
  if (csv) {
    std::ostringstream out;
    write_trace_csv(env.trace(), out);
    *csv = out.str();
  }
  return summary;
}

std::vector<RunSummary> compare(std::string_view scenario, const std::vector<std::string>& controllers,
                                const EnvOptions& options) {
  // Fail fast on bad names before spawning work.
  const auto names = controller_names();
  for (const auto& c : controllers) {
    if (std::find(names.begin(), names.end(), c) == names.end()) make_controller(c, {});  // throws, listing names
  }
  const std::string scenario_name(scenario);
  std::vector<std::future<RunSummary>> jobs;
  for (const auto& c : controllers) {
    jobs.push_back(std::async(std::launch::async, [&, c] { return run_named(scenario_name, c, options); }));
  }
  std::vector<RunSummary> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  out << "time_s";
  for (const auto& l : trace.observed_labels) out << ',' << l;
  for (const auto& a : trace.asset_ids) out << ',' << a << ".setting";
  for (const auto& n : trace.node_ids) out << ",flood_" << n;
  for (const auto& o : trace.outfall_ids) out << ",outflow_" << o;
  out << ",performance_cumulative\n";
  auto row = [&](const Vector& v) {
    for (Index i = 0; i < v.size(); ++i) out << ',' << format_number(v[i]);
  };
  for (const auto& r : trace.records) {
    out << format_number(r.time);
    row(r.observed);
    row(r.settings);
    row(r.flood_volume);
    row(r.outfall_flow);
    out << ',' << format_number(r.performance) << '\n';
  }
}

void write_comparison_table(const std::vector<RunSummary>& rows, std::ostream& out) {
  std::size_t width = 10;
  for (const auto& r : rows) width = std::max(width, r.controller.size());
  out << std::left << std::setw(static_cast<int>(width)) << "controller" << "  " << std::right << std::setw(14)
      << "performance" << "  " << std::setw(14) << "peak_outflow" << "  " << std::setw(14) << "flood_volume" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.controller << "  " << std::right << std::setw(14)
        << format_number(r.performance) << "  " << std::setw(14) << format_number(r.peak_outfall_flow) << "  "
        << std::setw(14) << format_number(r.total_flood_volume) << '\n';
  }
}

void write_comparison_csv(const std::vector<RunSummary>& rows, std::ostream& out) {
  out << "controller,performance,peak_outflow_m3s,flood_volume_m3\n";
  for (const auto& r : rows) {
    out << r.controller << ',' << format_number(r.performance) << ',' << format_number(r.peak_outfall_flow) << ','
        << format_number(r.total_flood_volume) << '\n';
  }
}

}  // namespace stormbox
