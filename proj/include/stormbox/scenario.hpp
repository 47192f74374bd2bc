#pragma once

#include "stormbox/engine.hpp"
#include "stormbox/metrics.hpp"
#include "stormbox/network.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stormbox {

enum class Quantity { Depth, Volume, Flow, FloodingRate, Setting, ExternalSeries };

std::string_view to_string(Quantity q);
std::optional<Quantity> parse_quantity(std::string_view name);

/// One observable value: an element id plus the quantity to read.
struct StateQuery {
  std::string target;
  Quantity quantity = Quantity::Depth;

  /// `<id>.<quantity>`, the trace column name.
  std::string label() const;
};

/// Checks that the query's target exists and has the right element kind for its quantity.
/// Returns an error message, or nullopt when the query resolves.
std::optional<std::string> check_query(const StateQuery& query, const Network& network);

/// Current value of `query`: depth m, volume m^3, flow m^3/s, setting in [0, 1],
/// flooding_rate m^3/s averaged over the last control step, external series step-held.
/// Throws ReferenceError naming the target when it does not resolve.
double lookup_state(const SimState& state, const Network& network, const StateQuery& query);

/// Declarative definition of one control problem.
struct ScenarioSpec {
  std::string name;
  Network network;
  double control_timestep = 900.0;  // s
  double duration = 0.0;            // s
  std::vector<StateQuery> observable_states;
  std::vector<std::string> controllable_assets;  // link ids
  metrics::MetricParams metric;
  std::vector<StateQuery> log_extra;
  std::vector<double> initial_settings;  // empty: each link's own initial setting
  std::optional<double> target_outflow;  // m^3/s, used by flow-targeting controllers
};

/// ScenarioSpec invariants; each entry is `<field path>: <message>`.
std::vector<std::string> check_scenario(const ScenarioSpec& spec);

/// One control step of a run.
struct TraceRecord {
  double time = 0.0;
  Vector observed;        // observable_states then log_extra, in config order
  Vector settings;        // per controllable asset
  Vector flood_volume;    // per non-outfall node, m^3 over the step
  Vector outfall_flow;    // per outfall, m^3/s at the end of the step
  Vector outfall_volume;  // per outfall, m^3 over the step
  double step_penalty = 0.0;
  double performance = 0.0;  // cumulative
};

/// Append-only log of a run; owned by one Environment.
struct SimTrace {
  std::vector<std::string> observed_labels;
  std::vector<std::string> asset_ids;
  std::vector<std::string> node_ids;  // nodes that can flood, in network order
  std::vector<std::string> outfall_ids;
  std::vector<TraceRecord> records;

  /// Column index of `label` in TraceRecord::observed, or nullopt.
  std::optional<Index> column(std::string_view label) const;
};

}  // namespace stormbox
