#include "stormbox/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace stormbox {

namespace {

constexpr std::pair<Quantity, std::string_view> kQuantityNames[] = {
    {Quantity::Depth, "depth"},
    {Quantity::Volume, "volume"},
    {Quantity::Flow, "flow"},
    {Quantity::FloodingRate, "flooding_rate"},
    {Quantity::Setting, "setting"},
    {Quantity::ExternalSeries, "external_series"},
};

bool is_node_quantity(Quantity q) {
  return q == Quantity::Depth || q == Quantity::Volume || q == Quantity::FloodingRate;
}

}  // namespace

std::string_view to_string(Quantity q) {
  for (const auto& [k, name] : kQuantityNames) {
    if (k == q) return name;
  }
  return "?";
}

std::optional<Quantity> parse_quantity(std::string_view name) {
  for (const auto& [k, n] : kQuantityNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string StateQuery::label() const { return target + "." + std::string(to_string(quantity)); }

std::optional<std::string> check_query(const StateQuery& query, const Network& network) {
  if (query.quantity == Quantity::ExternalSeries) {
    if (!network.find_series(query.target)) return "unknown series '" + query.target + "'";
  } else if (is_node_quantity(query.quantity)) {
    if (!network.node_index(query.target)) return "unknown node '" + query.target + "'";
  } else if (!network.link_index(query.target)) {
    return "unknown link '" + query.target + "'";
  }
  return std::nullopt;
}

double lookup_state(const SimState& state, const Network& network, const StateQuery& query) {
  if (auto error = check_query(query, network)) throw ReferenceError(*error);
  switch (query.quantity) {
    case Quantity::Depth: return state.depth[static_cast<Index>(network.require_node(query.target))];
    case Quantity::Volume: return state.volume[static_cast<Index>(network.require_node(query.target))];
    case Quantity::FloodingRate: {
      if (!(state.last_dt > 0.0)) return 0.0;
      return state.flood_volume_step[static_cast<Index>(network.require_node(query.target))] / state.last_dt;
    }
    case Quantity::Flow: return state.flow[static_cast<Index>(network.require_link(query.target))];
    case Quantity::Setting: return state.setting[static_cast<Index>(network.require_link(query.target))];
    case Quantity::ExternalSeries: return network.find_series(query.target)->value_at(state.clock);
  }
  return 0.0;
}

std::vector<std::string> check_scenario(const ScenarioSpec& spec) {
  std::vector<std::string> errors;
  const auto& net = spec.network;
  if (!(spec.control_timestep > 0.0) || !std::isfinite(spec.control_timestep)) {
    errors.push_back("control_timestep_s: must be > 0");
  } else {
    const double steps = spec.duration / spec.control_timestep;
    if (!(spec.duration > 0.0) || std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
      errors.push_back("duration_s: must be a positive multiple of control_timestep_s");
    }
  }
  if (spec.observable_states.empty()) errors.push_back("states: must not be empty");
  auto check_list = [&](const std::vector<StateQuery>& qs, const std::string& field) {
    for (std::size_t k = 0; k < qs.size(); ++k) {
      if (auto e = check_query(qs[k], net)) errors.push_back(field + "[" + std::to_string(k) + "]: " + *e);
    }
  };
  check_list(spec.observable_states, "states");
  check_list(spec.log_extra, "log");

  std::set<std::string> seen;
  for (std::size_t k = 0; k < spec.controllable_assets.size(); ++k) {
    const auto& id = spec.controllable_assets[k];
    const auto field = "actions[" + std::to_string(k) + "]";
    auto l = net.link_index(id);
    if (!l) {
      errors.push_back(field + ": unknown link '" + id + "'");
    } else if (net.links[*l].kind() == LinkKind::Conduit) {
      errors.push_back(field + ": '" + id + "' is a conduit; only orifices, weirs and pumps are controllable");
    }
    if (!seen.insert(id).second) errors.push_back(field + ": duplicate asset '" + id + "'");
  }
  if (!spec.initial_settings.empty()) {
    if (spec.initial_settings.size() != spec.controllable_assets.size()) {
      errors.push_back("initial_settings: expected one value per action");
    }
    for (std::size_t k = 0; k < spec.initial_settings.size(); ++k) {
      const double s = spec.initial_settings[k];
      if (!(s >= 0.0 && s <= 1.0)) errors.push_back("initial_settings[" + std::to_string(k) + "]: must lie in [0, 1]");
    }
  }
  if (spec.target_outflow && !(*spec.target_outflow > 0.0)) errors.push_back("target_outflow: must be > 0");
  return errors;
}

std::optional<Index> SimTrace::column(std::string_view label) const {
  auto it = std::find(observed_labels.begin(), observed_labels.end(), label);
  if (it == observed_labels.end()) return std::nullopt;
  return static_cast<Index>(std::distance(observed_labels.begin(), it));
}

}  // namespace stormbox
