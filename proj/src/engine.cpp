#include "stormbox/engine.hpp"

#include "stormbox/hydraulics.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace stormbox {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

bool is_delayed(const Link& link) {
  const auto* c = std::get_if<ConduitParams>(&link.params);
  return c && c->delay_steps > 0;
}

}  // namespace

struct Engine::NodeSolution {
  double depth = 0.0;
  double volume = 0.0;
  double flooded = 0.0;
  std::vector<double> out_volume;  // aligned with outgoing_[node]
};

double SimState::stored() const {
  double total = volume.sum();
  for (const auto& q : in_transit) total = std::accumulate(q.begin(), q.end(), total);
  return total;
}

Engine::Engine(Network network, std::vector<std::size_t> asset_links, EngineOptions options)
    : network_(std::move(network)), asset_links_(std::move(asset_links)), options_(options) {
  if (!(options_.max_substep_s > 0.0)) throw std::invalid_argument("max substep must be > 0");
  if (auto violations = validate_network(network_); !violations.empty()) {
    const auto& v = violations.front();
    throw ReferenceError("invalid network: " + std::string(to_string(v.element)) + " '" + v.id + "': " + v.message);
  }
  for (auto l : asset_links_) {
    if (l >= network_.links.size()) throw ReferenceError("asset index out of range");
    if (network_.links[l].kind() == LinkKind::Conduit) {
      throw ReferenceError("conduit '" + network_.links[l].id + "' cannot be a controllable asset");
    }
  }
  order_ = *topological_order(network_);

  const auto n = network_.nodes.size();
  geometry_.reserve(n);
  outgoing_.resize(n);
  is_outfall_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    geometry_.push_back(StorageGeometry::for_node(network_.nodes[i], network_));
    is_outfall_[i] = network_.nodes[i].kind == NodeKind::Outfall;
  }
  for (std::size_t l = 0; l < network_.links.size(); ++l) {
    const auto& link = network_.links[l];
    link_from_.push_back(network_.require_node(link.from_node));
    outgoing_[link_from_.back()].push_back(l);
    link_to_.push_back(network_.require_node(link.to_node));
    const auto* pump = std::get_if<PumpParams>(&link.params);
    pump_curve_.push_back(pump ? network_.find_curve(pump->curve) : nullptr);
  }
  for (const auto& sc : network_.subcatchments) {
    rain_series_.push_back(network_.find_series(network_.find_raingage(sc.raingage)->series));
    subcatchment_outlet_.push_back(network_.require_node(sc.outlet));
  }
}

int Engine::substeps_for(double dt) const {
  return std::max(1, static_cast<int>(std::ceil(dt / options_.max_substep_s - 1e-12)));
}

double Engine::rain_intensity(std::size_t subcatchment, double time) const {
  return rain_series_[subcatchment]->value_at(time);
}

SimState Engine::initial_state() const {
  const auto n = static_cast<Index>(network_.nodes.size());
  const auto m = static_cast<Index>(network_.links.size());
  SimState s;
  s.depth = Vector::Zero(n);
  s.volume = Vector::Zero(n);
  s.flood_volume_step = Vector::Zero(n);
  s.outfall_volume = Vector::Zero(n);
  s.outfall_flow = Vector::Zero(n);
  s.flow = Vector::Zero(m);
  s.setting = Vector::Zero(m);
  s.in_transit.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < n; ++i) {
    const auto& g = geometry_[static_cast<std::size_t>(i)];
    if (!g.holds_volume()) continue;
    s.depth[i] = network_.nodes[static_cast<std::size_t>(i)].initial_depth;
    s.volume[i] = g.volume_at(s.depth[i]);
  }
  for (Index l = 0; l < m; ++l) {
    const auto& link = network_.links[static_cast<std::size_t>(l)];
    s.setting[l] = link.kind() == LinkKind::Pump ? hydraulics::pump_state(link.initial_setting) : link.initial_setting;
  }
  s.ledger.initial_stored = s.volume.sum();
  return s;
}

// Outflow rate of `link` with its upstream node at `depth`. At depth 0 this is the
// right-hand limit, so conduits and running pumps report their full draw; the node solve
// caps the total at what is available.
double Engine::link_rate(std::size_t l, double depth, const SimState& state) const {
  const auto& link = network_.links[l];
  const double setting = state.setting[static_cast<Index>(l)];
  switch (link.kind()) {
    case LinkKind::Conduit: {
      const auto& c = std::get<ConduitParams>(link.params);
      return c.capacity ? *c.capacity : kInfinity;
    }
    case LinkKind::Orifice: {
      const auto& o = std::get<OrificeParams>(link.params);
      return hydraulics::orifice_flow(o, depth - o.crest_offset, setting);
    }
    case LinkKind::Weir:
      return hydraulics::weir_flow(std::get<WeirParams>(link.params), network_.nodes[link_from_[l]].max_depth, depth, setting);
    case LinkKind::Pump:
      if (hydraulics::pump_state(setting) == 0.0) return 0.0;
      return std::max(pump_curve_[l]->interpolate(std::max(depth, 0.0)), 0.0);
  }
  return 0.0;
}

void Engine::solve_node(std::size_t u, double available, double h, const SimState& state,
                        std::span<const std::uint8_t> blocked, NodeSolution& out) const {
  const auto& links = outgoing_[u];
  const auto& geom = geometry_[u];
  const double max_depth = network_.nodes[u].max_depth;
  out.out_volume.assign(links.size(), 0.0);
  out.flooded = 0.0;

  auto rates_at = [&](double d, std::vector<double>& r) {
    r.resize(links.size());
    for (std::size_t k = 0; k < links.size(); ++k) {
      r[k] = blocked[link_to_[links[k]]] ? 0.0 : link_rate(links[k], d, state);
    }
  };
  auto distribute = [&](double total, const std::vector<double>& r) {
    const double sum = std::accumulate(r.begin(), r.end(), 0.0);
    if (!(total > 0.0) || !(sum > 0.0)) return;
    for (std::size_t k = 0; k < r.size(); ++k) out.out_volume[k] = total * (r[k] / sum);
  };

  std::vector<double> rates;
  if (!(available > 0.0)) {
    out.depth = 0.0;
    out.volume = 0.0;
    return;
  }

  // Can the links drain everything within the substep even from an empty node?
  rates_at(0.0, rates);
  const auto unlimited = std::count_if(rates.begin(), rates.end(), [](double r) { return std::isinf(r); });
  if (unlimited > 0) {
    for (auto& r : rates) r = std::isinf(r) ? 1.0 : 0.0;
    distribute(available, rates);
    out.depth = 0.0;
    out.volume = 0.0;
    return;
  }
  if (h * std::accumulate(rates.begin(), rates.end(), 0.0) >= available) {
    distribute(available, rates);
    out.depth = 0.0;
    out.volume = 0.0;
    return;
  }

  auto residual = [&](double d) {
    rates_at(d, rates);
    return geom.volume_at(d) + h * std::accumulate(rates.begin(), rates.end(), 0.0) - available;
  };

  const double v_max = geom.volume_at(max_depth);
  if (residual(max_depth) <= 0.0) {
    double released = 0.0;
    for (std::size_t k = 0; k < rates.size(); ++k) {
      out.out_volume[k] = h * rates[k];
      released += out.out_volume[k];
    }
    out.depth = max_depth;
    out.volume = v_max;
    out.flooded = std::max(available - v_max - released, 0.0);
    return;
  }

  double lo = 0.0;
  double hi = max_depth;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  rates_at(hi, rates);
  if (geom.holds_volume()) {
    const double sum = std::accumulate(rates.begin(), rates.end(), 0.0);
    out.volume = sum > 0.0 ? std::min(geom.volume_at(hi), available) : available;
    out.depth = std::min(geom.depth_at(out.volume), max_depth);
  } else {
    out.volume = 0.0;
    out.depth = hi;
  }
  distribute(available - out.volume, rates);
}

void Engine::advance(SimState& state, double dt, std::span<const double> settings) const {
  if (settings.size() != asset_links_.size()) {
    throw StepError("expected " + std::to_string(asset_links_.size()) + " settings, got " +
                    std::to_string(settings.size()));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepError("control timestep must be positive and finite");
  for (std::size_t a = 0; a < settings.size(); ++a) {
    if (!std::isfinite(settings[a])) throw StepError("setting for asset " + std::to_string(a) + " is not finite");
    const auto l = asset_links_[a];
    const double s = std::clamp(settings[a], 0.0, 1.0);
    state.setting[static_cast<Index>(l)] =
        network_.links[l].kind() == LinkKind::Pump ? hydraulics::pump_state(s) : s;
  }

  const auto n = network_.nodes.size();
  const int nsub = substeps_for(dt);
  const double h = dt / nsub;
  state.flood_volume_step.setZero();
  state.outfall_volume.setZero();

  std::vector<double> inflow(n);
  std::vector<std::uint8_t> blocked(n);
  NodeSolution sol;

  for (int k = 0; k < nsub; ++k) {
    const double t = state.clock + k * h;
    std::fill(inflow.begin(), inflow.end(), 0.0);

    for (std::size_t s = 0; s < network_.subcatchments.size(); ++s) {
      const double v = hydraulics::runoff(network_.subcatchments[s], rain_intensity(s, t)) * h;
      inflow[subcatchment_outlet_[s]] += v;
      state.ledger.total_inflow += v;
    }

    for (std::size_t l = 0; l < network_.links.size(); ++l) {
      if (!is_delayed(network_.links[l])) continue;
      const auto lag = static_cast<std::size_t>(std::get<ConduitParams>(network_.links[l].params).delay_steps) *
                       static_cast<std::size_t>(nsub);
      auto& queue = state.in_transit[l];
      while (!queue.empty() && queue.size() >= lag) {
        inflow[link_to_[l]] += queue.front();
        queue.pop_front();
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      blocked[i] = 0;
      if (!is_outfall_[i]) continue;
      const auto& node = network_.nodes[i];
      double stage = -kInfinity;
      if (const auto* f = std::get_if<FixedStage>(&node.boundary)) stage = f->stage;
      if (const auto* s = std::get_if<SeriesStage>(&node.boundary)) stage = network_.find_series(s->series)->value_at(t);
      blocked[i] = stage > node.invert_elevation + node.max_depth ? 1 : 0;
    }
    state.outfall_flow.setZero();

    for (auto u : order_) {
      const auto ui = static_cast<Index>(u);
      if (is_outfall_[u]) {
        state.outfall_volume[ui] += inflow[u];
        state.outfall_flow[ui] = inflow[u] / h;
        state.ledger.total_outfall += inflow[u];
        continue;
      }
      solve_node(u, state.volume[ui] + inflow[u], h, state, blocked, sol);
      if (!std::isfinite(sol.depth) || !std::isfinite(sol.volume)) {
        throw DivergenceError("non-finite state at node '" + network_.nodes[u].id + "' at t=" + std::to_string(t));
      }
      state.depth[ui] = sol.depth;
      state.volume[ui] = sol.volume;
      state.flood_volume_step[ui] += sol.flooded;
      state.ledger.total_flooded += sol.flooded;
      const auto& links = outgoing_[u];
      for (std::size_t k2 = 0; k2 < links.size(); ++k2) {
        const auto l = links[k2];
        const double v = sol.out_volume[k2];
        state.flow[static_cast<Index>(l)] = v / h;
        if (is_delayed(network_.links[l])) {
          state.in_transit[l].push_back(v);
        } else {
          inflow[link_to_[l]] += v;
        }
      }
    }
  }
  state.clock += dt;
  state.last_dt = dt;
}

}  // namespace stormbox
