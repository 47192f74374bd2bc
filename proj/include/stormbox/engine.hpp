#pragma once

#include "stormbox/network.hpp"
#include "stormbox/types.hpp"

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

namespace stormbox {

/// Cumulative volumes since t = 0, all m^3.
struct MassLedger {
  double initial_stored = 0.0;
  double total_inflow = 0.0;
  double total_outfall = 0.0;
  double total_flooded = 0.0;

  /// total_inflow - (stored - initial_stored + total_outfall + total_flooded)
  double residual(double stored) const {
    return total_inflow - (stored - initial_stored + total_outfall + total_flooded);
  }
};

/// Hydraulic state of a network at one instant. Vectors are indexed like
/// Network::nodes / Network::links.
struct SimState {
  double clock = 0.0;    // s
  double last_dt = 0.0;  // length of the most recent control step, s

  Vector depth;              // m
  Vector volume;             // m^3
  Vector flood_volume_step;  // m^3 lost to flooding during the last control step
  Vector outfall_volume;     // m^3 received by each outfall during the last control step
  Vector outfall_flow;       // m^3/s into each outfall over the final substep

  Vector flow;     // m^3/s per link over the final substep
  Vector setting;  // [0, 1] per link

  std::vector<std::deque<double>> in_transit;  // per link, volumes (m^3) queued in delayed conduits

  MassLedger ledger;

  /// Stored volume: nodes plus water in transit through delayed conduits.
  double stored() const;
};

struct EngineOptions {
  /// Upper bound on the routing substep; N_sub = ceil(dt_control / max_substep).
  double max_substep_s = 30.0;
};

/// Storage routing over a DAG of nodes.
///
/// Each substep: runoff enters outlet nodes, then nodes are solved in topological order.
/// A node's end-of-substep depth is found implicitly from
///   V(d) + dt * sum_l q_l(d) = V0 + V_in,
/// so outflow can never exceed the water available; volume above max depth is flooded
/// and leaves the system. Conduits pass water through, optionally after a whole-step delay.
class Engine {
 public:
  Engine(Network network, std::vector<std::size_t> asset_links, EngineOptions options = {});

  // Holds pointers into its own network: movable, not copyable.
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;
  Engine(Engine&&) noexcept = default;
  Engine& operator=(Engine&&) noexcept = default;

  SimState initial_state() const;

  /// Applies `settings` to the asset links and integrates one control step of length `dt`.
  void advance(SimState& state, double dt, std::span<const double> settings) const;

  const Network& network() const { return network_; }
  std::span<const std::size_t> asset_links() const { return asset_links_; }
  const EngineOptions& options() const { return options_; }
  int substeps_for(double dt) const;

  double rain_intensity(std::size_t subcatchment, double time) const;

 private:
  struct NodeSolution;
  void solve_node(std::size_t node, double available, double h, const SimState& state,
                  std::span<const std::uint8_t> blocked, NodeSolution& out) const;
  double link_rate(std::size_t link, double depth, const SimState& state) const;

  Network network_;
  std::vector<std::size_t> asset_links_;
  EngineOptions options_;
  std::vector<std::size_t> order_;
  std::vector<StorageGeometry> geometry_;
  std::vector<std::vector<std::size_t>> outgoing_;
  std::vector<const TimeSeries*> rain_series_;
  std::vector<std::size_t> subcatchment_outlet_;
  std::vector<std::size_t> link_from_;
  std::vector<std::size_t> link_to_;
  std::vector<const Curve*> pump_curve_;
  std::vector<bool> is_outfall_;
};

}  // namespace stormbox
