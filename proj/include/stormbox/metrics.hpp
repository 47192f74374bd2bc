#pragma once

// Per-timestep penalty functions. Each takes the quantities observed over one control
// step and returns that step's penalty; a scenario's performance is the running sum.

#include "stormbox/engine.hpp"
#include "stormbox/network.hpp"
#include "stormbox/types.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace stormbox::metrics {

/// Outlet exceedance plus a fixed charge per flooded basin:
/// max(Q - 0.5, 0) + 1e3 * #flooded. Zero at exactly the threshold.
template <typename FloodFlags>
double theta_step(double outlet_flow, const Eigen::ArrayBase<FloodFlags>& flooded,
                  double threshold = 0.5, double flood_penalty = 1e3) {
  const double exceedance = outlet_flow > threshold ? outlet_flow - threshold : 0.0;
  return exceedance + flood_penalty * static_cast<double>(flooded.count());
}

/// Per location: flood_penalty when flooding, else the exceedance over `threshold`.
template <typename Flows, typename FloodFlags>
double threshold_flood_step(const Eigen::ArrayBase<Flows>& flows, const Eigen::ArrayBase<FloodFlags>& flooded,
                            double threshold, double flood_penalty) {
  eigen_assert(flows.size() == flooded.size());
  const auto exceedance = (flows.derived().template cast<double>() - threshold).cwiseMax(0.0);
  return flooded.select(flood_penalty, exceedance).sum();
}

/// sum(cso) + flood_weight * sum(flood).
template <typename Cso, typename Flood>
double cso_flood_step(const Eigen::ArrayBase<Cso>& cso_volumes, const Eigen::ArrayBase<Flood>& flood_volumes,
                      double flood_weight = 1e6) {
  return cso_volumes.sum() + flood_weight * flood_volumes.sum();
}

template <typename Flood>
double flood_volume_step(const Eigen::ArrayBase<Flood>& flood_volumes) {
  return flood_volumes.sum();
}

/// Operational band [lower, upper] inside exceedance limits [lower_limit, upper_limit].
/// The lower pair may be absent (no penalty for low water).
struct DepthBounds {
  std::optional<double> lower;        // O_l
  double upper = 0.0;                 // O_u
  std::optional<double> lower_limit;  // E_l
  double upper_limit = 0.0;           // E_u

  /// E_l <= O_l <= O_u <= E_u with finite values; the lower pair is all or nothing.
  bool well_formed() const;
};

inline constexpr double kBandPenalty = 1e6;

/// 0 inside the band, (1e6 + 1)^x - 1 on the ramps where x runs 0 -> 1 from the band
/// edge to the exceedance limit, 1e6 beyond the limits.
double depth_band_penalty(double depth, const DepthBounds& bounds);

/// 0 up to the threshold, (1 - threshold / Q)^6 above it.
double outflow_penalty(double outflow, double threshold = 12.0);

template <typename Depths, typename FloodFlags>
double delta_depth_step(const Eigen::ArrayBase<Depths>& depths, const std::vector<DepthBounds>& bounds,
                        const Eigen::ArrayBase<FloodFlags>& flooded, double outflow,
                        double outflow_threshold = 12.0) {
  eigen_assert(static_cast<std::size_t>(depths.size()) == bounds.size());
  double total = 0.0;
  for (Index i = 0; i < depths.size(); ++i) total += depth_band_penalty(depths[i], bounds[static_cast<std::size_t>(i)]);
  return total + kBandPenalty * static_cast<double>(flooded.count()) + outflow_penalty(outflow, outflow_threshold);
}

/// Outlet sediment load over its threshold (kg/s), or a flat flood penalty.
inline double epsilon_tss_step(double tss_load, bool flooded, double threshold = 1.05, double flood_penalty = 1e6) {
  if (flooded) return flood_penalty;
  return tss_load > threshold ? tss_load - threshold : 0.0;
}

struct ZetaWeights {
  double river = 1.0;
  double creek = 2.0;
  double throttle = 0.01;
  double wwtp = 0.1;
};

/// river + 2 creek + 0.01 throttle - 0.1 wwtp, all volumes over the step. May be negative.
template <typename River, typename Creek, typename Throttle>
double zeta_step(const Eigen::ArrayBase<River>& river_cso, const Eigen::ArrayBase<Creek>& creek_cso,
                 const Eigen::ArrayBase<Throttle>& throttle_changes, double wwtp_volume,
                 const ZetaWeights& w = {}) {
  return w.river * river_cso.sum() + w.creek * creek_cso.sum() + w.throttle * throttle_changes.sum() -
         w.wwtp * wwtp_volume;
}

// ---------------------------------------------------------------------------
// Configured metrics

/// Theta form: one outlet (an outfall node's inflow) and a set of basins.
struct OutletThresholdParams {
  std::string outfall;
  std::vector<std::string> flood_nodes;
  double threshold = 0.5;
  double flood_penalty = 1e3;
};

/// Per-location form: each link flow paired with the node whose flooding overrides it.
struct LocationThresholdParams {
  struct Location {
    std::string link;
    std::string node;
  };
  std::vector<Location> locations;
  double threshold = 0.11;
  double flood_penalty = 1e6;
};

struct CsoFloodParams {
  std::vector<std::string> cso_outfalls;
  std::vector<std::string> flood_nodes;
  double flood_weight = 1e6;
};

struct FloodVolumeParams {
  std::vector<std::string> nodes;
};

struct DeltaBandsParams {
  struct Basin {
    std::string node;
    DepthBounds bounds;
  };
  std::vector<Basin> basins;
  std::vector<std::string> flood_nodes;
  std::string outflow_link;
  double outflow_threshold = 12.0;
};

struct TssThresholdParams {
  std::string load_series;
  std::vector<std::string> flood_nodes;  // empty: every node counts
  double threshold = 1.05;
  double flood_penalty = 1e6;
};

struct WeightedCsoParams {
  std::vector<std::string> river_outfalls;
  std::vector<std::string> creek_outfalls;
  std::vector<std::string> throttle_links;
  std::string wwtp_outfall;
  ZetaWeights weights;
};

using MetricParams = std::variant<OutletThresholdParams, LocationThresholdParams, CsoFloodParams,
                                  FloodVolumeParams, DeltaBandsParams, TssThresholdParams, WeightedCsoParams>;

/// Config name of the metric kind (`flow_threshold_flood`, `cso_flood`, ...).
std::string_view kind_name(const MetricParams& params);

/// Running sum of per-step penalties for one configured metric.
///
/// Element ids are resolved once against the network at construction; `update` is then
/// fed the post-step state once per control step.
class MetricAccumulator {
 public:
  MetricAccumulator(MetricParams params, const Network& network);

  /// Adds and returns the penalty for the control step that ended at `state.clock`.
  double update(const SimState& state, const Network& network);

  double total() const { return total_; }
  std::size_t steps() const { return steps_; }
  const MetricParams& params() const { return params_; }
  std::string_view kind() const { return kind_name(params_); }
  /// Whether every per-step term is non-negative (so the total never decreases).
  bool monotone() const;

 private:
  Flags flooded(const SimState& state, const std::vector<Index>& nodes) const;

  MetricParams params_;
  double total_ = 0.0;
  std::size_t steps_ = 0;
  std::vector<Index> nodes_a_;
  std::vector<Index> nodes_b_;
  std::vector<Index> links_;
  Index single_ = -1;
  const TimeSeries* series_ = nullptr;
  Vector previous_flow_;
};

}  // namespace stormbox::metrics
