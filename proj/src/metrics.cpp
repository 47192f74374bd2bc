#include "stormbox/metrics.hpp"

#include <cmath>
#include <type_traits>

namespace stormbox::metrics {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Index resolve_node(const Network& net, const std::string& id, const std::string& field, bool outfall = false) {
  auto i = net.node_index(id);
  if (!i) throw ConfigError("metric.params." + field, "unknown node '" + id + "'");
  if (outfall && net.nodes[*i].kind != NodeKind::Outfall) {
    throw ConfigError("metric.params." + field, "node '" + id + "' is not an outfall");
  }
  return static_cast<Index>(*i);
}

Index resolve_link(const Network& net, const std::string& id, const std::string& field) {
  auto i = net.link_index(id);
  if (!i) throw ConfigError("metric.params." + field, "unknown link '" + id + "'");
  return static_cast<Index>(*i);
}

std::vector<Index> resolve_nodes(const Network& net, const std::vector<std::string>& ids, const std::string& field,
                                 bool outfall = false) {
  std::vector<Index> out;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    out.push_back(resolve_node(net, ids[k], field + "[" + std::to_string(k) + "]", outfall));
  }
  return out;
}

template <typename Source>
Eigen::ArrayXd gather(const Source& v, const std::vector<Index>& idx) {
  Eigen::ArrayXd out(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out[static_cast<Index>(k)] = v[idx[k]];
  return out;
}

void require_positive(double value, const std::string& field) {
  if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError("metric.params." + field, "must be > 0");
}

}  // namespace

bool DepthBounds::well_formed() const {
  if (lower.has_value() != lower_limit.has_value()) return false;
  if (!std::isfinite(upper) || !std::isfinite(upper_limit) || upper > upper_limit) return false;
  if (lower) {
    if (!std::isfinite(*lower) || !std::isfinite(*lower_limit)) return false;
    if (*lower_limit > *lower || *lower > upper) return false;
  }
  return true;
}

double depth_band_penalty(double depth, const DepthBounds& b) {
  if (depth > b.upper_limit) return kBandPenalty;
  if (b.lower_limit && depth < *b.lower_limit) return kBandPenalty;
  if (depth > b.upper) {
    return std::pow(kBandPenalty + 1.0, (depth - b.upper) / (b.upper_limit - b.upper)) - 1.0;
  }
  if (b.lower && depth < *b.lower) {
    return std::pow(kBandPenalty + 1.0, (*b.lower - depth) / (*b.lower - *b.lower_limit)) - 1.0;
  }
  return 0.0;
}

double outflow_penalty(double outflow, double threshold) {
  if (!(outflow > threshold)) return 0.0;
  return std::pow(1.0 - threshold / outflow, 6);
}

std::string_view kind_name(const MetricParams& params) {
  return std::visit(overloaded{
                        [](const OutletThresholdParams&) { return "flow_threshold_flood"; },
                        [](const LocationThresholdParams&) { return "flow_threshold_flood"; },
                        [](const CsoFloodParams&) { return "cso_flood"; },
                        [](const FloodVolumeParams&) { return "flood_volume"; },
                        [](const DeltaBandsParams&) { return "delta_bands"; },
                        [](const TssThresholdParams&) { return "tss_threshold"; },
                        [](const WeightedCsoParams&) { return "weighted_cso"; },
                    },
                    params);
}

MetricAccumulator::MetricAccumulator(MetricParams params, const Network& net) : params_(std::move(params)) {
  previous_flow_ = Vector::Zero(static_cast<Index>(net.links.size()));
  std::visit(overloaded{
                 [&](const OutletThresholdParams& p) {
                   require_positive(p.threshold, "threshold");
                   single_ = resolve_node(net, p.outfall, "outfall", true);
                   nodes_a_ = resolve_nodes(net, p.flood_nodes, "flood_nodes");
                 },
                 [&](const LocationThresholdParams& p) {
                   require_positive(p.threshold, "threshold");
                   if (p.locations.empty()) throw ConfigError("metric.params.locations", "must not be empty");
                   for (std::size_t k = 0; k < p.locations.size(); ++k) {
                     const auto f = "locations[" + std::to_string(k) + "]";
                     links_.push_back(resolve_link(net, p.locations[k].link, f + ".link"));
                     nodes_a_.push_back(resolve_node(net, p.locations[k].node, f + ".node"));
                   }
                 },
                 [&](const CsoFloodParams& p) {
                   nodes_a_ = resolve_nodes(net, p.cso_outfalls, "cso_outfalls", true);
                   nodes_b_ = resolve_nodes(net, p.flood_nodes, "flood_nodes");
                 },
                 [&](const FloodVolumeParams& p) { nodes_a_ = resolve_nodes(net, p.nodes, "nodes"); },
                 [&](const DeltaBandsParams& p) {
                   require_positive(p.outflow_threshold, "outflow_threshold");
                   for (std::size_t k = 0; k < p.basins.size(); ++k) {
                     const auto f = "basins[" + std::to_string(k) + "]";
                     if (!p.basins[k].bounds.well_formed()) {
                       throw ConfigError("metric.params." + f, "bounds must satisfy E_l <= O_l <= O_u <= E_u");
                     }
                     nodes_a_.push_back(resolve_node(net, p.basins[k].node, f + ".node"));
                   }
                   nodes_b_ = resolve_nodes(net, p.flood_nodes, "flood_nodes");
                   single_ = resolve_link(net, p.outflow_link, "outflow_link");
                 },
                 [&](const TssThresholdParams& p) {
                   require_positive(p.threshold, "threshold");
                   series_ = net.find_series(p.load_series);
                   if (!series_) throw ConfigError("metric.params.load_series", "unknown series '" + p.load_series + "'");
                   if (p.flood_nodes.empty()) {
                     for (Index i = 0; i < static_cast<Index>(net.nodes.size()); ++i) nodes_a_.push_back(i);
                   } else {
                     nodes_a_ = resolve_nodes(net, p.flood_nodes, "flood_nodes");
                   }
                 },
                 [&](const WeightedCsoParams& p) {
                   nodes_a_ = resolve_nodes(net, p.river_outfalls, "river_outfalls", true);
                   nodes_b_ = resolve_nodes(net, p.creek_outfalls, "creek_outfalls", true);
                   for (std::size_t k = 0; k < p.throttle_links.size(); ++k) {
                     links_.push_back(resolve_link(net, p.throttle_links[k], "throttle_links[" + std::to_string(k) + "]"));
                   }
                   single_ = resolve_node(net, p.wwtp_outfall, "wwtp_outfall", true);
                 },
             },
             params_);
}

Flags MetricAccumulator::flooded(const SimState& state, const std::vector<Index>& nodes) const {
  return gather(state.flood_volume_step, nodes) > 0.0;
}

bool MetricAccumulator::monotone() const { return !std::holds_alternative<WeightedCsoParams>(params_); }

double MetricAccumulator::update(const SimState& state, const Network&) {
  const double penalty = std::visit(
      overloaded{
          [&](const OutletThresholdParams& p) {
            return theta_step(state.outfall_flow[single_], flooded(state, nodes_a_), p.threshold, p.flood_penalty);
          },
          [&](const LocationThresholdParams& p) {
            return threshold_flood_step(gather(state.flow, links_), flooded(state, nodes_a_), p.threshold,
                                        p.flood_penalty);
          },
          [&](const CsoFloodParams& p) {
            return cso_flood_step(gather(state.outfall_volume, nodes_a_), gather(state.flood_volume_step, nodes_b_),
                                  p.flood_weight);
          },
          [&](const FloodVolumeParams&) { return flood_volume_step(gather(state.flood_volume_step, nodes_a_)); },
          [&](const DeltaBandsParams& p) {
            std::vector<DepthBounds> bounds;
            for (const auto& b : p.basins) bounds.push_back(b.bounds);
            return delta_depth_step(gather(state.depth, nodes_a_), bounds, flooded(state, nodes_b_),
                                    state.flow[single_], p.outflow_threshold);
          },
          [&](const TssThresholdParams& p) {
            return epsilon_tss_step(series_->value_at(state.clock), flooded(state, nodes_a_).any(), p.threshold,
                                    p.flood_penalty);
          },
          [&](const WeightedCsoParams& p) {
            Eigen::ArrayXd throttle(static_cast<Index>(links_.size()));
            for (std::size_t k = 0; k < links_.size(); ++k) {
              const auto l = links_[k];
              throttle[static_cast<Index>(k)] = std::abs(state.flow[l] - previous_flow_[l]) * state.last_dt;
            }
            return zeta_step(gather(state.outfall_volume, nodes_a_), gather(state.outfall_volume, nodes_b_), throttle,
                             state.outfall_volume[single_], p.weights);
          },
      },
      params_);
  previous_flow_ = state.flow;
  total_ += penalty;
  ++steps_;
  if (!std::isfinite(total_)) throw DivergenceError("performance metric became non-finite");
  return penalty;
}

}  // namespace stormbox::metrics
