#include "stormbox/controllers.hpp"

#include "stormbox/hydraulics.hpp"

#include <stdexcept>

namespace stormbox {

namespace {

std::vector<Index> depth_indices(const ScenarioMetadata& meta, std::string_view controller) {
  std::vector<Index> out;
  for (const auto& a : meta.assets) {
    if (!a.depth_index) {
      throw std::invalid_argument(std::string(controller) + " needs the depth of '" + a.upstream_node +
                                  "' (upstream of '" + a.id + "') among the observable states");
    }
    out.push_back(*a.depth_index);
  }
  return out;
}

Vector max_depths(const ScenarioMetadata& meta) {
  Vector out(static_cast<Index>(meta.assets.size()));
  for (Index i = 0; i < out.size(); ++i) out[i] = meta.assets[static_cast<std::size_t>(i)].max_depth;
  return out;
}

Vector gather(const Vector& state, const std::vector<Index>& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (Index i = 0; i < out.size(); ++i) out[i] = state[idx[static_cast<std::size_t>(i)]];
  return out;
}

}  // namespace

Vector rule_based_actions(const Vector& depths, const Vector& max_depths) {
  return (depths.array() / max_depths.array()).cwiseMax(0.0).cwiseMin(1.0).matrix();
}

Vector equal_filling_flows(const Vector& depths, const Vector& max_depths, double q_goal) {
  const Index n = depths.size();
  Vector flows = Vector::Zero(n);
  if (n == 0) return flows;
  const Eigen::ArrayXd f = (depths.array() / max_depths.array()).cwiseMax(0.0);
  const double mean = f.mean();
  if (!(mean > 0.0)) return flows;
  const Eigen::ArrayXd psi = (f - mean).cwiseMax(0.0);
  const double total = psi.sum();
  if (!(total > 0.0)) return Vector::Constant(n, q_goal / static_cast<double>(n));
  return (psi / total * q_goal).matrix();
}

Vector equal_filling_actions(const Vector& depths, const Vector& max_depths, const Vector& heads,
                             const Vector& discharge_coefficients, const Vector& areas, double q_goal) {
  const Vector flows = equal_filling_flows(depths, max_depths, q_goal);
  Vector settings(flows.size());
  for (Index i = 0; i < flows.size(); ++i) {
    settings[i] = hydraulics::orifice_setting_for_flow(flows[i], discharge_coefficients[i], areas[i], heads[i]);
  }
  return settings;
}

RuleBasedController::RuleBasedController(const ScenarioMetadata& meta)
    : depth_index_(depth_indices(meta, "rule-based")), max_depth_(max_depths(meta)) {}

Vector RuleBasedController::act(const Vector& state, double) {
  return rule_based_actions(gather(state, depth_index_), max_depth_);
}

EqualFillingController::EqualFillingController(const ScenarioMetadata& meta)
    : depth_index_(depth_indices(meta, "equal-filling")), max_depth_(max_depths(meta)), q_goal_(meta.target_outflow) {
  const auto n = static_cast<Index>(meta.assets.size());
  heads_.resize(n);
  cd_.resize(n);
  area_.resize(n);
  for (Index i = 0; i < n; ++i) {
    const auto& a = meta.assets[static_cast<std::size_t>(i)];
    if (a.kind != LinkKind::Orifice) throw std::invalid_argument("equal-filling supports orifices only; '" + a.id + "' is not one");
    heads_[i] = a.max_depth - a.crest_offset;
    cd_[i] = a.discharge_coefficient;
    area_[i] = a.full_open_area;
  }
  if (!(q_goal_ > 0.0)) throw std::invalid_argument("equal-filling needs a positive target outflow");
}

Vector EqualFillingController::act(const Vector& state, double) {
  return equal_filling_actions(gather(state, depth_index_), max_depth_, heads_, cd_, area_, q_goal_);
}

std::vector<std::string> controller_names() { return {"uncontrolled", "rule-based", "equal-filling"}; }

std::unique_ptr<Controller> make_controller(std::string_view name, const ScenarioMetadata& meta) {
  if (name == "uncontrolled") return std::make_unique<UncontrolledController>(meta);
  if (name == "rule-based") return std::make_unique<RuleBasedController>(meta);
  if (name == "equal-filling") return std::make_unique<EqualFillingController>(meta);
  std::string valid;
  for (const auto& n : controller_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown controller '" + std::string(name) + "' (valid: " + valid + ")");
}

}  // namespace stormbox
