#pragma once

#include "stormbox/network.hpp"
#include "stormbox/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stormbox {

/// Read-only description of one controllable asset.
struct AssetInfo {
  std::string id;
  LinkKind kind = LinkKind::Orifice;
  std::string upstream_node;
  double max_depth = 0.0;  // m, of the upstream node
  double discharge_coefficient = 0.0;
  double full_open_area = 0.0;  // m^2, orifices only
  double crest_offset = 0.0;    // m above the upstream invert
  std::optional<Index> depth_index;  // position of the upstream depth in the state vector
};

struct ScenarioMetadata {
  std::string scenario;
  std::vector<std::string> state_labels;
  std::vector<AssetInfo> assets;
  double control_timestep = 0.0;  // s
  double target_outflow = 0.0;    // m^3/s, 0 when the scenario defines none
};

/// Maps the observed state vector to one setting per asset.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual Vector act(const Vector& state, double time) = 0;
};

/// setting_i = clamp(depth_i / max_depth_i, 0, 1).
Vector rule_based_actions(const Vector& depths, const Vector& max_depths);

/// Desired per-asset flows (m^3/s) that balance filling degrees while releasing `q_goal` in total.
Vector equal_filling_flows(const Vector& depths, const Vector& max_depths, double q_goal);

/// Equal-filling flows converted to orifice settings at the given heads (m).
Vector equal_filling_actions(const Vector& depths, const Vector& max_depths, const Vector& heads,
                             const Vector& discharge_coefficients, const Vector& areas, double q_goal);

class UncontrolledController final : public Controller {
 public:
  explicit UncontrolledController(const ScenarioMetadata& meta) : n_(static_cast<Index>(meta.assets.size())) {}
  Vector act(const Vector&, double) override { return Vector::Ones(n_); }

 private:
  Index n_;
};

class RuleBasedController final : public Controller {
 public:
  explicit RuleBasedController(const ScenarioMetadata& meta);
  Vector act(const Vector& state, double time) override;

 private:
  std::vector<Index> depth_index_;
  Vector max_depth_;
};

/// Orifice-only. Settings are computed at the largest head each orifice can see, so the
/// realized flow never exceeds the desired one while the basin stays below its max depth.
class EqualFillingController final : public Controller {
 public:
  explicit EqualFillingController(const ScenarioMetadata& meta);
  Vector act(const Vector& state, double time) override;

 private:
  std::vector<Index> depth_index_;
  Vector max_depth_;
  Vector heads_;
  Vector cd_;
  Vector area_;
  double q_goal_;
};

std::vector<std::string> controller_names();

/// Throws std::invalid_argument listing the valid names when `name` is unknown.
std::unique_ptr<Controller> make_controller(std::string_view name, const ScenarioMetadata& meta);

}  // namespace stormbox
