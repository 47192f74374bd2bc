#pragma once

#include "stormbox/controllers.hpp"
#include "stormbox/engine.hpp"
#include "stormbox/metrics.hpp"
#include "stormbox/scenario.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stormbox {

struct EnvOptions {
  std::optional<double> duration_override_s;
  std::optional<double> timestep_override_s;
  double max_substep_s = 30.0;
};

/// Names of the scenarios compiled into the library.
std::vector<std::string> builtin_scenarios();

/// Builds a ScenarioSpec from YAML text. `inp` paths resolve against `base_dir`.
/// Throws ConfigError with the offending field path, or inp::ParseError for the network.
ScenarioSpec parse_scenario_yaml(std::string_view yaml, const std::filesystem::path& base_dir = {});

/// A built-in scenario name or a path to a YAML config.
ScenarioSpec load_scenario_spec(std::string_view name_or_path);

/// The control loop around one scenario: observe with state(), act with step(),
/// score with performance().
class Environment {
 public:
  explicit Environment(ScenarioSpec spec, EnvOptions options = {});

  /// Observable states in config order. Does not modify the environment.
  Vector state() const;

  /// Applies one setting per asset for one control step; returns true once the run is over.
  /// Out-of-range actions are clamped and noted in warnings().
  bool step(std::span<const double> actions);
  bool step(const Vector& actions) { return step(std::span<const double>(actions.data(), static_cast<std::size_t>(actions.size()))); }

  double performance() const { return metric_.total(); }
  bool done() const { return steps_taken_ >= total_steps_; }
  double time() const { return sim_.clock; }
  std::size_t steps_taken() const { return steps_taken_; }
  std::size_t total_steps() const { return total_steps_; }

  const ScenarioSpec& spec() const { return spec_; }
  const Network& network() const { return engine_.network(); }
  const SimState& sim_state() const { return sim_; }
  const SimTrace& trace() const { return trace_; }
  const metrics::MetricAccumulator& metric() const { return metric_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  ScenarioMetadata metadata() const;

 private:
  static ScenarioSpec apply_overrides(ScenarioSpec spec, const EnvOptions& options);
  Vector observe(const std::vector<StateQuery>& queries) const;

  ScenarioSpec spec_;
  Engine engine_;
  SimState sim_;
  metrics::MetricAccumulator metric_;
  SimTrace trace_;
  std::vector<std::string> warnings_;
  std::vector<std::size_t> outfalls_;
  std::vector<Index> flood_nodes_;
  std::size_t total_steps_ = 0;
  std::size_t steps_taken_ = 0;
};

Environment load_scenario(std::string_view name_or_path, EnvOptions options = {});

}  // namespace stormbox
