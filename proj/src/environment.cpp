#include "stormbox/environment.hpp"

#include "builtin_scenarios.hpp"
#include "stormbox/format.hpp"
#include "stormbox/inp.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace stormbox {

namespace {

namespace fs = std::filesystem;

constexpr std::string_view kBuiltin[] = {"theta", "gamma-mini"};

std::string builtin_yaml_name(std::string_view name) {
  std::string file(name);
  std::replace(file.begin(), file.end(), '-', '_');
  return file + ".yaml";
}

std::string read_file(const fs::path& path, const std::string& field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(field, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// YAML helpers: every failure names the field path.

const YAML::Node& require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) throw ConfigError(path, "expected a mapping");
  return node;
}

YAML::Node field(const YAML::Node& map, const std::string& key, const std::string& path) {
  YAML::Node v = map[key];
  if (!v) throw ConfigError(path.empty() ? key : path + "." + key, "missing required field");
  return v;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::string as_string(const YAML::Node& v, const std::string& path) {
  if (!v.IsScalar()) throw ConfigError(path, "expected a string");
  return v.Scalar();
}

double as_number(const YAML::Node& v, const std::string& path) {
  if (!v.IsScalar()) throw ConfigError(path, "expected a number");
  auto x = parse_number(v.Scalar());
  if (!x) throw ConfigError(path, "expected a number, got '" + v.Scalar() + "'");
  return *x;
}

std::vector<std::string> as_strings(const YAML::Node& v, const std::string& path) {
  if (!v.IsSequence()) throw ConfigError(path, "expected a list");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_string(v[i], at(path, i)));
  return out;
}

std::vector<std::string> opt_strings(const YAML::Node& map, const std::string& key, const std::string& path) {
  if (!map[key]) return {};
  return as_strings(map[key], join(path, key));
}

double opt_number(const YAML::Node& map, const std::string& key, const std::string& path, double fallback) {
  if (!map[key]) return fallback;
  return as_number(map[key], join(path, key));
}

std::optional<double> maybe_number(const YAML::Node& map, const std::string& key, const std::string& path) {
  if (!map[key]) return std::nullopt;
  return as_number(map[key], join(path, key));
}

void reject_unknown(const YAML::Node& map, std::initializer_list<std::string_view> known, const std::string& path) {
  for (const auto& kv : map) {
    const auto key = kv.first.Scalar();
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(join(path, key), "unknown field");
  }
}

std::vector<StateQuery> parse_queries(const YAML::Node& v, const std::string& path) {
  if (!v.IsSequence()) throw ConfigError(path, "expected a list");
  std::vector<StateQuery> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto p = at(path, i);
    require_map(v[i], p);
    reject_unknown(v[i], {"id", "quantity"}, p);
    StateQuery q;
    q.target = as_string(field(v[i], "id", p), join(p, "id"));
    const auto name = as_string(field(v[i], "quantity", p), join(p, "quantity"));
    auto quantity = parse_quantity(name);
    if (!quantity) {
      throw ConfigError(join(p, "quantity"),
                        "unknown quantity '" + name + "' (depth, volume, flow, flooding_rate, setting, external_series)");
    }
    q.quantity = *quantity;
    out.push_back(std::move(q));
  }
  return out;
}

metrics::MetricParams parse_metric(const YAML::Node& v) {
  const std::string path = "metric";
  require_map(v, path);
  reject_unknown(v, {"kind", "params"}, path);
  const auto kind = as_string(field(v, "kind", path), "metric.kind");
  YAML::Node params = v["params"] ? v["params"] : YAML::Node(YAML::NodeType::Map);
  const std::string pp = "metric.params";
  require_map(params, pp);

  if (kind == "flow_threshold_flood") {
    if (params["locations"]) {
      reject_unknown(params, {"locations", "threshold", "flood_penalty"}, pp);
      metrics::LocationThresholdParams p;
      const auto& locs = params["locations"];
      if (!locs.IsSequence()) throw ConfigError(pp + ".locations", "expected a list");
      for (std::size_t i = 0; i < locs.size(); ++i) {
        const auto lp = at(pp + ".locations", i);
        require_map(locs[i], lp);
        reject_unknown(locs[i], {"link", "node"}, lp);
        p.locations.push_back({as_string(field(locs[i], "link", lp), lp + ".link"),
                               as_string(field(locs[i], "node", lp), lp + ".node")});
      }
      p.threshold = opt_number(params, "threshold", pp, p.threshold);
      p.flood_penalty = opt_number(params, "flood_penalty", pp, p.flood_penalty);
      return p;
    }
    reject_unknown(params, {"outfall", "flood_nodes", "threshold", "flood_penalty"}, pp);
    metrics::OutletThresholdParams p;
    p.outfall = as_string(field(params, "outfall", pp), pp + ".outfall");
    p.flood_nodes = opt_strings(params, "flood_nodes", pp);
    p.threshold = opt_number(params, "threshold", pp, p.threshold);
    p.flood_penalty = opt_number(params, "flood_penalty", pp, p.flood_penalty);
    return p;
  }
  if (kind == "cso_flood") {
    reject_unknown(params, {"cso_outfalls", "flood_nodes", "flood_weight"}, pp);
    metrics::CsoFloodParams p;
    p.cso_outfalls = as_strings(field(params, "cso_outfalls", pp), pp + ".cso_outfalls");
    p.flood_nodes = opt_strings(params, "flood_nodes", pp);
    p.flood_weight = opt_number(params, "flood_weight", pp, p.flood_weight);
    return p;
  }
  if (kind == "flood_volume") {
    reject_unknown(params, {"nodes"}, pp);
    metrics::FloodVolumeParams p;
    p.nodes = as_strings(field(params, "nodes", pp), pp + ".nodes");
    return p;
  }
  if (kind == "delta_bands") {
    reject_unknown(params, {"basins", "flood_nodes", "outflow_link", "outflow_threshold"}, pp);
    metrics::DeltaBandsParams p;
    const auto& basins = field(params, "basins", pp);
    if (!basins.IsSequence()) throw ConfigError(pp + ".basins", "expected a list");
    for (std::size_t i = 0; i < basins.size(); ++i) {
      const auto bp = at(pp + ".basins", i);
      require_map(basins[i], bp);
      reject_unknown(basins[i], {"node", "O_l", "O_u", "E_l", "E_u"}, bp);
      metrics::DeltaBandsParams::Basin b;
      b.node = as_string(field(basins[i], "node", bp), bp + ".node");
      b.bounds.lower = maybe_number(basins[i], "O_l", bp);
      b.bounds.upper = as_number(field(basins[i], "O_u", bp), bp + ".O_u");
      b.bounds.lower_limit = maybe_number(basins[i], "E_l", bp);
      b.bounds.upper_limit = as_number(field(basins[i], "E_u", bp), bp + ".E_u");
      p.basins.push_back(std::move(b));
    }
    p.flood_nodes = opt_strings(params, "flood_nodes", pp);
    p.outflow_link = as_string(field(params, "outflow_link", pp), pp + ".outflow_link");
    p.outflow_threshold = opt_number(params, "outflow_threshold", pp, p.outflow_threshold);
    return p;
  }
  if (kind == "tss_threshold") {
    reject_unknown(params, {"load_series", "flood_nodes", "threshold", "flood_penalty"}, pp);
    metrics::TssThresholdParams p;
    p.load_series = as_string(field(params, "load_series", pp), pp + ".load_series");
    p.flood_nodes = opt_strings(params, "flood_nodes", pp);
    p.threshold = opt_number(params, "threshold", pp, p.threshold);
    p.flood_penalty = opt_number(params, "flood_penalty", pp, p.flood_penalty);
    return p;
  }
  if (kind == "weighted_cso") {
    reject_unknown(params, {"river_outfalls", "creek_outfalls", "throttle_links", "wwtp_outfall", "weights"}, pp);
    metrics::WeightedCsoParams p;
    p.river_outfalls = opt_strings(params, "river_outfalls", pp);
    p.creek_outfalls = opt_strings(params, "creek_outfalls", pp);
    p.throttle_links = opt_strings(params, "throttle_links", pp);
    p.wwtp_outfall = as_string(field(params, "wwtp_outfall", pp), pp + ".wwtp_outfall");
    if (params["weights"]) {
      const auto wp = pp + ".weights";
      const auto& w = require_map(params["weights"], wp);
      reject_unknown(w, {"river", "creek", "throttle", "wwtp"}, wp);
      p.weights.river = opt_number(w, "river", wp, p.weights.river);
      p.weights.creek = opt_number(w, "creek", wp, p.weights.creek);
      p.weights.throttle = opt_number(w, "throttle", wp, p.weights.throttle);
      p.weights.wwtp = opt_number(w, "wwtp", wp, p.weights.wwtp);
    }
    return p;
  }
  throw ConfigError("metric.kind", "unknown metric kind '" + kind +
                                       "' (flow_threshold_flood, cso_flood, flood_volume, delta_bands, "
                                       "tss_threshold, weighted_cso)");
}

Network load_network(const YAML::Node& root, const fs::path& base_dir, bool builtin) {
  std::string text;
  if (root["inp_inline"]) {
    if (root["inp"]) throw ConfigError("inp", "give either inp or inp_inline, not both");
    text = as_string(root["inp_inline"], "inp_inline");
  } else {
    const auto file = as_string(field(root, "inp", ""), "inp");
    if (builtin) {
      const char* content = detail::builtin_file(file);
      if (!content) throw ConfigError("inp", "no built-in network '" + file + "'");
      text = content;
    } else {
      fs::path p(file);
      if (p.is_relative()) p = base_dir / p;
      text = read_file(p, "inp");
    }
  }
  return inp::parse(text).network;
}

ScenarioSpec parse_yaml(std::string_view yaml, const fs::path& base_dir, bool builtin) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("invalid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("", "scenario config must be a mapping");
  reject_unknown(root,
                 {"name", "inp", "inp_inline", "control_timestep_s", "duration_s", "states", "actions", "metric", "log",
                  "initial_settings", "target_outflow"},
                 "");
  ScenarioSpec spec;
  spec.name = as_string(field(root, "name", ""), "name");
  spec.control_timestep = as_number(field(root, "control_timestep_s", ""), "control_timestep_s");
  spec.duration = as_number(field(root, "duration_s", ""), "duration_s");
  spec.observable_states = parse_queries(field(root, "states", ""), "states");
  spec.controllable_assets = as_strings(field(root, "actions", ""), "actions");
  spec.metric = parse_metric(field(root, "metric", ""));
  if (root["log"]) spec.log_extra = parse_queries(root["log"], "log");
  if (root["initial_settings"]) {
    const auto& v = root["initial_settings"];
    if (!v.IsSequence()) throw ConfigError("initial_settings", "expected a list");
    for (std::size_t i = 0; i < v.size(); ++i) spec.initial_settings.push_back(as_number(v[i], at("initial_settings", i)));
  }
  spec.target_outflow = maybe_number(root, "target_outflow", "");
  spec.network = load_network(root, base_dir, builtin);
  return spec;
}

void throw_if_invalid(const ScenarioSpec& spec) {
  auto errors = check_scenario(spec);
  if (!errors.empty()) {
    const auto& first = errors.front();
    const auto colon = first.find(": ");
    throw ConfigError(first.substr(0, colon), first.substr(colon + 2));
  }
  metrics::MetricAccumulator probe(spec.metric, spec.network);  // resolves metric ids
}

}  // namespace

std::vector<std::string> builtin_scenarios() { return {std::begin(kBuiltin), std::end(kBuiltin)}; }

ScenarioSpec parse_scenario_yaml(std::string_view yaml, const fs::path& base_dir) {
  auto spec = parse_yaml(yaml, base_dir, false);
  throw_if_invalid(spec);
  return spec;
}

ScenarioSpec load_scenario_spec(std::string_view name_or_path) {
  if (std::find(std::begin(kBuiltin), std::end(kBuiltin), name_or_path) != std::end(kBuiltin)) {
    auto spec = parse_yaml(detail::builtin_file(builtin_yaml_name(name_or_path)), {}, true);
    throw_if_invalid(spec);
    return spec;
  }
  const fs::path path(name_or_path);
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    std::string names;
    for (auto n : kBuiltin) names += (names.empty() ? "" : ", ") + std::string(n);
    throw ConfigError("", "unknown scenario '" + std::string(name_or_path) + "' (built-in: " + names +
                              "; or a path to a YAML config)");
  }
  return parse_scenario_yaml(read_file(path, ""), path.parent_path());
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> asset_indices(const ScenarioSpec& spec) {
  std::vector<std::size_t> out;
  for (const auto& id : spec.controllable_assets) out.push_back(spec.network.require_link(id));
  return out;
}

}  // namespace

ScenarioSpec Environment::apply_overrides(ScenarioSpec spec, const EnvOptions& options) {
  if (options.timestep_override_s) spec.control_timestep = *options.timestep_override_s;
  if (options.duration_override_s) spec.duration = *options.duration_override_s;
  throw_if_invalid(spec);
  return spec;
}

Environment::Environment(ScenarioSpec spec, EnvOptions options)
    : spec_(apply_overrides(std::move(spec), options)),
      engine_(spec_.network, asset_indices(spec_), EngineOptions{options.max_substep_s}),
      sim_(engine_.initial_state()),
      metric_(spec_.metric, engine_.network()) {
  const auto& net = engine_.network();
  const auto assets = engine_.asset_links();
  for (std::size_t k = 0; k < spec_.initial_settings.size(); ++k) {
    sim_.setting[static_cast<Index>(assets[k])] = spec_.initial_settings[k];
  }
  total_steps_ = static_cast<std::size_t>(std::llround(spec_.duration / spec_.control_timestep));

  for (const auto& q : spec_.observable_states) trace_.observed_labels.push_back(q.label());
  for (const auto& q : spec_.log_extra) trace_.observed_labels.push_back(q.label());
  trace_.asset_ids = spec_.controllable_assets;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (net.nodes[i].kind == NodeKind::Outfall) {
      outfalls_.push_back(i);
      trace_.outfall_ids.push_back(net.nodes[i].id);
    } else {
      flood_nodes_.push_back(static_cast<Index>(i));
      trace_.node_ids.push_back(net.nodes[i].id);
    }
  }
}

Vector Environment::observe(const std::vector<StateQuery>& queries) const {
  Vector out(static_cast<Index>(queries.size()));
  for (std::size_t i = 0; i < queries.size(); ++i) out[static_cast<Index>(i)] = lookup_state(sim_, network(), queries[i]);
  return out;
}

Vector Environment::state() const { return observe(spec_.observable_states); }

bool Environment::step(std::span<const double> actions) {
  if (done()) throw StepError("step() called after the run finished");
  const auto n = spec_.controllable_assets.size();
  if (actions.size() != n) {
    throw StepError("expected " + std::to_string(n) + " actions, got " + std::to_string(actions.size()));
  }
  std::vector<double> settings(actions.begin(), actions.end());
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(settings[k])) throw StepError("action for '" + spec_.controllable_assets[k] + "' is not finite");
    const double clamped = std::clamp(settings[k], 0.0, 1.0);
    if (clamped != settings[k]) {
      warnings_.push_back("t=" + format_number(sim_.clock) + " s: action " + format_number(settings[k]) + " for '" +
                          spec_.controllable_assets[k] + "' clamped to " + format_number(clamped));
      settings[k] = clamped;
    }
  }
  engine_.advance(sim_, spec_.control_timestep, settings);
  ++steps_taken_;
  // Pin the clock to the step grid so long runs do not drift.
  sim_.clock = static_cast<double>(steps_taken_) * spec_.control_timestep;

  TraceRecord rec;
  rec.time = sim_.clock;
  const auto observed = observe(spec_.observable_states);
  const auto logged = observe(spec_.log_extra);
  rec.observed.resize(observed.size() + logged.size());
  rec.observed << observed, logged;
  rec.settings = Eigen::Map<const Vector>(settings.data(), static_cast<Index>(n));
  rec.flood_volume = sim_.flood_volume_step(flood_nodes_);
  rec.outfall_flow.resize(static_cast<Index>(outfalls_.size()));
  rec.outfall_volume.resize(static_cast<Index>(outfalls_.size()));
  for (std::size_t k = 0; k < outfalls_.size(); ++k) {
    rec.outfall_flow[static_cast<Index>(k)] = sim_.outfall_flow[static_cast<Index>(outfalls_[k])];
    rec.outfall_volume[static_cast<Index>(k)] = sim_.outfall_volume[static_cast<Index>(outfalls_[k])];
  }
  rec.step_penalty = metric_.update(sim_, network());
  rec.performance = metric_.total();
  trace_.records.push_back(std::move(rec));
  return done();
}

ScenarioMetadata Environment::metadata() const {
  const auto& net = network();
  ScenarioMetadata meta;
  meta.scenario = spec_.name;
  meta.state_labels.assign(trace_.observed_labels.begin(),
                           trace_.observed_labels.begin() + static_cast<std::ptrdiff_t>(spec_.observable_states.size()));
  meta.control_timestep = spec_.control_timestep;
  if (spec_.target_outflow) {
    meta.target_outflow = *spec_.target_outflow;
  } else if (const auto* p = std::get_if<metrics::OutletThresholdParams>(&spec_.metric)) {
    meta.target_outflow = p->threshold;
  } else if (const auto* p = std::get_if<metrics::LocationThresholdParams>(&spec_.metric)) {
    meta.target_outflow = p->threshold;
  }
  for (const auto l : engine_.asset_links()) {
    const auto& link = net.links[l];
    const auto& up = net.nodes[net.require_node(link.from_node)];
    AssetInfo a;
    a.id = link.id;
    a.kind = link.kind();
    a.upstream_node = up.id;
    a.max_depth = up.max_depth;
    if (const auto* o = std::get_if<OrificeParams>(&link.params)) {
      a.discharge_coefficient = o->discharge_coefficient;
      a.full_open_area = o->full_open_area;
      a.crest_offset = o->crest_offset;
    } else if (const auto* w = std::get_if<WeirParams>(&link.params)) {
      a.discharge_coefficient = w->discharge_coefficient;
      a.crest_offset = w->crest_height;
    }
    for (std::size_t i = 0; i < spec_.observable_states.size(); ++i) {
      const auto& q = spec_.observable_states[i];
      if (q.quantity == Quantity::Depth && q.target == up.id) {
        a.depth_index = static_cast<Index>(i);
        break;
      }
    }
    meta.assets.push_back(std::move(a));
  }
  return meta;
}

Environment load_scenario(std::string_view name_or_path, EnvOptions options) {
  return Environment(load_scenario_spec(name_or_path), options);
}

}  // namespace stormbox
