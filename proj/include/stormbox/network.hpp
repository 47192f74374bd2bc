#pragma once

#include "stormbox/time_series.hpp"
#include "stormbox/types.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace stormbox {

enum class CurveKind { Storage, Pump };

/// Piecewise-linear x -> y table (storage: depth -> area, pump: depth -> flow).
struct Curve {
  std::string id;
  CurveKind kind = CurveKind::Storage;
  std::vector<std::pair<double, double>> points;

  /// Linear interpolation, clamped to the end points.
  double interpolate(double x) const;
};

enum class NodeKind { Junction, Storage, Outfall };

struct ConstantArea {
  double area = 0.0;  // m^2
};
struct AreaCurve {
  std::string curve;  // id of a Storage curve
};
using StorageShape = std::variant<ConstantArea, AreaCurve>;

struct FreeOutfall {};
struct FixedStage {
  double stage = 0.0;  // m, same datum as invert_elevation
};
struct SeriesStage {
  std::string series;
};
using OutfallBoundary = std::variant<FreeOutfall, FixedStage, SeriesStage>;

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Junction;
  double invert_elevation = 0.0;  // m
  double max_depth = 0.0;         // m
  double initial_depth = 0.0;     // m
  StorageShape storage = ConstantArea{};
  OutfallBoundary boundary = FreeOutfall{};
};

enum class LinkKind { Conduit, Orifice, Weir, Pump };

struct ConduitParams {
  std::optional<double> capacity;  // m^3/s; unset means unlimited
  int delay_steps = 0;             // whole control timesteps
};
struct OrificeParams {
  double discharge_coefficient = 0.65;
  double full_open_area = 1.0;  // m^2
  double crest_offset = 0.0;    // m above upstream invert
};
struct WeirParams {
  double discharge_coefficient = 1.84;
  double crest_length = 1.0;  // m
  double crest_height = 0.0;  // m above upstream invert
};
struct PumpParams {
  std::string curve;  // id of a Pump curve, depth -> flow
};
using LinkParams = std::variant<ConduitParams, OrificeParams, WeirParams, PumpParams>;

struct Link {
  std::string id;
  std::string from_node;
  std::string to_node;
  LinkParams params;
  double initial_setting = 1.0;

  LinkKind kind() const { return static_cast<LinkKind>(params.index()); }
};

struct Subcatchment {
  std::string id;
  double area = 0.0;                // m^2
  double runoff_coefficient = 0.0;  // [0, 1]
  std::string raingage;
  std::string outlet;
};

/// Rain gage: binds an intensity series (mm/hr) to subcatchments.
struct Raingage {
  std::string id;
  std::string series;
};

/// Drainage network plus the runoff surfaces and series that drive it.
/// Elements are kept in declaration order; identifiers are case-sensitive.
struct Network {
  std::vector<Node> nodes;
  std::vector<Link> links;
  std::vector<Subcatchment> subcatchments;
  std::vector<Raingage> raingages;
  std::vector<Curve> curves;
  std::map<std::string, TimeSeries> timeseries;

  std::optional<std::size_t> node_index(std::string_view id) const;
  std::optional<std::size_t> link_index(std::string_view id) const;
  const Curve* find_curve(std::string_view id) const;
  const TimeSeries* find_series(std::string_view id) const;
  const Raingage* find_raingage(std::string_view id) const;

  /// Throws ReferenceError when absent.
  std::size_t require_node(std::string_view id) const;
  std::size_t require_link(std::string_view id) const;
};

enum class ElementKind { Node, Link, Subcatchment, Raingage, Curve, TimeSeries, Network };

std::string_view to_string(ElementKind kind);
std::string_view to_string(NodeKind kind);
std::string_view to_string(LinkKind kind);

struct Violation {
  ElementKind element = ElementKind::Network;
  std::string id;
  std::string rule;
  std::string message;
};

/// Checks every structural invariant; an empty result means the network can be simulated.
std::vector<Violation> validate_network(const Network& network);

/// Node indices ordered so that every link goes from an earlier to a later node.
/// Returns nullopt when the link graph has a cycle.
std::optional<std::vector<std::size_t>> topological_order(const Network& network);

/// Storage volume/depth relation of one node. Junctions and outfalls hold no volume.
class StorageGeometry {
 public:
  StorageGeometry() = default;
  static StorageGeometry for_node(const Node& node, const Network& network);

  double volume_at(double depth) const;
  double depth_at(double volume) const;
  double area_at(double depth) const;
  bool holds_volume() const { return kind_ != Kind::None; }

 private:
  enum class Kind { None, Constant, Tabular };
  Kind kind_ = Kind::None;
  double area_ = 0.0;
  std::vector<double> depths_;
  std::vector<double> areas_;
  std::vector<double> volumes_;  // cumulative volume at each tabulated depth
};

}  // namespace stormbox
