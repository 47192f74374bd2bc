#include "stormbox/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <type_traits>

namespace stormbox {

namespace {

template <typename Range>
auto find_by_id(const Range& range, std::string_view id) {
  return std::find_if(range.begin(), range.end(), [&](const auto& e) { return e.id == id; });
}

bool all_finite(const Curve& c) {
  return std::all_of(c.points.begin(), c.points.end(), [](const auto& p) {
    return std::isfinite(p.first) && std::isfinite(p.second);
  });
}

}  // namespace

double Curve::interpolate(double x) const {
  if (points.empty()) return 0.0;
  if (x <= points.front().first) return points.front().second;
  if (x >= points.back().first) return points.back().second;
  auto hi = std::upper_bound(points.begin(), points.end(), x,
                             [](double v, const auto& p) { return v < p.first; });
  auto lo = std::prev(hi);
  const double span = hi->first - lo->first;
  if (span <= 0.0) return hi->second;
  const double w = (x - lo->first) / span;
  return lo->second + w * (hi->second - lo->second);
}

std::optional<std::size_t> Network::node_index(std::string_view id) const {
  auto it = find_by_id(nodes, id);
  if (it == nodes.end()) return std::nullopt;
  return static_cast<std::size_t>(std::distance(nodes.begin(), it));
}

std::optional<std::size_t> Network::link_index(std::string_view id) const {
  auto it = find_by_id(links, id);
  if (it == links.end()) return std::nullopt;
  return static_cast<std::size_t>(std::distance(links.begin(), it));
}

const Curve* Network::find_curve(std::string_view id) const {
  auto it = find_by_id(curves, id);
  return it == curves.end() ? nullptr : &*it;
}

const TimeSeries* Network::find_series(std::string_view id) const {
  auto it = timeseries.find(std::string(id));
  return it == timeseries.end() ? nullptr : &it->second;
}

const Raingage* Network::find_raingage(std::string_view id) const {
  auto it = find_by_id(raingages, id);
  return it == raingages.end() ? nullptr : &*it;
}

std::size_t Network::require_node(std::string_view id) const {
  if (auto i = node_index(id)) return *i;
  throw ReferenceError("unknown node '" + std::string(id) + "'");
}

std::size_t Network::require_link(std::string_view id) const {
  if (auto i = link_index(id)) return *i;
  throw ReferenceError("unknown link '" + std::string(id) + "'");
}

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Node: return "node";
    case ElementKind::Link: return "link";
    case ElementKind::Subcatchment: return "subcatchment";
    case ElementKind::Raingage: return "raingage";
    case ElementKind::Curve: return "curve";
    case ElementKind::TimeSeries: return "timeseries";
    case ElementKind::Network: return "network";
  }
  return "?";
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Junction: return "junction";
    case NodeKind::Storage: return "storage";
    case NodeKind::Outfall: return "outfall";
  }
  return "?";
}

std::string_view to_string(LinkKind kind) {
  switch (kind) {
    case LinkKind::Conduit: return "conduit";
    case LinkKind::Orifice: return "orifice";
    case LinkKind::Weir: return "weir";
    case LinkKind::Pump: return "pump";
  }
  return "?";
}

std::optional<std::vector<std::size_t>> topological_order(const Network& network) {
  const std::size_t n = network.nodes.size();
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& link : network.links) {
    auto from = network.node_index(link.from_node);
    auto to = network.node_index(link.to_node);
    if (!from || !to) continue;
    out[*from].push_back(*to);
    ++indegree[*to];
  }
  // Kahn's algorithm; the queue is seeded in declaration order so the result is stable.
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const auto u = ready.front();
    ready.pop_front();
    order.push_back(u);
    for (auto v : out[u]) {
      if (--indegree[v] == 0) ready.push_back(v);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

std::vector<Violation> validate_network(const Network& network) {
  std::vector<Violation> v;
  auto add = [&](ElementKind kind, const std::string& id, std::string rule, std::string message) {
    v.push_back({kind, id, std::move(rule), std::move(message)});
  };

  auto check_unique = [&](const auto& range, ElementKind kind) {
    std::set<std::string> seen;
    for (const auto& e : range) {
      if (!seen.insert(e.id).second) add(kind, e.id, "duplicate_id", "identifier declared more than once");
    }
  };
  check_unique(network.nodes, ElementKind::Node);
  check_unique(network.links, ElementKind::Link);
  check_unique(network.subcatchments, ElementKind::Subcatchment);
  check_unique(network.raingages, ElementKind::Raingage);
  check_unique(network.curves, ElementKind::Curve);

  for (const auto& c : network.curves) {
    if (c.points.empty()) add(ElementKind::Curve, c.id, "curve_empty", "curve has no points");
    if (!all_finite(c)) add(ElementKind::Curve, c.id, "not_finite", "curve has non-finite values");
  }

  for (const auto& rg : network.raingages) {
    if (!network.find_series(rg.series)) {
      add(ElementKind::Raingage, rg.id, "dangling_reference", "time series '" + rg.series + "' does not exist");
    }
  }

  bool has_outfall = false;
  for (const auto& node : network.nodes) {
    const bool finite = std::isfinite(node.max_depth) && std::isfinite(node.invert_elevation) &&
                        std::isfinite(node.initial_depth);
    if (!finite) add(ElementKind::Node, node.id, "not_finite", "non-finite elevation or depth");
    if (node.kind == NodeKind::Outfall) {
      has_outfall = true;
      if (node.max_depth < 0.0) add(ElementKind::Node, node.id, "max_depth_nonnegative", "outfall max depth must be >= 0");
      if (const auto* s = std::get_if<SeriesStage>(&node.boundary); s && !network.find_series(s->series)) {
        add(ElementKind::Node, node.id, "dangling_reference", "stage series '" + s->series + "' does not exist");
      }
      continue;
    }
    if (!(node.max_depth > 0.0)) {
      add(ElementKind::Node, node.id, "max_depth_positive", "max depth must be > 0, got " + std::to_string(node.max_depth));
    }
    if (node.initial_depth < 0.0 || node.initial_depth > std::max(node.max_depth, 0.0)) {
      add(ElementKind::Node, node.id, "initial_depth_range", "initial depth must lie in [0, max_depth]");
    }
    if (node.kind != NodeKind::Storage) continue;
    if (const auto* a = std::get_if<ConstantArea>(&node.storage)) {
      if (!(a->area > 0.0) || !std::isfinite(a->area)) {
        add(ElementKind::Node, node.id, "area_positive", "storage surface area must be > 0");
      }
      continue;
    }
    const auto& ref = std::get<AreaCurve>(node.storage);
    const Curve* curve = network.find_curve(ref.curve);
    if (!curve) {
      add(ElementKind::Node, node.id, "dangling_reference", "storage curve '" + ref.curve + "' does not exist");
      continue;
    }
    if (curve->kind != CurveKind::Storage) {
      add(ElementKind::Node, node.id, "curve_kind", "curve '" + ref.curve + "' is not a storage curve");
    }
    if (curve->points.empty()) continue;
    bool ok_area = true;
    bool increasing = true;
    for (std::size_t i = 0; i < curve->points.size(); ++i) {
      if (!(curve->points[i].second > 0.0)) ok_area = false;
      if (i > 0 && !(curve->points[i].first > curve->points[i - 1].first)) increasing = false;
    }
    if (!ok_area) add(ElementKind::Curve, curve->id, "area_positive", "storage curve areas must be > 0");
    if (!increasing) add(ElementKind::Curve, curve->id, "depth_increasing", "storage curve depths must be strictly increasing");
    if (curve->points.front().first != 0.0 || curve->points.back().first < node.max_depth) {
      add(ElementKind::Node, node.id, "curve_domain", "storage curve must cover depths [0, max_depth]");
    }
  }
  if (!has_outfall) add(ElementKind::Network, "", "no_outfall", "network has no outfall node");

  for (const auto& link : network.links) {
    auto from = network.node_index(link.from_node);
    auto to = network.node_index(link.to_node);
    if (!from) add(ElementKind::Link, link.id, "dangling_reference", "from node '" + link.from_node + "' does not exist");
    if (!to) add(ElementKind::Link, link.id, "dangling_reference", "to node '" + link.to_node + "' does not exist");
    if (link.from_node == link.to_node) add(ElementKind::Link, link.id, "self_loop", "from and to node are the same");
    if (from && network.nodes[*from].kind == NodeKind::Outfall) {
      add(ElementKind::Link, link.id, "outfall_outflow", "links may not leave an outfall");
    }
    if (!(link.initial_setting >= 0.0 && link.initial_setting <= 1.0)) {
      add(ElementKind::Link, link.id, "setting_range", "initial setting must lie in [0, 1]");
    }
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ConduitParams>) {
            if (p.capacity && !(*p.capacity > 0.0)) add(ElementKind::Link, link.id, "capacity_positive", "conduit capacity must be > 0");
            if (p.delay_steps < 0) add(ElementKind::Link, link.id, "delay_nonnegative", "conduit delay must be >= 0");
          } else if constexpr (std::is_same_v<T, OrificeParams>) {
            if (!(p.discharge_coefficient > 0.0)) add(ElementKind::Link, link.id, "coefficient_positive", "discharge coefficient must be > 0");
            if (!(p.full_open_area > 0.0)) add(ElementKind::Link, link.id, "area_positive", "full open area must be > 0");
            if (!(p.crest_offset >= 0.0)) add(ElementKind::Link, link.id, "offset_nonnegative", "crest offset must be >= 0");
          } else if constexpr (std::is_same_v<T, WeirParams>) {
            if (!(p.discharge_coefficient > 0.0)) add(ElementKind::Link, link.id, "coefficient_positive", "discharge coefficient must be > 0");
            if (!(p.crest_length > 0.0)) add(ElementKind::Link, link.id, "length_positive", "crest length must be > 0");
            if (!(p.crest_height >= 0.0)) add(ElementKind::Link, link.id, "crest_nonnegative", "crest height must be >= 0");
          } else {
            const Curve* curve = network.find_curve(p.curve);
            if (!curve) {
              add(ElementKind::Link, link.id, "dangling_reference", "pump curve '" + p.curve + "' does not exist");
              return;
            }
            if (curve->kind != CurveKind::Pump) add(ElementKind::Link, link.id, "curve_kind", "curve '" + p.curve + "' is not a pump curve");
            bool flows_ok = true;
            bool depths_ok = true;
            for (std::size_t i = 0; i < curve->points.size(); ++i) {
              if (!(curve->points[i].second >= 0.0)) flows_ok = false;
              if (i > 0 && curve->points[i].first < curve->points[i - 1].first) depths_ok = false;
            }
            if (!flows_ok) add(ElementKind::Curve, curve->id, "flow_nonnegative", "pump curve flows must be >= 0");
            if (!depths_ok) add(ElementKind::Curve, curve->id, "depth_nondecreasing", "pump curve depths must be non-decreasing");
          }
        },
        link.params);
  }

  for (const auto& sc : network.subcatchments) {
    if (!(sc.area > 0.0)) add(ElementKind::Subcatchment, sc.id, "area_positive", "area must be > 0");
    if (!(sc.runoff_coefficient >= 0.0 && sc.runoff_coefficient <= 1.0)) {
      add(ElementKind::Subcatchment, sc.id, "coefficient_range", "runoff coefficient must lie in [0, 1]");
    }
    if (!network.node_index(sc.outlet)) {
      add(ElementKind::Subcatchment, sc.id, "dangling_reference", "outlet node '" + sc.outlet + "' does not exist");
    }
    if (!network.find_raingage(sc.raingage)) {
      add(ElementKind::Subcatchment, sc.id, "dangling_reference", "raingage '" + sc.raingage + "' does not exist");
    }
  }

  if (!topological_order(network)) {
    add(ElementKind::Network, "", "cycle", "link graph contains a cycle");
  }
  return v;
}

StorageGeometry StorageGeometry::for_node(const Node& node, const Network& network) {
  StorageGeometry g;
  if (node.kind != NodeKind::Storage) return g;
  if (const auto* a = std::get_if<ConstantArea>(&node.storage)) {
    g.kind_ = Kind::Constant;
    g.area_ = a->area;
    return g;
  }
  const Curve* curve = network.find_curve(std::get<AreaCurve>(node.storage).curve);
  if (!curve || curve->points.empty()) {
    throw ReferenceError("storage node '" + node.id + "' has no usable area curve");
  }
  g.kind_ = Kind::Tabular;
  for (const auto& [d, a] : curve->points) {
    g.depths_.push_back(d);
    g.areas_.push_back(a);
  }
  g.volumes_.assign(g.depths_.size(), 0.0);
  for (std::size_t i = 1; i < g.depths_.size(); ++i) {
    g.volumes_[i] = g.volumes_[i - 1] + 0.5 * (g.areas_[i] + g.areas_[i - 1]) * (g.depths_[i] - g.depths_[i - 1]);
  }
  return g;
}

double StorageGeometry::area_at(double depth) const {
  switch (kind_) {
    case Kind::None: return 0.0;
    case Kind::Constant: return area_;
    case Kind::Tabular: break;
  }
  if (depth <= depths_.front()) return areas_.front();
  if (depth >= depths_.back()) return areas_.back();
  auto hi = static_cast<std::size_t>(std::upper_bound(depths_.begin(), depths_.end(), depth) - depths_.begin());
  const auto lo = hi - 1;
  const double w = (depth - depths_[lo]) / (depths_[hi] - depths_[lo]);
  return areas_[lo] + w * (areas_[hi] - areas_[lo]);
}

double StorageGeometry::volume_at(double depth) const {
  depth = std::max(depth, 0.0);
  switch (kind_) {
    case Kind::None: return 0.0;
    case Kind::Constant: return area_ * depth;
    case Kind::Tabular: break;
  }
  if (depth >= depths_.back()) return volumes_.back() + areas_.back() * (depth - depths_.back());
  auto hi = static_cast<std::size_t>(std::upper_bound(depths_.begin(), depths_.end(), depth) - depths_.begin());
  const auto lo = hi - 1;
  const double x = depth - depths_[lo];
  return volumes_[lo] + 0.5 * (areas_[lo] + area_at(depth)) * x;
}

double StorageGeometry::depth_at(double volume) const {
  volume = std::max(volume, 0.0);
  switch (kind_) {
    case Kind::None: return 0.0;
    case Kind::Constant: return volume / area_;
    case Kind::Tabular: break;
  }
  if (volume >= volumes_.back()) return depths_.back() + (volume - volumes_.back()) / areas_.back();
  auto hi = static_cast<std::size_t>(std::upper_bound(volumes_.begin(), volumes_.end(), volume) - volumes_.begin());
  const auto lo = hi - 1;
  // Area is linear in depth on the segment, so volume is quadratic; this root form stays
  // stable when the area slope is zero or negative.
  const double a0 = areas_[lo];
  const double slope = (areas_[hi] - areas_[lo]) / (depths_[hi] - depths_[lo]);
  const double dv = volume - volumes_[lo];
  const double disc = std::max(a0 * a0 + 2.0 * slope * dv, 0.0);
  return depths_[lo] + 2.0 * dv / (a0 + std::sqrt(disc));
}

}  // namespace stormbox
