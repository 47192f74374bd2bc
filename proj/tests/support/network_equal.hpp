#pragma once

// Structural comparison of two networks with numbers matched to 6 significant digits.

#include "stormbox/network.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

namespace stormbox::testing {

inline bool close6(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 5e-6 * std::max(std::abs(a), std::abs(b));
}

/// First difference found, or nullopt when the networks agree.
inline std::optional<std::string> network_difference(const Network& a, const Network& b) {
  std::ostringstream why;
  auto num = [&](double x, double y, const std::string& what) {
    if (!close6(x, y)) why << what << ": " << x << " vs " << y << '\n';
  };
  auto txt = [&](const std::string& x, const std::string& y, const std::string& what) {
    if (x != y) why << what << ": '" << x << "' vs '" << y << "'\n";
  };
  if (a.nodes.size() != b.nodes.size() || a.links.size() != b.links.size() ||
      a.subcatchments.size() != b.subcatchments.size() || a.raingages.size() != b.raingages.size() ||
      a.curves.size() != b.curves.size() || a.timeseries.size() != b.timeseries.size()) {
    return "element counts differ";
  }
  for (const auto& n : a.nodes) {
    auto j = b.node_index(n.id);
    if (!j) return "node " + n.id + " missing";
    const auto& m = b.nodes[*j];
    const auto w = "node " + n.id;
    if (n.kind != m.kind) why << w << " kind\n";
    num(n.invert_elevation, m.invert_elevation, w + " invert");
    num(n.max_depth, m.max_depth, w + " max_depth");
    num(n.initial_depth, m.initial_depth, w + " initial_depth");
    if (n.kind == NodeKind::Storage) {
      if (n.storage.index() != m.storage.index()) {
        why << w << " storage shape\n";
      } else if (const auto* c = std::get_if<ConstantArea>(&n.storage)) {
        num(c->area, std::get<ConstantArea>(m.storage).area, w + " area");
      } else {
        txt(std::get<AreaCurve>(n.storage).curve, std::get<AreaCurve>(m.storage).curve, w + " curve");
      }
    }
    if (n.kind == NodeKind::Outfall) {
      if (n.boundary.index() != m.boundary.index()) {
        why << w << " boundary\n";
      } else if (const auto* f = std::get_if<FixedStage>(&n.boundary)) {
        num(f->stage, std::get<FixedStage>(m.boundary).stage, w + " stage");
      } else if (const auto* s = std::get_if<SeriesStage>(&n.boundary)) {
        txt(s->series, std::get<SeriesStage>(m.boundary).series, w + " series");
      }
    }
  }
  for (const auto& l : a.links) {
    auto j = b.link_index(l.id);
    if (!j) return "link " + l.id + " missing";
    const auto& k = b.links[*j];
    const auto w = "link " + l.id;
    txt(l.from_node, k.from_node, w + " from");
    txt(l.to_node, k.to_node, w + " to");
    num(l.initial_setting, k.initial_setting, w + " initial setting");
    if (l.kind() != k.kind()) {
      why << w << " kind\n";
      continue;
    }
    if (const auto* p = std::get_if<ConduitParams>(&l.params)) {
      const auto& q = std::get<ConduitParams>(k.params);
      if (p->capacity.has_value() != q.capacity.has_value()) why << w << " capacity presence\n";
      if (p->capacity && q.capacity) num(*p->capacity, *q.capacity, w + " capacity");
      if (p->delay_steps != q.delay_steps) why << w << " delay\n";
    } else if (const auto* p = std::get_if<OrificeParams>(&l.params)) {
      const auto& q = std::get<OrificeParams>(k.params);
      num(p->discharge_coefficient, q.discharge_coefficient, w + " Cd");
      num(p->full_open_area, q.full_open_area, w + " area");
      num(p->crest_offset, q.crest_offset, w + " offset");
    } else if (const auto* p = std::get_if<WeirParams>(&l.params)) {
      const auto& q = std::get<WeirParams>(k.params);
      num(p->discharge_coefficient, q.discharge_coefficient, w + " Cd");
      num(p->crest_length, q.crest_length, w + " length");
      num(p->crest_height, q.crest_height, w + " crest");
    } else {
      txt(std::get<PumpParams>(l.params).curve, std::get<PumpParams>(k.params).curve, w + " curve");
    }
  }
  for (std::size_t i = 0; i < a.subcatchments.size(); ++i) {
    const auto& s = a.subcatchments[i];
    const auto& t = b.subcatchments[i];
    const auto w = "subcatchment " + s.id;
    txt(s.id, t.id, w + " id");
    num(s.area, t.area, w + " area");
    num(s.runoff_coefficient, t.runoff_coefficient, w + " runoff coefficient");
    txt(s.raingage, t.raingage, w + " raingage");
    txt(s.outlet, t.outlet, w + " outlet");
  }
  for (std::size_t i = 0; i < a.raingages.size(); ++i) {
    txt(a.raingages[i].id, b.raingages[i].id, "raingage id");
    txt(a.raingages[i].series, b.raingages[i].series, "raingage series");
  }
  for (const auto& c : a.curves) {
    const auto* d = b.find_curve(c.id);
    if (!d) return "curve " + c.id + " missing";
    if (c.kind != d->kind || c.points.size() != d->points.size()) {
      why << "curve " << c.id << " shape\n";
      continue;
    }
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      num(c.points[k].first, d->points[k].first, "curve " + c.id + " x");
      num(c.points[k].second, d->points[k].second, "curve " + c.id + " y");
    }
  }
  for (const auto& [name, ts] : a.timeseries) {
    const auto* u = b.find_series(name);
    if (!u) return "series " + name + " missing";
    if (ts.entries().size() != u->entries().size()) {
      why << "series " << name << " length\n";
      continue;
    }
    for (std::size_t k = 0; k < ts.entries().size(); ++k) {
      num(ts.entries()[k].time, u->entries()[k].time, "series " + name + " time");
      num(ts.entries()[k].value, u->entries()[k].value, "series " + name + " value");
    }
  }
  const auto s = why.str();
  if (s.empty()) return std::nullopt;
  return s;
}

}  // namespace stormbox::testing
