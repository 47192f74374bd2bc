#pragma once

// Random valid networks for property tests: a DAG over at most 10 nodes using every
// link kind, with a random storm per raingage.

#include "stormbox/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace stormbox::testing {

inline double round_sig(double v, int digits = 6) {
  if (v == 0.0) return 0.0;
  const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(v)))));
  return std::round(v * scale) / scale;
}

class NetworkGenerator {
 public:
  explicit NetworkGenerator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return round_sig(std::uniform_real_distribution<double>(lo, hi)(rng_)); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& rng() { return rng_; }

  Network make(int max_nodes = 10) {
    Network net;
    const int n = integer(2, max_nodes);
    const int outfalls = std::min(n - 1, integer(1, 2));
    const int inner = n - outfalls;

    for (int i = 0; i < inner; ++i) {
      Node node;
      node.id = "N" + std::to_string(i);
      node.invert_elevation = uniform(0.0, 20.0);
      node.max_depth = uniform(0.5, 4.0);
      if (chance(0.25)) {
        node.kind = NodeKind::Junction;
      } else {
        node.kind = NodeKind::Storage;
        node.initial_depth = chance(0.5) ? 0.0 : uniform(0.0, node.max_depth);
        if (chance(0.7)) {
          node.storage = ConstantArea{uniform(50.0, 2000.0)};
        } else {
          Curve c{"SC" + std::to_string(i), CurveKind::Storage, {}};
          const int pts = integer(2, 5);
          for (int k = 0; k < pts; ++k) {
            const double depth = k + 1 == pts ? node.max_depth : round_sig(node.max_depth * k / (pts - 1));
            c.points.emplace_back(depth, uniform(50.0, 2000.0));
          }
          node.storage = AreaCurve{c.id};
          net.curves.push_back(std::move(c));
        }
      }
      net.nodes.push_back(std::move(node));
    }
    for (int i = 0; i < outfalls; ++i) {
      Node node;
      node.id = "OF" + std::to_string(i);
      node.kind = NodeKind::Outfall;
      node.invert_elevation = uniform(-5.0, 0.0);
      const int b = integer(0, 3);
      if (b == 1) {
        node.boundary = FixedStage{round_sig(node.invert_elevation + uniform(0.0, 1.0))};
      } else if (b == 2) {
        const std::string name = "tide" + std::to_string(i);
        net.timeseries.emplace(name, TimeSeries({{0.0, node.invert_elevation}, {7200.0, round_sig(node.invert_elevation + 0.8)},
                                                  {14400.0, node.invert_elevation}}));
        node.boundary = SeriesStage{name};
      }
      net.nodes.push_back(std::move(node));
    }

    // Every inner node drains somewhere downstream; extra links add parallel paths.
    int link_id = 0;
    for (int i = 0; i < inner; ++i) {
      const int targets = chance(0.3) ? 2 : 1;
      for (int t = 0; t < targets; ++t) {
        const int j = integer(i + 1, n - 1);
        net.links.push_back(make_link("L" + std::to_string(link_id++), net, i, j));
      }
    }

    const int gages = integer(1, 2);
    for (int g = 0; g < gages; ++g) {
      const std::string series = "rain" + std::to_string(g);
      std::vector<TimeSeries::Entry> entries;
      const int pts = integer(2, 12);
      double t = 0.0;
      for (int k = 0; k < pts; ++k) {
        entries.push_back({t, k > 0 && chance(0.2) ? 0.0 : uniform(1.0, 120.0)});
        t += 900.0 * integer(1, 4);
      }
      entries.push_back({t, 0.0});
      net.timeseries.emplace(series, TimeSeries(std::move(entries)));
      net.raingages.push_back({"RG" + std::to_string(g), series});
    }
    const int subs = integer(1, 4);
    for (int s = 0; s < subs; ++s) {
      Subcatchment sc;
      sc.id = "S" + std::to_string(s);
      sc.area = uniform(1e4, 5e5);
      sc.runoff_coefficient = uniform(0.0, 1.0);
      sc.raingage = net.raingages[static_cast<std::size_t>(integer(0, gages - 1))].id;
      sc.outlet = net.nodes[static_cast<std::size_t>(integer(0, inner - 1))].id;
      net.subcatchments.push_back(std::move(sc));
    }
    return net;
  }

  /// Indices of the links a controller may drive (everything but conduits).
  static std::vector<std::size_t> assets_of(const Network& net) {
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < net.links.size(); ++l) {
      if (net.links[l].kind() != LinkKind::Conduit) out.push_back(l);
    }
    return out;
  }

 private:
  Link make_link(std::string id, Network& net, int from, int to) {
    Link link;
    link.id = std::move(id);
    link.from_node = net.nodes[static_cast<std::size_t>(from)].id;
    link.to_node = net.nodes[static_cast<std::size_t>(to)].id;
    const double depth = net.nodes[static_cast<std::size_t>(from)].max_depth;
    switch (integer(0, 3)) {
      case 0: {
        ConduitParams p;
        if (chance(0.5)) p.capacity = uniform(0.05, 3.0);
        p.delay_steps = chance(0.3) ? integer(1, 2) : 0;
        link.params = p;
        break;
      }
      case 1:
        link.params = OrificeParams{uniform(0.5, 0.8), uniform(0.05, 1.5), chance(0.5) ? 0.0 : uniform(0.0, depth * 0.5)};
        break;
      case 2:
        link.params = WeirParams{uniform(1.4, 1.9), uniform(0.5, 4.0), uniform(0.0, depth * 0.8)};
        break;
      default: {
        Curve c{"PC" + link.id, CurveKind::Pump, {}};
        double d = 0.0;
        const int pts = integer(1, 4);
        for (int k = 0; k < pts; ++k) {
          c.points.emplace_back(d, uniform(0.0, 1.0));
          d = round_sig(d + uniform(0.1, depth));
        }
        link.params = PumpParams{c.id};
        link.initial_setting = chance(0.5) ? 1.0 : 0.0;
        net.curves.push_back(std::move(c));
      }
    }
    return link;
  }

  std::mt19937_64 rng_;
};

}  // namespace stormbox::testing
