#include "stormbox/engine.hpp"
#include "stormbox/inp.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace stormbox;

namespace {

constexpr double g = 9.80665;

Network net_from(const std::string& text) { return inp::parse(text).network; }

// One 500 m^2 basin behind an orifice, fed by 1 km^2 of runoff.
std::string basin(double rain_mm_hr, double imperv, double init_depth, const std::string& extra_outfall = "FREE") {
  return R"(
[RAINGAGES]
RG INTENSITY 0:15 1.0 TIMESERIES r
[SUBCATCHMENTS]
S RG P 1000000 )" + std::to_string(imperv) + R"( 1000 0.5
[STORAGE]
P 0 2 )" + std::to_string(init_depth) + R"( FUNCTIONAL 0 0 500
[OUTFALLS]
O 0 )" + extra_outfall + R"(
[ORIFICES]
V P O SIDE 0 0.65 1
[TIMESERIES]
r 0 )" + std::to_string(rain_mm_hr) + "\n";
}

double run(const Engine& e, SimState& s, double dt, int steps, std::vector<double> settings) {
  for (int k = 0; k < steps; ++k) e.advance(s, dt, settings);
  return s.depth[0];
}

}  // namespace

TEST_CASE("substep count") {
  Engine e(net_from(basin(0, 0, 0)), {0});
  CHECK(e.substeps_for(900.0) == 30);
  CHECK(e.substeps_for(10.0) == 1);
  CHECK(e.substeps_for(31.0) == 2);
}

TEST_CASE("closed basin fills linearly") {
  Engine e(net_from(basin(36.0, 10.0, 0.0)), {0});
  auto s = e.initial_state();
  // 36 mm/hr on 1e6 m^2 at C = 0.1 is 1 m^3/s; after 900 s that is 900 m^3 over 500 m^2
  run(e, s, 900.0, 1, {0.0});
  CHECK(s.depth[0] == doctest::Approx(1.8));
  CHECK(s.volume[0] == doctest::Approx(900.0));
  CHECK(s.flood_volume_step.sum() == 0.0);
  CHECK(s.clock == 900.0);
  CHECK(s.last_dt == 900.0);
}

TEST_CASE("overfilling floods the excess and caps the depth") {
  Engine e(net_from(basin(36.0, 10.0, 0.0)), {0});
  auto s = e.initial_state();
  run(e, s, 1800.0, 1, {0.0});
  CHECK(s.depth[0] == doctest::Approx(2.0));
  CHECK(s.flood_volume_step[0] == doctest::Approx(1800.0 - 1000.0));
  CHECK(std::abs(s.ledger.residual(s.stored())) < 1e-9);
}

TEST_CASE("draining converges to the closed-form orifice solution") {
  // dV/dt = -k sqrt(d) with V = A d gives sqrt(d) = sqrt(d0) - k t / (2 A)
  const double A = 500.0;
  const double k = 0.65 * std::sqrt(2.0 * g);
  const double d0 = 1.5;
  const double t = 150.0;  // the basin would empty at about 283 s
  const double exact = std::pow(std::sqrt(d0) - k * t / (2.0 * A), 2.0);

  std::vector<double> errors;
  for (double sub : {8.0, 4.0, 2.0}) {
    Engine e(net_from(basin(0.0, 0.0, d0)), {0}, EngineOptions{sub});
    auto s = e.initial_state();
    errors.push_back(std::abs(run(e, s, t, 1, {1.0}) - exact));
  }
  CHECK(errors[0] < 0.02 * exact);
  // first order: halving the substep roughly halves the error
  CHECK(errors[1] < 0.6 * errors[0]);
  CHECK(errors[2] < 0.6 * errors[1]);
}

TEST_CASE("outflow never overdraws a nearly empty basin") {
  Engine e(net_from(basin(0.0, 0.0, 0.001)), {0});
  auto s = e.initial_state();
  for (int k = 0; k < 20; ++k) {
    e.advance(s, 900.0, std::vector<double>{1.0});
    CHECK(s.depth[0] >= 0.0);
    CHECK(s.volume[0] >= 0.0);
  }
  CHECK(std::abs(s.ledger.residual(s.stored())) < 1e-12);
}

TEST_CASE("settings scale orifice flow") {
  auto flow_at = [](double setting) {
    Engine e(net_from(basin(0.0, 0.0, 1.0)), {0}, EngineOptions{0.01});
    auto s = e.initial_state();
    e.advance(s, 0.01, std::vector<double>{setting});
    return s.flow[0];
  };
  const double full = 0.65 * std::sqrt(2.0 * g * 1.0);
  CHECK(flow_at(1.0) == doctest::Approx(full).epsilon(1e-4));
  CHECK(flow_at(0.25) == doctest::Approx(0.25 * full).epsilon(1e-4));
  CHECK(flow_at(0.0) == 0.0);
}

TEST_CASE("outfall stage above its max depth blocks discharge") {
  Engine e(net_from(basin(0.0, 0.0, 1.0, "FIXED 5")), {0});
  auto s = e.initial_state();
  e.advance(s, 900.0, std::vector<double>{1.0});
  CHECK(s.depth[0] == doctest::Approx(1.0));
  CHECK(s.flow[0] == 0.0);
}

TEST_CASE("delayed conduits release whole steps later") {
  const auto net = net_from(R"(
[STORAGE]
P 0 2 1 FUNCTIONAL 0 0 500
Q 0 2 0 FUNCTIONAL 0 0 500
[OUTFALLS]
O 0 FREE
[CONDUITS]
C P Q 100 0.01 0 0 0 0 2
[ORIFICES]
V Q O SIDE 0 0.65 1
)");
  Engine e(net, {1});
  auto s = e.initial_state();
  const std::vector<double> closed{0.0};
  e.advance(s, 900.0, closed);
  CHECK(s.depth[0] == 0.0);  // unlimited conduit empties its upstream node
  CHECK(s.depth[1] == 0.0);  // but nothing has arrived yet
  CHECK(s.stored() == doctest::Approx(500.0));
  e.advance(s, 900.0, closed);
  CHECK(s.depth[1] == 0.0);
  e.advance(s, 900.0, closed);
  CHECK(s.depth[1] == doctest::Approx(1.0));
  CHECK(std::abs(s.ledger.residual(s.stored())) < 1e-9);
}

TEST_CASE("conduit capacity caps the transfer") {
  const auto net = net_from(R"(
[STORAGE]
P 0 2 1 FUNCTIONAL 0 0 500
[OUTFALLS]
O 0 FREE
[CONDUITS]
C P O 100 0.01 0 0 0 0.1
)");
  Engine e(net, {});
  auto s = e.initial_state();
  e.advance(s, 900.0, std::vector<double>{});
  CHECK(s.flow[0] == doctest::Approx(0.1));
  CHECK(s.volume[0] == doctest::Approx(500.0 - 90.0));
}

TEST_CASE("pumps follow their curve when on") {
  const auto net = net_from(R"(
[STORAGE]
W 0 3 2 FUNCTIONAL 0 0 1000
[OUTFALLS]
O 0 FREE
[PUMPS]
PU W O PC ON
[CURVES]
PC PUMP4 0 0.2
PC 3 0.2
)");
  Engine e(net, {0});
  auto s = e.initial_state();
  e.advance(s, 900.0, std::vector<double>{0.3});
  CHECK(s.flow[0] == 0.0);
  CHECK(s.setting[0] == 0.0);
  e.advance(s, 900.0, std::vector<double>{0.7});
  CHECK(s.setting[0] == 1.0);
  CHECK(s.volume[0] == doctest::Approx(2000.0 - 180.0));
}

TEST_CASE("advance rejects bad settings") {
  Engine e(net_from(basin(0.0, 0.0, 0.0)), {0});
  auto s = e.initial_state();
  CHECK_THROWS_AS(e.advance(s, 900.0, std::vector<double>{}), StepError);
  CHECK_THROWS_AS(e.advance(s, 900.0, std::vector<double>{std::nan("")}), StepError);
  e.advance(s, 900.0, std::vector<double>{4.0});
  CHECK(s.setting[0] == 1.0);
}

TEST_CASE("conduits cannot be controllable assets") {
  const auto net = net_from(R"(
[STORAGE]
P 0 2 1 FUNCTIONAL 0 0 500
[OUTFALLS]
O 0 FREE
[CONDUITS]
C P O 100 0.01 0 0
)");
  CHECK_THROWS_AS(Engine(net, {0}), ReferenceError);
}
