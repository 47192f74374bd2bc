#include "stormbox/hydraulics.hpp"

#include <doctest.h>

#include <cmath>

using namespace stormbox;
using namespace stormbox::hydraulics;

TEST_CASE("runoff converts mm/hr over an area to m^3/s") {
  // 36 mm/hr on 1 km^2 fully impervious is 10 m^3/s
  CHECK(runoff(1.0, 36.0, 1e6) == doctest::Approx(10.0));
  CHECK(runoff(0.5, 36.0, 1e6) == doctest::Approx(5.0));
  CHECK(runoff(1.0, -3.0, 1e6) == 0.0);
}

TEST_CASE("orifice discharge") {
  const double q = orifice_flow(0.65, 1.0, 1.6, 1.0);
  CHECK(q == doctest::Approx(0.65 * std::sqrt(2.0 * 9.80665 * 1.6)));
  CHECK(orifice_flow(0.65, 1.0, 1.6, 0.5) == doctest::Approx(q / 2));
  CHECK(orifice_flow(0.65, 1.0, 0.0, 1.0) == 0.0);
  CHECK(orifice_flow(0.65, 1.0, -1.0, 1.0) == 0.0);
  CHECK(orifice_flow(0.65, 1.0, 1.0, 0.0) == 0.0);
}

TEST_CASE("orifice inversion") {
  // 0.5 m^3/s through a 1 m^2, Cd 0.65 orifice at 1.6 m of head
  CHECK(orifice_setting_for_flow(0.5, 0.65, 1.0, 1.6) == doctest::Approx(0.1374).epsilon(1e-3));
  CHECK(orifice_setting_for_flow(100.0, 0.65, 1.0, 1.6) == 1.0);
  CHECK(orifice_setting_for_flow(0.5, 0.65, 1.0, 0.0) == 0.0);
  for (double s : {0.1, 0.37, 0.9}) {
    const double q = orifice_flow(0.6, 0.4, 0.8, s);
    CHECK(orifice_setting_for_flow(q, 0.6, 0.4, 0.8) == doctest::Approx(s));
  }
}

TEST_CASE("weir crest rises as the setting closes") {
  CHECK(weir_effective_crest(0.5, 2.0, 1.0) == doctest::Approx(0.5));
  CHECK(weir_effective_crest(0.5, 2.0, 0.0) == doctest::Approx(2.0));
  const double q = weir_flow(1.84, 2.0, 0.5, 2.0, 1.5, 1.0);
  CHECK(q == doctest::Approx(1.84 * 2.0 * std::pow(1.0, 1.5)));
  CHECK(weir_flow(1.84, 2.0, 0.5, 2.0, 0.4, 1.0) == 0.0);
  CHECK(weir_flow(1.84, 2.0, 0.5, 2.0, 1.5, 0.0) == 0.0);
}

TEST_CASE("pumps are on or off") {
  Curve c{"p", CurveKind::Pump, {{0.0, 0.1}, {1.0, 0.5}}};
  CHECK(pump_state(0.49) == 0.0);
  CHECK(pump_state(0.5) == 1.0);
  CHECK(pump_flow(c, 0.5, 1.0) == doctest::Approx(0.3));
  CHECK(pump_flow(c, 0.5, 0.2) == 0.0);
  CHECK(pump_flow(c, 0.0, 1.0) == 0.0);
  CHECK(pump_flow(c, 4.0, 1.0) == doctest::Approx(0.5));
}
