#include "stormbox/controllers.hpp"

#include <doctest.h>

#include <cmath>

using namespace stormbox;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ScenarioMetadata two_orifices() {
  ScenarioMetadata m;
  m.target_outflow = 0.5;
  for (int i = 0; i < 2; ++i) {
    AssetInfo a;
    a.id = std::to_string(i + 1);
    a.upstream_node = "P" + a.id;
    a.max_depth = 2.0;
    a.discharge_coefficient = 0.65;
    a.full_open_area = 1.0;
    a.depth_index = i;
    m.assets.push_back(a);
  }
  return m;
}

}  // namespace

TEST_CASE("uncontrolled keeps every asset open") {
  auto m = two_orifices();
  UncontrolledController c(m);
  CHECK(c.act(vec({0.3, 1.9}), 0.0) == Vector::Ones(2));
  CHECK(UncontrolledController(ScenarioMetadata{}).act(Vector(), 0.0).size() == 0);
}

TEST_CASE("rule-based opens in proportion to fullness") {
  const Vector md = vec({2.0, 2.0, 2.0});
  const Vector s = rule_based_actions(vec({2.0, 1.0, 0.0}), md);
  CHECK(s[0] == 1.0);
  CHECK(s[1] == 0.5);
  CHECK(s[2] == 0.0);
  CHECK(rule_based_actions(vec({2.5, -0.1}), vec({2.0, 2.0})) == vec({1.0, 0.0}));

  RuleBasedController c(two_orifices());
  CHECK(c.act(vec({1.0, 0.5}), 0.0) == vec({0.5, 0.25}));
}

TEST_CASE("equal-filling flow split") {
  const Vector md = vec({2.0, 2.0});
  CHECK(equal_filling_flows(vec({0.0, 0.0}), md, 0.5) == Vector::Zero(2));

  const Vector equal = equal_filling_flows(vec({1.2, 1.2}), md, 0.5);
  CHECK(equal[0] == doctest::Approx(0.25));
  CHECK(equal[1] == doctest::Approx(0.25));

  const Vector uneven = equal_filling_flows(vec({1.6, 0.8}), md, 0.5);
  CHECK(uneven[0] == doctest::Approx(0.5));
  CHECK(uneven[1] == 0.0);

  const Vector three = equal_filling_flows(vec({0.9, 0.6, 0.0}), vec({1.0, 1.0, 1.0}), 1.0);
  // mean 0.5, deviations 0.4 and 0.1
  CHECK(three[0] == doctest::Approx(0.8));
  CHECK(three[1] == doctest::Approx(0.2));
  CHECK(three[2] == 0.0);
}

TEST_CASE("equal-filling settings invert the orifice") {
  const Vector s = equal_filling_actions(vec({1.6, 0.8}), vec({2.0, 2.0}), vec({1.6, 0.8}), vec({0.65, 0.65}),
                                         vec({1.0, 1.0}), 0.5);
  CHECK(s[0] == doctest::Approx(0.5 / (0.65 * std::sqrt(2 * 9.80665 * 1.6))));
  CHECK(s[0] == doctest::Approx(0.1374).epsilon(1e-3));
  CHECK(s[1] == 0.0);
}

TEST_CASE("equal-filling controller sizes settings at full head") {
  EqualFillingController c(two_orifices());
  const Vector s = c.act(vec({1.6, 0.8}), 0.0);
  CHECK(s[0] == doctest::Approx(0.5 / (0.65 * std::sqrt(2 * 9.80665 * 2.0))));
  CHECK(s[1] == 0.0);
}

TEST_CASE("controllers need the upstream depths") {
  auto m = two_orifices();
  m.assets[1].depth_index.reset();
  CHECK_THROWS_AS(RuleBasedController{m}, std::invalid_argument);
  CHECK_THROWS_AS(EqualFillingController{m}, std::invalid_argument);
  CHECK_NOTHROW(UncontrolledController{m});
}

TEST_CASE("factory") {
  const auto m = two_orifices();
  for (const auto& name : controller_names()) CHECK(make_controller(name, m) != nullptr);
  try {
    make_controller("pid", m);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("equal-filling") != std::string::npos);
    CHECK(msg.find("rule-based") != std::string::npos);
  }
}
