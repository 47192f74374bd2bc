#pragma once

// Flow relations for runoff surfaces and control structures. All quantities SI:
// m, m^2, m^3/s; rainfall intensity in mm/hr.

#include "stormbox/network.hpp"
#include "stormbox/types.hpp"

#include <algorithm>
#include <cmath>

namespace stormbox::hydraulics {

template <typename Scalar>
inline constexpr Scalar kMmPerHourToMetresPerSecond = Scalar(1) / Scalar(3.6e6);

/// Rational-method runoff: C * i * A.
template <typename Scalar>
Scalar runoff(Scalar runoff_coefficient, Scalar intensity_mm_per_hr, Scalar area) {
  using std::max;
  return runoff_coefficient * max(intensity_mm_per_hr, Scalar(0)) *
         kMmPerHourToMetresPerSecond<Scalar> * area;
}

inline double runoff(const Subcatchment& sc, double intensity_mm_per_hr) {
  return runoff(sc.runoff_coefficient, intensity_mm_per_hr, sc.area);
}

/// Q = Cd * (setting * A) * sqrt(2 g h); zero for h <= 0.
template <typename Scalar>
Scalar orifice_flow(Scalar discharge_coefficient, Scalar full_open_area, Scalar head, Scalar setting) {
  using std::sqrt;
  if (!(head > Scalar(0)) || !(setting > Scalar(0))) return Scalar(0);
  return discharge_coefficient * setting * full_open_area * sqrt(Scalar(2) * Scalar(kGravity) * head);
}

inline double orifice_flow(const OrificeParams& p, double head, double setting) {
  return orifice_flow(p.discharge_coefficient, p.full_open_area, head, setting);
}

/// Effective crest of an adjustable weir: a closed weir (setting 0) sits at the node's max depth.
template <typename Scalar>
Scalar weir_effective_crest(Scalar crest_height, Scalar node_max_depth, Scalar setting) {
  return crest_height + (Scalar(1) - setting) * (node_max_depth - crest_height);
}

/// Rectangular weir Q = Cw * L * H^1.5 with H the depth above the effective crest.
template <typename Scalar>
Scalar weir_flow(Scalar discharge_coefficient, Scalar crest_length, Scalar crest_height,
                 Scalar node_max_depth, Scalar depth, Scalar setting) {
  using std::pow;
  const Scalar head = depth - weir_effective_crest(crest_height, node_max_depth, setting);
  if (!(head > Scalar(0))) return Scalar(0);
  return discharge_coefficient * crest_length * pow(head, Scalar(1.5));
}

inline double weir_flow(const WeirParams& p, double node_max_depth, double depth, double setting) {
  return weir_flow(p.discharge_coefficient, p.crest_length, p.crest_height, node_max_depth, depth, setting);
}

/// Pumps are binary: fractional settings round to the nearest of {0, 1}, ties to 1.
template <typename Scalar>
Scalar pump_state(Scalar setting) {
  return setting >= Scalar(0.5) ? Scalar(1) : Scalar(0);
}

/// Curve lookup at the upstream depth, clamped to the curve's end points; zero when off or dry.
inline double pump_flow(const Curve& curve, double upstream_depth, double setting) {
  if (pump_state(setting) == 0.0 || !(upstream_depth > 0.0)) return 0.0;
  return std::max(curve.interpolate(upstream_depth), 0.0);
}

/// Setting that makes an orifice pass `flow` at `head`, clamped to [0, 1]. Zero for dry heads.
template <typename Scalar>
Scalar orifice_setting_for_flow(Scalar flow, Scalar discharge_coefficient, Scalar full_open_area, Scalar head) {
  using std::clamp;
  using std::sqrt;
  if (!(head > Scalar(0)) || !(flow > Scalar(0))) return Scalar(0);
  const Scalar full = discharge_coefficient * full_open_area * sqrt(Scalar(2) * Scalar(kGravity) * head);
  return clamp(flow / full, Scalar(0), Scalar(1));
}

}  // namespace stormbox::hydraulics
