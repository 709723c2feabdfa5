#pragma once

#include <numbers>

namespace berry::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Frequencies quoted in MHz are cyclic. Internally everything is rad/ns and ns.
constexpr double mhz_to_rad_per_ns(double mhz) { return kTwoPi * mhz * 1e-3; }
constexpr double rad_per_ns_to_mhz(double w) { return w / (kTwoPi * 1e-3); }

}  // namespace berry::units
