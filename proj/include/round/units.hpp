#pragma once

namespace roundsim {

// All internal state is SI; configs speak mph and convert on load.
inline constexpr double kMphToMps = 0.44704;

constexpr double mph_to_mps(double mph) { return mph * kMphToMps; }
constexpr double mps_to_mph(double mps) { return mps / kMphToMps; }

}  // namespace roundsim
