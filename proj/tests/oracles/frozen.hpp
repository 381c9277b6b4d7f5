#pragma once

// Reference values computed once with 40-digit arithmetic (mpmath) using the
// spherical Vincenty central-angle formula, not haversine, with R = 6371.0 km.

namespace frozen {

// (0, 0) -> (90, 0): a quarter great circle, 2*pi*R/4.
inline constexpr double kQuarterCircumferenceKm = 10007.543398010286;
// One degree of longitude on the equator, 2*pi*R/360.
inline constexpr double kEquatorDegreeKm = 111.19492664455874;
// Algiers (36.7525, 3.0420) -> Niamey (13.5116, 2.1254).
inline constexpr double kAlgiersNiameyKm = 2585.8792100064217;

}  // namespace frozen
