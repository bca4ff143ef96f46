#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hali/signal.hpp"

namespace hali {

enum class InterpolationScheme {
    CubicSpline,  ///< not-a-knot end conditions
    Pchip,        ///< Fritsch-Carlson shape-preserving cubic Hermite
};

/// Parse the CLI short names: "s" -> spline, "p" -> pchip.
InterpolationScheme parse_scheme(const std::string& name);
std::string scheme_name(InterpolationScheme scheme);

/// Interpolates the knots (knot_x strictly increasing) at the query points.
/// Queries must lie within [knot_x.front(), knot_x.back()]; both schemes are
/// exact at the knots. Spline needs >= 4 knots, pchip >= 2.
std::vector<double> interpolate_1d(const std::vector<double>& knot_x,
                                   const std::vector<double>& knot_y,
                                   const std::vector<double>& query_x,
                                   InterpolationScheme scheme);

struct ClippedSeries {
    std::vector<double> values;
    bool linear_fallback = false;  ///< too few knots for the scheme
};

/// Discards each interval widened by `guard` samples on both sides and
/// refills the discarded range from the remaining samples.
ClippedSeries clip_and_interpolate(const std::vector<double>& series,
                                   const std::vector<MissingInterval>& intervals,
                                   std::size_t guard, InterpolationScheme scheme);

}  // namespace hali
