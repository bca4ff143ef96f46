#include "hali/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hali/errors.hpp"

namespace hali {

InterpolationScheme parse_scheme(const std::string& name) {
    if (name == "s" || name == "spline") return InterpolationScheme::CubicSpline;
    if (name == "p" || name == "pchip") return InterpolationScheme::Pchip;
    throw InvalidInput("unknown interpolation scheme '" + name + "' (expected s or p)");
}

std::string scheme_name(InterpolationScheme scheme) {
    return scheme == InterpolationScheme::CubicSpline ? "s" : "p";
}

namespace {

void check_knots(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_knots) {
    if (x.size() != y.size()) throw InvalidInput("interpolate_1d: knot size mismatch");
    if (x.size() < min_knots) throw InvalidInput("interpolate_1d: too few knots");
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) throw InvalidInput("interpolate_1d: knots must be strictly increasing");
    }
}

std::size_t locate(const std::vector<double>& x, double q) {
    // Index of the interval [x[i], x[i+1]] containing q.
    auto it = std::upper_bound(x.begin(), x.end(), q);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    if (i == 0) return 0;
    if (i >= x.size()) return x.size() - 2;
    return i - 1;
}

// Natural cubic spline machinery with not-a-knot end conditions, solved for
// the moments M_i = S''(x_i). The two end conditions couple three unknowns,
// so M_0 and M_{n-1} are eliminated first and the remaining system is
// tridiagonal in M_1..M_{n-2}.
std::vector<double> spline_eval(const std::vector<double>& x, const std::vector<double>& y,
                                const std::vector<double>& q) {
    const std::size_t n = x.size();
    std::vector<double> h(n - 1), slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        slope[i] = (y[i + 1] - y[i]) / h[i];
    }

    const std::size_t m = n - 2;  // unknowns M_1..M_{n-2}
    std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0), rhs(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k + 1;
        lower[k] = h[i - 1];
        diag[k] = 2.0 * (h[i - 1] + h[i]);
        upper[k] = h[i];
        rhs[k] = 6.0 * (slope[i] - slope[i - 1]);
    }
    // Not-a-knot at x_1: h1*M0 - (h0+h1)*M1 + h0*M2 = 0, eliminated into row 0.
    diag[0] = h[0] + 2.0 * h[1];
    upper[0] = h[1] - h[0];
    rhs[0] = 6.0 * (slope[1] - slope[0]) * h[1] / (h[0] + h[1]);
    lower[0] = 0.0;
    // Mirror condition at x_{n-2}.
    const std::size_t e = n - 3;  // h index of the second-to-last panel
    diag[m - 1] = 2.0 * h[e] + h[e + 1];
    lower[m - 1] = h[e] - h[e + 1];
    rhs[m - 1] = 6.0 * (slope[e + 1] - slope[e]) * h[e] / (h[e] + h[e + 1]);
    upper[m - 1] = 0.0;

    // Thomas algorithm.
    std::vector<double> mom(n, 0.0);
    std::vector<double> cp(m, 0.0), dp(m, 0.0);
    cp[0] = upper[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (std::size_t k = 1; k < m; ++k) {
        const double denom = diag[k] - lower[k] * cp[k - 1];
        cp[k] = upper[k] / denom;
        dp[k] = (rhs[k] - lower[k] * dp[k - 1]) / denom;
    }
    mom[m] = dp[m - 1];
    for (std::size_t k = m - 1; k >= 1; --k) mom[k] = dp[k - 1] - cp[k - 1] * mom[k + 1];
    mom[0] = ((h[0] + h[1]) * mom[1] - h[0] * mom[2]) / h[1];
    mom[n - 1] = ((h[e] + h[e + 1]) * mom[n - 2] - h[e + 1] * mom[n - 3]) / h[e];

    std::vector<double> out(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
        const std::size_t i = locate(x, q[k]);
        const double a = x[i + 1] - q[k];
        const double b = q[k] - x[i];
        out[k] = mom[i] * a * a * a / (6.0 * h[i]) + mom[i + 1] * b * b * b / (6.0 * h[i]) +
                 (y[i] / h[i] - mom[i] * h[i] / 6.0) * a +
                 (y[i + 1] / h[i] - mom[i + 1] * h[i] / 6.0) * b;
    }
    return out;
}

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n == 2) {
        d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
        return d;
    }
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        s[i] = (y[i + 1] - y[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] > 0.0) {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
        }
    }
    // Shape-preserving three-point end slopes.
    auto end_slope = [](double h0, double h1, double s0, double s1) {
        double dd = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (dd * s0 <= 0.0)
            dd = 0.0;
        else if (s0 * s1 < 0.0 && std::abs(dd) > 3.0 * std::abs(s0))
            dd = 3.0 * s0;
        return dd;
    };
    d[0] = end_slope(h[0], h[1], s[0], s[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
    return d;
}

std::vector<double> pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<double>& q) {
    const auto d = pchip_slopes(x, y);
    std::vector<double> out(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
        const std::size_t i = locate(x, q[k]);
        const double h = x[i + 1] - x[i];
        const double t = (q[k] - x[i]) / h;
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        const double h10 = t3 - 2.0 * t2 + t;
        const double h01 = -2.0 * t3 + 3.0 * t2;
        const double h11 = t3 - t2;
        out[k] = h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
    }
    return out;
}

}  // namespace

std::vector<double> interpolate_1d(const std::vector<double>& knot_x,
                                   const std::vector<double>& knot_y,
                                   const std::vector<double>& query_x,
                                   InterpolationScheme scheme) {
    const std::size_t min_knots = scheme == InterpolationScheme::CubicSpline ? 4 : 2;
    check_knots(knot_x, knot_y, min_knots);
    if (query_x.empty()) return {};
    return scheme == InterpolationScheme::CubicSpline ? spline_eval(knot_x, knot_y, query_x)
                                                      : pchip_eval(knot_x, knot_y, query_x);
}

ClippedSeries clip_and_interpolate(const std::vector<double>& series,
                                   const std::vector<MissingInterval>& intervals,
                                   std::size_t guard, InterpolationScheme scheme) {
    ClippedSeries out;
    out.values = series;
    if (intervals.empty()) return out;

    const std::size_t n = series.size();
    std::vector<bool> drop(n, false);
    for (const auto& iv : intervals) {
        if (iv.end() > n) throw InvalidInput("clip_and_interpolate: interval out of range");
        const std::size_t lo = iv.start > guard ? iv.start - guard : 0;
        const std::size_t hi = std::min(n, iv.end() + guard);
        for (std::size_t i = lo; i < hi; ++i) drop[i] = true;
    }

    std::vector<double> kx, ky, qx;
    std::vector<std::size_t> qidx;
    for (std::size_t i = 0; i < n; ++i) {
        if (drop[i]) {
            qx.push_back(static_cast<double>(i));
            qidx.push_back(i);
        } else {
            kx.push_back(static_cast<double>(i));
            ky.push_back(series[i]);
        }
    }
    if (qidx.empty()) return out;

    if (kx.size() < 2)
        throw InvalidInput("clip_and_interpolate: not enough samples outside the intervals");

    // Queries beyond the knot range (gaps touching a record edge) hold the
    // nearest knot value rather than extrapolating.
    std::vector<double> inner_q;
    inner_q.reserve(qx.size());
    for (double q : qx) inner_q.push_back(std::clamp(q, kx.front(), kx.back()));

    const std::size_t min_knots = scheme == InterpolationScheme::CubicSpline ? 4 : 2;
    std::vector<double> filled;
    if (kx.size() >= min_knots) {
        filled = interpolate_1d(kx, ky, inner_q, scheme);
    } else {
        // Fewer knots than the scheme minimum: straight-line fallback.
        filled.resize(inner_q.size());
        for (std::size_t k = 0; k < inner_q.size(); ++k) {
            const std::size_t i =
                inner_q[k] >= kx.back()
                    ? kx.size() - 2
                    : static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                          0, std::upper_bound(kx.begin(), kx.end(), inner_q[k]) - kx.begin() - 1));
            const double t = (inner_q[k] - kx[i]) / (kx[i + 1] - kx[i]);
            filled[k] = ky[i] + t * (ky[i + 1] - ky[i]);
        }
        out.linear_fallback = true;
    }
    for (std::size_t k = 0; k < qidx.size(); ++k) out.values[qidx[k]] = filled[k];
    return out;
}

}  // namespace hali
