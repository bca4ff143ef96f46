#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "hali/errors.hpp"
#include "hali/interpolation.hpp"
#include "hali/rng.hpp"

using namespace hali;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

}  // namespace

TEST_CASE("interpolate_1d reproduces straight lines exactly") {
    const auto x = linspace(0.0, 10.0, 9);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.0 * x[i] - 2.0;
    const auto q = linspace(0.0, 10.0, 101);

    for (auto scheme : {InterpolationScheme::CubicSpline, InterpolationScheme::Pchip}) {
        const auto out = interpolate_1d(x, y, q, scheme);
        for (std::size_t i = 0; i < q.size(); ++i)
            REQUIRE(std::abs(out[i] - (3.0 * q[i] - 2.0)) < 1e-12);
    }
}

TEST_CASE("not-a-knot spline reproduces cubic polynomials") {
    auto cubic = [](double t) { return 0.5 * t * t * t - 2.0 * t * t + t - 7.0; };
    const auto x = linspace(-3.0, 4.0, 12);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = cubic(x[i]);
    const auto q = linspace(-3.0, 4.0, 257);

    const auto out = interpolate_1d(x, y, q, InterpolationScheme::CubicSpline);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double expected = cubic(q[i]);
        REQUIRE(std::abs(out[i] - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("pchip is monotone on monotone data") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 5 + static_cast<int>(rng.uniform_int(0, 15));
        std::vector<double> x(n), y(n);
        double xv = 0.0, yv = 0.0;
        for (int i = 0; i < n; ++i) {
            xv += 0.2 + rng.uniform01();
            yv += rng.uniform01() < 0.3 ? 0.0 : rng.uniform01();
            x[i] = xv;
            y[i] = yv;
        }
        const auto q = linspace(x.front(), x.back(), 400);
        const auto out = interpolate_1d(x, y, q, InterpolationScheme::Pchip);
        for (std::size_t i = 1; i < out.size(); ++i) REQUIRE(out[i] >= out[i - 1] - 1e-12);
    }
}

TEST_CASE("interpolate_1d is exact at the knots") {
    const std::vector<double> x{0.0, 1.0, 2.5, 3.0, 5.5, 7.0};
    const std::vector<double> y{1.0, -2.0, 4.0, 4.5, 0.0, 3.0};
    for (auto scheme : {InterpolationScheme::CubicSpline, InterpolationScheme::Pchip}) {
        const auto out = interpolate_1d(x, y, x, scheme);
        for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(out[i] == Catch::Approx(y[i]).margin(1e-12));
    }
}

TEST_CASE("interpolate_1d rejects bad knots") {
    const std::vector<double> q{0.5};
    CHECK_THROWS_AS(interpolate_1d({0, 2, 1, 3}, {0, 0, 0, 0}, q, InterpolationScheme::CubicSpline),
                    InvalidInput);
    CHECK_THROWS_AS(interpolate_1d({0, 1, 1, 3}, {0, 0, 0, 0}, q, InterpolationScheme::Pchip),
                    InvalidInput);
    CHECK_THROWS_AS(interpolate_1d({0, 1, 2}, {0, 0, 0}, q, InterpolationScheme::CubicSpline),
                    InvalidInput);
    CHECK_THROWS_AS(interpolate_1d({0}, {0}, q, InterpolationScheme::Pchip), InvalidInput);
}

TEST_CASE("clip_and_interpolate") {
    SECTION("no intervals: series returned unchanged") {
        std::vector<double> series{1.0, 2.0, 3.0, 2.0, 1.0};
        const auto out = clip_and_interpolate(series, {}, 2, InterpolationScheme::Pchip);
        CHECK(out.values == series);
        CHECK_FALSE(out.linear_fallback);
    }
    SECTION("linear series with one gap refills exactly under both schemes") {
        std::vector<double> series(200);
        for (std::size_t i = 0; i < series.size(); ++i) series[i] = 0.25 * static_cast<double>(i) - 3.0;
        auto corrupted = series;
        for (std::size_t i = 80; i < 110; ++i) corrupted[i] = 1e9;  // to be discarded
        for (auto scheme : {InterpolationScheme::CubicSpline, InterpolationScheme::Pchip}) {
            const auto out = clip_and_interpolate(corrupted, {{80, 30}}, 5, scheme);
            for (std::size_t i = 0; i < series.size(); ++i)
                REQUIRE(std::abs(out.values[i] - series[i]) < 1e-9);
        }
    }
    SECTION("constant-IF phase across a 100-sample gap") {
        // The unwrapped phase of a constant-frequency tone is affine in n.
        std::vector<double> phase(1000);
        for (std::size_t i = 0; i < phase.size(); ++i)
            phase[i] = 0.0125 * static_cast<double>(i) + 0.3;
        auto corrupted = phase;
        for (std::size_t i = 500; i < 600; ++i) corrupted[i] = -1.0;
        for (auto scheme : {InterpolationScheme::CubicSpline, InterpolationScheme::Pchip}) {
            const auto out = clip_and_interpolate(corrupted, {{500, 100}}, 10, scheme);
            for (std::size_t i = 0; i < phase.size(); ++i)
                REQUIRE(std::abs(out.values[i] - phase[i]) < 1e-9);
        }
    }
    SECTION("guard widening discards boundary samples") {
        std::vector<double> series(50, 1.0);
        series[9] = 100.0;   // inside the guard band
        series[20] = 100.0;  // outside
        const auto out = clip_and_interpolate(series, {{10, 5}}, 2, InterpolationScheme::Pchip);
        CHECK(out.values[9] == Catch::Approx(1.0));
        CHECK(out.values[20] == Catch::Approx(100.0));
    }
    SECTION("too few knots falls back to linear with a flag") {
        std::vector<double> series{0.0, 1.0, 5.0, 9.0, 10.0};
        const auto out = clip_and_interpolate(series, {{1, 3}}, 0, InterpolationScheme::CubicSpline);
        CHECK(out.linear_fallback);
        CHECK(out.values[1] == Catch::Approx(2.5));
        CHECK(out.values[2] == Catch::Approx(5.0));
        CHECK(out.values[3] == Catch::Approx(7.5));
    }
}
