#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>

#include "hali/errors.hpp"
#include "hali/rng.hpp"
#include "hali/signal.hpp"
#include "hali/synthetic.hpp"

using namespace hali;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Signal make_masked(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& runs,
                   double fs = 100.0) {
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) samples[i] = std::sin(0.37 * static_cast<double>(i));
    Signal s(std::move(samples), fs);
    for (auto [start, len] : runs) {
        for (std::size_t i = start; i < start + len; ++i) {
            s.samples[i] = kNaN;
            s.missing[i] = true;
        }
    }
    return s;
}

}  // namespace

TEST_CASE("detect_missing_intervals basics") {
    SECTION("no missing data") {
        auto s = make_masked(64, {});
        auto gaps = detect_missing_intervals(s, 1);
        CHECK(gaps.intervals.empty());
        CHECK(gaps.short_gaps.empty());
    }
    SECTION("fully missing record is a single run") {
        auto s = make_masked(100, {{0, 100}});
        auto gaps = detect_missing_intervals(s, 1);
        REQUIRE(gaps.intervals.size() == 1);
        CHECK(gaps.intervals[0] == MissingInterval{0, 100});
    }
    SECTION("two runs from a hand-scanned mask") {
        auto s = make_masked(100, {{10, 10}, {50, 3}});
        auto gaps = detect_missing_intervals(s, 2);
        REQUIRE(gaps.intervals.size() == 2);
        CHECK(gaps.intervals[0] == MissingInterval{10, 10});
        CHECK(gaps.intervals[1] == MissingInterval{50, 3});
    }
    SECTION("runs below min_len are reported as short gaps") {
        auto s = make_masked(100, {{10, 2}, {50, 5}});
        auto gaps = detect_missing_intervals(s, 3);
        REQUIRE(gaps.intervals.size() == 1);
        CHECK(gaps.intervals[0] == MissingInterval{50, 5});
        REQUIRE(gaps.short_gaps.size() == 1);
        CHECK(gaps.short_gaps[0] == MissingInterval{10, 2});
    }
    SECTION("empty signal is invalid") {
        Signal empty;
        CHECK_THROWS_AS(detect_missing_intervals(empty, 1), InvalidInput);
    }
}

TEST_CASE("detect_missing_intervals is idempotent under mask reconstruction") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 50 + static_cast<std::size_t>(rng.uniform_int(0, 200));
        std::vector<std::pair<std::size_t, std::size_t>> runs;
        std::size_t pos = rng.uniform_int(0, 10);
        while (pos + 5 < n) {
            const std::size_t len = static_cast<std::size_t>(rng.uniform_int(1, 5));
            if (pos + len >= n) break;
            runs.emplace_back(pos, len);
            pos += len + 1 + static_cast<std::size_t>(rng.uniform_int(1, 20));
        }
        auto s = make_masked(n, runs);
        auto first = detect_missing_intervals(s, 2);

        Signal rebuilt = make_masked(n, {});
        for (const auto& iv : first.intervals) {
            for (std::size_t i = iv.start; i < iv.end(); ++i) {
                rebuilt.samples[i] = kNaN;
                rebuilt.missing[i] = true;
            }
        }
        auto second = detect_missing_intervals(rebuilt, 2);
        CHECK(second.intervals == first.intervals);
        CHECK(second.short_gaps.empty());
    }
}

TEST_CASE("fill_linear bridges gaps with straight lines") {
    Signal s({0.0, kNaN, kNaN, 3.0}, 1.0);
    fill_linear(s, {{1, 2}});
    CHECK(s.samples[1] == Catch::Approx(1.0));
    CHECK(s.samples[2] == Catch::Approx(2.0));
    CHECK(s.observed_count() == 4);
}

TEST_CASE("add_noise") {
    SECTION("infinite SNR is a no-op") {
        auto s = make_masked(256, {});
        auto noisy = add_noise(s, std::numeric_limits<double>::infinity(), 3);
        CHECK(noisy.samples == s.samples);
    }
    SECTION("empirical SNR within half a dB at N=4000") {
        const double fs = 4000.0;
        std::vector<double> x(4000);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = std::cos(2.0 * M_PI * 50.0 * static_cast<double>(i) / fs);
        Signal s(std::move(x), fs);
        auto noisy = add_noise(s, 20.0, 99);

        double var_signal = 0.0, var_noise = 0.0, mean_s = 0.0, mean_n = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            mean_s += s.samples[i];
            mean_n += noisy.samples[i] - s.samples[i];
        }
        mean_s /= static_cast<double>(s.size());
        mean_n /= static_cast<double>(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            var_signal += std::pow(s.samples[i] - mean_s, 2);
            var_noise += std::pow(noisy.samples[i] - s.samples[i] - mean_n, 2);
        }
        const double snr = 10.0 * std::log10(var_signal / var_noise);
        CHECK(snr == Catch::Approx(20.0).margin(0.5));
    }
    SECTION("constant signal is invalid") {
        Signal s(std::vector<double>(100, 2.5), 10.0);
        CHECK_THROWS_AS(add_noise(s, 20.0, 1), InvalidInput);
    }
    SECTION("seeded determinism") {
        auto s = make_masked(512, {});
        auto a = add_noise(s, 10.0, 1234);
        auto b = add_noise(s, 10.0, 1234);
        CHECK(a.samples == b.samples);
    }
}

TEST_CASE("estimate_average_period") {
    SECTION("pure 50 Hz tone at 4 kHz gives 80 samples") {
        std::vector<double> x(4000);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = std::cos(2.0 * M_PI * 50.0 * static_cast<double>(i) / 4000.0);
        Signal s(std::move(x), 4000.0);
        CHECK(estimate_average_period(s) == Catch::Approx(80.0));
    }
    SECTION("constant signal has no dominant frequency") {
        Signal s(std::vector<double>(64, 1.0), 8.0);
        CHECK_THROWS_AS(estimate_average_period(s), NoDominantFrequencyError);
    }
    SECTION("synthetic family lands in the expected period band") {
        SyntheticSpec spec;
        spec.seed = 5;
        auto truth = generate_synthetic(spec);
        const double period = estimate_average_period(truth.clean);
        CHECK(period >= 72.0);
        CHECK(period <= 89.0);
    }
    SECTION("gap-aware: uses the longest observed segment") {
        std::vector<double> x(4000);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = std::cos(2.0 * M_PI * 50.0 * static_cast<double>(i) / 4000.0);
        Signal s(std::move(x), 4000.0);
        for (std::size_t i = 500; i < 700; ++i) {
            s.samples[i] = kNaN;
            s.missing[i] = true;
        }
        const double period = estimate_average_period(s);
        CHECK(period == Catch::Approx(80.0).margin(1.0));
    }
}
