#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "hali/errors.hpp"
#include "hali/synthetic.hpp"

using namespace hali;

TEST_CASE("generate_synthetic shapes and anchor values") {
    SyntheticSpec spec;
    spec.seed = 11;

    SECTION("paper-scale record length") {
        auto truth = generate_synthetic(spec);
        CHECK(truth.clean.size() == 4000);
        CHECK(truth.clean.fs == 4000.0);
    }
    SECTION("fundamental amplitude starts at exactly 1") {
        auto truth = generate_synthetic(spec);
        CHECK(truth.amplitudes[0][0] == 1.0);
    }
    SECTION("closed-form phase at t=0.5 with the wobble only") {
        spec.random_walk = false;
        auto truth = generate_synthetic(spec);
        // 50*0.5 + (5/(2*pi))*cos(pi)
        CHECK(truth.phases[0][2000] == Catch::Approx(24.204225284540523).epsilon(1e-12));
    }
}

TEST_CASE("generate_synthetic invariants") {
    SyntheticSpec spec;
    spec.seed = 21;
    spec.n_harmonics = 4;
    auto truth = generate_synthetic(spec);
    const std::size_t n = truth.clean.size();

    SECTION("superposition of stored harmonics reproduces the clean signal") {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = truth.trend[i];
            for (std::size_t l = 0; l < truth.amplitudes.size(); ++l)
                acc += truth.amplitudes[l][i] * std::cos(2.0 * M_PI * truth.phases[l][i]);
            REQUIRE(std::abs(acc - truth.clean.samples[i]) < 1e-10);
        }
    }
    SECTION("C3 surrogate: positive fundamental, nonnegative harmonics") {
        for (std::size_t l = 0; l < truth.amplitudes.size(); ++l) {
            for (double v : truth.amplitudes[l]) {
                if (l == 0)
                    REQUIRE(v > 0.0);
                else
                    REQUIRE(v >= 0.0);
            }
        }
    }
    SECTION("C4 surrogate: harmonic IF stays within the jitter band") {
        // Finite differences of the stored phases.
        const double fs = truth.clean.fs;
        double max_if1 = 0.0;
        for (std::size_t i = 1; i < n; ++i)
            max_if1 = std::max(max_if1, (truth.phases[0][i] - truth.phases[0][i - 1]) * fs);
        for (std::size_t l = 1; l < truth.phases.size(); ++l) {
            const double ell = static_cast<double>(l + 1);
            const double bound = spec.harmonic_jitter * ell * max_if1 + 1e-9;
            for (std::size_t i = 1; i < n; ++i) {
                const double if_l = (truth.phases[l][i] - truth.phases[l][i - 1]) * fs;
                const double if_1 = (truth.phases[0][i] - truth.phases[0][i - 1]) * fs;
                REQUIRE(std::abs(if_l - ell * if_1) <= bound);
            }
        }
    }
    SECTION("bit-reproducible under the seed") {
        auto again = generate_synthetic(spec);
        CHECK(again.clean.samples == truth.clean.samples);
        CHECK(again.phases == truth.phases);
    }
}

TEST_CASE("generate_synthetic rejects Nyquist violations") {
    SyntheticSpec spec;
    spec.n_harmonics = 60;  // 60 * ~56 Hz well past 2 kHz
    CHECK_THROWS_AS(generate_synthetic(spec), InvalidInput);
}

TEST_CASE("apply_missingness") {
    SyntheticSpec spec;
    spec.seed = 33;
    auto truth = generate_synthetic(spec);
    const std::size_t n = truth.clean.size();

    SECTION("total missing budget is exact") {
        auto [masked, intervals] = apply_missingness(truth, 0.2, 3, 7);
        std::size_t total = 0;
        for (const auto& iv : intervals) total += iv.length;
        CHECK(total == 800);  // round(4000 * 0.2)

        std::size_t masked_count = 0;
        for (std::size_t i = 0; i < n; ++i) masked_count += masked.missing[i] ? 1 : 0;
        CHECK(masked_count == 800);
    }
    SECTION("intervals are sorted, distinct in length, inside the margins") {
        auto [masked, intervals] = apply_missingness(truth, 0.1, 3, 9);
        REQUIRE(intervals.size() == 3);
        const auto margin = static_cast<std::size_t>(0.05 * static_cast<double>(n));
        for (std::size_t k = 0; k < intervals.size(); ++k) {
            CHECK(intervals[k].start >= margin);
            CHECK(intervals[k].end() <= n - margin);
            if (k > 0) CHECK(intervals[k].start > intervals[k - 1].end());
        }
        CHECK(intervals[0].length != intervals[1].length);
        CHECK(intervals[1].length != intervals[2].length);
        CHECK(intervals[0].length != intervals[2].length);
    }
    SECTION("tiny budget still yields one interval") {
        SyntheticSpec small = spec;
        small.duration = 0.025;  // N = 100
        auto t2 = generate_synthetic(small);
        auto [masked, intervals] = apply_missingness(t2, 0.005, 1, 3);
        REQUIRE(intervals.size() == 1);
        CHECK(intervals[0].length == 1);
    }
    SECTION("deterministic under the seed") {
        auto [m1, i1] = apply_missingness(truth, 0.15, 3, 21);
        auto [m2, i2] = apply_missingness(truth, 0.15, 3, 21);
        CHECK(i1 == i2);
    }
    SECTION("bad fractions are rejected") {
        CHECK_THROWS_AS(apply_missingness(truth, 0.6, 3, 1), InvalidInput);
        CHECK_THROWS_AS(apply_missingness(truth, 0.0, 3, 1), InvalidInput);
    }
}
