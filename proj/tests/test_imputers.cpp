#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>

#include "hali/errors.hpp"
#include "hali/imputers.hpp"
#include "hali/metrics.hpp"
#include "hali/rng.hpp"
#include "hali/synthetic.hpp"

using namespace hali;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Signal mask_interval(Signal s, const MissingInterval& iv) {
    for (std::size_t i = iv.start; i < iv.end(); ++i) {
        s.samples[i] = kNaN;
        s.missing[i] = true;
    }
    return s;
}

Signal periodic_signal(int n, int period, double fs = 100.0) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        const double u = static_cast<double>(i % period) / static_cast<double>(period);
        x[i] = std::sin(2.0 * M_PI * u) + 0.3 * std::cos(4.0 * M_PI * u) + 0.1 * u;
    }
    return Signal(std::move(x), fs);
}

ImputerConfig small_config(int d, int k, int m) {
    ImputerConfig config;
    config.template_len = d;
    config.embed_dim = k;
    config.subsignal_len = m;
    return config;
}

}  // namespace

TEST_CASE("auto_tune follows the d=3T, M=3T, K=2.5M rules") {
    std::vector<double> x(4000);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::cos(2.0 * M_PI * 50.0 * static_cast<double>(i) / 4000.0);
    Signal s(std::move(x), 4000.0);

    SECTION("T=80") {
        auto config = auto_tune(s, 80.0);
        CHECK(config.template_len == 240);
        CHECK(config.subsignal_len == 240);
        CHECK(config.embed_dim == 600);
        CHECK(config.cycles_for_seasonality == 3);
        CHECK_NOTHROW(config.validate());
    }
    SECTION("T=2 boundary") {
        auto config = auto_tune(s, 2.0);
        CHECK(config.template_len == 6);
        CHECK(config.subsignal_len == 6);
        CHECK(config.embed_dim == 15);
    }
    SECTION("estimated period is used when none is given") {
        auto config = auto_tune(s, 0.0);
        CHECK(config.template_len == 240);
        CHECK(config.auto_tuned);
    }
}

TEST_CASE("impute_tlm") {
    SECTION("exactly periodic signals are recovered with zero error") {
        auto clean = periodic_signal(600, 40);
        const MissingInterval gap{300, 30};
        auto masked = mask_interval(clean, gap);
        auto imputed = impute_tlm(masked, {gap}, 80);
        for (std::size_t i = gap.start; i < gap.end(); ++i)
            REQUIRE(imputed.samples[i] == clean.samples[i]);
    }
    SECTION("property: zero gap error over random integer periods") {
        Rng rng(31);
        for (int trial = 0; trial < 25; ++trial) {
            const int period = 20 + static_cast<int>(rng.uniform_int(0, 180));
            const int n = 10 * period;
            auto clean = periodic_signal(n, period);
            const auto len = static_cast<std::size_t>(1 + rng.uniform_int(0, period - 2));
            const auto start = static_cast<std::size_t>(3 * period + rng.uniform_int(0, period));
            const MissingInterval gap{start, len};
            auto masked = mask_interval(clean, gap);
            auto imputed = impute_tlm(masked, {gap}, period);
            for (std::size_t i = gap.start; i < gap.end(); ++i)
                REQUIRE(imputed.samples[i] == clean.samples[i]);
        }
    }
    SECTION("constant signals fill with the constant") {
        Signal s(std::vector<double>(200, 4.25), 50.0);
        const MissingInterval gap{90, 12};
        auto masked = mask_interval(s, gap);
        auto imputed = impute_tlm(masked, {gap}, 20);
        for (std::size_t i = gap.start; i < gap.end(); ++i) REQUIRE(imputed.samples[i] == 4.25);
    }
    SECTION("one-sided template near the record edge") {
        auto clean = periodic_signal(400, 25);
        const MissingInterval gap{5, 10};  // almost no left context
        auto masked = mask_interval(clean, gap);
        auto imputed = impute_tlm(masked, {gap}, 50);
        CHECK(imputed.observed_count() == clean.size());
        for (std::size_t i = gap.start; i < gap.end(); ++i)
            REQUIRE(imputed.samples[i] == clean.samples[i]);  // right template matches exactly
    }
    SECTION("no candidate window is infeasible") {
        auto clean = periodic_signal(60, 20);
        const MissingInterval gap{20, 20};
        auto masked = mask_interval(clean, gap);
        CHECK_THROWS_AS(impute_tlm(masked, {gap}, 25), ImputerInfeasibleError);
    }
}

TEST_CASE("impute_dynamics on closed-form systems") {
    SECTION("geometric sequence: LSE forecast error below 1e-8 over 50 steps") {
        const int n = 400;
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = std::pow(0.99, i);
        Signal clean(x, 100.0);
        const MissingInterval gap{330, 50};
        auto masked = mask_interval(clean, gap);
        auto config = small_config(10, 12, 40);
        auto imputed = impute_dynamics(masked, {gap}, DynamicsVariant::Lse, config);
        for (std::size_t i = gap.start; i < gap.end(); ++i)
            REQUIRE(std::abs(imputed.samples[i] - clean.samples[i]) < 1e-8);
    }
    SECTION("two undamped sinusoids: DMD eigenvalues on the unit circle") {
        const int k = 24, m = 36;
        std::vector<double> history(k + m);
        for (int i = 0; i < k + m; ++i) {
            history[i] = std::sin(2.0 * M_PI * 0.037 * i) + 0.7 * std::sin(2.0 * M_PI * 0.113 * i + 0.4);
        }
        auto model = fit_dynamics(history, k, m, DynamicsVariant::Dmd);
        REQUIRE(model.eigenvalues.size() >= 4);
        int on_circle = 0;
        for (const auto& mu : model.eigenvalues) {
            if (std::abs(std::abs(mu) - 1.0) <= 1e-6) ++on_circle;
        }
        CHECK(on_circle >= 4);
    }
    SECTION("constant signal is a fixed point for every variant") {
        Signal s(std::vector<double>(300, 2.0), 100.0);
        const MissingInterval gap{200, 40};
        auto masked = mask_interval(s, gap);
        auto config = small_config(10, 20, 30);
        for (auto variant : {DynamicsVariant::Lse, DynamicsVariant::Dmd, DynamicsVariant::Edmd}) {
            auto imputed = impute_dynamics(masked, {gap}, variant, config);
            for (std::size_t i = gap.start; i < gap.end(); ++i)
                REQUIRE(imputed.samples[i] == Catch::Approx(2.0).margin(1e-9));
        }
    }
    SECTION("LSE and DMD agree on full-rank data") {
        SyntheticSpec spec;
        spec.seed = 61;
        auto truth = generate_synthetic(spec);
        const MissingInterval gap{2000, 100};
        auto masked = mask_interval(truth.clean, gap);
        auto config = small_config(240, 600, 240);
        auto lse = impute_dynamics(masked, {gap}, DynamicsVariant::Lse, config);
        auto dmd = impute_dynamics(masked, {gap}, DynamicsVariant::Dmd, config);
        for (std::size_t i = gap.start; i < gap.end(); ++i)
            REQUIRE(std::abs(lse.samples[i] - dmd.samples[i]) < 1e-8);
    }
    SECTION("insufficient left context is infeasible") {
        Signal s(std::vector<double>(100, 1.0), 10.0);
        s.samples[50] = 2.0;
        const MissingInterval gap{30, 10};
        auto masked = mask_interval(s, gap);
        auto config = small_config(10, 25, 25);  // K+M = 50 > 30
        CHECK_THROWS_AS(impute_dynamics(masked, {gap}, DynamicsVariant::Lse, config),
                        ImputerInfeasibleError);
    }
}

TEST_CASE("impute_gpr") {
    SECTION("constant signal fills with the constant") {
        Signal s(std::vector<double>(300, -1.5), 100.0);
        const MissingInterval gap{220, 30};
        auto masked = mask_interval(s, gap);
        auto config = small_config(10, 30, 40);
        auto imputed = impute_gpr(masked, {gap}, config);
        for (std::size_t i = gap.start; i < gap.end(); ++i)
            REQUIRE(imputed.samples[i] == Catch::Approx(-1.5).margin(1e-6));
    }
    SECTION("smooth sinusoid, gap of half a period: NMAE below 0.05") {
        const int n = 500, period = 50;
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = std::sin(2.0 * M_PI * static_cast<double>(i) / period);
        Signal clean(x, 100.0);
        const MissingInterval gap{400, 25};
        auto masked = mask_interval(clean, gap);
        auto config = small_config(75, 75, 60);
        auto imputed = impute_gpr(masked, {gap}, config);
        CHECK(nmae(clean, imputed, {gap}) <= 0.05);
    }
    SECTION("posterior deviation is nondecreasing over the first 10 steps") {
        const int n = 600, period = 40;
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = std::sin(2.0 * M_PI * static_cast<double>(i) / period);
        Signal clean(x, 100.0);
        const MissingInterval gap{500, 40};
        auto masked = mask_interval(clean, gap);
        auto config = small_config(60, 60, 50);
        std::vector<std::vector<double>> sds;
        impute_gpr(masked, {gap}, config, &sds);
        REQUIRE(sds.size() == 1);
        REQUIRE(sds[0].size() == 40);
        for (int i = 1; i < 10; ++i) REQUIRE(sds[0][i] >= sds[0][i - 1] - 1e-12);
    }
}

TEST_CASE("estimate_seasonality") {
    SECTION("uniform phase gives the uniform cycle length") {
        std::vector<double> phase(4000);
        for (std::size_t i = 0; i < phase.size(); ++i) phase[i] = static_cast<double>(i) / 80.0;
        CHECK(estimate_seasonality(phase, {3995, 5}, SarSide::Before, 3) == 80);
    }
    SECTION("hand-built cycles [78, 80, 82] average to 80") {
        std::vector<double> phase;
        phase.push_back(0.0);
        const int lengths[3] = {78, 80, 82};
        double base = 0.0;
        for (int c = 0; c < 3; ++c) {
            for (int k = 1; k <= lengths[c]; ++k)
                phase.push_back(base + static_cast<double>(k) / lengths[c]);
            base += 1.0;
        }
        const auto n = phase.size();
        phase.resize(n + 10, phase.back());  // gap placeholder region
        CHECK(estimate_seasonality(phase, {n, 10}, SarSide::Before, 3) == 80);
    }
    SECTION("after-side cycles") {
        std::vector<double> phase(500);
        for (std::size_t i = 0; i < phase.size(); ++i) phase[i] = static_cast<double>(i) / 40.0;
        CHECK(estimate_seasonality(phase, {10, 20}, SarSide::After, 3) == 40);
    }
    SECTION("fewer complete cycles than N_c is an error") {
        std::vector<double> phase(200);
        for (std::size_t i = 0; i < phase.size(); ++i) phase[i] = static_cast<double>(i) / 80.0;
        CHECK_THROWS_AS(estimate_seasonality(phase, {195, 5}, SarSide::Before, 3), SeasonalityError);
    }
}

TEST_CASE("impute_sar") {
    SECTION("integer-period periodic signal is reproduced exactly") {
        auto clean = periodic_signal(400, 25);
        const MissingInterval gap{300, 30};
        auto masked = mask_interval(clean, gap);
        auto config = small_config(10, 10, 10);
        auto imputed = impute_sar(masked, {gap}, SarDirection::Forward, 25, config);
        for (std::size_t i = gap.start; i < gap.end(); ++i)
            REQUIRE(std::abs(imputed.samples[i] - clean.samples[i]) <= 1e-9);
    }
    SECTION("backward on the reversed record mirrors forward") {
        auto clean = periodic_signal(500, 30);
        for (std::size_t i = 0; i < clean.size(); ++i)
            clean.samples[i] += 0.05 * std::sin(0.013 * static_cast<double>(i));
        const MissingInterval gap{350, 40};
        auto masked = mask_interval(clean, gap);
        auto config = small_config(10, 10, 10);
        auto forward = impute_sar(masked, {gap}, SarDirection::Forward, 30, config);

        Signal reversed = masked;
        std::reverse(reversed.samples.begin(), reversed.samples.end());
        std::vector<bool> mask(masked.missing.rbegin(), masked.missing.rend());
        reversed.missing = mask;
        const MissingInterval mapped{clean.size() - gap.end(), gap.length};
        auto backward = impute_sar(reversed, {mapped}, SarDirection::Backward, 30, config);
        for (std::size_t i = 0; i < gap.length; ++i) {
            REQUIRE(backward.samples[mapped.start + i] ==
                    forward.samples[gap.end() - 1 - i]);
        }
    }
    SECTION("constant signal forecasts the constant") {
        Signal s(std::vector<double>(300, 7.5), 100.0);
        const MissingInterval gap{250, 20};
        auto masked = mask_interval(s, gap);
        auto config = small_config(10, 10, 10);
        auto imputed = impute_sar(masked, {gap}, SarDirection::Forward, 10, config);
        for (std::size_t i = gap.start; i < gap.end(); ++i)
            REQUIRE(imputed.samples[i] == Catch::Approx(7.5).margin(1e-6));
    }
    SECTION("too little fitting data is infeasible") {
        auto clean = periodic_signal(100, 30);
        const MissingInterval gap{70, 20};
        auto masked = mask_interval(clean, gap);
        auto config = small_config(10, 10, 10);
        CHECK_THROWS_AS(impute_sar(masked, {gap}, SarDirection::Forward, 30, config),
                        ImputerInfeasibleError);
    }
}

TEST_CASE("every imputer preserves observed samples bit-exactly") {
    SyntheticSpec spec;
    spec.seed = 77;
    auto truth = generate_synthetic(spec);
    auto [masked, intervals] = apply_missingness(truth, 0.05, 3, 5);
    auto config = auto_tune(masked, 0.0);

    for (auto method : {ImputeMethod::Tlm, ImputeMethod::Lse, ImputeMethod::Dmd, ImputeMethod::Edmd,
                        ImputeMethod::Gpr, ImputeMethod::SarForward, ImputeMethod::SarBackward}) {
        config.method = method;
        auto result = apply_imputer(masked, intervals, config);
        REQUIRE(result.signal.observed_count() == masked.size());
        for (std::size_t i = 0; i < masked.size(); ++i) {
            if (!masked.missing[i]) REQUIRE(result.signal.samples[i] == masked.samples[i]);
        }
    }
}

TEST_CASE("apply_imputer falls back to LSE and then to linear") {
    Signal s(std::vector<double>(60, 0.0), 10.0);
    for (std::size_t i = 0; i < s.size(); ++i) s.samples[i] = std::sin(0.7 * static_cast<double>(i));
    const MissingInterval gap{5, 10};
    auto masked = mask_interval(s, gap);

    ImputerConfig config = small_config(50, 30, 20);  // infeasible on every route
    config.method = ImputeMethod::Tlm;
    auto result = apply_imputer(masked, {gap}, config);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].used == "linear");
    CHECK(result.records[0].fell_back);
    CHECK(result.signal.observed_count() == masked.size());
}

TEST_CASE("apply_imputer is deterministic") {
    SyntheticSpec spec;
    spec.seed = 99;
    auto truth = generate_synthetic(spec);
    auto [masked, intervals] = apply_missingness(truth, 0.08, 3, 11);
    auto config = auto_tune(masked, 0.0);
    config.method = ImputeMethod::Tlm;
    auto a = apply_imputer(masked, intervals, config);
    auto b = apply_imputer(masked, intervals, config);
    CHECK(a.signal.samples == b.signal.samples);
}
