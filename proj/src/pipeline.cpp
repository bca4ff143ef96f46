#include "hali/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "hali/errors.hpp"

namespace hali {

HaliStages hali_prepare(const Signal& signal,
                        std::optional<std::vector<MissingInterval>> intervals,
                        const HaliParams& params) {
    signal.validate();

    HaliStages stages;

    // Step 0: interval detection; sub-threshold runs are filled right away.
    Signal work = signal;
    if (intervals) {
        stages.intervals = *intervals;
    } else {
        auto detected = detect_missing_intervals(work, params.min_gap_len);
        if (!detected.short_gaps.empty()) fill_linear(work, detected.short_gaps);
        stages.intervals = std::move(detected.intervals);
    }

    // Step 1: initial imputation with the fallback chain.
    if (stages.intervals.empty()) {
        stages.initial = work;
    } else {
        try {
            ImputerConfig config;
            if (params.imputer) {
                config = *params.imputer;
                config.method = params.initial_method;
            } else {
                config = auto_tune(work, 0.0);
                config.method = params.initial_method;
            }
            auto initial = apply_imputer(work, stages.intervals, config);
            stages.initial = std::move(initial.signal);
            stages.records = std::move(initial.records);
            for (const auto& record : stages.records) {
                if (record.used == "linear") stages.degraded = true;
            }
        } catch (const ComputeError&) {
            // Not even the parameters could be derived; bridge the gaps.
            stages.initial = work;
            fill_linear(stages.initial, stages.intervals);
            for (const auto& iv : stages.intervals)
                stages.records.push_back({iv, method_name(params.initial_method), "linear", true, false});
            stages.degraded = true;
        }
    }

    // Any samples still missing (caller-supplied intervals that do not cover
    // the mask) are filled linearly so the analysis sees a complete record.
    if (stages.initial.observed_count() != stages.initial.size()) {
        auto leftovers = detect_missing_intervals(stages.initial, 1);
        fill_linear(stages.initial, leftovers.intervals);
        fill_linear(stages.initial, leftovers.short_gaps);
        stages.degraded = true;
    }

    // Step 2: harmonic decomposition and trend extraction. A record the
    // analysis cannot handle (too short for a window, flat spectrum) keeps
    // the step-1 result instead of aborting.
    try {
        stages.decomposition =
            harmonic_decompose(stages.initial, params.n_components, params.decompose);
    } catch (const Error&) {
        stages.decomposition = {};
        stages.decompose_failed = true;
        stages.degraded = true;
    }
    return stages;
}

ImputationResult hali_finalize(const HaliStages& stages, InterpolationScheme scheme, int guard) {
    ImputationResult result;
    result.initial = stages.initial;
    result.records = stages.records;
    result.degraded = stages.degraded;
    result.decomposition = stages.decomposition;

    const std::size_t n = stages.initial.size();
    const auto& intervals = stages.intervals;
    const std::size_t guard_samples = guard >= 0
                                          ? static_cast<std::size_t>(guard)
                                          : static_cast<std::size_t>(stages.decomposition.guard_delta);

    // Step 3: clip the decomposition over each gap and re-interpolate.
    auto interp = [&](const std::vector<double>& series) {
        auto clipped = clip_and_interpolate(series, intervals, guard_samples, scheme);
        if (clipped.linear_fallback) result.interp_linear_fallback = true;
        return std::move(clipped.values);
    };

    std::vector<double> resynth(n, 0.0);
    auto trend_bar = intervals.empty() ? stages.decomposition.trend
                                       : interp(stages.decomposition.trend);
    for (const auto& comp : result.decomposition.components) {
        for (const auto& h : comp.harmonics) {
            auto amp = intervals.empty() ? h.amplitude : interp(h.amplitude);
            for (auto& a : amp) a = std::max(a, 0.0);  // model demands B >= 0
            auto phase = intervals.empty() ? h.phase : interp(h.phase);
            for (std::size_t i = 0; i < n; ++i)
                resynth[i] += amp[i] * std::cos(2.0 * M_PI * phase[i]);
        }
    }

    result.final_signal = stages.initial;
    for (const auto& iv : intervals) {
        for (std::size_t i = iv.start; i < iv.end(); ++i) {
            result.final_signal.samples[i] = resynth[i] + trend_bar[i];
            result.final_signal.missing[i] = false;
        }
    }

    Signal denoised = stages.initial;
    for (std::size_t i = 0; i < n; ++i) {
        denoised.samples[i] = resynth[i] + trend_bar[i];
        denoised.missing[i] = false;
    }
    result.denoised = std::move(denoised);
    return result;
}

ImputationResult hali_impute(const Signal& signal,
                             std::optional<std::vector<MissingInterval>> intervals,
                             const HaliParams& params) {
    const auto stages = hali_prepare(signal, std::move(intervals), params);
    return hali_finalize(stages, params.scheme, params.guard);
}

}  // namespace hali
