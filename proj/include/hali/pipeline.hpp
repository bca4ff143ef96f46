#pragma once

#include <optional>
#include <vector>

#include "hali/harmonic.hpp"
#include "hali/imputers.hpp"
#include "hali/interpolation.hpp"
#include "hali/signal.hpp"

namespace hali {

struct HaliParams {
    ImputeMethod initial_method = ImputeMethod::Tlm;
    InterpolationScheme scheme = InterpolationScheme::Pchip;
    int n_components = 1;       ///< K
    std::size_t min_gap_len = 3;  ///< I_-: shorter runs are linearly filled up front
    int guard = -1;             ///< samples discarded around each gap; -1: the window Delta
    DecomposeParams decompose;
    std::optional<ImputerConfig> imputer;  ///< defaults to auto_tune on the input
};

struct ImputationResult {
    Signal final_signal;  ///< x2 + interpolated trend on the gaps, x1 elsewhere
    Signal initial;       ///< x1, the step-1 result
    Signal denoised;      ///< full-record harmonic + trend resynthesis
    HarmonicDecomposition decomposition;
    std::vector<IntervalRecord> records;
    bool degraded = false;            ///< some interval ended at the linear fallback
    bool interp_linear_fallback = false;  ///< step-3 interpolation fell back to linear
};

/// The full three-step pipeline. If `intervals` is not given they are
/// detected from the mask with min_gap_len. Never throws on a valid signal:
/// infeasible stages degrade to linear interpolation and set a flag.
ImputationResult hali_impute(const Signal& signal,
                             std::optional<std::vector<MissingInterval>> intervals,
                             const HaliParams& params = {});

/// Steps 1 and 2 only; lets callers reuse the decomposition across schemes.
struct HaliStages {
    Signal initial;
    HarmonicDecomposition decomposition;
    std::vector<IntervalRecord> records;
    std::vector<MissingInterval> intervals;
    bool degraded = false;
};

HaliStages hali_prepare(const Signal& signal,
                        std::optional<std::vector<MissingInterval>> intervals,
                        const HaliParams& params);

/// Step 3 on a prepared decomposition.
ImputationResult hali_finalize(const HaliStages& stages, InterpolationScheme scheme, int guard);

}  // namespace hali
