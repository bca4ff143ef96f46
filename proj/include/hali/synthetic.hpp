#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "hali/signal.hpp"

namespace hali {

/// Generator settings for the synthetic benchmark family:
/// B1(t) = sqrt(t+1), phi1(t) = f0*t + w*cos(2*pi*t) + Y(t) with Y a
/// normalized integrated moving-averaged white noise, harmonic phases
/// e_l*phi1 with e_l ~ U[(1-jitter)l, (1+jitter)l], and slowly varying
/// harmonic amplitude ratios.
struct SyntheticSpec {
    double fs = 4000.0;        ///< Hz
    double duration = 1.0;     ///< seconds
    int n_harmonics = 3;       ///< D >= 1
    double base_freq = 50.0;   ///< Hz
    double phase_wobble_amp = 5.0 / (2.0 * M_PI);
    bool random_walk = true;   ///< enables the Y(t) frequency wobble
    double walk_smooth_window_s = 0.5;
    double harmonic_jitter = 0.05;  ///< half-width of the e_l support, relative
    double snr_db = std::numeric_limits<double>::infinity();  ///< used by the CLI only
    std::uint64_t seed = 0;

    void validate() const;
};

/// A generated signal together with the exact per-harmonic series.
struct GroundTruth {
    Signal clean;  ///< no missing samples
    std::vector<std::vector<double>> amplitudes;  ///< [harmonic][n]
    std::vector<std::vector<double>> phases;      ///< [harmonic][n], cycles
    std::vector<double> trend;                    ///< zero for this generator
};

GroundTruth generate_synthetic(const SyntheticSpec& spec);

/// Masks round(N*p_ms) samples split over n_intervals gaps with distinct
/// lengths, placed uniformly at random away from the record edges and at
/// least one average period apart. Deterministic under the seed.
std::pair<Signal, std::vector<MissingInterval>> apply_missingness(const GroundTruth& truth,
                                                                  double p_ms, int n_intervals,
                                                                  std::uint64_t seed);

}  // namespace hali
