#pragma once

#include <vector>

#include "hali/ridge.hpp"
#include "hali/signal.hpp"
#include "hali/stft.hpp"

namespace hali {

/// Amplitude and unwrapped phase (in cycles, so the carrier is cos(2*pi*phase))
/// of one reconstructed harmonic.
struct HarmonicSeries {
    std::vector<double> amplitude;
    std::vector<double> phase;
};

/// Integrates the STFT around the ridge:
///   y(n) = 2 * Sum_{|j-c*(n)|<Delta} F(n,j) / band_mass(n),
/// then amplitude = |y| and phase = unwrap(arg y)/(2*pi). The band-mass
/// normalizer keeps edge frames unbiased despite the zero-padding.
HarmonicSeries reconstruct_component(const TimeFrequencyMap& tfr, const Ridge& ridge);

/// Trend below the lowest fundamental:
///   T(n) = (2/g(0)) * Re Sum_{1 <= j < cmin(n)-Delta} F(n,j),
/// zero where the fundamental sits too close to DC.
std::vector<double> estimate_trend(const TimeFrequencyMap& tfr, const std::vector<Ridge>& ridges);

enum class DegreeCriterion { Aicc, Bic };

/// Trigonometric-regression model selection: for D = 1..d_max, least-squares
/// fit of x(n) ~ Sum_{l<=D} a_l cos(2*pi*l*phi(n)) + b_l sin(2*pi*l*phi(n))
/// on the observed samples; returns the D minimizing the criterion (p = 2D).
int select_harmonic_degree(const Signal& signal, const std::vector<double>& fundamental_phase,
                           int d_max, DegreeCriterion criterion = DegreeCriterion::Aicc);

struct HarmonicComponent {
    int degree = 0;                         ///< selected D*
    std::vector<Ridge> ridges;              ///< harmonics 1..D*
    std::vector<HarmonicSeries> harmonics;  ///< harmonics 1..D*
};

struct HarmonicDecomposition {
    std::vector<HarmonicComponent> components;
    std::vector<double> trend;
    int guard_delta = 0;  ///< analysis-window half-width in bins (step-3 guard)
    double fs = 0.0;

    /// Sum of every stored harmonic plus the trend, full record.
    std::vector<double> resynthesize() const;
};

struct DecomposeParams {
    double cycles_in_window = 7.0;
    int n_bins = 4096;
    double gamma = 0.3;          ///< de-shape root power
    double fb_hz = 0.0;          ///< 0: auto 10*fs/N
    double vicinity_hz = 0.0;    ///< 0: auto 0.5 * min fundamental frequency
    int d_max = 0;               ///< 0: auto floor((fs/2)/max IF) - 1, capped at 10
    double avg_period = 0.0;     ///< samples; 0: estimate from the signal
    DegreeCriterion criterion = DegreeCriterion::Aicc;
};

/// Full Step-2 pipeline: STFT -> de-shape -> K fundamental ridges (iterative
/// extract-and-mask) -> trend -> harmonic ridges and reconstruction -> degree
/// selection. The signal must have no missing samples.
HarmonicDecomposition harmonic_decompose(const Signal& signal, int n_components,
                                         const DecomposeParams& params = {});

/// Unwraps a sequence of angles (radians) to a continuous phase in cycles.
std::vector<double> unwrap_to_cycles(const std::vector<double>& angles);

}  // namespace hali
