#pragma once

#include <complex>
#include <vector>

#include "hali/signal.hpp"

namespace hali {

/// One-sided Gaussian-window STFT with hop 1 (one frame per sample).
/// values(n, j) = (1/nfft) * Sum_m x(n+m) g(m) e^{-2*pi*i*j*m/nfft} over the
/// window support, zero-padded at the record edges. freq_axis spans
/// [0, fs/2] inclusive with nfft = 2*(bins-1).
struct TimeFrequencyMap {
    int frames = 0;
    int bins = 0;
    int nfft = 0;
    double fs = 0.0;
    std::vector<std::complex<double>> values;  ///< frames*bins, frame-major
    std::vector<double> freq_axis;             ///< Hz per bin
    double window_g0 = 1.0;                    ///< g(0)
    int window_halfwidth_bins = 1;             ///< Delta: half-support of |ghat| >= 0.01*max
    int window_half_samples = 0;               ///< h: g(h) = 1e-6*g(0)
    double window_sigma = 0.0;                 ///< g(m) = exp(-sigma m^2)

    /// Per-frame band mass (1/nfft)*Sum_{|d|<Delta} ghat_n(d) of the
    /// edge-truncated window; the reconstruction normalizer.
    std::vector<std::complex<double>> band_mass;
    /// Per-frame in-record window mass fraction (1 in the interior).
    std::vector<double> mass_fraction;

    const std::complex<double>& at(int frame, int bin) const {
        return values[static_cast<std::size_t>(frame) * bins + bin];
    }
    double bin_hz() const { return fs / static_cast<double>(nfft); }
    int frequency_to_bin(double hz) const;

    void validate() const;
};

/// Gaussian-window STFT. The window parameter sigma is set so that the
/// half-support where g >= 1e-6*g(0) covers cycles_in_window average periods.
/// avg_period_samples = 0 estimates the period from the signal.
TimeFrequencyMap stft(const Signal& signal, double cycles_in_window = 7.0, int n_bins = 4096,
                      double avg_period_samples = 0.0);

}  // namespace hali
