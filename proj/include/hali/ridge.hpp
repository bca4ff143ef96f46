#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hali/stft.hpp"

namespace hali {

/// Per-frame frequency curve of maximal time-frequency energy.
struct Ridge {
    std::vector<int> bins;        ///< one bin per frame
    std::vector<double> freqs_hz; ///< bins mapped through the frequency axis

    int max_bin() const;
    int min_bin() const;
};

/// Greedy ridge detection: anchor at the global energy maximum (restricted
/// to seed_band if given), then extend frame by frame keeping each step
/// within +-fb_hz of the previous frame's ridge frequency.
/// `energy` is a nonnegative frames x bins matrix, frame-major.
Ridge extract_ridge(const std::vector<double>& energy, int frames, int bins, double bin_hz,
                    double fb_hz,
                    std::optional<std::pair<double, double>> seed_band = std::nullopt);

/// Ridge of |F|^2 restricted per frame to [ell*c*(n) - vicinity, ell*c*(n) + vicinity],
/// ties broken toward ell*c*(n). Throws HarmonicOutOfRangeError when the band
/// crosses Nyquist; callers truncate the harmonic degree.
Ridge extract_harmonic_ridge(const TimeFrequencyMap& tfr, const Ridge& fundamental, int ell,
                             double vicinity_hz, double fb_hz);

/// Re-localizes a detection ridge on |F|^2 within +-vicinity of itself.
/// The de-shape map finds components reliably but biases peak positions;
/// the STFT magnitude carries the accurate frequency.
Ridge refine_ridge(const TimeFrequencyMap& tfr, const Ridge& detected, double vicinity_hz,
                   double fb_hz);

/// Default maximum per-frame frequency jump, 10*fs/N.
inline double default_fb_hz(double fs, std::size_t n) {
    return 10.0 * fs / static_cast<double>(n);
}

}  // namespace hali
