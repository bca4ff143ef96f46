#pragma once

#include <vector>

#include "hali/stft.hpp"

namespace hali {

/// De-shape STFT: per frame, the gamma-power spectrum is multiplied by its
/// soft-thresholded cepstrum resampled from quefrency to frequency, which
/// cancels the harmonic ridges at l*f0 (l >= 2) and keeps the fundamentals.
/// Output is a nonnegative frames x bins map.
std::vector<double> de_shape(const TimeFrequencyMap& tfr, double gamma = 0.3);

}  // namespace hali
