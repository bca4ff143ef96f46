#include "hali/deshape.hpp"

#include <algorithm>
#include <cmath>

#include "hali/errors.hpp"
#include "hali/fft.hpp"

namespace hali {

std::vector<double> de_shape(const TimeFrequencyMap& tfr, double gamma) {
    tfr.validate();
    if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidInput("de_shape: gamma must be in (0, 1]");

    const int bins = tfr.bins;
    const int nfft = tfr.nfft;
    const double quantile = 0.05;

    std::vector<double> out(static_cast<std::size_t>(tfr.frames) * bins, 0.0);
    std::vector<double> power(bins), cepstrum(bins), positives;
    positives.reserve(bins);
    RealFft fft(nfft);

    for (int frame = 0; frame < tfr.frames; ++frame) {
        const auto* row = &tfr.values[static_cast<std::size_t>(frame) * bins];
        for (int j = 0; j < bins; ++j) power[j] = std::pow(std::norm(row[j]), 0.5 * gamma);

        // Short-time cepstral transform of the (symmetrized) gamma-power
        // spectrum; real and even, so only the real part carries content.
        fft.input()[0] = power[0];
        fft.input()[bins - 1] = power[bins - 1];
        for (int j = 1; j < bins - 1; ++j) {
            fft.input()[j] = power[j];
            fft.input()[nfft - j] = power[j];
        }
        const auto* spec = fft.forward();
        for (int q = 0; q < bins; ++q) cepstrum[q] = spec[q].real() / static_cast<double>(nfft);

        positives.clear();
        for (int q = 0; q < bins; ++q) {
            if (cepstrum[q] > 0.0) positives.push_back(cepstrum[q]);
        }
        double threshold = 0.0;
        if (!positives.empty()) {
            const auto k = static_cast<std::size_t>(
                quantile * static_cast<double>(positives.size() - 1));
            std::nth_element(positives.begin(), positives.begin() + k, positives.end());
            threshold = positives[k];
        }

        // Upside-down cepstrum: U(f_j) = C~(nfft/j), linear interpolation in
        // quefrency; j so small that the quefrency leaves the record maps to 0.
        auto* out_row = &out[static_cast<std::size_t>(frame) * bins];
        for (int j = 1; j < bins; ++j) {
            const double q = static_cast<double>(nfft) / static_cast<double>(j);
            if (q > static_cast<double>(bins - 1)) continue;
            const int q0 = static_cast<int>(q);
            const double frac = q - q0;
            const double c0 = std::max(cepstrum[q0] - threshold, 0.0);
            const double c1 = q0 + 1 < bins ? std::max(cepstrum[q0 + 1] - threshold, 0.0) : 0.0;
            out_row[j] = power[j] * (c0 * (1.0 - frac) + c1 * frac);
        }
    }
    return out;
}

}  // namespace hali
