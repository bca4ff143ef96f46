#include "hali/stft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "hali/errors.hpp"
#include "hali/fft.hpp"

namespace hali {

int TimeFrequencyMap::frequency_to_bin(double hz) const {
    const int j = static_cast<int>(std::lround(hz / bin_hz()));
    return std::clamp(j, 0, bins - 1);
}

void TimeFrequencyMap::validate() const {
    if (bins < 8) throw InvalidInput("TimeFrequencyMap: need at least 8 bins");
    if (frames < 1) throw InvalidInput("TimeFrequencyMap: empty map");
    if (window_halfwidth_bins < 1) throw InvalidInput("TimeFrequencyMap: Delta must be >= 1");
    for (int j = 1; j < bins; ++j) {
        if (!(freq_axis[j] > freq_axis[j - 1]))
            throw InvalidInput("TimeFrequencyMap: frequency axis not increasing");
    }
}

TimeFrequencyMap stft(const Signal& signal, double cycles_in_window, int n_bins,
                      double avg_period_samples) {
    signal.validate();
    if (signal.observed_count() != signal.size())
        throw InvalidInput("stft: signal must have no missing samples");
    if (n_bins < 8) throw InvalidInput("stft: need at least 8 bins");
    if (!(cycles_in_window > 0.0)) throw InvalidInput("stft: cycles_in_window must be > 0");

    const double period = avg_period_samples > 0.0 ? avg_period_samples
                                                   : estimate_average_period(signal);
    const int n = static_cast<int>(signal.size());

    // g(m) = exp(-sigma m^2) truncated where g < 1e-6 g(0); the half-support
    // covers cycles_in_window periods.
    const double half_span = cycles_in_window * period;
    const double sigma = std::log(1e6) / (half_span * half_span);
    const int h = static_cast<int>(std::ceil(half_span));
    if (n < 2 * h + 1) throw InvalidInput("stft: signal shorter than one analysis window");

    const int nfft = 2 * (n_bins - 1);
    if (2 * h + 1 > nfft) throw InvalidInput("stft: window longer than the transform (raise n_bins)");

    TimeFrequencyMap tfr;
    tfr.frames = n;
    tfr.bins = n_bins;
    tfr.nfft = nfft;
    tfr.fs = signal.fs;
    tfr.window_g0 = 1.0;
    tfr.window_sigma = sigma;
    tfr.window_half_samples = h;
    tfr.freq_axis.resize(n_bins);
    for (int j = 0; j < n_bins; ++j)
        tfr.freq_axis[j] = static_cast<double>(j) * signal.fs / static_cast<double>(nfft);

    // Delta: half-support of |ghat| above 1% of its peak (Gaussian closed form).
    const double nu = std::sqrt(sigma * std::log(100.0)) / M_PI;  // cycles/sample
    tfr.window_halfwidth_bins = std::max(1, static_cast<int>(std::ceil(nu * nfft)));

    std::vector<double> window(2 * h + 1);
    for (int m = -h; m <= h; ++m) window[m + h] = std::exp(-sigma * static_cast<double>(m) * m);
    const double window_total = std::accumulate(window.begin(), window.end(), 0.0);

    tfr.values.resize(static_cast<std::size_t>(n) * n_bins);
    tfr.band_mass.resize(n);
    tfr.mass_fraction.resize(n);

    RealFft fft(nfft);
    const double inv_nfft = 1.0 / static_cast<double>(nfft);
    const int delta = tfr.window_halfwidth_bins;

    // Band mass of the truncated window, cached per distinct truncation
    // (every interior frame shares one entry).
    std::map<std::pair<int, int>, std::pair<std::complex<double>, double>> mass_cache;
    auto band_mass_for = [&](int lo_off, int hi_off) {
        const auto key = std::make_pair(lo_off, hi_off);
        auto it = mass_cache.find(key);
        if (it != mass_cache.end()) return it->second;
        std::fill(fft.input(), fft.input() + nfft, 0.0);
        double mass = 0.0;
        for (int m = lo_off; m <= hi_off; ++m) {
            const double g = window[m + h];
            fft.input()[(m % nfft + nfft) % nfft] = g;
            mass += g;
        }
        const auto* spec = fft.forward();
        std::complex<double> band = spec[0];
        for (int d = 1; d < delta; ++d) band += spec[d] + std::conj(spec[d]);
        // Negative bins of a real input are conjugates of the positive ones.
        const auto result = std::make_pair(band * inv_nfft, mass / window_total);
        mass_cache.emplace(key, result);
        return result;
    };

    for (int frame = 0; frame < n; ++frame) {
        const int lo = std::max(0, frame - h) - frame;   // window offsets in [-h, h]
        const int hi = std::min(n - 1, frame + h) - frame;
        const auto [band, frac] = band_mass_for(lo, hi);
        tfr.band_mass[frame] = band;
        tfr.mass_fraction[frame] = frac;

        std::fill(fft.input(), fft.input() + nfft, 0.0);
        for (int m = lo; m <= hi; ++m) {
            fft.input()[(m % nfft + nfft) % nfft] = signal.samples[frame + m] * window[m + h];
        }
        const auto* spec = fft.forward();
        auto* row = &tfr.values[static_cast<std::size_t>(frame) * n_bins];
        for (int j = 0; j < n_bins; ++j) row[j] = spec[j] * inv_nfft;
    }
    return tfr;
}

}  // namespace hali
