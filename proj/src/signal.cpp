#include "hali/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hali/errors.hpp"
#include "hali/fft.hpp"
#include "hali/rng.hpp"

namespace hali {

Signal::Signal(std::vector<double> s, double rate)
    : samples(std::move(s)), fs(rate), missing(samples.size(), false) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) missing[i] = true;
    }
}

Signal::Signal(std::vector<double> s, double rate, std::vector<bool> mask)
    : samples(std::move(s)), fs(rate), missing(std::move(mask)) {}

std::size_t Signal::observed_count() const {
    std::size_t n = 0;
    for (bool m : missing) n += m ? 0 : 1;
    return n;
}

void Signal::validate() const {
    if (samples.empty()) throw InvalidInput("Signal: empty sample vector");
    if (samples.size() != missing.size())
        throw InvalidInput("Signal: mask length does not match sample count");
    if (!(fs > 0.0) || !std::isfinite(fs)) throw InvalidInput("Signal: fs must be finite and > 0");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!missing[i] && !std::isfinite(samples[i]))
            throw InvalidInput("Signal: observed sample is not finite");
    }
}

DetectedGaps detect_missing_intervals(const Signal& signal, std::size_t min_len) {
    if (signal.size() == 0) throw InvalidInput("detect_missing_intervals: empty signal");
    if (min_len < 1) throw InvalidInput("detect_missing_intervals: min_len must be >= 1");

    DetectedGaps out;
    const std::size_t n = signal.size();
    std::size_t i = 0;
    while (i < n) {
        if (!signal.missing[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && signal.missing[j]) ++j;
        const MissingInterval run{i, j - i};
        (run.length >= min_len ? out.intervals : out.short_gaps).push_back(run);
        i = j;
    }
    return out;
}

void fill_linear(Signal& signal, const std::vector<MissingInterval>& gaps) {
    const std::size_t n = signal.size();
    for (const auto& gap : gaps) {
        if (gap.end() > n) throw InvalidInput("fill_linear: interval out of range");
        const bool has_left = gap.start > 0 && !signal.missing[gap.start - 1];
        const bool has_right = gap.end() < n && !signal.missing[gap.end()];
        if (!has_left && !has_right)
            throw InvalidInput("fill_linear: no observed neighbour around gap");
        const double yl = has_left ? signal.samples[gap.start - 1] : signal.samples[gap.end()];
        const double yr = has_right ? signal.samples[gap.end()] : signal.samples[gap.start - 1];
        const double span = static_cast<double>(gap.length) + 1.0;
        for (std::size_t k = 0; k < gap.length; ++k) {
            const double t = static_cast<double>(k + 1) / span;
            signal.samples[gap.start + k] = has_left && has_right ? yl + (yr - yl) * t
                                            : has_left            ? yl
                                                                  : yr;
            signal.missing[gap.start + k] = false;
        }
    }
}

namespace {

double observed_variance(const Signal& signal, std::size_t* count_out = nullptr) {
    double mean = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < signal.size(); ++i) {
        if (signal.missing[i]) continue;
        mean += signal.samples[i];
        ++count;
    }
    if (count == 0) throw InvalidInput("signal has no observed samples");
    mean /= static_cast<double>(count);
    double var = 0.0;
    for (std::size_t i = 0; i < signal.size(); ++i) {
        if (signal.missing[i]) continue;
        const double d = signal.samples[i] - mean;
        var += d * d;
    }
    if (count_out) *count_out = count;
    return var / static_cast<double>(count);
}

}  // namespace

Signal add_noise(const Signal& signal, double snr_db, std::uint64_t seed) {
    signal.validate();
    if (std::isinf(snr_db) && snr_db > 0) return signal;  // noise disabled

    const double var = observed_variance(signal);
    if (var <= 0.0) throw InvalidInput("add_noise: signal has zero variance");

    const double noise_sd = std::sqrt(var / std::pow(10.0, snr_db / 10.0));
    Rng rng(seed);
    Signal out = signal;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!out.missing[i]) out.samples[i] += noise_sd * rng.normal();
    }
    return out;
}

double estimate_average_period(const Signal& signal) {
    signal.validate();

    // Longest contiguous observed run; gaps are excluded from the spectrum.
    std::size_t best_start = 0, best_len = 0, i = 0;
    const std::size_t n = signal.size();
    while (i < n) {
        if (signal.missing[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && !signal.missing[j]) ++j;
        if (j - i > best_len) {
            best_len = j - i;
            best_start = i;
        }
        i = j;
    }
    if (best_len < 4) throw InvalidInput("estimate_average_period: need >= 4 contiguous observed samples");

    double mean = 0.0;
    for (std::size_t k = 0; k < best_len; ++k) mean += signal.samples[best_start + k];
    mean /= static_cast<double>(best_len);

    const int nfft = static_cast<int>(best_len);
    RealFft fft(nfft);
    std::fill(fft.input(), fft.input() + nfft, 0.0);
    double power = 0.0;
    for (std::size_t k = 0; k < best_len; ++k) {
        const double v = signal.samples[best_start + k] - mean;
        fft.input()[k] = v;
        power += v * v;
    }
    if (power <= 1e-24 * static_cast<double>(best_len) * (1.0 + mean * mean))
        throw NoDominantFrequencyError("estimate_average_period: flat spectrum (constant signal)");

    const auto* spec = fft.forward();
    const double bin_hz = signal.fs / static_cast<double>(nfft);
    const double f_min = 2.0 / (static_cast<double>(best_len) / signal.fs);
    const int j_lo = std::max(1, static_cast<int>(std::ceil(f_min / bin_hz)));
    const int j_hi = nfft / 2;  // exclusive: binned band [f_min, fs/2)
    if (j_lo >= j_hi) throw NoDominantFrequencyError("estimate_average_period: search band is empty");

    int j_best = j_lo;
    double best_mag = -1.0;
    for (int j = j_lo; j < j_hi; ++j) {
        const double mag = std::norm(spec[j]);
        if (mag > best_mag) {
            best_mag = mag;
            j_best = j;
        }
    }
    const double f_p = static_cast<double>(j_best) * bin_hz;
    return std::max(2.0, signal.fs / f_p);
}

}  // namespace hali
