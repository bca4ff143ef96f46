#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hali {

/// Uniformly sampled real series with a missing-value mask.
/// Samples with missing=true hold NaN and are never read by numerical
/// kernels; every observed sample is finite.
struct Signal {
    std::vector<double> samples;
    double fs = 0.0;  ///< sampling rate, Hz
    std::vector<bool> missing;

    Signal() = default;
    Signal(std::vector<double> s, double rate);
    Signal(std::vector<double> s, double rate, std::vector<bool> mask);

    std::size_t size() const { return samples.size(); }
    double duration() const { return static_cast<double>(samples.size()) / fs; }
    std::size_t observed_count() const;

    /// Throws InvalidInput if any invariant is broken.
    void validate() const;
};

/// One x-missing gap: sample indices [start, start+length).
struct MissingInterval {
    std::size_t start = 0;
    std::size_t length = 0;

    std::size_t end() const { return start + length; }  ///< one past the last missing index
    bool contains(std::size_t i) const { return i >= start && i < end(); }
    bool operator==(const MissingInterval&) const = default;
};

struct DetectedGaps {
    std::vector<MissingInterval> intervals;   ///< runs with length >= min_len
    std::vector<MissingInterval> short_gaps;  ///< runs below min_len; filled by linear interpolation
};

/// Maximal runs of missing=true, split by the minimum interval length.
/// Output is sorted and disjoint.
DetectedGaps detect_missing_intervals(const Signal& signal, std::size_t min_len);

/// Fill the given runs by straight-line interpolation between the nearest
/// observed neighbours (nearest-value extension at record edges).
void fill_linear(Signal& signal, const std::vector<MissingInterval>& gaps);

/// Adds zero-mean Gaussian noise with variance var(signal)/10^(snr_db/10)
/// to the observed samples. snr_db = +infinity disables the noise.
Signal add_noise(const Signal& signal, double snr_db, std::uint64_t seed);

/// Average period in samples, T = fs / f_p, from the periodogram argmax of
/// the longest contiguous observed segment over [2/duration, fs/2).
double estimate_average_period(const Signal& signal);

}  // namespace hali
