#include "hali/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hali/errors.hpp"

namespace hali {

int Ridge::max_bin() const { return *std::max_element(bins.begin(), bins.end()); }
int Ridge::min_bin() const { return *std::min_element(bins.begin(), bins.end()); }

namespace {

// Scans [lo, hi] starting from `center` and alternating outward, so that
// among equal energies the bin nearest the center wins.
template <typename EnergyFn>
int argmax_from_center(const EnergyFn& energy, int frame, int lo, int hi, int center) {
    center = std::clamp(center, lo, hi);
    int best_bin = center;
    double best = energy(frame, center);
    for (int offset = 1; center - offset >= lo || center + offset <= hi; ++offset) {
        for (const int j : {center - offset, center + offset}) {
            if (j < lo || j > hi) continue;
            const double e = energy(frame, j);
            if (e > best) {
                best = e;
                best_bin = j;
            }
        }
    }
    return best_bin;
}

struct BandFn {
    std::function<std::pair<int, int>(int)> band;   // per-frame allowed bins
    std::function<int(int)> tie_center;             // preferred bin on ties
};

template <typename EnergyFn>
Ridge greedy_ridge(const EnergyFn& energy, int frames, int bins, double bin_hz, double fb_hz,
                   const BandFn& opts, const std::vector<double>& freq_axis) {
    const int fb_bins = std::max(0, static_cast<int>(std::floor(fb_hz / bin_hz)));

    // Anchor: global maximum over the per-frame bands, ties toward earlier
    // frames and the frame's tie center.
    int anchor_frame = -1, anchor_bin = -1;
    double anchor_energy = -1.0;
    for (int n = 0; n < frames; ++n) {
        const auto [lo, hi] = opts.band(n);
        if (lo > hi) continue;
        const int j = argmax_from_center(energy, n, lo, hi, opts.tie_center(n));
        const double e = energy(n, j);
        if (e > anchor_energy) {
            anchor_energy = e;
            anchor_frame = n;
            anchor_bin = j;
        }
    }
    if (anchor_frame < 0) throw InvalidInput("extract_ridge: empty search band");

    Ridge ridge;
    ridge.bins.assign(frames, 0);
    ridge.bins[anchor_frame] = anchor_bin;

    auto step = [&](int n, int prev_bin) {
        auto [lo, hi] = opts.band(n);
        // The jump bound is a hard ridge invariant; clamp the frame band into
        // the reachable window, keeping the side nearest the band.
        const int reach_lo = std::max(0, prev_bin - fb_bins);
        const int reach_hi = std::min(bins - 1, prev_bin + fb_bins);
        lo = std::max(lo, reach_lo);
        hi = std::min(hi, reach_hi);
        if (lo > hi) {
            const auto [band_lo, band_hi] = opts.band(n);
            return band_lo > reach_hi ? reach_hi : reach_lo;
        }
        return argmax_from_center(energy, n, lo, hi, opts.tie_center(n));
    };
    for (int n = anchor_frame + 1; n < frames; ++n) ridge.bins[n] = step(n, ridge.bins[n - 1]);
    for (int n = anchor_frame - 1; n >= 0; --n) ridge.bins[n] = step(n, ridge.bins[n + 1]);

    ridge.freqs_hz.resize(frames);
    for (int n = 0; n < frames; ++n) ridge.freqs_hz[n] = freq_axis[ridge.bins[n]];
    return ridge;
}

}  // namespace

Ridge extract_ridge(const std::vector<double>& energy, int frames, int bins, double bin_hz,
                    double fb_hz, std::optional<std::pair<double, double>> seed_band) {
    if (frames < 1 || bins < 1) throw InvalidInput("extract_ridge: empty energy matrix");
    if (energy.size() != static_cast<std::size_t>(frames) * bins)
        throw InvalidInput("extract_ridge: energy size does not match frames x bins");
    if (!(fb_hz > 0.0)) throw InvalidInput("extract_ridge: fb_hz must be > 0");

    int seed_lo = 0, seed_hi = bins - 1;
    if (seed_band) {
        seed_lo = std::max(0, static_cast<int>(std::ceil(seed_band->first / bin_hz)));
        seed_hi = std::min(bins - 1, static_cast<int>(std::floor(seed_band->second / bin_hz)));
        if (seed_lo > seed_hi) throw InvalidInput("extract_ridge: seed band is empty");
    }

    auto cell = [&](int n, int j) { return energy[static_cast<std::size_t>(n) * bins + j]; };
    std::vector<double> freq_axis(bins);
    for (int j = 0; j < bins; ++j) freq_axis[j] = j * bin_hz;

    // Anchor within the seed band (first maximum in scan order), then greedy
    // extension over the full axis, ties toward the previous frame's bin.
    int anchor_frame = 0, anchor_bin = seed_lo;
    double best = -1.0;
    for (int n = 0; n < frames; ++n) {
        for (int j = seed_lo; j <= seed_hi; ++j) {
            if (cell(n, j) > best) {
                best = cell(n, j);
                anchor_frame = n;
                anchor_bin = j;
            }
        }
    }
    const int fb_bins = std::max(0, static_cast<int>(std::floor(fb_hz / bin_hz)));
    Ridge ridge;
    ridge.bins.assign(frames, 0);
    ridge.bins[anchor_frame] = anchor_bin;
    auto step = [&](int n, int prev_bin) {
        const int lo = std::max(0, prev_bin - fb_bins);
        const int hi = std::min(bins - 1, prev_bin + fb_bins);
        return argmax_from_center(cell, n, lo, hi, prev_bin);
    };
    for (int n = anchor_frame + 1; n < frames; ++n) ridge.bins[n] = step(n, ridge.bins[n - 1]);
    for (int n = anchor_frame - 1; n >= 0; --n) ridge.bins[n] = step(n, ridge.bins[n + 1]);
    ridge.freqs_hz.resize(frames);
    for (int n = 0; n < frames; ++n) ridge.freqs_hz[n] = freq_axis[ridge.bins[n]];
    return ridge;
}

namespace {

Ridge stft_ridge_near(const TimeFrequencyMap& tfr, const Ridge& reference, int ell,
                      double vicinity_hz, double fb_hz) {
    const double bin_hz = tfr.bin_hz();
    const int vic_bins = std::max(1, static_cast<int>(std::lround(vicinity_hz / bin_hz)));

    auto cell = [&](int n, int j) { return std::norm(tfr.at(n, j)); };
    BandFn opts;
    opts.band = [&](int n) {
        const int center = ell * reference.bins[n];
        return std::make_pair(std::max(0, center - vic_bins), std::min(tfr.bins - 1, center + vic_bins));
    };
    opts.tie_center = [&](int n) { return ell * reference.bins[n]; };
    return greedy_ridge(cell, tfr.frames, tfr.bins, bin_hz, fb_hz, opts, tfr.freq_axis);
}

}  // namespace

Ridge extract_harmonic_ridge(const TimeFrequencyMap& tfr, const Ridge& fundamental, int ell,
                             double vicinity_hz, double fb_hz) {
    tfr.validate();
    if (ell < 2) throw InvalidInput("extract_harmonic_ridge: ell must be >= 2");
    if (fundamental.bins.size() != static_cast<std::size_t>(tfr.frames))
        throw InvalidInput("extract_harmonic_ridge: ridge length mismatch");

    const double max_fund = *std::max_element(fundamental.freqs_hz.begin(), fundamental.freqs_hz.end());
    if (ell * max_fund + vicinity_hz >= tfr.fs / 2.0)
        throw HarmonicOutOfRangeError("harmonic band crosses Nyquist at ell=" + std::to_string(ell));

    return stft_ridge_near(tfr, fundamental, ell, vicinity_hz, fb_hz);
}

Ridge refine_ridge(const TimeFrequencyMap& tfr, const Ridge& detected, double vicinity_hz,
                   double fb_hz) {
    tfr.validate();
    if (detected.bins.size() != static_cast<std::size_t>(tfr.frames))
        throw InvalidInput("refine_ridge: ridge length mismatch");
    return stft_ridge_near(tfr, detected, 1, vicinity_hz, fb_hz);
}

}  // namespace hali
