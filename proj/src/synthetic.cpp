#include "hali/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hali/errors.hpp"
#include "hali/rng.hpp"

namespace hali {

void SyntheticSpec::validate() const {
    if (!(fs > 0.0) || !std::isfinite(fs)) throw InvalidInput("SyntheticSpec: fs must be > 0");
    if (!(duration > 0.0)) throw InvalidInput("SyntheticSpec: duration must be > 0");
    if (n_harmonics < 1) throw InvalidInput("SyntheticSpec: n_harmonics must be >= 1");
    if (!(base_freq > 0.0)) throw InvalidInput("SyntheticSpec: base_freq must be > 0");
    if (harmonic_jitter < 0.0 || harmonic_jitter >= 0.5)
        throw InvalidInput("SyntheticSpec: harmonic_jitter must be in [0, 0.5)");
    if (walk_smooth_window_s <= 0.0)
        throw InvalidInput("SyntheticSpec: walk_smooth_window_s must be > 0");
}

namespace {

// Centered moving average, shrinking the window near the edges.
std::vector<double> moving_average(const std::vector<double>& x, int window) {
    const int n = static_cast<int>(x.size());
    const int half = std::max(1, window) / 2;
    std::vector<double> prefix(n + 1, 0.0);
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

double max_abs(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

// Slowly varying ratio in [0.05, 1): 0.25 + 0.5*u with u a smoothed random
// walk normalized to [-1, 1] and band-limited below 1 Hz.
std::vector<double> slow_ratio(Rng& rng, int n, double fs) {
    std::vector<double> walk(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += rng.normal();
        walk[i] = acc;
    }
    auto smooth = moving_average(walk, static_cast<int>(std::lround(1.0 * fs)));
    const double scale = max_abs(smooth);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const double u = scale > 0.0 ? smooth[i] / scale : 0.0;
        out[i] = std::clamp(0.25 + 0.5 * u, 0.05, 1.0 - 1e-9);
    }
    return out;
}

}  // namespace

GroundTruth generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const int n = static_cast<int>(std::lround(spec.fs * spec.duration));
    if (n < 2) throw InvalidInput("SyntheticSpec: fewer than 2 samples");

    Rng rng(spec.seed);
    const double dt = 1.0 / spec.fs;

    // Y(t) = integral of R_B / max|R_B|, R_B a moving-averaged white noise.
    std::vector<double> wobble(n, 0.0);
    if (spec.random_walk) {
        std::vector<double> white(n);
        for (auto& v : white) v = rng.normal();
        auto rb = moving_average(white, static_cast<int>(std::lround(spec.walk_smooth_window_s * spec.fs)));
        const double scale = max_abs(rb);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += (scale > 0.0 ? rb[i] / scale : 0.0) * dt;
            wobble[i] = acc;
        }
    }

    std::vector<double> phi1(n), b1(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        phi1[i] = spec.base_freq * t + spec.phase_wobble_amp * std::cos(2.0 * M_PI * t) + wobble[i];
        b1[i] = std::sqrt(t + 1.0);
    }

    // Nyquist feasibility: the fastest harmonic IF must stay below fs/2.
    // phi1' <= f0 + 2*pi*w + 1 (the wobble derivative is bounded by 1 Hz).
    const double max_if1 = spec.base_freq + 2.0 * M_PI * spec.phase_wobble_amp + 1.0;
    const double top = (1.0 + spec.harmonic_jitter) * spec.n_harmonics * max_if1;
    if (top >= spec.fs / 2.0)
        throw InvalidInput("SyntheticSpec: harmonic band exceeds Nyquist (reduce n_harmonics)");

    GroundTruth truth;
    truth.amplitudes.resize(spec.n_harmonics);
    truth.phases.resize(spec.n_harmonics);
    truth.amplitudes[0] = b1;
    truth.phases[0] = phi1;

    for (int l = 2; l <= spec.n_harmonics; ++l) {
        const double e_l = rng.uniform((1.0 - spec.harmonic_jitter) * l, (1.0 + spec.harmonic_jitter) * l);
        auto ratio = slow_ratio(rng, n, spec.fs);
        auto& amp = truth.amplitudes[l - 1];
        auto& phase = truth.phases[l - 1];
        amp.resize(n);
        phase.resize(n);
        for (int i = 0; i < n; ++i) {
            amp[i] = ratio[i] * b1[i];
            phase[i] = e_l * phi1[i];
        }
    }

    truth.trend.assign(n, 0.0);
    std::vector<double> x(n, 0.0);
    for (int l = 0; l < spec.n_harmonics; ++l) {
        for (int i = 0; i < n; ++i)
            x[i] += truth.amplitudes[l][i] * std::cos(2.0 * M_PI * truth.phases[l][i]);
    }
    truth.clean = Signal(std::move(x), spec.fs);
    return truth;
}

std::pair<Signal, std::vector<MissingInterval>> apply_missingness(const GroundTruth& truth,
                                                                  double p_ms, int n_intervals,
                                                                  std::uint64_t seed) {
    const auto n = static_cast<std::int64_t>(truth.clean.size());
    if (!(p_ms > 0.0 && p_ms < 0.5)) throw InvalidInput("apply_missingness: p_ms must be in (0, 0.5)");
    if (n_intervals < 1) throw InvalidInput("apply_missingness: n_intervals must be >= 1");

    const auto total = std::max<std::int64_t>(1, std::llround(p_ms * static_cast<double>(n)));
    if (total < n_intervals)
        throw InvalidInput("apply_missingness: fewer missing samples than intervals");

    Rng rng(seed);
    const auto min_part = std::max<std::int64_t>(1, std::llround(0.05 * static_cast<double>(total)));

    // Split `total` into distinct parts: Dirichlet-like weights over the
    // budget above the per-part minimum, retried until all lengths differ.
    std::vector<std::int64_t> lengths(n_intervals);
    bool split_ok = false;
    for (int attempt = 0; attempt < 256 && !split_ok; ++attempt) {
        std::vector<double> w(n_intervals);
        double wsum = 0.0;
        for (auto& v : w) {
            v = -std::log(1.0 - rng.uniform01());
            wsum += v;
        }
        const auto budget = total - static_cast<std::int64_t>(n_intervals) * min_part;
        std::int64_t used = 0;
        for (int i = 0; i < n_intervals; ++i) {
            lengths[i] = min_part + std::llround(static_cast<double>(budget) * w[i] / wsum);
            used += lengths[i];
        }
        lengths.back() += total - used;  // force the exact total
        split_ok = lengths.back() >= 1 &&
                   std::set<std::int64_t>(lengths.begin(), lengths.end()).size() ==
                       static_cast<std::size_t>(n_intervals);
        if (n_intervals == 1) split_ok = lengths[0] == total;
    }
    if (!split_ok) throw GenerationError("apply_missingness: could not split lengths distinctly");

    double avg_period = 2.0;
    try {
        avg_period = estimate_average_period(truth.clean);
    } catch (const ComputeError&) {
        // Aperiodic input: fall back to the minimal separation.
    }
    const auto separation = static_cast<std::int64_t>(std::ceil(avg_period));
    const auto margin = static_cast<std::int64_t>(std::llround(0.05 * static_cast<double>(n)));

    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<std::int64_t> starts(n_intervals);
        std::vector<int> order(n_intervals);
        std::iota(order.begin(), order.end(), 0);
        bool ok = true;
        std::vector<std::pair<std::int64_t, std::int64_t>> placed;  // (start, end)
        for (int i = 0; i < n_intervals && ok; ++i) {
            const std::int64_t len = lengths[i];
            const std::int64_t lo = margin;
            const std::int64_t hi = n - margin - len;
            if (hi < lo) {
                ok = false;
                break;
            }
            const std::int64_t s = rng.uniform_int(lo, hi);
            for (const auto& [ps, pe] : placed) {
                if (s < pe + separation && ps < s + len + separation) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                placed.emplace_back(s, s + len);
                starts[i] = s;
            }
        }
        if (!ok) continue;

        std::vector<MissingInterval> intervals(n_intervals);
        for (int i = 0; i < n_intervals; ++i)
            intervals[i] = {static_cast<std::size_t>(starts[i]), static_cast<std::size_t>(lengths[i])};
        std::sort(intervals.begin(), intervals.end(),
                  [](const MissingInterval& a, const MissingInterval& b) { return a.start < b.start; });

        Signal masked = truth.clean;
        for (const auto& iv : intervals) {
            for (std::size_t k = iv.start; k < iv.end(); ++k) {
                masked.samples[k] = std::numeric_limits<double>::quiet_NaN();
                masked.missing[k] = true;
            }
        }
        return {std::move(masked), std::move(intervals)};
    }
    throw GenerationError("apply_missingness: no feasible placement after 1000 attempts");
}

}  // namespace hali
