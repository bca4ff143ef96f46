#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "hali/errors.hpp"
#include "hali/fft.hpp"
#include "hali/imputers.hpp"

namespace hali {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Mean cycle length over the n_c complete cycles at one end of the segment.
int seasonality_from_segment(const std::vector<double>& phase, bool take_last, int n_c) {
    if (phase.size() < 2) throw SeasonalityError("estimate_seasonality: phase segment too short");
    const double first = phase.front();
    const double last = phase.back();

    std::vector<int> cycle_lengths;
    const int k_lo = static_cast<int>(std::ceil(first)) + 1;
    const int k_hi = static_cast<int>(std::floor(last));
    for (int k = k_lo; k <= k_hi; ++k) {
        if (static_cast<double>(k - 1) < first || static_cast<double>(k) > last) continue;
        int count = 0;
        for (double v : phase) {
            if (v > k - 1 && v <= k) ++count;
        }
        cycle_lengths.push_back(count);
    }
    if (static_cast<int>(cycle_lengths.size()) < n_c)
        throw SeasonalityError("estimate_seasonality: fewer complete cycles than N_c");

    double sum = 0.0;
    if (take_last) {
        for (int i = 0; i < n_c; ++i) sum += cycle_lengths[cycle_lengths.size() - 1 - i];
    } else {
        for (int i = 0; i < n_c; ++i) sum += cycle_lengths[i];
    }
    return std::max(2, static_cast<int>(std::lround(sum / n_c)));
}

// Unwrapped phase (cycles) of the dominant oscillation of a gap-free
// segment: band-pass around the periodogram peak, then the analytic angle.
std::vector<double> analytic_phase_cycles(const std::vector<double>& segment, double fs) {
    const int n = static_cast<int>(segment.size());
    if (n < 8) throw SeasonalityError("analytic phase: segment too short");

    double mean = 0.0;
    for (double v : segment) mean += v;
    mean /= n;

    std::vector<std::complex<double>> buf(n);
    for (int i = 0; i < n; ++i) buf[i] = segment[i] - mean;
    auto spec = fft_forward(buf);

    const double bin_hz = fs / n;
    const double f_min = 2.0 / (n / fs);
    const int lo = std::max(1, static_cast<int>(std::ceil(f_min / bin_hz)));
    const int hi = n / 2 - 1;
    if (lo >= hi) throw SeasonalityError("analytic phase: band empty");
    int peak = lo;
    for (int j = lo; j <= hi; ++j) {
        if (std::norm(spec[j]) > std::norm(spec[peak])) peak = j;
    }

    const int band_lo = std::max(1, peak / 2);
    const int band_hi = std::min(hi, peak + peak / 2);
    std::vector<std::complex<double>> analytic(n, 0.0);
    for (int j = band_lo; j <= band_hi; ++j) analytic[j] = 2.0 * spec[j];
    auto wave = fft_inverse(analytic);

    std::vector<double> angles(n);
    for (int i = 0; i < n; ++i) angles[i] = std::arg(wave[i]);
    // Reuse the unwrap from the harmonic module without linking to it here.
    std::vector<double> out(n);
    out[0] = angles[0];
    double offset = 0.0;
    for (int i = 1; i < n; ++i) {
        const double d = angles[i] - angles[i - 1];
        if (d > M_PI)
            offset -= 2.0 * M_PI;
        else if (d < -M_PI)
            offset += 2.0 * M_PI;
        out[i] = angles[i] + offset;
    }
    for (auto& v : out) v /= 2.0 * M_PI;
    return out;
}

struct SarFit {
    int p = 1;
    int season_order = 1;  // P
    int lambda = 2;
    double intercept = 0.0;
    std::vector<double> ar;       // a_1..a_p
    std::vector<double> seasonal; // b_1..b_P
};

double criterion_aicc(double n, double rss, double params) {
    const double floor = n * 1e-24;
    return n * std::log(std::max(rss, floor) / n) + 2.0 * params +
           2.0 * params * (params + 1.0) / (n - params - 1.0);
}

SarFit fit_sar(const std::vector<double>& segment, int lambda) {
    const int n = static_cast<int>(segment.size());
    SarFit best;
    double best_value = std::numeric_limits<double>::infinity();
    bool found = false;

    for (int p = 1; p <= 4; ++p) {
        for (int season_order = 1; season_order <= 2; ++season_order) {
            const int max_lag = std::max(p, season_order * lambda);
            const int rows = n - max_lag;
            const int cols = p + season_order + 1;
            if (rows < 2 * cols) continue;

            MatrixXd design(rows, cols);
            VectorXd target(rows);
            for (int r = 0; r < rows; ++r) {
                const int t = max_lag + r;
                target(r) = segment[t];
                design(r, 0) = 1.0;
                for (int i = 1; i <= p; ++i) design(r, i) = segment[t - i];
                for (int j = 1; j <= season_order; ++j)
                    design(r, p + j) = segment[t - j * lambda];
            }
            const VectorXd coeffs = design.colPivHouseholderQr().solve(target);
            const double rss = (target - design * coeffs).squaredNorm();
            const double value = criterion_aicc(rows, rss, cols);
            if (value < best_value) {
                best_value = value;
                best.p = p;
                best.season_order = season_order;
                best.lambda = lambda;
                best.intercept = coeffs(0);
                best.ar.assign(coeffs.data() + 1, coeffs.data() + 1 + p);
                best.seasonal.assign(coeffs.data() + 1 + p, coeffs.data() + 1 + p + season_order);
                found = true;
            }
        }
    }
    if (!found) throw ImputerInfeasibleError("impute_sar: not enough data to fit any order");

    // Stability: companion matrix of the combined AR polynomial.
    const int max_lag = std::max(best.p, best.season_order * best.lambda);
    MatrixXd companion = MatrixXd::Zero(max_lag, max_lag);
    for (int i = 1; i <= best.p; ++i) companion(0, i - 1) += best.ar[i - 1];
    for (int j = 1; j <= best.season_order; ++j)
        companion(0, j * best.lambda - 1) += best.seasonal[j - 1];
    for (int i = 1; i < max_lag; ++i) companion(i, i - 1) = 1.0;
    const auto eigenvalues = companion.eigenvalues();
    for (int i = 0; i < eigenvalues.size(); ++i) {
        if (std::abs(eigenvalues(i)) > 1.05)
            throw ImputerInfeasibleError("impute_sar: unstable autoregressive fit");
    }
    return best;
}

// Forward imputation of one interval on (possibly reversed) data.
void sar_fill_forward(Signal& out, const MissingInterval& interval, int lambda, int n_c,
                      double fallback_period) {
    const auto s = static_cast<std::ptrdiff_t>(interval.start);

    std::ptrdiff_t seg_lo = s;
    while (seg_lo > 0 && !out.missing[seg_lo - 1]) --seg_lo;
    const auto seg_len = static_cast<int>(s - seg_lo);

    if (lambda <= 0) {
        try {
            const std::vector<double> segment(out.samples.begin() + seg_lo, out.samples.begin() + s);
            const auto phase = analytic_phase_cycles(segment, out.fs);
            lambda = seasonality_from_segment(phase, /*take_last=*/true, n_c);
        } catch (const ComputeError&) {
            lambda = std::max(2, static_cast<int>(std::lround(fallback_period)));
        }
    }
    if (seg_len < 3 * lambda)
        throw ImputerInfeasibleError("impute_sar: fewer than 3*lambda samples on the fitting side");

    const std::vector<double> segment(out.samples.begin() + seg_lo, out.samples.begin() + s);
    const auto fit = fit_sar(segment, lambda);

    for (std::size_t g = 0; g < interval.length; ++g) {
        const std::ptrdiff_t t = s + static_cast<std::ptrdiff_t>(g);
        double v = fit.intercept;
        for (int i = 1; i <= fit.p; ++i) {
            const std::ptrdiff_t idx = t - i;
            if (idx < 0 || out.missing[idx])
                throw ImputerInfeasibleError("impute_sar: forecast lag hits missing data");
            v += fit.ar[i - 1] * out.samples[idx];
        }
        for (int j = 1; j <= fit.season_order; ++j) {
            const std::ptrdiff_t idx = t - static_cast<std::ptrdiff_t>(j) * fit.lambda;
            if (idx < 0 || out.missing[idx])
                throw ImputerInfeasibleError("impute_sar: seasonal lag hits missing data");
            v += fit.seasonal[j - 1] * out.samples[idx];
        }
        out.samples[t] = v;
        out.missing[t] = false;
    }
}

}  // namespace

int estimate_seasonality(const std::vector<double>& phase_cycles, const MissingInterval& interval,
                         SarSide side, int n_c) {
    if (n_c < 1) throw InvalidInput("estimate_seasonality: n_c must be >= 1");
    if (interval.end() > phase_cycles.size())
        throw InvalidInput("estimate_seasonality: interval outside the phase series");

    std::vector<double> segment;
    if (side == SarSide::Before) {
        segment.assign(phase_cycles.begin(), phase_cycles.begin() + interval.start);
    } else {
        segment.assign(phase_cycles.begin() + interval.end(), phase_cycles.end());
    }
    return seasonality_from_segment(segment, side == SarSide::Before, n_c);
}

Signal impute_sar(const Signal& signal, const std::vector<MissingInterval>& intervals,
                  SarDirection direction, int lambda, const ImputerConfig& config) {
    signal.validate();
    config.validate();

    if (direction == SarDirection::Forward) {
        Signal out = signal;
        for (const auto& interval : intervals) {
            const int effective_lambda = lambda > 0 ? lambda : config.seasonality;
            double period = config.avg_period;
            if (effective_lambda <= 0 && period <= 0.0) {
                try {
                    period = estimate_average_period(signal);
                } catch (const ComputeError&) {
                    throw ImputerInfeasibleError(
                        "impute_sar: no seasonality given and none derivable from the data");
                }
            }
            sar_fill_forward(out, interval, effective_lambda, config.cycles_for_seasonality, period);
        }
        return out;
    }

    // Backward: the forward procedure on the time-reversed record, flipped.
    const std::size_t n = signal.size();
    Signal reversed = signal;
    std::reverse(reversed.samples.begin(), reversed.samples.end());
    { // std::vector<bool> has no data(); flip by copy
        std::vector<bool> mask(signal.missing.rbegin(), signal.missing.rend());
        reversed.missing = std::move(mask);
    }
    std::vector<MissingInterval> mapped(intervals.size());
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto& iv = intervals[intervals.size() - 1 - i];
        mapped[i] = {n - iv.end(), iv.length};
    }
    Signal filled = impute_sar(reversed, mapped, SarDirection::Forward, lambda, config);
    Signal out = signal;
    for (const auto& iv : intervals) {
        for (std::size_t k = iv.start; k < iv.end(); ++k) {
            out.samples[k] = filled.samples[n - 1 - k];
            out.missing[k] = false;
        }
    }
    return out;
}

}  // namespace hali
