#include "hali/harmonic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "hali/deshape.hpp"
#include "hali/errors.hpp"

namespace hali {

std::vector<double> unwrap_to_cycles(const std::vector<double>& angles) {
    std::vector<double> out(angles.size());
    if (angles.empty()) return out;
    out[0] = angles[0];
    double offset = 0.0;
    for (std::size_t i = 1; i < angles.size(); ++i) {
        double delta = angles[i] - angles[i - 1];
        if (delta > M_PI)
            offset -= 2.0 * M_PI;
        else if (delta < -M_PI)
            offset += 2.0 * M_PI;
        out[i] = angles[i] + offset;
    }
    for (auto& v : out) v /= 2.0 * M_PI;
    return out;
}

HarmonicSeries reconstruct_component(const TimeFrequencyMap& tfr, const Ridge& ridge) {
    tfr.validate();
    if (ridge.bins.size() != static_cast<std::size_t>(tfr.frames))
        throw InvalidInput("reconstruct_component: ridge length mismatch");

    const int delta = tfr.window_halfwidth_bins;
    HarmonicSeries out;
    out.amplitude.resize(tfr.frames);
    std::vector<double> angles(tfr.frames);
    for (int n = 0; n < tfr.frames; ++n) {
        const int c = ridge.bins[n];
        if (c < 0 || c >= tfr.bins) throw InvalidInput("reconstruct_component: ridge bin out of range");
        const int lo = std::max(0, c - delta + 1);
        const int hi = std::min(tfr.bins - 1, c + delta - 1);
        std::complex<double> sum = 0.0;
        const auto* row = &tfr.values[static_cast<std::size_t>(n) * tfr.bins];
        for (int j = lo; j <= hi; ++j) sum += row[j];
        const std::complex<double> y = 2.0 * sum / tfr.band_mass[n];
        out.amplitude[n] = std::abs(y);
        angles[n] = std::arg(y);
    }
    out.phase = unwrap_to_cycles(angles);
    return out;
}

std::vector<double> estimate_trend(const TimeFrequencyMap& tfr, const std::vector<Ridge>& ridges) {
    tfr.validate();
    if (ridges.empty()) throw InvalidInput("estimate_trend: need at least one ridge");
    for (const auto& r : ridges) {
        if (r.bins.size() != static_cast<std::size_t>(tfr.frames))
            throw InvalidInput("estimate_trend: ridge length mismatch");
    }

    const int delta = tfr.window_halfwidth_bins;
    std::vector<double> trend(tfr.frames, 0.0);
    for (int n = 0; n < tfr.frames; ++n) {
        int cmin = tfr.bins;
        for (const auto& r : ridges) cmin = std::min(cmin, r.bins[n]);
        const int stop = cmin - delta;  // sum over 1 <= j < stop
        if (stop <= 1) continue;
        double re = 0.0;
        const auto* row = &tfr.values[static_cast<std::size_t>(n) * tfr.bins];
        for (int j = 1; j < stop; ++j) re += row[j].real();
        trend[n] = 2.0 * re / (tfr.window_g0 * tfr.mass_fraction[n]);
    }
    return trend;
}

namespace {

double criterion_value(DegreeCriterion criterion, double n, double rss, double p) {
    const double base = n * std::log(rss / n);
    if (criterion == DegreeCriterion::Bic) return base + p * std::log(n);
    return base + 2.0 * p + 2.0 * p * (p + 1.0) / (n - p - 1.0);
}

/// RSS floor: exact fits bottom out at machine noise, whose log is an
/// arbitrary large negative number; comparisons below this floor are noise.
double rss_floor(double n, double scale) {
    const double eps = 1e-12 * std::max(scale, 1e-300);
    return n * eps * eps;
}

}  // namespace

int select_harmonic_degree(const Signal& signal, const std::vector<double>& fundamental_phase,
                           int d_max, DegreeCriterion criterion) {
    signal.validate();
    if (d_max < 1) throw InvalidInput("select_harmonic_degree: d_max must be >= 1");
    if (fundamental_phase.size() != signal.size())
        throw InvalidInput("select_harmonic_degree: phase length mismatch");

    std::vector<int> rows;
    for (std::size_t i = 0; i < signal.size(); ++i) {
        if (!signal.missing[i]) rows.push_back(static_cast<int>(i));
    }
    const int n = static_cast<int>(rows.size());
    double scale = 0.0;
    Eigen::VectorXd y(n);
    for (int r = 0; r < n; ++r) {
        y(r) = signal.samples[rows[r]];
        scale = std::max(scale, std::abs(y(r)));
    }

    int best_degree = 1;
    double best_value = std::numeric_limits<double>::infinity();
    for (int d = 1; d <= d_max; ++d) {
        const int p = 2 * d;
        if (n - p - 1 <= 0) break;
        Eigen::MatrixXd design(n, p);
        for (int r = 0; r < n; ++r) {
            const double phi = fundamental_phase[rows[r]];
            for (int l = 1; l <= d; ++l) {
                design(r, 2 * (l - 1)) = std::cos(2.0 * M_PI * l * phi);
                design(r, 2 * (l - 1) + 1) = std::sin(2.0 * M_PI * l * phi);
            }
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() < p)
            throw DegreeSelectionError("select_harmonic_degree: rank-deficient regression at D=" +
                                       std::to_string(d));
        const Eigen::VectorXd resid = y - design * qr.solve(y);
        const double rss = std::max(resid.squaredNorm(), rss_floor(n, scale));
        const double value = criterion_value(criterion, n, rss, p);
        if (value < best_value) {
            best_value = value;
            best_degree = d;
        }
    }
    return best_degree;
}

std::vector<double> HarmonicDecomposition::resynthesize() const {
    std::vector<double> out = trend;
    for (const auto& comp : components) {
        for (const auto& h : comp.harmonics) {
            for (std::size_t n = 0; n < out.size(); ++n)
                out[n] += h.amplitude[n] * std::cos(2.0 * M_PI * h.phase[n]);
        }
    }
    return out;
}

HarmonicDecomposition harmonic_decompose(const Signal& signal, int n_components,
                                         const DecomposeParams& params) {
    signal.validate();
    if (n_components < 1) throw InvalidInput("harmonic_decompose: need at least one component");
    if (signal.observed_count() != signal.size())
        throw InvalidInput("harmonic_decompose: signal must have no missing samples");

    const int n = static_cast<int>(signal.size());
    const double period = params.avg_period > 0.0 ? params.avg_period
                                                  : estimate_average_period(signal);
    const auto tfr = stft(signal, params.cycles_in_window, params.n_bins, period);
    const double bin_hz = tfr.bin_hz();
    const double fb = params.fb_hz > 0.0 ? params.fb_hz : default_fb_hz(signal.fs, signal.size());

    // Fundamental ridges on the squared de-shape map, masking each found
    // ridge before searching for the next component.
    auto energy = de_shape(tfr, params.gamma);
    for (auto& v : energy) v *= v;

    std::vector<Ridge> fundamentals;
    const int mask_bins = std::max(static_cast<int>(std::ceil(fb / bin_hz)), tfr.window_halfwidth_bins);
    for (int k = 0; k < n_components; ++k) {
        auto detected = extract_ridge(energy, tfr.frames, tfr.bins, bin_hz, fb);
        if (k + 1 < n_components) {
            for (int frame = 0; frame < tfr.frames; ++frame) {
                const int c = detected.bins[frame];
                const int lo = std::max(0, c - mask_bins);
                const int hi = std::min(tfr.bins - 1, c + mask_bins);
                auto* row = &energy[static_cast<std::size_t>(frame) * tfr.bins];
                std::fill(row + lo, row + hi + 1, 0.0);
            }
        }
        // Snap to the STFT peak; the de-shape product skews peak locations,
        // especially when several combs interfere.
        const double refine_hz = 0.5 * tfr.window_halfwidth_bins * bin_hz;
        fundamentals.push_back(refine_ridge(tfr, detected, refine_hz, fb));
    }

    HarmonicDecomposition decomp;
    decomp.guard_delta = tfr.window_halfwidth_bins;
    decomp.fs = signal.fs;
    decomp.trend = estimate_trend(tfr, fundamentals);

    std::vector<double> detrended(signal.samples);
    for (int i = 0; i < n; ++i) detrended[i] -= decomp.trend[i];

    const int lo_frame = n / 20;  // RSS over the interior 90% of frames
    const int hi_frame = n - n / 20;
    double scale = 0.0;
    for (int i = lo_frame; i < hi_frame; ++i) scale = std::max(scale, std::abs(detrended[i]));

    for (int k = 0; k < n_components; ++k) {
        HarmonicComponent comp;
        comp.ridges.push_back(fundamentals[k]);
        comp.harmonics.push_back(reconstruct_component(tfr, fundamentals[k]));

        const double max_fund = *std::max_element(fundamentals[k].freqs_hz.begin(),
                                                  fundamentals[k].freqs_hz.end());
        const double min_fund = *std::min_element(fundamentals[k].freqs_hz.begin(),
                                                  fundamentals[k].freqs_hz.end());
        int d_max = params.d_max > 0
                        ? params.d_max
                        : std::min(10, static_cast<int>(std::floor((signal.fs / 2.0) /
                                                                   std::max(max_fund, bin_hz))) -
                                           1);
        d_max = std::max(1, d_max);
        const double vicinity = params.vicinity_hz > 0.0 ? params.vicinity_hz : 0.5 * min_fund;

        for (int ell = 2; ell <= d_max; ++ell) {
            try {
                auto hr = extract_harmonic_ridge(tfr, fundamentals[k], ell, vicinity, fb);
                // Foreign-component guard: a "harmonic" that tracks another
                // fundamental belongs to that component, not this one.
                bool foreign = false;
                for (int other = 0; other < n_components && !foreign; ++other) {
                    if (other == k) continue;
                    int votes = 0;
                    for (int frame = 0; frame < tfr.frames; ++frame) {
                        if (std::abs(hr.bins[frame] - fundamentals[other].bins[frame]) <=
                            tfr.window_halfwidth_bins)
                            ++votes;
                    }
                    foreign = votes >= tfr.frames / 2;
                }
                if (foreign) break;
                comp.harmonics.push_back(reconstruct_component(tfr, hr));
                comp.ridges.push_back(std::move(hr));
            } catch (const HarmonicOutOfRangeError&) {
                break;
            }
        }

        // Degree selection over nested reconstructions: the candidate model of
        // degree D is the sum of the first D measured harmonics; the same
        // criterion as the regression route, with p = 2D.
        std::vector<double> residual(detrended.begin(), detrended.end());
        const double rows = static_cast<double>(hi_frame - lo_frame);
        double best_value = std::numeric_limits<double>::infinity();
        int best_degree = 1;
        for (std::size_t d = 1; d <= comp.harmonics.size(); ++d) {
            const auto& h = comp.harmonics[d - 1];
            for (int i = lo_frame; i < hi_frame; ++i)
                residual[i] -= h.amplitude[i] * std::cos(2.0 * M_PI * h.phase[i]);
            double rss = 0.0;
            for (int i = lo_frame; i < hi_frame; ++i) rss += residual[i] * residual[i];
            rss = std::max(rss, rss_floor(rows, scale));
            const double p = 2.0 * static_cast<double>(d);
            if (rows - p - 1.0 <= 0.0) break;
            const double value = criterion_value(params.criterion, rows, rss, p);
            if (value < best_value) {
                best_value = value;
                best_degree = static_cast<int>(d);
            }
        }
        comp.degree = best_degree;
        comp.harmonics.resize(best_degree);
        comp.ridges.resize(best_degree);
        decomp.components.push_back(std::move(comp));
    }
    return decomp;
}

}  // namespace hali
