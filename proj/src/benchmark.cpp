#include "hali/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hali/errors.hpp"
#include "hali/harmonic.hpp"
#include "hali/metrics.hpp"
#include "hali/rng.hpp"

namespace hali {

double median(std::vector<double> values) {
    if (values.empty()) throw InvalidInput("median: empty");
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
    return 0.5 * (values[mid - 1] + hi);
}

void BenchmarkConfig::validate() const {
    if (n_signals < 1) throw InvalidInput("BenchmarkConfig: n_signals must be >= 1");
    if (p_ms_levels.empty()) throw InvalidInput("BenchmarkConfig: no missingness levels");
    for (double p : p_ms_levels) {
        if (!(p > 0.0 && p < 0.5)) throw InvalidInput("BenchmarkConfig: p_ms must be in (0, 0.5)");
    }
    if (methods.empty()) throw InvalidInput("BenchmarkConfig: no methods");
    if (schemes.empty()) throw InvalidInput("BenchmarkConfig: no schemes");
    if (n_intervals < 1) throw InvalidInput("BenchmarkConfig: n_intervals must be >= 1");
    synth.validate();
}

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
    config.validate();

    BenchmarkReport report;
    for (double snr : config.snr_levels) {
        for (double p_ms : config.p_ms_levels) {
            BenchmarkCell cell;
            cell.snr_db = snr;
            cell.p_ms = p_ms;
            for (auto method : config.methods) cell.win_counts[method_name(method)] = 0;

            for (int i = 0; i < config.n_signals; ++i) {
                const std::uint64_t signal_seed = config.seed + static_cast<std::uint64_t>(i);
                try {
                    SyntheticSpec spec = config.synth;
                    spec.seed = signal_seed;
                    const auto truth = generate_synthetic(spec);
                    Signal noisy = std::isinf(snr) && snr > 0
                                       ? truth.clean
                                       : add_noise(truth.clean, snr, Rng::derive(signal_seed, 1));
                    auto [masked_clean, intervals] =
                        apply_missingness(truth, p_ms, config.n_intervals, Rng::derive(signal_seed, 2));

                    Signal masked = noisy;
                    for (const auto& iv : intervals) {
                        for (std::size_t k = iv.start; k < iv.end(); ++k) {
                            masked.samples[k] = std::numeric_limits<double>::quiet_NaN();
                            masked.missing[k] = true;
                        }
                    }

                    // Step 1 with every configured method; keep the best by MAE.
                    auto imputer_config = auto_tune(masked, 0.0);
                    double best_mae = std::numeric_limits<double>::infinity();
                    std::string best_name;
                    InitialImputation best_initial;
                    for (auto method : config.methods) {
                        imputer_config.method = method;
                        auto initial = apply_imputer(masked, intervals, imputer_config);
                        const double err = mae(truth.clean, initial.signal, intervals);
                        if (err < best_mae) {
                            best_mae = err;
                            best_name = method_name(method);
                            best_initial = std::move(initial);
                        }
                    }

                    // Steps 2 and 3, decomposition shared across the schemes.
                    HaliStages stages;
                    stages.initial = best_initial.signal;
                    stages.records = best_initial.records;
                    stages.intervals = intervals;
                    stages.decomposition =
                        harmonic_decompose(stages.initial, config.hali.n_components,
                                           config.hali.decompose);
                    for (auto scheme : config.schemes) {
                        const auto result = hali_finalize(stages, scheme, config.hali.guard);
                        cell.mae_hali[scheme_name(scheme)].push_back(
                            mae(truth.clean, result.final_signal, intervals));
                    }

                    cell.mae_initial.push_back(best_mae);
                    cell.best_method.push_back(best_name);
                    cell.win_counts[best_name] += 1;
                } catch (const Error& e) {
                    cell.failures.push_back("signal " + std::to_string(i) + ": " + e.what());
                }
            }

            if (!cell.mae_initial.empty()) {
                cell.median_initial = median(cell.mae_initial);
                for (const auto& [scheme, list] : cell.mae_hali)
                    cell.median_hali[scheme] = median(list);

                auto pairwise = [&](const std::vector<double>& x, const std::vector<double>& y,
                                    const std::string& label) {
                    try {
                        cell.p_values[label] = wilcoxon_signed_rank(x, y).p_value;
                    } catch (const ComputeError&) {
                        cell.p_values[label] = 1.0;
                    }
                };
                const bool has_s = cell.mae_hali.count("s") > 0;
                const bool has_p = cell.mae_hali.count("p") > 0;
                if (has_s) pairwise(cell.mae_initial, cell.mae_hali.at("s"), "I-S");
                if (has_p) pairwise(cell.mae_initial, cell.mae_hali.at("p"), "I-P");
                if (has_s && has_p) pairwise(cell.mae_hali.at("s"), cell.mae_hali.at("p"), "S-P");
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

namespace {

std::string snr_label(double snr) {
    if (std::isinf(snr) && snr > 0) return "noiseless";
    std::ostringstream os;
    os << snr << "dB";
    return os.str();
}

}  // namespace

void BenchmarkReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << "snr,p_ms,metric,value\n";
    for (const auto& cell : cells) {
        const auto prefix = snr_label(cell.snr_db) + "," + std::to_string(cell.p_ms) + ",";
        out << prefix << "median_mae_I," << cell.median_initial << '\n';
        for (const auto& [scheme, value] : cell.median_hali)
            out << prefix << "median_mae_" << scheme << "," << value << '\n';
        for (const auto& [label, p] : cell.p_values)
            out << prefix << "p_" << label << "," << p << '\n';
        for (const auto& [method, count] : cell.win_counts)
            out << prefix << "wins_" << method << "," << count << '\n';
        out << prefix << "failures," << cell.failures.size() << '\n';
    }
}

void BenchmarkReport::write_raw_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << "snr,p_ms,signal,stage,mae,best_method\n";
    for (const auto& cell : cells) {
        for (std::size_t i = 0; i < cell.mae_initial.size(); ++i) {
            const auto prefix =
                snr_label(cell.snr_db) + "," + std::to_string(cell.p_ms) + "," + std::to_string(i);
            out << prefix << ",I," << cell.mae_initial[i] << ',' << cell.best_method[i] << '\n';
            for (const auto& [scheme, list] : cell.mae_hali)
                out << prefix << ',' << scheme << ',' << list[i] << ',' << cell.best_method[i]
                    << '\n';
        }
    }
}

std::string BenchmarkReport::text_table() const {
    std::ostringstream os;
    os << "Median MAE by noise level and missingness (I: best initial, "
          "S: spline, P: pchip)\n";
    os << "significance threshold (Bonferroni, m=3): p < " << bonferroni_alpha << "\n\n";
    for (const auto& cell : cells) {
        os << "[" << snr_label(cell.snr_db) << ", p_ms=" << cell.p_ms * 100.0 << "%]  "
           << "n=" << cell.mae_initial.size() << "\n";
        os << "  MAE_I = " << cell.median_initial << "\n";
        for (const auto& [scheme, value] : cell.median_hali)
            os << "  MAE_" << (scheme == "s" ? "S" : "P") << " = " << value << "\n";
        for (const auto& [label, p] : cell.p_values)
            os << "  p_{" << label << "} = " << p << (p < bonferroni_alpha ? "  *" : "") << "\n";
        os << "  best-initial wins:";
        for (const auto& [method, count] : cell.win_counts) {
            if (count > 0) os << "  " << method << ":" << count;
        }
        os << "\n";
        if (!cell.failures.empty()) os << "  flagged: " << cell.failures.size() << " signal(s)\n";
        os << "\n";
    }
    return os.str();
}

}  // namespace hali
