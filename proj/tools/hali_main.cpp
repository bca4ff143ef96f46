#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "hali/rng.hpp"

#include "hali/benchmark.hpp"
#include "hali/csv_io.hpp"
#include "hali/deshape.hpp"
#include "hali/errors.hpp"
#include "hali/harmonic.hpp"
#include "hali/metrics.hpp"
#include "hali/pipeline.hpp"
#include "hali/stft.hpp"
#include "hali/synthetic.hpp"

namespace {

using namespace hali;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitCompute = 2;

struct CommonOpts {
    std::string input, output;
    double fs = 0.0;
    std::string method = "tlm";
    std::string scheme = "p";
    int components = 1;
    std::size_t min_gap = 3;
    double window_cycles = 7.0;
    int bins = 4096;
    std::uint64_t seed = 0;
    std::string dump_tfr;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_input) {
    if (needs_input) cmd->add_option("--input", opts.input, "input CSV (time,value or value)")->required();
    cmd->add_option("--fs", opts.fs, "sampling rate in Hz (required for value-only CSV)");
    cmd->add_option("--method", opts.method, "initial imputation method")
        ->check(CLI::IsMember({"tlm", "lse", "dmd", "edmd", "gpr", "sarf", "sarb"}));
    cmd->add_option("--scheme", opts.scheme, "interpolation scheme: s (spline) or p (pchip)")
        ->check(CLI::IsMember({"s", "p"}));
    cmd->add_option("--components,-K", opts.components, "number of oscillatory components");
    cmd->add_option("--min-gap", opts.min_gap, "minimum run length treated as a missing interval");
    cmd->add_option("--window-cycles", opts.window_cycles, "analysis window length in average periods");
    cmd->add_option("--bins", opts.bins, "one-sided frequency bins");
    cmd->add_option("--seed", opts.seed, "random seed");
    cmd->add_option("--dump-tfr", opts.dump_tfr,
                    "prefix for |F|, de-shape and ridge CSV dumps (sparse triples)");
}

HaliParams make_params(const CommonOpts& opts) {
    HaliParams params;
    params.initial_method = parse_method(opts.method);
    params.scheme = parse_scheme(opts.scheme);
    params.n_components = opts.components;
    params.min_gap_len = opts.min_gap;
    params.decompose.cycles_in_window = opts.window_cycles;
    params.decompose.n_bins = opts.bins;
    return params;
}

void dump_tfr_csvs(const std::string& prefix, const Signal& x1, const HaliParams& params) {
    const auto tfr = stft(x1, params.decompose.cycles_in_window, params.decompose.n_bins);
    const auto shape = de_shape(tfr, params.decompose.gamma);

    auto write_sparse = [&](const std::string& path, auto&& value_at) {
        std::ofstream out(path);
        if (!out) throw InvalidInput("cannot write '" + path + "'");
        out << "frame,bin,value\n";
        double peak = 0.0;
        for (int n = 0; n < tfr.frames; ++n) {
            for (int j = 0; j < tfr.bins; ++j) peak = std::max(peak, value_at(n, j));
        }
        const double floor = 1e-8 * peak;
        for (int n = 0; n < tfr.frames; ++n) {
            for (int j = 0; j < tfr.bins; ++j) {
                const double v = value_at(n, j);
                if (v > floor) out << n << ',' << j << ',' << format_double(v) << '\n';
            }
        }
    };
    write_sparse(prefix + "_stft_mag.csv",
                 [&](int n, int j) { return std::abs(tfr.at(n, j)); });
    write_sparse(prefix + "_deshape.csv", [&](int n, int j) {
        return shape[static_cast<std::size_t>(n) * tfr.bins + j];
    });
}

void dump_ridges_csv(const std::string& prefix, const HarmonicDecomposition& decomp) {
    std::ofstream out(prefix + "_ridges.csv");
    if (!out) throw InvalidInput("cannot write ridge dump");
    out << "component,harmonic,frame,bin,freq_hz\n";
    for (std::size_t k = 0; k < decomp.components.size(); ++k) {
        const auto& comp = decomp.components[k];
        for (std::size_t l = 0; l < comp.ridges.size(); ++l) {
            for (std::size_t n = 0; n < comp.ridges[l].bins.size(); ++n) {
                out << k << ',' << l + 1 << ',' << n << ',' << comp.ridges[l].bins[n] << ','
                    << format_double(comp.ridges[l].freqs_hz[n]) << '\n';
            }
        }
    }
}

int cmd_synth(const CommonOpts& opts, const SyntheticSpec& spec, double p_ms, int n_intervals,
              const std::string& prefix) {
    auto truth = generate_synthetic(spec);
    Signal observed = truth.clean;
    if (std::isfinite(spec.snr_db)) observed = add_noise(observed, spec.snr_db, Rng::derive(spec.seed, 1));

    write_signal_csv(prefix + "_truth.csv", truth.clean);
    if (p_ms > 0.0) {
        auto [masked_clean, intervals] =
            apply_missingness(truth, p_ms, n_intervals, Rng::derive(spec.seed, 2));
        Signal masked = observed;
        for (const auto& iv : intervals) {
            for (std::size_t k = iv.start; k < iv.end(); ++k) {
                masked.samples[k] = std::numeric_limits<double>::quiet_NaN();
                masked.missing[k] = true;
            }
        }
        write_signal_csv(prefix + "_masked.csv", masked);
        write_intervals_csv(prefix + "_intervals.csv", intervals);
    } else {
        write_signal_csv(prefix + "_masked.csv", observed);
        write_intervals_csv(prefix + "_intervals.csv", {});
    }
    (void)opts;
    return kExitOk;
}

int cmd_impute(const CommonOpts& opts) {
    const Signal input = read_signal_csv(opts.input, opts.fs);
    const auto params = make_params(opts);
    const auto result = hali_impute(input, std::nullopt, params);

    write_signal_csv(opts.output, result.final_signal);
    for (const auto& record : result.records) {
        if (record.fell_back || record.clamped) {
            std::cerr << "warning: interval [" << record.interval.start << ", +"
                      << record.interval.length << "): requested " << record.requested << ", used "
                      << record.used << (record.clamped ? " (forecast clamped)" : "") << "\n";
        }
    }
    if (result.degraded) std::cerr << "warning: linear fallback engaged; result quality degraded\n";
    if (!opts.dump_tfr.empty()) {
        dump_tfr_csvs(opts.dump_tfr, result.initial, params);
        dump_ridges_csv(opts.dump_tfr, result.decomposition);
    }
    return kExitOk;
}

int cmd_decompose(const CommonOpts& opts, const std::string& prefix) {
    const Signal input = read_signal_csv(opts.input, opts.fs);
    const auto params = make_params(opts);

    // Gapped inputs run through steps 0-1 first; complete inputs go straight
    // to the decomposition.
    const auto stages = hali_prepare(input, std::nullopt, params);
    const auto& decomp = stages.decomposition;

    std::vector<std::string> names{"trend"};
    std::vector<std::vector<double>> columns{decomp.trend};
    for (std::size_t k = 0; k < decomp.components.size(); ++k) {
        const auto& comp = decomp.components[k];
        for (std::size_t l = 0; l < comp.harmonics.size(); ++l) {
            const auto tag = "c" + std::to_string(k + 1) + "_h" + std::to_string(l + 1);
            names.push_back(tag + "_amplitude");
            columns.push_back(comp.harmonics[l].amplitude);
            names.push_back(tag + "_phase_cycles");
            columns.push_back(comp.harmonics[l].phase);
        }
    }
    write_series_csv(prefix + "_decomposition.csv", names, columns);
    if (!opts.dump_tfr.empty()) {
        dump_tfr_csvs(opts.dump_tfr, stages.initial, params);
        dump_ridges_csv(opts.dump_tfr, decomp);
    }
    return kExitOk;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token == "inf" || token == "noiseless") {
            out.push_back(std::numeric_limits<double>::infinity());
        } else {
            out.push_back(std::stod(token));
        }
    }
    return out;
}

int cmd_bench(const BenchmarkConfig& config, const std::string& report_prefix) {
    const auto report = run_benchmark(config);
    report.write_csv(report_prefix + "_report.csv");
    report.write_raw_csv(report_prefix + "_raw.csv");
    const auto table = report.text_table();
    std::ofstream table_out(report_prefix + "_table.txt");
    table_out << table;
    std::cout << table;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HaLI: harmonic-level interpolation for missing data in oscillatory signals"};
    app.require_subcommand(1);

    CommonOpts opts;

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark signal");
    SyntheticSpec spec;
    double p_ms = 0.1;
    int n_intervals = 3;
    std::string prefix = "synth";
    synth->add_option("--fs", spec.fs, "sampling rate, Hz");
    synth->add_option("--duration", spec.duration, "duration, seconds");
    synth->add_option("--harmonics", spec.n_harmonics, "number of harmonics D");
    synth->add_option("--base-freq", spec.base_freq, "fundamental frequency, Hz");
    synth->add_option("--jitter", spec.harmonic_jitter, "harmonic frequency jitter");
    synth->add_option("--snr", spec.snr_db, "noise level, dB (omit for noiseless)");
    synth->add_option("--pms", p_ms, "missing fraction (0 disables masking)");
    synth->add_option("--intervals", n_intervals, "number of missing intervals");
    synth->add_option("--seed", spec.seed, "random seed");
    synth->add_option("--out-prefix", prefix, "output file prefix");
    synth->set_config("--config");

    // impute
    auto* impute = app.add_subcommand("impute", "impute a CSV signal with NaN gaps");
    CommonOpts impute_opts;
    add_common(impute, impute_opts, true);
    impute->add_option("--output", impute_opts.output, "output CSV")->required();
    impute->set_config("--config");

    // decompose
    auto* decompose = app.add_subcommand("decompose", "write the harmonic decomposition as CSV");
    CommonOpts decomp_opts;
    std::string decomp_prefix = "decompose";
    add_common(decompose, decomp_opts, true);
    decompose->add_option("--out-prefix", decomp_prefix, "output file prefix");
    decompose->set_config("--config");

    // bench
    auto* bench = app.add_subcommand("bench", "run the synthetic benchmark sweep");
    BenchmarkConfig bench_config;
    std::string pms_list = "0.05,0.2";
    std::string snr_list = "noiseless";
    std::string methods_list = "tlm,lse,dmd,edmd,gpr,sarf,sarb";
    std::string report_prefix = "bench";
    bench->add_option("--signals", bench_config.n_signals, "signals per cell");
    bench->add_option("--pms", pms_list, "comma-separated missing fractions");
    bench->add_option("--snr", snr_list, "comma-separated SNR levels (dB or 'noiseless')");
    bench->add_option("--methods", methods_list, "comma-separated initial methods");
    bench->add_option("--seed", bench_config.seed, "master seed");
    bench->add_option("--fs", bench_config.synth.fs, "synthetic sampling rate");
    bench->add_option("--duration", bench_config.synth.duration, "synthetic duration, s");
    bench->add_option("--harmonics", bench_config.synth.n_harmonics, "synthetic harmonics");
    bench->add_option("--intervals", bench_config.n_intervals, "missing intervals per signal");
    bench->add_option("--report", report_prefix, "report file prefix");
    bench->set_config("--config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(opts, spec, p_ms, n_intervals, prefix);
        if (impute->parsed()) return cmd_impute(impute_opts);
        if (decompose->parsed()) return cmd_decompose(decomp_opts, decomp_prefix);
        if (bench->parsed()) {
            bench_config.p_ms_levels = parse_double_list(pms_list);
            bench_config.snr_levels = parse_double_list(snr_list);
            bench_config.methods.clear();
            std::stringstream ss(methods_list);
            std::string token;
            while (std::getline(ss, token, ',')) bench_config.methods.push_back(parse_method(token));
            return cmd_bench(bench_config, report_prefix);
        }
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    }
    return kExitOk;
}
