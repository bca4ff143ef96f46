#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hali/imputers.hpp"
#include "hali/interpolation.hpp"
#include "hali/pipeline.hpp"
#include "hali/synthetic.hpp"

namespace hali {

struct BenchmarkConfig {
    int n_signals = 30;
    std::vector<double> p_ms_levels = {0.05, 0.20};
    /// +infinity is the noiseless sentinel.
    std::vector<double> snr_levels = {std::numeric_limits<double>::infinity()};
    std::vector<ImputeMethod> methods = {ImputeMethod::Tlm,       ImputeMethod::Lse,
                                         ImputeMethod::Dmd,       ImputeMethod::Edmd,
                                         ImputeMethod::Gpr,       ImputeMethod::SarForward,
                                         ImputeMethod::SarBackward};
    std::vector<InterpolationScheme> schemes = {InterpolationScheme::CubicSpline,
                                                InterpolationScheme::Pchip};
    int n_intervals = 3;
    std::uint64_t seed = 42;
    SyntheticSpec synth;
    HaliParams hali;

    void validate() const;
};

/// One (noise level, missingness) aggregate block.
struct BenchmarkCell {
    double snr_db = 0.0;
    double p_ms = 0.0;
    std::vector<double> mae_initial;                      ///< best-initial, per signal
    std::map<std::string, std::vector<double>> mae_hali;  ///< scheme name -> per signal
    std::map<std::string, int> win_counts;                ///< best-initial histogram
    std::vector<std::string> best_method;                 ///< per signal
    std::vector<std::string> failures;                    ///< flagged rows, never fatal

    double median_initial = 0.0;
    std::map<std::string, double> median_hali;
    std::map<std::string, double> p_values;  ///< "I-S", "I-P", "S-P"
};

struct BenchmarkReport {
    std::vector<BenchmarkCell> cells;
    double bonferroni_alpha = 0.05 / 3.0;

    void write_csv(const std::string& path) const;
    void write_raw_csv(const std::string& path) const;  ///< long format, one MAE per row
    std::string text_table() const;
};

BenchmarkReport run_benchmark(const BenchmarkConfig& config);

double median(std::vector<double> values);

}  // namespace hali
