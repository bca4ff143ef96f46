#pragma once

#include <vector>

#include "hali/signal.hpp"

namespace hali {

/// Mean absolute error over the union of the intervals only.
double mae(const Signal& truth, const Signal& estimate,
           const std::vector<MissingInterval>& intervals);

/// mae divided by the full-record range of the ground truth.
double nmae(const Signal& truth, const Signal& estimate,
            const std::vector<MissingInterval>& intervals);

struct WilcoxonResult {
    double p_value = 1.0;
    double w_plus = 0.0;     ///< signed-rank statistic (positive ranks)
    int n_nonzero = 0;       ///< pairs left after dropping zero differences
    bool exact = false;      ///< enumeration (n <= 12) vs normal approximation
};

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
/// are dropped; ties share midranks. Exact sign enumeration for n <= 12,
/// tie- and continuity-corrected normal approximation above.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

/// Bonferroni-adjusted significance threshold alpha/m.
inline double bonferroni_threshold(double alpha, int comparisons) {
    return alpha / static_cast<double>(comparisons);
}

}  // namespace hali
