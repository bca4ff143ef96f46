#include "hali/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "hali/errors.hpp"

namespace hali {

double mae(const Signal& truth, const Signal& estimate,
           const std::vector<MissingInterval>& intervals) {
    if (truth.size() != estimate.size()) throw InvalidInput("mae: length mismatch");

    double sum = 0.0;
    std::size_t count = 0;
    std::vector<bool> seen(truth.size(), false);
    for (const auto& iv : intervals) {
        if (iv.end() > truth.size()) throw InvalidInput("mae: interval out of range");
        for (std::size_t i = iv.start; i < iv.end(); ++i) {
            if (seen[i]) continue;
            seen[i] = true;
            sum += std::abs(truth.samples[i] - estimate.samples[i]);
            ++count;
        }
    }
    if (count == 0) throw InvalidInput("mae: empty interval union");
    return sum / static_cast<double>(count);
}

double nmae(const Signal& truth, const Signal& estimate,
            const std::vector<MissingInterval>& intervals) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth.missing[i]) continue;
        lo = std::min(lo, truth.samples[i]);
        hi = std::max(hi, truth.samples[i]);
    }
    const double range = hi - lo;
    if (!(range > 0.0)) throw InvalidInput("nmae: ground truth has zero range");
    return mae(truth, estimate, intervals) / range;
}

namespace {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw InvalidInput("wilcoxon_signed_rank: length mismatch");

    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    const int n = static_cast<int>(diffs.size());
    if (n == 0) throw DegenerateTestError("wilcoxon_signed_rank: all differences are zero");

    // Midranks of |d|.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return std::abs(diffs[i]) < std::abs(diffs[j]); });
    std::vector<double> ranks(n, 0.0);
    std::vector<double> tie_sizes;
    for (int i = 0; i < n;) {
        int j = i;
        while (j < n && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (int k = i; k < j; ++k) ranks[order[k]] = midrank;
        if (j - i > 1) tie_sizes.push_back(static_cast<double>(j - i));
        i = j;
    }

    WilcoxonResult result;
    result.n_nonzero = n;
    for (int i = 0; i < n; ++i) {
        if (diffs[i] > 0.0) result.w_plus += ranks[i];
    }

    if (n <= 12) {
        // Exact: enumerate all 2^n sign assignments of the observed ranks.
        result.exact = true;
        const std::uint32_t total = 1u << n;
        std::uint32_t count_ge = 0, count_le = 0;
        for (std::uint32_t bits = 0; bits < total; ++bits) {
            double w = 0.0;
            for (int i = 0; i < n; ++i) {
                if (bits & (1u << i)) w += ranks[i];
            }
            if (w >= result.w_plus - 1e-12) ++count_ge;
            if (w <= result.w_plus + 1e-12) ++count_le;
        }
        const double p_ge = static_cast<double>(count_ge) / total;
        const double p_le = static_cast<double>(count_le) / total;
        result.p_value = std::min(1.0, 2.0 * std::min(p_ge, p_le));
        return result;
    }

    // Normal approximation with tie correction and continuity correction.
    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
    for (double t : tie_sizes) var -= (t * t * t - t) / 48.0;
    if (!(var > 0.0)) throw DegenerateTestError("wilcoxon_signed_rank: zero variance (total tie)");
    const double dev = result.w_plus - mean;
    const double cc = dev > 0.0 ? -0.5 : dev < 0.0 ? 0.5 : 0.0;
    const double z = (dev + cc) / std::sqrt(var);
    result.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
    return result;
}

}  // namespace hali
