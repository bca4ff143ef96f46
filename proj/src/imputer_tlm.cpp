#include <algorithm>
#include <cmath>
#include <limits>

#include "hali/errors.hpp"
#include "hali/imputers.hpp"

namespace hali {

namespace {

bool all_observed(const std::vector<bool>& missing, std::ptrdiff_t lo, std::ptrdiff_t hi) {
    if (lo < 0 || hi >= static_cast<std::ptrdiff_t>(missing.size())) return false;
    for (std::ptrdiff_t i = lo; i <= hi; ++i) {
        if (missing[i]) return false;
    }
    return true;
}

}  // namespace

Signal impute_tlm(const Signal& signal, const std::vector<MissingInterval>& intervals,
                  int template_len) {
    signal.validate();
    if (template_len < 1) throw InvalidInput("impute_tlm: template_len must be >= 1");

    Signal out = signal;
    const auto n = static_cast<std::ptrdiff_t>(signal.size());
    const std::ptrdiff_t d = template_len;

    for (const auto& interval : intervals) {
        const auto s = static_cast<std::ptrdiff_t>(interval.start);
        const auto len = static_cast<std::ptrdiff_t>(interval.length);
        if (s + len > n) throw InvalidInput("impute_tlm: interval out of range");

        // Templates: left = d samples before the gap, right = d-1 samples
        // starting one past the gap end (the asymmetry is deliberate).
        const bool left_ok = all_observed(out.missing, s - d, s - 1);
        const bool right_ok = all_observed(out.missing, s + len + 1, s + len + d - 1);
        if (!left_ok && !right_ok)
            throw ImputerInfeasibleError("impute_tlm: no observed template on either side");

        double best = std::numeric_limits<double>::infinity();
        std::ptrdiff_t best_p = -1;
        for (std::ptrdiff_t p = 0; p + len <= n; ++p) {
            if (!all_observed(out.missing, p, p + len - 1)) continue;
            if (left_ok && right_ok && !all_observed(out.missing, p - d, p + len + d - 1)) continue;
            if (left_ok && !all_observed(out.missing, p - d, p - 1)) continue;
            if (right_ok && !all_observed(out.missing, p + len + 1, p + len + d - 1)) continue;

            double dist = 0.0;
            if (left_ok) {
                for (std::ptrdiff_t i = 0; i < d; ++i) {
                    const double diff = out.samples[s - d + i] - out.samples[p - d + i];
                    dist += diff * diff;
                    if (dist >= best) break;
                }
            }
            if (right_ok && dist < best) {
                for (std::ptrdiff_t i = 0; i < d - 1; ++i) {
                    const double diff = out.samples[s + len + 1 + i] - out.samples[p + len + 1 + i];
                    dist += diff * diff;
                    if (dist >= best) break;
                }
            }
            if (dist < best) {
                best = dist;
                best_p = p;
            }
        }
        if (best_p < 0)
            throw ImputerInfeasibleError("impute_tlm: no complete candidate window in the record");

        for (std::ptrdiff_t i = 0; i < len; ++i) {
            out.samples[s + i] = out.samples[best_p + i];
            out.missing[s + i] = false;
        }
    }
    return out;
}

}  // namespace hali
