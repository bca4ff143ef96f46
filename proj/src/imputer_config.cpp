#include <algorithm>
#include <cmath>

#include "hali/errors.hpp"
#include "hali/imputers.hpp"

namespace hali {

ImputeMethod parse_method(const std::string& name) {
    if (name == "tlm") return ImputeMethod::Tlm;
    if (name == "lse") return ImputeMethod::Lse;
    if (name == "dmd") return ImputeMethod::Dmd;
    if (name == "edmd") return ImputeMethod::Edmd;
    if (name == "gpr") return ImputeMethod::Gpr;
    if (name == "sarf") return ImputeMethod::SarForward;
    if (name == "sarb") return ImputeMethod::SarBackward;
    throw InvalidInput("unknown imputation method '" + name + "'");
}

std::string method_name(ImputeMethod method) {
    switch (method) {
        case ImputeMethod::Tlm: return "tlm";
        case ImputeMethod::Lse: return "lse";
        case ImputeMethod::Dmd: return "dmd";
        case ImputeMethod::Edmd: return "edmd";
        case ImputeMethod::Gpr: return "gpr";
        case ImputeMethod::SarForward: return "sarf";
        case ImputeMethod::SarBackward: return "sarb";
    }
    return "tlm";
}

void ImputerConfig::validate() const {
    if (template_len < 1) throw InvalidInput("ImputerConfig: template_len must be >= 1");
    if (embed_dim < 1 || subsignal_len < 1)
        throw InvalidInput("ImputerConfig: embedding sizes must be >= 1");
    if (kernel_gamma < 0.0) throw InvalidInput("ImputerConfig: kernel_gamma must be >= 0");
    if (seasonality < 0) throw InvalidInput("ImputerConfig: seasonality must be >= 0");
    if (cycles_for_seasonality < 1)
        throw InvalidInput("ImputerConfig: cycles_for_seasonality must be >= 1");
    if (auto_tuned) {
        const int t = static_cast<int>(std::lround(avg_period));
        if (template_len != 3 * t || subsignal_len != 3 * t ||
            embed_dim != static_cast<int>(std::lround(2.5 * subsignal_len)) ||
            cycles_for_seasonality != 3)
            throw InvalidInput("ImputerConfig: auto-tuned values break the d=3T, K=2.5M rules");
    }
}

ImputerConfig auto_tune(const Signal& signal, double avg_period) {
    if (avg_period <= 0.0) avg_period = estimate_average_period(signal);
    if (avg_period < 2.0) throw InvalidInput("auto_tune: average period must be >= 2 samples");

    ImputerConfig config;
    const int t = static_cast<int>(std::lround(avg_period));
    config.template_len = 3 * t;
    config.subsignal_len = 3 * t;
    config.embed_dim = static_cast<int>(std::lround(2.5 * config.subsignal_len));
    config.kernel_gamma = 0.0;  // median heuristic at fit time
    config.seasonality = 0;     // per-interval estimate
    config.cycles_for_seasonality = 3;
    config.auto_tuned = true;
    config.avg_period = avg_period;
    config.validate();
    return config;
}

}  // namespace hali
