#include "hali/errors.hpp"
#include "hali/imputers.hpp"

namespace hali {

namespace {

Signal run_method(const Signal& signal, const std::vector<MissingInterval>& intervals,
                  ImputeMethod method, const ImputerConfig& config, bool* clamped) {
    switch (method) {
        case ImputeMethod::Tlm:
            return impute_tlm(signal, intervals, config.template_len);
        case ImputeMethod::Lse:
            return impute_dynamics(signal, intervals, DynamicsVariant::Lse, config, clamped);
        case ImputeMethod::Dmd:
            return impute_dynamics(signal, intervals, DynamicsVariant::Dmd, config, clamped);
        case ImputeMethod::Edmd:
            return impute_dynamics(signal, intervals, DynamicsVariant::Edmd, config, clamped);
        case ImputeMethod::Gpr:
            return impute_gpr(signal, intervals, config);
        case ImputeMethod::SarForward:
            return impute_sar(signal, intervals, SarDirection::Forward, config.seasonality, config);
        case ImputeMethod::SarBackward:
            return impute_sar(signal, intervals, SarDirection::Backward, config.seasonality, config);
    }
    throw InvalidInput("apply_imputer: unknown method");
}

}  // namespace

InitialImputation apply_imputer(const Signal& signal, const std::vector<MissingInterval>& intervals,
                                const ImputerConfig& config) {
    signal.validate();
    config.validate();

    InitialImputation result;
    result.signal = signal;

    // Intervals left to right; each fill is visible to later intervals.
    for (const auto& interval : intervals) {
        IntervalRecord record;
        record.interval = interval;
        record.requested = method_name(config.method);
        const std::vector<MissingInterval> one{interval};

        bool clamped = false;
        bool done = false;
        try {
            result.signal = run_method(result.signal, one, config.method, config, &clamped);
            record.used = record.requested;
            done = true;
        } catch (const ImputerInfeasibleError&) {
        }
        if (!done && config.method != ImputeMethod::Lse) {
            try {
                result.signal = run_method(result.signal, one, ImputeMethod::Lse, config, &clamped);
                record.used = "lse";
                record.fell_back = true;
                done = true;
            } catch (const ImputerInfeasibleError&) {
            }
        }
        if (!done) {
            fill_linear(result.signal, one);
            record.used = "linear";
            record.fell_back = true;
        }
        record.clamped = clamped;
        result.records.push_back(std::move(record));
    }
    return result;
}

}  // namespace hali
