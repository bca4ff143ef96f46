#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "hali/signal.hpp"

namespace hali {

enum class ImputeMethod { Tlm, Lse, Dmd, Edmd, Gpr, SarForward, SarBackward };

ImputeMethod parse_method(const std::string& name);
std::string method_name(ImputeMethod method);

/// Shared imputer parameters. Auto-tuned values follow the fixed rules
/// d = 3*T, M = 3*T, K = round(2.5*M), N_c = 3; gamma and lambda equal to 0
/// mean "derive from the data at imputation time".
struct ImputerConfig {
    ImputeMethod method = ImputeMethod::Tlm;
    int template_len = 0;           ///< d, samples (TLM)
    int embed_dim = 0;              ///< K, samples (delay-vector dimension)
    int subsignal_len = 0;          ///< M, samples (number of training columns)
    double kernel_gamma = 0.0;      ///< EDMD kernel size; 0: median heuristic
    int seasonality = 0;            ///< lambda, samples; 0: per-interval estimate
    int cycles_for_seasonality = 3; ///< N_c
    bool auto_tuned = false;
    double avg_period = 0.0;        ///< T used by auto-tuning, samples

    void validate() const;
};

/// d = 3T, M = 3T, K = round(2.5M), N_c = 3 (T rounded to nearest sample).
ImputerConfig auto_tune(const Signal& signal, double avg_period);

/// Takens' lag-map template matching: copies the candidate segment whose
/// flanking patterns best match the gap's flanks in Euclidean distance.
/// Intervals are processed left to right; earlier fills become candidate
/// material for later intervals. One-sided templates at record edges.
Signal impute_tlm(const Signal& signal, const std::vector<MissingInterval>& intervals,
                  int template_len);

enum class DynamicsVariant { Lse, Dmd, Edmd };

/// One-step linear (LSE/DMD) or kernel-Koopman (EDMD) forecast model fitted
/// to the K+M samples left of each interval and rolled across the gap.
/// Values forecast beyond 1e3 * max|observed| are clamped and flagged.
Signal impute_dynamics(const Signal& signal, const std::vector<MissingInterval>& intervals,
                       DynamicsVariant variant, const ImputerConfig& config,
                       bool* clamped = nullptr);

/// Fitted one-step model for a data window; exposed for diagnostics.
struct DynamicsModel {
    DynamicsVariant variant;
    int embed_dim = 0;
    std::vector<std::complex<double>> eigenvalues;  ///< reduced-operator spectrum

    std::vector<double> forecast(const std::vector<double>& state, int steps) const;

    // Internal operator representation (column-major, sized by the variant).
    std::vector<double> real_op_left, real_op_right;
    std::vector<std::complex<double>> cplx_modes, cplx_eigfun_coeffs;
    std::vector<double> train_columns;
    double gamma = 0.0;
};

/// Fits the one-step model to the window `history` (its last K+M samples).
DynamicsModel fit_dynamics(const std::vector<double>& history, int embed_dim, int subsignal_len,
                           DynamicsVariant variant, double kernel_gamma = 0.0);

/// Gaussian-process regression on delay vectors, posterior mean rolled
/// across the gap. Optionally reports the posterior standard deviation of
/// every rolled step, one vector per interval.
Signal impute_gpr(const Signal& signal, const std::vector<MissingInterval>& intervals,
                  const ImputerConfig& config,
                  std::vector<std::vector<double>>* posterior_sd = nullptr);

enum class SarSide { Before, After };

/// Cycle lengths T_k = #{n : k-1 < phase(n) <= k} from an unwrapped phase in
/// cycles; returns the rounded mean of the n_c complete cycles adjacent to
/// the interval (>= 2 samples).
int estimate_seasonality(const std::vector<double>& phase_cycles, const MissingInterval& interval,
                         SarSide side, int n_c);

enum class SarDirection { Forward, Backward };

/// Seasonal autoregression y(n) = c + Sum a_i y(n-i) + Sum b_j y(n-j*lambda),
/// fitted by conditional least squares with AICc order selection over
/// p in 1..4, P in 1..2, rolled across the gap. Backward runs the forward
/// procedure on the time-reversed right-side data. lambda = 0 estimates the
/// seasonality per interval (phase-based, average-period fallback).
Signal impute_sar(const Signal& signal, const std::vector<MissingInterval>& intervals,
                  SarDirection direction, int lambda, const ImputerConfig& config);

struct IntervalRecord {
    MissingInterval interval;
    std::string requested;  ///< method asked for
    std::string used;       ///< method that produced the fill ("linear" at worst)
    bool fell_back = false;
    bool clamped = false;
};

struct InitialImputation {
    Signal signal;
    std::vector<IntervalRecord> records;
};

/// Runs the configured method per interval with the fallback chain
/// method -> LSE -> linear interpolation, so a valid signal always comes back.
InitialImputation apply_imputer(const Signal& signal, const std::vector<MissingInterval>& intervals,
                                const ImputerConfig& config);

}  // namespace hali
