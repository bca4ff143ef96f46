#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "hali/errors.hpp"
#include "hali/imputers.hpp"

namespace hali {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct GprModel {
    MatrixXd train;      // K x M delay columns
    VectorXd alpha;      // (Kmat + noise I)^-1 centered targets
    Eigen::LLT<MatrixXd> chol;
    double lengthscale = 1.0;
    double signal_var = 1.0;
    double target_mean = 0.0;

    double kernel(const VectorXd& a, const VectorXd& b) const {
        const double d2 = (a - b).squaredNorm();
        return signal_var * std::exp(-d2 / (2.0 * lengthscale * lengthscale));
    }

    std::pair<double, double> predict(const VectorXd& z) const {
        const int m = static_cast<int>(train.cols());
        VectorXd kvec(m);
        for (int i = 0; i < m; ++i) kvec(i) = kernel(z, train.col(i));
        const double mean = target_mean + kvec.dot(alpha);
        const VectorXd solved = chol.solve(kvec);
        const double var = std::max(signal_var - kvec.dot(solved), 0.0);
        return {mean, var};
    }
};

GprModel fit_gpr(const std::vector<double>& history, int k, int m) {
    GprModel model;
    model.train.resize(k, m);
    VectorXd targets(m);
    for (int col = 0; col < m; ++col) {
        for (int row = 0; row < k; ++row) model.train(row, col) = history[col + row];
        targets(col) = history[col + k];  // sample immediately after the window
    }

    // Median-heuristic lengthscale; variance hyperparameters from the targets.
    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) dist.push_back((model.train.col(i) - model.train.col(j)).norm());
    }
    if (!dist.empty()) {
        const auto mid = dist.size() / 2;
        std::nth_element(dist.begin(), dist.begin() + mid, dist.end());
        model.lengthscale = std::max(dist[mid], 1e-150);
    }
    model.target_mean = targets.mean();
    model.signal_var =
        (targets.array() - model.target_mean).square().sum() / static_cast<double>(m);
    if (!(model.signal_var > 0.0)) model.signal_var = 1e-12;
    const double noise_var = 1e-2 * model.signal_var;

    MatrixXd gram(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            const double v = model.kernel(model.train.col(i), model.train.col(j));
            gram(i, j) = v;
            gram(j, i) = v;
        }
    }
    for (int i = 0; i < m; ++i) gram(i, i) += noise_var;

    // Escalating jitter until the Cholesky succeeds.
    double jitter = 1e-8 * model.signal_var;
    const double jitter_max = 1e-2 * model.signal_var;
    for (;;) {
        model.chol.compute(gram);
        if (model.chol.info() == Eigen::Success) break;
        if (jitter > jitter_max)
            throw ImputerInfeasibleError("impute_gpr: Gram matrix not positive definite");
        for (int i = 0; i < m; ++i) gram(i, i) += jitter;
        jitter *= 10.0;
    }
    model.alpha = model.chol.solve(VectorXd(targets.array() - model.target_mean));
    return model;
}

}  // namespace

Signal impute_gpr(const Signal& signal, const std::vector<MissingInterval>& intervals,
                  const ImputerConfig& config, std::vector<std::vector<double>>* posterior_sd) {
    signal.validate();
    config.validate();
    if (posterior_sd) posterior_sd->clear();

    Signal out = signal;
    const auto n = static_cast<std::ptrdiff_t>(signal.size());
    const int k = config.embed_dim;
    const int m = config.subsignal_len;

    for (const auto& interval : intervals) {
        const auto s = static_cast<std::ptrdiff_t>(interval.start);
        if (s + static_cast<std::ptrdiff_t>(interval.length) > n)
            throw InvalidInput("impute_gpr: interval out of range");
        const std::ptrdiff_t lo = s - (k + m);
        if (lo < 0) throw ImputerInfeasibleError("impute_gpr: not enough left context");
        for (std::ptrdiff_t i = lo; i < s; ++i) {
            if (out.missing[i])
                throw ImputerInfeasibleError("impute_gpr: left context contains missing samples");
        }

        std::vector<double> history(out.samples.begin() + lo, out.samples.begin() + s);
        const auto model = fit_gpr(history, k, m);

        VectorXd window(k);
        for (int i = 0; i < k; ++i) window(i) = out.samples[s - k + i];
        std::vector<double> sds;
        sds.reserve(interval.length);
        for (std::size_t step = 0; step < interval.length; ++step) {
            const auto [mean, var] = model.predict(window);
            sds.push_back(std::sqrt(var));
            out.samples[interval.start + step] = mean;
            out.missing[interval.start + step] = false;
            // Slide the delay window over the freshly predicted sample.
            for (int i = 0; i + 1 < k; ++i) window(i) = window(i + 1);
            window(k - 1) = mean;
        }
        if (posterior_sd) posterior_sd->push_back(std::move(sds));
    }
    return out;
}

}  // namespace hali
