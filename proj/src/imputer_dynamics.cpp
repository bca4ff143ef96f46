#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "hali/errors.hpp"
#include "hali/imputers.hpp"

namespace hali {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kSvdRelTol = 1e-8;

// Delay matrices: column l of X is x_l = window[l .. l+K-1], Y is X shifted
// by one sample. `history` must hold exactly K+M samples.
void build_delay_matrices(const std::vector<double>& history, int k, int m, MatrixXd& x,
                          MatrixXd& y) {
    x.resize(k, m);
    y.resize(k, m);
    for (int col = 0; col < m; ++col) {
        for (int row = 0; row < k; ++row) {
            x(row, col) = history[col + row];
            y(row, col) = history[col + row + 1];
        }
    }
}

double median_pairwise_distance(const MatrixXd& columns) {
    const int m = static_cast<int>(columns.cols());
    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) dist.push_back((columns.col(i) - columns.col(j)).norm());
    }
    // Degenerate spreads (constant windows) need a scale-sized kernel width;
    // anything sharper amplifies rounding noise through the kernel gradient
    // 1/gamma and the rolled forecast diverges from the fixed point.
    const double scale = 1.0 + columns.colwise().norm().maxCoeff();
    if (dist.empty()) return scale;
    const auto mid = dist.size() / 2;
    std::nth_element(dist.begin(), dist.begin() + mid, dist.end());
    return dist[mid] > 1e-12 * scale ? dist[mid] : scale;
}

}  // namespace

DynamicsModel fit_dynamics(const std::vector<double>& history, int embed_dim, int subsignal_len,
                           DynamicsVariant variant, double kernel_gamma) {
    const int k = embed_dim;
    const int m = subsignal_len;
    if (k < 1 || m < 1) throw InvalidInput("fit_dynamics: embedding sizes must be >= 1");
    if (history.size() != static_cast<std::size_t>(k + m))
        throw InvalidInput("fit_dynamics: history must hold exactly K+M samples");

    MatrixXd x, y;
    build_delay_matrices(history, k, m, x, y);

    DynamicsModel model;
    model.variant = variant;
    model.embed_dim = k;

    if (variant == DynamicsVariant::Lse || variant == DynamicsVariant::Dmd) {
        // A = Y X^+ through the truncated SVD of X; the operator action is
        // kept factored as (Y V S^-1)(U^T z).
        Eigen::BDCSVD<MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i) {
            if (sv(i) >= kSvdRelTol * sv(0)) ++rank;
        }
        if (rank == 0) throw ImputerInfeasibleError("fit_dynamics: rank collapse of the data matrix");

        const MatrixXd u = svd.matrixU().leftCols(rank);
        MatrixXd yvs = y * svd.matrixV().leftCols(rank);
        for (int i = 0; i < rank; ++i) yvs.col(i) /= sv(i);

        model.real_op_left.assign(yvs.data(), yvs.data() + yvs.size());
        MatrixXd ut = u.transpose();
        model.real_op_right.assign(ut.data(), ut.data() + ut.size());

        const MatrixXd reduced = u.transpose() * yvs;  // r x r
        Eigen::EigenSolver<MatrixXd> eig(reduced);
        model.eigenvalues.assign(eig.eigenvalues().data(),
                                 eig.eigenvalues().data() + eig.eigenvalues().size());
        return model;
    }

    // Kernel EDMD. Gram matrices with k(a,b) = exp(-|a-b|_2 / gamma).
    const double gamma = kernel_gamma > 0.0 ? kernel_gamma : median_pairwise_distance(x);
    model.gamma = gamma;
    MatrixXd gram(m, m), cross(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            gram(i, j) = std::exp(-(x.col(i) - x.col(j)).norm() / gamma);
            cross(i, j) = std::exp(-(y.col(i) - x.col(j)).norm() / gamma);
        }
    }

    Eigen::SelfAdjointEigenSolver<MatrixXd> gs(gram);
    const VectorXd evals = gs.eigenvalues();
    const double emax = evals.maxCoeff();
    if (!(emax > 0.0)) throw ImputerInfeasibleError("fit_dynamics: degenerate kernel Gram matrix");
    std::vector<int> keep;
    for (int i = 0; i < evals.size(); ++i) {
        if (evals(i) >= kSvdRelTol * emax) keep.push_back(i);
    }
    const int r = static_cast<int>(keep.size());
    MatrixXd q(m, r);
    VectorXd sigma(r);
    for (int i = 0; i < r; ++i) {
        q.col(i) = gs.eigenvectors().col(keep[i]);
        sigma(i) = std::sqrt(evals(keep[i]));
    }

    // Koopman estimate in the feature basis and its eigen decomposition.
    MatrixXd koop = sigma.cwiseInverse().asDiagonal() * q.transpose() * cross * q *
                    sigma.cwiseInverse().asDiagonal();
    Eigen::EigenSolver<MatrixXd> eig(koop);
    const VectorXcd mu = eig.eigenvalues();
    const MatrixXcd xi = eig.eigenvectors();
    model.eigenvalues.assign(mu.data(), mu.data() + mu.size());

    // Eigenfunction coefficients phi_j(z) = sum_i coeff(i,j) k(z, x_i) and
    // state modes V from the least-squares fit X^T ~ Phi V^T.
    MatrixXcd coeff = (q * sigma.cwiseInverse().asDiagonal()).cast<std::complex<double>>() * xi;
    MatrixXcd phi = (q * sigma.asDiagonal()).cast<std::complex<double>>() * xi;  // m x r
    MatrixXcd modes_t = phi.colPivHouseholderQr().solve(x.transpose().cast<std::complex<double>>());
    MatrixXcd modes = modes_t.transpose();  // k x r

    // Bake the eigenvalue into the modes so a step is Re(modes * phi(z)).
    for (int j = 0; j < modes.cols(); ++j) modes.col(j) *= mu(j);

    model.cplx_modes.assign(modes.data(), modes.data() + modes.size());
    model.cplx_eigfun_coeffs.assign(coeff.data(), coeff.data() + coeff.size());
    model.train_columns.assign(x.data(), x.data() + x.size());
    return model;
}

std::vector<double> DynamicsModel::forecast(const std::vector<double>& state, int steps) const {
    const int k = embed_dim;
    if (state.size() != static_cast<std::size_t>(k))
        throw InvalidInput("DynamicsModel::forecast: state size must equal the embedding dimension");
    if (steps < 1) return {};

    VectorXd z = Eigen::Map<const VectorXd>(state.data(), k);
    std::vector<double> out;
    out.reserve(steps);

    if (variant == DynamicsVariant::Lse || variant == DynamicsVariant::Dmd) {
        const int r = static_cast<int>(real_op_left.size()) / k;
        const Eigen::Map<const MatrixXd> left(real_op_left.data(), k, r);
        const Eigen::Map<const MatrixXd> right(real_op_right.data(), r, k);
        for (int step = 0; step < steps; ++step) {
            z = left * (right * z);
            out.push_back(z(k - 1));
        }
        return out;
    }

    const int m = static_cast<int>(train_columns.size()) / k;
    const int r = static_cast<int>(cplx_modes.size()) / k;
    const Eigen::Map<const MatrixXd> train(train_columns.data(), k, m);
    const Eigen::Map<const MatrixXcd> modes(cplx_modes.data(), k, r);
    const Eigen::Map<const MatrixXcd> coeff(cplx_eigfun_coeffs.data(), m, r);
    VectorXd kvec(m);
    for (int step = 0; step < steps; ++step) {
        for (int i = 0; i < m; ++i) kvec(i) = std::exp(-(z - train.col(i)).norm() / gamma);
        const VectorXcd phi = coeff.transpose() * kvec.cast<std::complex<double>>();
        const double next = (modes.row(k - 1) * phi).value().real();
        // Slide the delay window; keeping the state on the data manifold is
        // far more robust than iterating the full-state map.
        for (int i = 0; i + 1 < k; ++i) z(i) = z(i + 1);
        z(k - 1) = next;
        out.push_back(next);
    }
    return out;
}

Signal impute_dynamics(const Signal& signal, const std::vector<MissingInterval>& intervals,
                       DynamicsVariant variant, const ImputerConfig& config, bool* clamped) {
    signal.validate();
    config.validate();
    if (clamped) *clamped = false;

    Signal out = signal;
    const auto n = static_cast<std::ptrdiff_t>(signal.size());
    const int k = config.embed_dim;
    const int m = config.subsignal_len;

    double max_observed = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!out.missing[i]) max_observed = std::max(max_observed, std::abs(out.samples[i]));
    }
    const double clamp_bound = 1e3 * std::max(max_observed, 1e-300);

    for (const auto& interval : intervals) {
        const auto s = static_cast<std::ptrdiff_t>(interval.start);
        if (s + static_cast<std::ptrdiff_t>(interval.length) > n)
            throw InvalidInput("impute_dynamics: interval out of range");

        // K+M contiguous observed samples immediately left of the gap.
        std::ptrdiff_t lo = s - (k + m);
        if (lo < 0) throw ImputerInfeasibleError("impute_dynamics: not enough left context");
        for (std::ptrdiff_t i = lo; i < s; ++i) {
            if (out.missing[i])
                throw ImputerInfeasibleError("impute_dynamics: left context contains missing samples");
        }
        std::vector<double> history(out.samples.begin() + lo, out.samples.begin() + s);
        const auto model = fit_dynamics(history, k, m, variant, config.kernel_gamma);

        std::vector<double> state(out.samples.begin() + (s - k), out.samples.begin() + s);
        auto forecast = model.forecast(state, static_cast<int>(interval.length));
        for (std::size_t i = 0; i < interval.length; ++i) {
            double v = forecast[i];
            if (!std::isfinite(v)) {
                v = 0.0;
                if (clamped) *clamped = true;
            }
            if (std::abs(v) > clamp_bound) {
                v = std::copysign(clamp_bound, v);
                if (clamped) *clamped = true;
            }
            out.samples[interval.start + i] = v;
            out.missing[interval.start + i] = false;
        }
    }
    return out;
}

}  // namespace hali
