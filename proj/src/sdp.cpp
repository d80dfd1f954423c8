#include "iqcoh/sdp.hpp"

#include <algorithm>
#include <cmath>

namespace iqcoh::sdp {

namespace {

double lambda_min(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

// Mix a subspace-exact dual iterate with the identity (itself dual feasible)
// until it is PSD.
Matrix make_psd_by_mixing(const Matrix& tau) {
    const double lmin = lambda_min(tau);
    if (lmin >= 0.0) return tau;
    const double delta = -lmin;
    const double eps = delta / (1.0 + delta);
    return (1.0 - eps) * tau + eps * Matrix::Identity(tau.rows(), tau.cols());
}

struct AdmmState {
    double mu;
    int iter = 0;
};

void rescale_penalty(double primal_res, double dual_res, double tol,
                     double& mu, Matrix& u) {
    // Residual balancing; left alone once both residuals are already small.
    if (primal_res < 100.0 * tol && dual_res < 100.0 * tol) return;
    if (primal_res > 10.0 * dual_res && mu < 1e6) {
        mu *= 2.0;
        u *= 0.5;
    } else if (dual_res > 10.0 * primal_res && mu > 1e-6) {
        mu *= 0.5;
        u *= 2.0;
    }
}

} // namespace

Matrix Subspace::project(const Matrix& m) const {
    if (kind == Diagonal) {
        return m.diagonal().asDiagonal();
    }
    if (dA * dB != m.rows() || m.rows() != m.cols())
        throw DimensionMismatchError("Subspace::project: block structure does not match matrix");
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (int i = 0; i < dA; ++i)
        out.block(i * dB, i * dB, dB, dB) = m.block(i * dB, i * dB, dB, dB);
    return out;
}

Matrix psd_project(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (int k = 0; k < solver.eigenvalues().size(); ++k) {
        const double lk = solver.eigenvalues()(k);
        if (lk > 0.0)
            out += lk * solver.eigenvectors().col(k) * solver.eigenvectors().col(k).adjoint();
    }
    return out;
}

SdpSolution solve_cover(const Matrix& rho, const Subspace& subspace,
                        const SdpOptions& options) {
    const int n = static_cast<int>(rho.rows());
    if (subspace.kind == Subspace::BlockDiagonalA && subspace.dA * subspace.dB != n)
        throw DimensionMismatchError("solve_cover: subspace dims inconsistent with rho");
    const Matrix eye = Matrix::Identity(n, n);

    Matrix x = subspace.project(rho);
    Matrix y = rho;
    Matrix u = Matrix::Zero(n, n);
    double mu = options.mu;

    SdpSolution sol;
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        x = subspace.project(y - u - eye / mu);
        const Matrix x_relaxed = options.relax * x + (1.0 - options.relax) * y;
        const Matrix y_prev = y;
        y = rho + psd_project(x_relaxed + u - rho);
        u += x_relaxed - y;

        if (iter % 20 == 0 || iter == options.max_iter) {
            const double primal_res = (x - y).norm();
            const double dual_res = mu * (y - y_prev).norm();
            if (iter % 100 == 0) rescale_penalty(primal_res, dual_res, options.tol, mu, u);
            const double scale = std::max(1.0, x.norm());
            if (primal_res > options.tol * scale || dual_res > options.tol * scale) continue;

            // Feasible primal: lift into the PSD-dominance cone.
            Matrix x_feas = x;
            const double deficit = -lambda_min(x_feas - rho);
            if (deficit > 0.0) x_feas += deficit * eye;

            // Feasible dual: subspace-exact correction, then PSD mixing.
            Matrix tau = -mu * u;
            tau = 0.5 * (tau + tau.adjoint());
            tau += eye - subspace.project(tau);
            tau = make_psd_by_mixing(tau);

            const double value = x_feas.trace().real();
            const double dual_value = (rho * tau).trace().real();
            const double gap = std::abs(value - dual_value);
            if (gap <= options.tol * std::max(1.0, std::abs(value))) {
                sol.value = value;
                sol.primal = x_feas;
                sol.dual = tau;
                sol.dual_value = dual_value;
                sol.dual_gap = gap;
                sol.iterations = iter;
                sol.status = SdpStatus::Optimal;
                return sol;
            }
        }
    }

    // Budget exhausted: report the best feasible bounds found.
    Matrix x_feas = x;
    const double deficit = -lambda_min(x_feas - rho);
    if (deficit > 0.0) x_feas += deficit * Matrix::Identity(n, n);
    Matrix tau = -mu * u;
    tau = 0.5 * (tau + tau.adjoint());
    tau += Matrix::Identity(n, n) - subspace.project(tau);
    tau = make_psd_by_mixing(tau);
    sol.value = x_feas.trace().real();
    sol.primal = x_feas;
    sol.dual = tau;
    sol.dual_value = (rho * tau).trace().real();
    sol.dual_gap = std::abs(sol.value - sol.dual_value);
    sol.iterations = options.max_iter;
    sol.status = SdpStatus::MaxIter;
    return sol;
}

SdpSolution solve_cover_dual(const Matrix& rho, const Subspace& subspace,
                             const SdpOptions& options) {
    const int n = static_cast<int>(rho.rows());
    const Matrix eye = Matrix::Identity(n, n);

    // max Tr(rho tau) over tau >= 0 with P_S(tau) = I, split as tau = omega.
    Matrix omega = eye;
    Matrix tau = eye;
    Matrix u = Matrix::Zero(n, n);
    double mu = options.mu;

    auto affine_project = [&](const Matrix& z) -> Matrix {
        return z - subspace.project(z) + eye;
    };

    SdpSolution sol;
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        tau = affine_project(omega - u + rho / mu);
        const Matrix tau_relaxed = options.relax * tau + (1.0 - options.relax) * omega;
        const Matrix omega_prev = omega;
        omega = psd_project(tau_relaxed + u);
        u += tau_relaxed - omega;

        if (iter % 20 == 0 || iter == options.max_iter) {
            const double primal_res = (tau - omega).norm();
            const double dual_res = mu * (omega - omega_prev).norm();
            if (iter % 100 == 0) rescale_penalty(primal_res, dual_res, options.tol, mu, u);
            const double scale = std::max(1.0, tau.norm());
            if (primal_res > options.tol * scale || dual_res > options.tol * scale) continue;

            const Matrix tau_feas = make_psd_by_mixing(0.5 * (tau + tau.adjoint()));
            const double value = (rho * tau_feas).trace().real();

            // Cover-side certificate: the equality-constraint multiplier is
            // X = rho - mu U at a fixed point of the iteration.
            Matrix x_cert = subspace.project(rho - mu * u);
            x_cert = 0.5 * (x_cert + x_cert.adjoint());
            const double deficit = -lambda_min(x_cert - rho);
            if (deficit > 0.0) x_cert += deficit * eye;
            const double cover_value = x_cert.trace().real();

            const double gap = std::abs(cover_value - value);
            if (gap <= options.tol * std::max(1.0, std::abs(value))) {
                sol.value = value;
                sol.primal = tau_feas;
                sol.dual = x_cert;
                sol.dual_value = cover_value;
                sol.dual_gap = gap;
                sol.iterations = iter;
                sol.status = SdpStatus::Optimal;
                return sol;
            }
        }
    }

    const Matrix tau_feas = make_psd_by_mixing(0.5 * (tau + tau.adjoint()));
    sol.value = (rho * tau_feas).trace().real();
    sol.primal = tau_feas;
    Matrix x_cert = subspace.project(rho - mu * u);
    x_cert = 0.5 * (x_cert + x_cert.adjoint());
    const double deficit = -lambda_min(x_cert - rho);
    if (deficit > 0.0) x_cert += deficit * eye;
    sol.dual = x_cert;
    sol.dual_value = x_cert.trace().real();
    sol.dual_gap = std::abs(sol.dual_value - sol.value);
    sol.iterations = options.max_iter;
    sol.status = SdpStatus::MaxIter;
    return sol;
}

SdpSolution solve_weight(const Matrix& rho, const SdpOptions& options) {
    const int n = static_cast<int>(rho.rows());
    const Matrix eye = Matrix::Identity(n, n);
    const double rho_lmin = lambda_min(rho);

    Matrix d = Matrix::Zero(n, n);
    Matrix y1 = Matrix::Zero(n, n);
    Matrix y2 = Matrix::Zero(n, n);
    Matrix u1 = Matrix::Zero(n, n);
    Matrix u2 = Matrix::Zero(n, n);
    double mu = options.mu;

    auto feasible_primal = [&](const Matrix& diag_candidate) {
        Matrix out = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i)
            out(i, i) = std::max(0.0, diag_candidate(i, i).real());
        const double deficit = -lambda_min(rho - out);
        if (deficit > 0.0) {
            // Shrink toward zero; rho - (1-eps) D = (1-eps)(rho - D) + eps rho.
            const double eps = rho_lmin > 1e-12 ? deficit / (deficit + rho_lmin) : 1.0;
            out *= (1.0 - eps);
        }
        return out;
    };
    auto feasible_dual = [&](const Matrix& w_raw) {
        Matrix w = psd_project(0.5 * (w_raw + w_raw.adjoint()));
        for (int i = 0; i < n; ++i) {
            const double wi = w(i, i).real();
            if (wi < 1.0) w(i, i) += 1.0 - wi;
        }
        return w;
    };

    SdpSolution sol;
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        Matrix mid = 0.5 * (y1 - u1 + y2 - u2) + eye / (2.0 * mu);
        d = Matrix(mid.diagonal().asDiagonal());
        for (int i = 0; i < n; ++i) d(i, i) = d(i, i).real();

        const Matrix d1 = options.relax * d + (1.0 - options.relax) * y1;
        const Matrix d2 = options.relax * d + (1.0 - options.relax) * y2;
        const Matrix y1_prev = y1;
        const Matrix y2_prev = y2;
        y1 = psd_project(d1 + u1);
        y2 = rho - psd_project(rho - (d2 + u2));
        u1 += d1 - y1;
        u2 += d2 - y2;

        if (iter % 20 == 0 || iter == options.max_iter) {
            const double primal_res = std::hypot((d - y1).norm(), (d - y2).norm());
            const double dual_res = mu * std::hypot((y1 - y1_prev).norm(), (y2 - y2_prev).norm());
            if (iter % 100 == 0 &&
                (primal_res >= 100.0 * options.tol || dual_res >= 100.0 * options.tol)) {
                if (primal_res > 10.0 * dual_res && mu < 1e6) {
                    mu *= 2.0;
                    u1 *= 0.5;
                    u2 *= 0.5;
                } else if (dual_res > 10.0 * primal_res && mu > 1e-6) {
                    mu *= 0.5;
                    u1 *= 2.0;
                    u2 *= 2.0;
                }
            }
            if (primal_res > options.tol || dual_res > options.tol) continue;

            const Matrix d_feas = feasible_primal(d);
            const Matrix w_feas = feasible_dual(mu * u2);
            const double value = d_feas.trace().real();
            const double dual_value = (rho * w_feas).trace().real();
            const double gap = std::abs(dual_value - value);
            if (gap <= options.tol * std::max(1.0, std::abs(value)) * 2.0) {
                sol.value = value;
                sol.primal = d_feas;
                sol.dual = w_feas;
                sol.dual_value = dual_value;
                sol.dual_gap = gap;
                sol.iterations = iter;
                sol.status = SdpStatus::Optimal;
                return sol;
            }
        }
    }

    const Matrix d_feas = feasible_primal(d);
    const Matrix w_feas = feasible_dual(mu * u2);
    sol.value = d_feas.trace().real();
    sol.primal = d_feas;
    sol.dual = w_feas;
    sol.dual_value = (rho * w_feas).trace().real();
    sol.dual_gap = std::abs(sol.dual_value - sol.value);
    sol.iterations = options.max_iter;
    sol.status = SdpStatus::MaxIter;
    return sol;
}

double dual_certificate(const Matrix& rho, const Subspace& subspace,
                        const SdpSolution& solution) {
    Matrix tau = 0.5 * (solution.dual + solution.dual.adjoint());
    tau += Matrix::Identity(tau.rows(), tau.cols()) - subspace.project(tau);
    tau = make_psd_by_mixing(tau);
    return (rho * tau).trace().real();
}

} // namespace iqcoh::sdp
