#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "pex/errors.hpp"
#include "pex/signal.hpp"
#include "pex/subspace.hpp"

namespace pex {

/// Gradient adaptation under the static error model: the estimate follows
/// psi_hat' = -Gamma * w(t) * e with e = w(t)^T (psi_hat - psi_true).
struct AdaptiveProblem {
    SampledSignal w;
    Eigen::VectorXd psi_true;
    Eigen::VectorXd psi_hat0;
    Eigen::MatrixXd gamma_gain;

    AdaptiveProblem(SampledSignal w, Eigen::VectorXd psi_true, Eigen::VectorXd psi_hat0,
                    Eigen::MatrixXd gamma_gain)
        : w(std::move(w)),
          psi_true(std::move(psi_true)),
          psi_hat0(std::move(psi_hat0)),
          gamma_gain(std::move(gamma_gain)) {
        const long q = this->w.dim();
        if (this->psi_true.size() != q || this->psi_hat0.size() != q)
            throw InputError("AdaptiveProblem: parameter dimensions must match the regressor");
        if (this->gamma_gain.rows() != q || this->gamma_gain.cols() != q)
            throw InputError("AdaptiveProblem: gain must be q x q");
        if (!this->gamma_gain.isApprox(this->gamma_gain.transpose(), 1e-12))
            throw InputError("AdaptiveProblem: gain must be symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(this->gamma_gain,
                                                           Eigen::EigenvaluesOnly);
        if (!(eig.eigenvalues()(0) > 0.0))
            throw InputError("AdaptiveProblem: gain must be positive definite");
    }

    /// Variant with the definiteness check relaxed (e.g. a frozen estimator,
    /// Gamma = 0). Shape and symmetry are still enforced.
    static AdaptiveProblem unchecked_gain(SampledSignal w, Eigen::VectorXd psi_true,
                                          Eigen::VectorXd psi_hat0, Eigen::MatrixXd gamma_gain) {
        const long q = w.dim();
        if (gamma_gain.rows() != q || gamma_gain.cols() != q)
            throw InputError("AdaptiveProblem: gain must be q x q");
        if (!gamma_gain.isApprox(gamma_gain.transpose(), 1e-12) && !gamma_gain.isZero(0.0))
            throw InputError("AdaptiveProblem: gain must be symmetric");
        AdaptiveProblem p(std::move(w), std::move(psi_true), std::move(psi_hat0),
                          Eigen::MatrixXd::Identity(q, q));
        p.gamma_gain = std::move(gamma_gain);
        return p;
    }
};

enum class Integrator { Rk4, Euler };

inline std::string to_string(Integrator i) { return i == Integrator::Rk4 ? "rk4" : "euler"; }

inline Integrator integrator_from_string(const std::string& name) {
    if (name == "rk4") return Integrator::Rk4;
    if (name == "euler") return Integrator::Euler;
    throw InputError("unknown integrator '" + name + "' (expected rk4 or euler)");
}

struct RunResult {
    Eigen::VectorXd times;       // integration grid, first entry = w.grid.t0
    Eigen::MatrixXd trajectory;  // q x (steps+1), column k = psi_hat(times[k])
    Eigen::VectorXd error_trace; // e(times[k])
    Eigen::VectorXd psi_hat_final;
    std::string integrator;
    double dt = 0.0;
};

namespace detail {

/// Linear interpolation of the regressor between its grid samples.
inline Eigen::VectorXd sample_interpolated(const SampledSignal& w, double t) {
    const TimeGrid& g = w.grid;
    double pos = (t - g.t0) / g.dt;
    if (pos <= 0.0) return w.values.col(0);
    if (pos >= static_cast<double>(g.n - 1)) return w.values.col(g.n - 1);
    const long j = static_cast<long>(pos);
    const double frac = pos - static_cast<double>(j);
    return (1.0 - frac) * w.values.col(j) + frac * w.values.col(j + 1);
}

}  // namespace detail

/// Integrate the gradient law over [t0, t_end]. The regressor is linearly
/// interpolated inside integration steps, so dt need not match the sampling
/// grid. Throws DivergenceError at the first non-finite state.
inline RunResult simulate_gradient_law(const AdaptiveProblem& problem, double dt, double t_end,
                                       Integrator method = Integrator::Rk4) {
    if (!(dt > 0.0)) throw InputError("simulate_gradient_law: dt must be positive");
    const TimeGrid& grid = problem.w.grid;
    if (t_end > grid.horizon_end() + 0.5 * grid.dt)
        throw RangeError("simulate_gradient_law: t_end exceeds the sampled horizon");
    const long steps = std::lround((t_end - grid.t0) / dt);
    if (steps < 1) throw RangeError("simulate_gradient_law: no integration steps in range");

    const long q = problem.w.dim();
    auto rhs = [&](double t, const Eigen::VectorXd& psi_hat) -> Eigen::VectorXd {
        const Eigen::VectorXd w_t = detail::sample_interpolated(problem.w, t);
        const double err = w_t.dot(psi_hat - problem.psi_true);
        return -problem.gamma_gain * (w_t * err);
    };

    RunResult result;
    result.integrator = to_string(method);
    result.dt = dt;
    result.times.resize(steps + 1);
    result.trajectory.resize(q, steps + 1);
    result.error_trace.resize(steps + 1);

    Eigen::VectorXd state = problem.psi_hat0;
    for (long k = 0; k <= steps; ++k) {
        const double t = grid.t0 + static_cast<double>(k) * dt;
        result.times(k) = t;
        result.trajectory.col(k) = state;
        result.error_trace(k) =
            detail::sample_interpolated(problem.w, t).dot(state - problem.psi_true);
        if (k == steps) break;

        if (method == Integrator::Euler) {
            state += dt * rhs(t, state);
        } else {
            const Eigen::VectorXd k1 = rhs(t, state);
            const Eigen::VectorXd k2 = rhs(t + 0.5 * dt, state + 0.5 * dt * k1);
            const Eigen::VectorXd k3 = rhs(t + 0.5 * dt, state + 0.5 * dt * k2);
            const Eigen::VectorXd k4 = rhs(t + dt, state + dt * k3);
            state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!state.allFinite())
            throw DivergenceError("simulate_gradient_law: non-finite state at step " +
                                      std::to_string(k + 1) + " (t = " +
                                      std::to_string(t + dt) + ")",
                                  k + 1, t + dt);
    }
    result.psi_hat_final = state;
    return result;
}

/// True iff max |e(t)| over the last tail_fraction of the run is <= tol.
inline bool check_error_regulation(const RunResult& result, double tail_fraction, double tol) {
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw InputError("check_error_regulation: tail_fraction must lie in (0, 1)");
    const long n = result.error_trace.size();
    const long start = static_cast<long>(std::floor(static_cast<double>(n) *
                                                    (1.0 - tail_fraction)));
    double worst = 0.0;
    for (long k = std::min(start, n - 1); k < n; ++k)
        worst = std::max(worst, std::abs(result.error_trace(k)));
    return worst <= tol;
}

/// Distance from the final estimate to the affine set psi_true + W^perp,
/// measured as the orthogonal projection of the estimation error onto W.
inline std::pair<bool, double> check_affine_set_membership(const Eigen::VectorXd& psi_hat_final,
                                                           const Eigen::VectorXd& psi_true,
                                                           const Subspace& w_space, double tol) {
    if (psi_hat_final.size() != psi_true.size() ||
        psi_true.size() != w_space.ambient_dim())
        throw InputError("check_affine_set_membership: dimension mismatch");
    const double distance =
        (w_space.basis().transpose() * (psi_hat_final - psi_true)).norm();
    return {distance <= tol, distance};
}

/// Closest point of psi_true + W^perp to the nominal value psi_o:
/// psi_o + P_W (psi_true - psi_o).
inline Eigen::VectorXd prior_knowledge_target(const Eigen::VectorXd& psi_o,
                                              const Eigen::VectorXd& psi_true,
                                              const Subspace& w_space) {
    if (psi_o.size() != psi_true.size() || psi_true.size() != w_space.ambient_dim())
        throw InputError("prior_knowledge_target: dimension mismatch");
    return psi_o + w_space.basis() * (w_space.basis().transpose() * (psi_true - psi_o));
}

struct RetentionReport {
    RunResult run;
    Eigen::VectorXd target;
    double gap = 0.0;
    double tol = 0.0;
    bool ok = false;
};

/// Run the gradient law from psi_hat0 = psi_o under an isotropic gain and
/// compare the final estimate against the closest-point target. The isotropic
/// gain is required: it keeps the unexcited error component orthogonally
/// invariant, which is what pins the limit to the stated target.
inline RetentionReport retention_experiment(const AdaptiveProblem& problem,
                                            const Subspace& w_space, double dt, double t_end,
                                            double tol, Integrator method = Integrator::Rk4) {
    const long q = problem.w.dim();
    const double g = problem.gamma_gain(0, 0);
    if (!problem.gamma_gain.isApprox(g * Eigen::MatrixXd::Identity(q, q), 1e-12))
        throw InputError("retention_experiment: gain must be a scalar multiple of identity");

    RetentionReport report;
    report.run = simulate_gradient_law(problem, dt, t_end, method);
    report.target = prior_knowledge_target(problem.psi_hat0, problem.psi_true, w_space);
    report.gap = (report.run.psi_hat_final - report.target).norm();
    report.tol = tol;
    report.ok = report.gap <= tol;
    return report;
}

}  // namespace pex
