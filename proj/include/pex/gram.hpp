#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "pex/errors.hpp"
#include "pex/signal.hpp"
#include "pex/time_grid.hpp"

namespace pex {

/// Grid-aligned window [t0 + first*dt, t0 + (first+span)*dt].
struct WindowIndex {
    long first = 0;
    long span = 0;  // number of steps, >= 1
};

/// Prefix integrals S_j = integral of w w^T from t0 to t_j (trapezoidal rule),
/// stored flattened so any window Gram is two column reads. Immutable after
/// construction.
class GramSweep {
public:
    GramSweep(TimeGrid grid, long dim, Eigen::MatrixXd prefix)
        : grid_(grid), dim_(dim), prefix_(std::move(prefix)) {}

    const TimeGrid& grid() const { return grid_; }
    long dim() const { return dim_; }

    /// S_j as a q x q matrix.
    Eigen::MatrixXd prefix_at(long j) const {
        return Eigen::Map<const Eigen::MatrixXd>(prefix_.col(j).data(), dim_, dim_);
    }

    /// p_j = alpha^T S_j alpha for every j; one pass over the flattened prefix.
    Eigen::VectorXd quadratic_prefix(const Eigen::VectorXd& alpha) const {
        Eigen::MatrixXd outer = alpha * alpha.transpose();
        Eigen::Map<const Eigen::VectorXd> coeff(outer.data(), dim_ * dim_);
        return prefix_.transpose() * coeff;
    }

    /// B^T S_j B for every j (r x r blocks, flattened per column).
    Eigen::MatrixXd projected_prefix(const Eigen::MatrixXd& basis) const {
        const long r = basis.cols();
        Eigen::MatrixXd out(r * r, grid_.n);
        for (long j = 0; j < grid_.n; ++j) {
            Eigen::Map<const Eigen::MatrixXd> s(prefix_.col(j).data(), dim_, dim_);
            Eigen::Map<Eigen::MatrixXd>(out.col(j).data(), r, r) =
                basis.transpose() * s * basis;
        }
        return out;
    }

    /// Round (t, T) to grid steps; throws RangeError if the window leaves the
    /// grid or spans no samples.
    WindowIndex resolve_window(double t, double T) const {
        WindowIndex w;
        w.first = std::lround((t - grid_.t0) / grid_.dt);
        w.span = std::lround(T / grid_.dt);
        if (w.span < 1)
            throw RangeError("window of length " + std::to_string(T) + " spans no samples");
        if (w.first < 0 || w.first + w.span > grid_.n - 1)
            throw RangeError("window [" + std::to_string(t) + ", " + std::to_string(t + T) +
                             "] exits the sampled horizon");
        return w;
    }

    /// Average Gram over the window: (S(t+T) - S(t)) / T_rounded, symmetrized.
    Eigen::MatrixXd window_average(const WindowIndex& w) const {
        const double length = static_cast<double>(w.span) * grid_.dt;
        Eigen::MatrixXd m =
            Eigen::Map<const Eigen::MatrixXd>(prefix_.col(w.first + w.span).data(), dim_, dim_) -
            Eigen::Map<const Eigen::MatrixXd>(prefix_.col(w.first).data(), dim_, dim_);
        m /= length;
        return 0.5 * (m + m.transpose());
    }

    /// Mean power of alpha^T w over the whole horizon, normalized by |alpha|^2.
    double mean_directional_power(const Eigen::VectorXd& alpha) const {
        Eigen::VectorXd unit = alpha.normalized();
        Eigen::VectorXd p = quadratic_prefix(unit);
        return (p(grid_.n - 1) - p(0)) / grid_.span();
    }

private:
    TimeGrid grid_;
    long dim_;
    Eigen::MatrixXd prefix_;  // (q*q) x n
};

inline GramSweep build_gram_sweep(const SampledSignal& w) {
    const long q = w.dim();
    const long n = w.samples();
    const double half_dt = 0.5 * w.grid.dt;

    Eigen::MatrixXd prefix(q * q, n);
    Eigen::MatrixXd running = Eigen::MatrixXd::Zero(q, q);
    Eigen::MatrixXd prev_outer = w.values.col(0) * w.values.col(0).transpose();
    Eigen::Map<Eigen::MatrixXd>(prefix.col(0).data(), q, q) = running;
    for (long j = 1; j < n; ++j) {
        Eigen::MatrixXd outer = w.values.col(j) * w.values.col(j).transpose();
        running += half_dt * (prev_outer + outer);
        Eigen::Map<Eigen::MatrixXd>(prefix.col(j).data(), q, q) = running;
        prev_outer.swap(outer);
    }
    return GramSweep(w.grid, q, std::move(prefix));
}

/// (1/T) * integral of w w^T over [t, t+T], with t and T rounded to the grid.
inline Eigen::MatrixXd window_gram(const GramSweep& sweep, double t, double T) {
    return sweep.window_average(sweep.resolve_window(t, T));
}

}  // namespace pex
