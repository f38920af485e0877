#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "pex/errors.hpp"
#include "pex/time_grid.hpp"

namespace pex {

/// Declared by the generator, never inferred from samples.
enum class ContinuityTag {
    UniformlyContinuous,
    UniformlyPiecewiseContinuous,
    Unknown,
};

inline std::string to_string(ContinuityTag tag) {
    switch (tag) {
        case ContinuityTag::UniformlyContinuous: return "uniformly-continuous";
        case ContinuityTag::UniformlyPiecewiseContinuous: return "uniformly-piecewise-continuous";
        default: return "unknown";
    }
}

/// Weakest of two tags (Unknown < UniformlyPiecewiseContinuous < UniformlyContinuous).
inline ContinuityTag weakest(ContinuityTag a, ContinuityTag b) {
    auto rank = [](ContinuityTag t) {
        switch (t) {
            case ContinuityTag::UniformlyContinuous: return 2;
            case ContinuityTag::UniformlyPiecewiseContinuous: return 1;
            default: return 0;
        }
    };
    return rank(a) <= rank(b) ? a : b;
}

/// A q-dimensional regressor sampled on a uniform grid; column j = w(t_j).
struct SampledSignal {
    TimeGrid grid;
    Eigen::MatrixXd values;  // q x n
    ContinuityTag continuity_tag = ContinuityTag::Unknown;

    SampledSignal() = default;
    SampledSignal(TimeGrid grid, Eigen::MatrixXd values,
                  ContinuityTag tag = ContinuityTag::Unknown)
        : grid(grid), values(std::move(values)), continuity_tag(tag) {
        if (this->values.cols() != grid.n)
            throw InputError("SampledSignal: column count must equal grid.n");
        if (!this->values.allFinite())
            throw InputError("SampledSignal: values must be finite");
    }

    long dim() const { return values.rows(); }
    long samples() const { return values.cols(); }
    Eigen::VectorXd at(long j) const { return values.col(j); }
};

/// The on/off switching schedule behind the pulse-train construction: the half
/// line is partitioned into consecutive intervals, interval k having length 2^k
/// (k = 1, 2, ...), and the switch is 1 on odd-indexed intervals. Intervals are
/// half-open [a, b) so the switch is right-continuous.
struct GammaSchedule {
    std::vector<double> boundaries;  // boundary[k-1] = sum_{j<=k} 2^j, k = 1..K
    bool one_on_odd = true;

    /// Schedule whose stored boundaries cover [0, horizon].
    static GammaSchedule covering(double horizon) {
        if (!(horizon >= 0.0) || !std::isfinite(horizon))
            throw InputError("GammaSchedule: horizon must be finite and non-negative");
        GammaSchedule s;
        double boundary = 0.0;
        for (int k = 1; boundary <= horizon && k < 62; ++k) {
            boundary += std::ldexp(1.0, k);  // += 2^k, exact in double
            s.boundaries.push_back(boundary);
        }
        return s;
    }
};

/// Value of the switching function at time t (0 or 1). Works for any t >= 0,
/// also beyond the stored boundaries.
inline double gamma_eval(const GammaSchedule& schedule, double t) {
    if (!(t >= 0.0)) throw InputError("gamma_eval: t must be non-negative");
    int k = 1;
    double upper = 2.0;  // end of interval 1 = [0, 2)
    while (t >= upper) {
        ++k;
        upper += std::ldexp(1.0, k);
    }
    const bool odd = (k % 2 == 1);
    return (odd == schedule.one_on_odd) ? 1.0 : 0.0;
}

/// w(t_j) = mixing * s(t_j) with s_i(t) = amps[i] * sin(freqs[i] * t + phases[i]).
inline SampledSignal sample_sinusoid_mix(const std::vector<double>& freqs,
                                         const std::vector<double>& amps,
                                         const std::vector<double>& phases,
                                         const Eigen::MatrixXd& mixing,
                                         const TimeGrid& grid) {
    const long m = static_cast<long>(freqs.size());
    if (static_cast<long>(amps.size()) != m || static_cast<long>(phases.size()) != m)
        throw InputError("sample_sinusoid_mix: freqs/amps/phases must have equal length");
    if (mixing.cols() != m)
        throw InputError("sample_sinusoid_mix: mixing must have one column per sinusoid");
    if (!mixing.allFinite())
        throw InputError("sample_sinusoid_mix: mixing must be finite");

    Eigen::MatrixXd sources(m, grid.n);
    for (long j = 0; j < grid.n; ++j) {
        const double t = grid.time(j);
        for (long i = 0; i < m; ++i)
            sources(i, j) = amps[i] * std::sin(freqs[i] * t + phases[i]);
    }
    return SampledSignal(grid, mixing * sources, ContinuityTag::UniformlyContinuous);
}

/// Constant signal w(t) = c.
inline SampledSignal sample_constant(const Eigen::VectorXd& c, const TimeGrid& grid) {
    if (!c.allFinite()) throw InputError("sample_constant: value must be finite");
    return SampledSignal(grid, c * Eigen::RowVectorXd::Ones(grid.n),
                         ContinuityTag::UniformlyContinuous);
}

/// The non-PE pair w1 = gamma * v, w2 = (1 - gamma) * v. Because gamma is exactly
/// 0 or 1, w1 + w2 == v bit-for-bit and w1 .* w2 == 0 pointwise.
inline std::pair<SampledSignal, SampledSignal> pathological_pair(const SampledSignal& v) {
    if (v.grid.t0 < 0.0)
        throw InputError("pathological_pair: signal must start at t >= 0");
    const GammaSchedule schedule = GammaSchedule::covering(v.grid.horizon_end());

    Eigen::MatrixXd w1(v.dim(), v.samples());
    Eigen::MatrixXd w2(v.dim(), v.samples());
    for (long j = 0; j < v.samples(); ++j) {
        const double g = gamma_eval(schedule, v.grid.time(j));
        if (g == 1.0) {
            w1.col(j) = v.values.col(j);
            w2.col(j).setZero();
        } else {
            w1.col(j).setZero();
            w2.col(j) = v.values.col(j);
        }
    }
    ContinuityTag tag = weakest(v.continuity_tag, ContinuityTag::UniformlyPiecewiseContinuous);
    return {SampledSignal(v.grid, std::move(w1), tag),
            SampledSignal(v.grid, std::move(w2), tag)};
}

/// Columns become L * w(t_j); continuity is preserved.
inline SampledSignal apply_linear_map(const Eigen::MatrixXd& map, const SampledSignal& w) {
    if (map.cols() != w.dim())
        throw InputError("apply_linear_map: map columns must equal signal dimension");
    if (!map.allFinite())
        throw InputError("apply_linear_map: map must be finite");
    return SampledSignal(w.grid, map * w.values, w.continuity_tag);
}

/// Concatenate two signals on the same grid into one of dimension q1 + q2.
inline SampledSignal stack(const SampledSignal& w1, const SampledSignal& w2) {
    if (!(w1.grid == w2.grid))
        throw InputError("stack: signals must share the same grid");
    Eigen::MatrixXd values(w1.dim() + w2.dim(), w1.samples());
    values.topRows(w1.dim()) = w1.values;
    values.bottomRows(w2.dim()) = w2.values;
    return SampledSignal(w1.grid, std::move(values),
                         weakest(w1.continuity_tag, w2.continuity_tag));
}

/// Multiply each column by exp(-rate * t_j); rate = 0 is the identity.
inline SampledSignal envelope_scale(const SampledSignal& w, double rate) {
    if (!(rate >= 0.0)) throw InputError("envelope_scale: rate must be non-negative");
    if (rate == 0.0) return w;
    Eigen::MatrixXd values = w.values;
    for (long j = 0; j < w.samples(); ++j)
        values.col(j) *= std::exp(-rate * w.grid.time(j));
    return SampledSignal(w.grid, std::move(values), w.continuity_tag);
}

}  // namespace pex
