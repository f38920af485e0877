#pragma once

#include <cmath>
#include <string>

#include "pex/errors.hpp"

namespace pex {

/// Uniform sampling grid t_j = t0 + j*dt, j = 0..n-1.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    long n = 0;

    TimeGrid() = default;
    TimeGrid(double t0, double dt, long n) : t0(t0), dt(dt), n(n) {
        if (!(dt > 0.0)) throw InputError("TimeGrid: dt must be positive");
        if (n < 2) throw InputError("TimeGrid: need at least two samples");
        if (!std::isfinite(t0) || !std::isfinite(dt))
            throw InputError("TimeGrid: non-finite parameters");
    }

    double time(long j) const { return t0 + static_cast<double>(j) * dt; }
    double horizon_end() const { return time(n - 1); }
    double span() const { return static_cast<double>(n - 1) * dt; }

    /// Nearest grid index for a time value; throws RangeError outside the grid.
    long index_of(double t) const {
        long j = std::lround((t - t0) / dt);
        if (j < 0 || j >= n)
            throw RangeError("time " + std::to_string(t) + " outside grid [" +
                             std::to_string(t0) + ", " + std::to_string(horizon_end()) + "]");
        return j;
    }

    /// Grid covering [t0, t0+span] with the given step (span rounded to whole steps).
    static TimeGrid over(double t0, double span, double dt) {
        return TimeGrid(t0, dt, std::lround(span / dt) + 1);
    }

    bool operator==(const TimeGrid& other) const {
        return t0 == other.t0 && dt == other.dt && n == other.n;
    }
};

}  // namespace pex
