#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pex/errors.hpp"
#include "pex/gram.hpp"
#include "pex/pe_tests.hpp"

namespace pex {

/// The set of window starts at which the regressor is excited along alpha at
/// level beta over windows of length T.
struct ExcitationTimes {
    Eigen::VectorXd alpha;
    double beta = 0.0;
    double T = 0.0;                  // rounded
    std::vector<double> times;       // qualifying starts, ascending
    double max_gap = 0.0;            // largest gap between consecutive starts
    double last = std::numeric_limits<double>::quiet_NaN();
    double first_possible = 0.0;     // start-range metadata for exports/classification
    double last_possible = 0.0;
    double step = 0.0;

    bool empty() const { return times.empty(); }
};

inline ExcitationTimes excitation_times(const GramSweep& sweep, const Eigen::VectorXd& alpha,
                                        double beta, double T) {
    if (alpha.size() != sweep.dim())
        throw InputError("excitation_times: direction has wrong dimension");
    if (alpha.norm() == 0.0)
        throw InputError("excitation_times: direction must be non-zero");
    const TimeGrid& grid = sweep.grid();
    const long span = std::lround(T / grid.dt);
    if (span < 1) throw RangeError("excitation_times: window spans no samples");
    if (span > grid.n - 1) throw RangeError("excitation_times: window exceeds the horizon");

    ExcitationTimes set;
    set.alpha = alpha;
    set.beta = beta;
    set.T = static_cast<double>(span) * grid.dt;
    set.first_possible = grid.t0;
    set.last_possible = grid.time(grid.n - 1 - span);
    set.step = grid.dt;

    const Eigen::VectorXd energy = sweep.quadratic_prefix(alpha.normalized());
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (long j = 0; j <= grid.n - 1 - span; ++j) {
        const double level = (energy(j + span) - energy(j)) / set.T;
        if (level >= beta) {
            const double t = grid.time(j);
            if (!set.times.empty()) set.max_gap = std::max(set.max_gap, t - prev);
            set.times.push_back(t);
            prev = t;
        }
    }
    if (!set.times.empty()) set.last = set.times.back();
    return set;
}

enum class RecurrenceLabel { Persistent, Terminating, Irregular };

inline std::string to_string(RecurrenceLabel label) {
    switch (label) {
        case RecurrenceLabel::Persistent: return "persistent";
        case RecurrenceLabel::Terminating: return "terminating";
        default: return "irregular";
    }
}

/// Gap statistics for one probed (beta, T) pair. The first/last-third split
/// exposes the growing-gap signature of the pulse-train pathology.
struct GapEvidence {
    double beta = 0.0;
    double T = 0.0;
    long count = 0;
    double max_gap = 0.0;
    double last = std::numeric_limits<double>::quiet_NaN();
    double first_third_max_gap = 0.0;
    double last_third_max_gap = 0.0;
};

struct RecurrenceClass {
    RecurrenceLabel label = RecurrenceLabel::Irregular;
    std::vector<GapEvidence> evidence;   // one entry per probed (beta, T)
    double density_window = 0.0;         // T_d used for the relative-density check
    double witness_beta = std::numeric_limits<double>::quiet_NaN();
    double witness_T = std::numeric_limits<double>::quiet_NaN();
};

inline GapEvidence gap_evidence(const ExcitationTimes& set) {
    GapEvidence ev;
    ev.beta = set.beta;
    ev.T = set.T;
    ev.count = static_cast<long>(set.times.size());
    ev.max_gap = set.max_gap;
    ev.last = set.last;
    const long n = ev.count;
    if (n >= 2) {
        const long third = std::max<long>(n / 3, 2);
        for (long i = 1; i < third; ++i)
            ev.first_third_max_gap =
                std::max(ev.first_third_max_gap, set.times[i] - set.times[i - 1]);
        for (long i = n - third + 1; i < n; ++i)
            ev.last_third_max_gap =
                std::max(ev.last_third_max_gap, set.times[i] - set.times[i - 1]);
    }
    return ev;
}

/// Probe a grid of (beta, T) pairs and classify the excitation pattern along
/// alpha: persistent when some pair recurs with bounded gaps up to the end of
/// the horizon, terminating when every pair stops exciting early, irregular
/// otherwise (recurring excitation with unbounded-looking gaps).
inline RecurrenceClass classify_recurrence(const GramSweep& sweep, const Eigen::VectorXd& alpha,
                                           const std::vector<double>& beta_grid,
                                           const std::vector<double>& T_grid,
                                           double horizon_split) {
    if (beta_grid.empty() || T_grid.empty())
        throw InputError("classify_recurrence: probing grids must be non-empty");
    if (!(horizon_split > 0.0 && horizon_split < 1.0))
        throw InputError("classify_recurrence: horizon_split must lie in (0, 1)");

    const TimeGrid& grid = sweep.grid();
    const double span = grid.span();
    const double density_window = horizon_split * span;
    const double terminating_cutoff = grid.t0 + horizon_split * span;

    RecurrenceClass result;
    result.density_window = density_window;
    bool persistent = false;
    bool all_terminate = true;
    for (double T : T_grid) {
        for (double beta : beta_grid) {
            ExcitationTimes set = excitation_times(sweep, alpha, beta, T);
            result.evidence.push_back(gap_evidence(set));
            if (!set.empty()) {
                if (set.last >= terminating_cutoff) all_terminate = false;
                const bool dense = set.max_gap <= density_window &&
                                   set.last >= set.last_possible - density_window;
                if (dense && !persistent) {
                    persistent = true;
                    result.witness_beta = beta;
                    result.witness_T = set.T;
                }
            }
        }
    }
    result.label = persistent    ? RecurrenceLabel::Persistent
                   : all_terminate ? RecurrenceLabel::Terminating
                                   : RecurrenceLabel::Irregular;
    return result;
}

/// Logarithmic beta grid, 1e-4 .. 1 relative to the mean directional power.
inline std::vector<double> default_beta_grid(const GramSweep& sweep, const Eigen::VectorXd& alpha,
                                             int count = 5) {
    const double power = sweep.mean_directional_power(alpha);
    std::vector<double> grid;
    if (!(power > 0.0)) return {1e-4};  // dead signal: any positive level
    for (int i = 0; i < count; ++i) {
        const double expo = -4.0 + 4.0 * static_cast<double>(i) / (count - 1);
        grid.push_back(power * std::pow(10.0, expo));
    }
    return grid;
}

/// Logarithmic window grid spanning [10*dt, horizon/8].
inline std::vector<double> default_T_grid(const GramSweep& sweep, int count = 5) {
    const double lo = 10.0 * sweep.grid().dt;
    const double hi = sweep.grid().span() / 8.0;
    std::vector<double> grid;
    if (hi <= lo) return {lo};
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        grid.push_back(lo * std::pow(hi / lo, f));
    }
    return grid;
}

}  // namespace pex
