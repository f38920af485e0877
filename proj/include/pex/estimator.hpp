#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pex/errors.hpp"
#include "pex/gram.hpp"
#include "pex/pe_tests.hpp"
#include "pex/signal.hpp"
#include "pex/subspace.hpp"

namespace pex {

constexpr double kDefaultEigTol = 1e-6;
constexpr int kDefaultProbeCount = 50;

/// Evidence for or against the non-PE set being a subspace. A witness is a
/// direction whose verdict contradicts the subspace picture implied by W_hat:
/// a passing direction outside W_hat, a failing direction inside it, or a
/// failing direction with a large W_hat component.
struct RegularityReport {
    enum class Flag { ConsistentWithRegular, NonRegularEvidence };
    Flag flag = Flag::ConsistentWithRegular;
    std::vector<Eigen::VectorXd> witnesses;
    int n_dirs = 0;
    unsigned long long seed = 0;
};

inline std::string to_string(RegularityReport::Flag flag) {
    return flag == RegularityReport::Flag::ConsistentWithRegular ? "consistent-with-regular"
                                                                 : "non-regular-evidence";
}

/// One probed direction and its verdict.
struct DirectionProbe {
    enum class Role { KeptCandidate, RejectedCandidate, Complement };
    Eigen::VectorXd alpha;
    PEVerdict verdict;
    Role role = Role::Complement;
};

inline std::string to_string(DirectionProbe::Role role) {
    switch (role) {
        case DirectionProbe::Role::KeptCandidate: return "kept-candidate";
        case DirectionProbe::Role::RejectedCandidate: return "rejected-candidate";
        default: return "complement";
    }
}

struct PEReport {
    Subspace W_hat;
    long q_pe = 0;
    double beta_used = 0.0;
    double T_used = 0.0;
    double t_tail = 0.0;
    Eigen::VectorXd eigenvalues;  // tail-averaged Gram spectrum, descending
    std::vector<DirectionProbe> per_direction;
    RegularityReport regular_evidence;

    PEReport() : W_hat(Subspace::zero(0)) {}
};

/// Per-direction verdicts; failing directions are empirical samples of the
/// non-PE set.
inline std::vector<std::pair<Eigen::VectorXd, PEVerdict>> probe_nonpe_set(
    const GramSweep& sweep, const std::vector<Eigen::VectorXd>& directions, double beta,
    double T, double t_tail) {
    std::vector<std::pair<Eigen::VectorXd, PEVerdict>> out;
    out.reserve(directions.size());
    for (const auto& alpha : directions)
        out.emplace_back(alpha, directional_pe_test(sweep, alpha, T, t_tail, beta));
    return out;
}

inline std::vector<std::pair<Eigen::VectorXd, PEVerdict>> probe_nonpe_set(
    const SampledSignal& w, const std::vector<Eigen::VectorXd>& directions, double beta,
    double T, double t_tail) {
    return probe_nonpe_set(build_gram_sweep(w), directions, beta, T, t_tail);
}

namespace detail {

inline Eigen::VectorXd random_unit_in(const Eigen::MatrixXd& basis, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd coeffs(basis.cols());
    double norm = 0.0;
    do {
        for (long i = 0; i < coeffs.size(); ++i) coeffs(i) = gauss(rng);
        norm = coeffs.norm();
    } while (norm < 1e-12);
    return basis * (coeffs / norm);
}

/// Deterministic probe directions for a basis: the basis vectors themselves
/// plus pairwise sums and differences. These are the combinations whose
/// verdicts a subspace-shaped non-PE set constrains most directly.
inline std::vector<Eigen::VectorXd> structured_directions(const Eigen::MatrixXd& basis) {
    std::vector<Eigen::VectorXd> dirs;
    const long r = basis.cols();
    for (long i = 0; i < r; ++i) dirs.push_back(basis.col(i));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (long i = 0; i < r; ++i)
        for (long j = i + 1; j < r; ++j) {
            dirs.push_back((basis.col(i) + basis.col(j)) * inv_sqrt2);
            dirs.push_back((basis.col(i) - basis.col(j)) * inv_sqrt2);
        }
    return dirs;
}

}  // namespace detail

/// Probe directions inside W_hat (each must pass at (beta, T)), in its
/// orthogonal complement (each must fail), and mixed directions with a W_hat
/// component of norm >= 0.5 (must pass, at a level reduced by the squared
/// component norm). Probes are n_dirs random unit directions per region plus
/// deterministic basis combinations. Any violation becomes a witness.
inline RegularityReport regularity_diagnostic(const GramSweep& sweep, const Subspace& w_hat,
                                              int n_dirs, unsigned long long seed, double beta,
                                              double T, double t_tail) {
    if (n_dirs < 1) throw InputError("regularity_diagnostic: n_dirs must be >= 1");
    if (w_hat.ambient_dim() != sweep.dim())
        throw InputError("regularity_diagnostic: subspace dimension mismatch");

    RegularityReport report;
    report.n_dirs = n_dirs;
    report.seed = seed;
    std::mt19937_64 rng(seed);

    const Subspace comp = complement(w_hat);
    auto tests_pass = [&](const Eigen::VectorXd& alpha, double level) {
        return directional_pe_test(sweep, alpha, T, t_tail, level).pass;
    };

    // Inside W_hat: every direction must pass.
    if (w_hat.dim() > 0) {
        std::vector<Eigen::VectorXd> dirs = detail::structured_directions(w_hat.basis());
        for (int i = 0; i < n_dirs; ++i) dirs.push_back(detail::random_unit_in(w_hat.basis(), rng));
        for (const auto& d : dirs)
            if (!tests_pass(d, beta)) report.witnesses.push_back(d);
    }

    // Orthogonal complement: every direction must fail.
    if (comp.dim() > 0) {
        std::vector<Eigen::VectorXd> dirs = detail::structured_directions(comp.basis());
        for (int i = 0; i < n_dirs; ++i) dirs.push_back(detail::random_unit_in(comp.basis(), rng));
        for (const auto& d : dirs)
            if (tests_pass(d, beta)) report.witnesses.push_back(d);
    }

    // Mixed directions c*u + s*v with c >= 0.5: the PE component alone carries
    // a level of at least c^2 * beta, so test against a quarter of that to
    // leave room for interference from the non-PE component.
    if (w_hat.dim() > 0 && comp.dim() > 0) {
        std::uniform_real_distribution<double> mix(0.5, 0.95);
        for (int i = 0; i < n_dirs; ++i) {
            const double c = mix(rng);
            const double s = std::sqrt(1.0 - c * c);
            Eigen::VectorXd d = c * detail::random_unit_in(w_hat.basis(), rng) +
                                s * detail::random_unit_in(comp.basis(), rng);
            if (!tests_pass(d, 0.25 * c * c * beta)) report.witnesses.push_back(d);
        }
    }

    report.flag = report.witnesses.empty() ? RegularityReport::Flag::ConsistentWithRegular
                                           : RegularityReport::Flag::NonRegularEvidence;
    return report;
}

inline RegularityReport regularity_diagnostic(const SampledSignal& w, const Subspace& w_hat,
                                              int n_dirs, unsigned long long seed, double beta,
                                              double T, double t_tail) {
    return regularity_diagnostic(build_gram_sweep(w), w_hat, n_dirs, seed, beta, T, t_tail);
}

/// Estimate the PE subspace from samples. Eigen-directions of the tail-averaged
/// Gram are only candidates: each is kept iff its directional test passes at
/// (beta, T). Averaging alone cannot tell the pulse-train pathology from a
/// genuinely exciting regressor, so verification is what decides.
inline PEReport estimate_pe_subspace(const GramSweep& sweep, double T, double t_tail,
                                     double beta, double eig_tol = kDefaultEigTol,
                                     int n_dirs = kDefaultProbeCount,
                                     unsigned long long seed = 0) {
    if (!(beta > 0.0)) throw InputError("estimate_pe_subspace: beta must be positive");
    const TimeGrid& grid = sweep.grid();
    const double tail_span = grid.horizon_end() - t_tail;
    if (!(tail_span > grid.dt))
        throw RangeError("estimate_pe_subspace: degenerate horizon after t_tail");

    PEReport report;
    report.beta_used = beta;
    report.t_tail = t_tail;

    Eigen::MatrixXd tail_gram = window_gram(sweep, t_tail, tail_span);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tail_gram);
    const long q = sweep.dim();
    report.eigenvalues = eig.eigenvalues().reverse();

    std::vector<Eigen::VectorXd> kept;
    const double lambda_max = report.eigenvalues(0);
    for (long i = 0; i < q; ++i) {
        const Eigen::VectorXd candidate = eig.eigenvectors().col(q - 1 - i);
        if (!(lambda_max > 0.0) || report.eigenvalues(i) < eig_tol * lambda_max) continue;
        DirectionProbe probe;
        probe.alpha = candidate;
        probe.verdict = directional_pe_test(sweep, candidate, T, t_tail, beta);
        probe.role = probe.verdict.pass ? DirectionProbe::Role::KeptCandidate
                                        : DirectionProbe::Role::RejectedCandidate;
        if (probe.verdict.pass) kept.push_back(candidate);
        report.T_used = probe.verdict.T;
        report.per_direction.push_back(std::move(probe));
    }

    report.W_hat = span_of(kept, q);
    report.q_pe = report.W_hat.dim();

    const Subspace comp = complement(report.W_hat);
    for (long i = 0; i < comp.dim(); ++i) {
        DirectionProbe probe;
        probe.alpha = comp.basis().col(i);
        probe.verdict = directional_pe_test(sweep, probe.alpha, T, t_tail, beta);
        probe.role = DirectionProbe::Role::Complement;
        report.T_used = probe.verdict.T;
        report.per_direction.push_back(std::move(probe));
    }

    report.regular_evidence =
        regularity_diagnostic(sweep, report.W_hat, n_dirs, seed, beta, T, t_tail);
    // A passing complement axis contradicts the estimate even if the random
    // probes missed it.
    for (const auto& probe : report.per_direction)
        if (probe.role == DirectionProbe::Role::Complement && probe.verdict.pass) {
            report.regular_evidence.witnesses.push_back(probe.alpha);
            report.regular_evidence.flag = RegularityReport::Flag::NonRegularEvidence;
        }
    return report;
}

inline PEReport estimate_pe_subspace(const SampledSignal& w, double T, double t_tail,
                                     double beta, double eig_tol = kDefaultEigTol,
                                     int n_dirs = kDefaultProbeCount,
                                     unsigned long long seed = 0) {
    return estimate_pe_subspace(build_gram_sweep(w), T, t_tail, beta, eig_tol, n_dirs, seed);
}

}  // namespace pex
