#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pex/adaptive.hpp"
#include "pex/decompose.hpp"
#include "pex/errors.hpp"
#include "pex/estimator.hpp"
#include "pex/pe_tests.hpp"
#include "pex/recurrence.hpp"
#include "pex/subspace.hpp"

namespace pex {

using json = nlohmann::json;

inline json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (long i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

inline Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<long>(i)) = arr[i].get<double>();
    return v;
}

/// Verdict schema: {alpha, T, t_tail, beta, beta_star, pass, argmin_window};
/// alpha is null for the matrix test.
inline json verdict_to_json(const PEVerdict& v,
                            const std::optional<Eigen::VectorXd>& alpha = std::nullopt) {
    json j{{"T", v.T},
           {"t_tail", v.t_tail},
           {"beta", v.beta},
           {"beta_star", v.beta_star},
           {"pass", v.pass},
           {"argmin_window", v.argmin_window}};
    j["alpha"] = alpha ? vector_to_json(*alpha) : json();
    return j;
}

/// Subspace schema: {ambient_dim, basis} with the basis flattened row-major.
inline json subspace_to_json(const Subspace& s) {
    json basis = json::array();
    for (long i = 0; i < s.ambient_dim(); ++i)
        for (long j = 0; j < s.dim(); ++j) basis.push_back(s.basis()(i, j));
    return json{{"ambient_dim", s.ambient_dim()}, {"basis", basis}};
}

inline Subspace subspace_from_json(const json& j) {
    const long q = j.at("ambient_dim").get<long>();
    if (q <= 0) throw InputError("subspace JSON: ambient_dim must be positive");
    const auto& flat = j.at("basis");
    if (flat.size() % static_cast<std::size_t>(q) != 0)
        throw InputError("subspace JSON: basis length is not a multiple of ambient_dim");
    const long r = static_cast<long>(flat.size()) / q;
    Eigen::MatrixXd basis(q, r);
    std::size_t k = 0;
    for (long i = 0; i < q; ++i)
        for (long j2 = 0; j2 < r; ++j2) basis(i, j2) = flat[k++].get<double>();
    // Accept any full-rank spanning set; store the orthonormalized span.
    Subspace s = span_of(basis);
    if (s.dim() != r) throw InputError("subspace JSON: basis columns are linearly dependent");
    return s;
}

inline json regularity_to_json(const RegularityReport& r) {
    json witnesses = json::array();
    for (const auto& w : r.witnesses) witnesses.push_back(vector_to_json(w));
    return json{{"flag", to_string(r.flag)},
                {"witnesses", witnesses},
                {"n_dirs", r.n_dirs},
                {"seed", r.seed}};
}

inline json report_to_json(const PEReport& report) {
    json dirs = json::array();
    for (const auto& probe : report.per_direction) {
        json entry = verdict_to_json(probe.verdict, probe.alpha);
        entry["role"] = to_string(probe.role);
        dirs.push_back(entry);
    }
    return json{{"W_hat", subspace_to_json(report.W_hat)},
                {"q_pe", report.q_pe},
                {"beta_used", report.beta_used},
                {"T_used", report.T_used},
                {"t_tail", report.t_tail},
                {"eigenvalues", vector_to_json(report.eigenvalues)},
                {"per_direction", dirs},
                {"regular_evidence", regularity_to_json(report.regular_evidence)}};
}

inline json recurrence_to_json(const RecurrenceClass& r) {
    json evidence = json::array();
    for (const auto& ev : r.evidence) {
        evidence.push_back(json{{"beta", ev.beta},
                                {"T", ev.T},
                                {"count", ev.count},
                                {"max_gap", ev.max_gap},
                                {"last", std::isnan(ev.last) ? json() : json(ev.last)},
                                {"first_third_max_gap", ev.first_third_max_gap},
                                {"last_third_max_gap", ev.last_third_max_gap}});
    }
    json j{{"label", to_string(r.label)},
           {"density_window", r.density_window},
           {"evidence", evidence}};
    if (!std::isnan(r.witness_beta)) {
        j["witness_beta"] = r.witness_beta;
        j["witness_T"] = r.witness_T;
    }
    return j;
}

inline json decomposition_to_json(const PEDecomposition& d) {
    return json{{"W", subspace_to_json(d.W)},
                {"V", subspace_to_json(d.V)},
                {"q_pe", d.W.dim()},
                {"reconstruction_residual", d.reconstruction_residual}};
}

}  // namespace pex
