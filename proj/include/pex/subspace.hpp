#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

#include "pex/errors.hpp"

namespace pex {

constexpr double kDefaultRankTol = 1e-10;

/// A linear subspace of R^q held as an orthonormal basis (q x r, r = dim).
class Subspace {
public:
    explicit Subspace(long ambient_dim)
        : basis_(Eigen::MatrixXd::Zero(ambient_dim, 0)) {
        if (ambient_dim < 0) throw InputError("Subspace: negative ambient dimension");
    }

    /// Wrap a matrix whose columns are already orthonormal.
    static Subspace from_orthonormal(const Eigen::MatrixXd& basis, double tol = 1e-9) {
        Eigen::MatrixXd gram = basis.transpose() * basis;
        if (!gram.isIdentity(tol))
            throw InputError("Subspace: basis columns are not orthonormal");
        Subspace s(basis.rows());
        s.basis_ = basis;
        return s;
    }

    static Subspace zero(long ambient_dim) { return Subspace(ambient_dim); }

    static Subspace full(long ambient_dim) {
        Subspace s(ambient_dim);
        s.basis_ = Eigen::MatrixXd::Identity(ambient_dim, ambient_dim);
        return s;
    }

    long ambient_dim() const { return basis_.rows(); }
    long dim() const { return basis_.cols(); }
    const Eigen::MatrixXd& basis() const { return basis_; }

    /// Orthogonal projector B B^T onto the subspace.
    Eigen::MatrixXd orthogonal_projector() const { return basis_ * basis_.transpose(); }

    bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const {
        if (x.size() != ambient_dim()) throw InputError("Subspace::contains: wrong dimension");
        return (x - basis_ * (basis_.transpose() * x)).norm() <= tol * std::max(1.0, x.norm());
    }

private:
    Eigen::MatrixXd basis_;
};

/// Orthonormal span of the columns of `vectors`; singular directions below
/// rank_tol * sigma_max are dropped. An empty or all-zero input gives the zero
/// subspace.
inline Subspace span_of(const Eigen::MatrixXd& vectors, double rank_tol = kDefaultRankTol) {
    if (!vectors.allFinite()) throw InputError("span_of: vectors must be finite");
    if (vectors.cols() == 0) return Subspace::zero(vectors.rows());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vectors, Eigen::ComputeThinU);
    const auto& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma(0) <= 0.0) return Subspace::zero(vectors.rows());
    long rank = 0;
    while (rank < sigma.size() && sigma(rank) >= rank_tol * sigma(0)) ++rank;
    return Subspace::from_orthonormal(svd.matrixU().leftCols(rank));
}

inline Subspace span_of(const std::vector<Eigen::VectorXd>& vectors, long ambient_dim,
                        double rank_tol = kDefaultRankTol) {
    Eigen::MatrixXd m(ambient_dim, static_cast<long>(vectors.size()));
    for (long i = 0; i < m.cols(); ++i) {
        if (vectors[i].size() != ambient_dim)
            throw InputError("span_of: vector dimension mismatch");
        m.col(i) = vectors[i];
    }
    return span_of(m, rank_tol);
}

/// Orthogonal complement; dim = q - dim(S).
inline Subspace complement(const Subspace& s) {
    const long q = s.ambient_dim();
    const long r = s.dim();
    if (r == 0) return Subspace::full(q);
    if (r == q) return Subspace::zero(q);
    // Complete the basis to an orthogonal q x q factor; the trailing columns
    // span the complement.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(s.basis());
    Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(q, q);
    return Subspace::from_orthonormal(full.rightCols(q - r));
}

inline Subspace subspace_sum(const Subspace& a, const Subspace& b,
                             double rank_tol = kDefaultRankTol) {
    if (a.ambient_dim() != b.ambient_dim())
        throw InputError("subspace_sum: ambient dimensions differ");
    Eigen::MatrixXd joined(a.ambient_dim(), a.dim() + b.dim());
    joined.leftCols(a.dim()) = a.basis();
    joined.rightCols(b.dim()) = b.basis();
    return span_of(joined, rank_tol);
}

/// Intersection via the complement of the sum of complements.
inline Subspace subspace_intersect(const Subspace& a, const Subspace& b,
                                   double rank_tol = kDefaultRankTol) {
    if (a.ambient_dim() != b.ambient_dim())
        throw InputError("subspace_intersect: ambient dimensions differ");
    return complement(subspace_sum(complement(a), complement(b), rank_tol));
}

/// Principal angles between two subspaces, ascending, length min(dim a, dim b).
inline Eigen::VectorXd principal_angles(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw InputError("principal_angles: ambient dimensions differ");
    const long k = std::min(a.dim(), b.dim());
    if (k == 0) return Eigen::VectorXd(0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.basis().transpose() * b.basis());
    Eigen::VectorXd angles(k);
    for (long i = 0; i < k; ++i)
        angles(i) = std::acos(std::clamp(svd.singularValues()(k - 1 - i), -1.0, 1.0));
    return angles;
}

/// Gap between subspaces: the largest principal angle when dimensions match,
/// pi/2 when they differ (an unmatched direction is fully misaligned). Two zero
/// subspaces are at distance 0. Computed from sin(theta) = |(I - P_a) B_b|_2,
/// which keeps full precision for small angles where the cosine route loses
/// half the digits.
inline double subspace_distance(const Subspace& a, const Subspace& b) {
    if (a.dim() != b.dim()) return std::acos(0.0);
    if (a.dim() == 0) return 0.0;
    Eigen::MatrixXd residual = b.basis() - a.basis() * (a.basis().transpose() * b.basis());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
    return std::asin(std::clamp(svd.singularValues()(0), 0.0, 1.0));
}

inline bool subspace_equal(const Subspace& a, const Subspace& b, double tol = 1e-8) {
    return a.ambient_dim() == b.ambient_dim() && a.dim() == b.dim() &&
           subspace_distance(a, b) <= tol;
}

/// Image of the subspace under a linear map: span(L * basis).
inline Subspace map_subspace(const Eigen::MatrixXd& map, const Subspace& s,
                             double rank_tol = kDefaultRankTol) {
    if (map.cols() != s.ambient_dim())
        throw InputError("map_subspace: map columns must equal ambient dimension");
    if (!map.allFinite()) throw InputError("map_subspace: map must be finite");
    if (s.dim() == 0) return Subspace::zero(map.rows());
    return span_of(map * s.basis(), rank_tol);
}

}  // namespace pex
