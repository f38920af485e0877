#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <utility>

#include "pex/errors.hpp"
#include "pex/subspace.hpp"

namespace pex {

/// Insertion map U (q x r, full column rank) together with a natural
/// projection D (r x q, full row rank) satisfying D * U = I_r. The product
/// U * D is the oblique projector onto image(U) along kernel(D).
struct ProjectionPair {
    Eigen::MatrixXd U;
    Eigen::MatrixXd D;
};

struct ObliqueProjector {
    Eigen::MatrixXd P;                    // q x q, idempotent
    Subspace onto = Subspace::zero(0);    // image(P)
    Subspace along = Subspace::zero(0);   // kernel(P)
};

/// Build the coordinate change for a complementary pair W (+) V = R^q:
/// stacking [D_V; D_W] = [U_W U_V]^{-1} gives D_V U_W = I, D_V U_V = 0,
/// D_W U_V = I, D_W U_W = 0. Returns (pair_W, pair_V) = ((U_W, D_V), (U_V, D_W)).
/// Throws GeometryError when the pair is not complementary, reporting the
/// condition number of [U_W U_V].
inline std::pair<ProjectionPair, ProjectionPair> projection_pair(
    const Subspace& w_space, const Subspace& v_space, double max_condition = 1e8) {
    const long q = w_space.ambient_dim();
    if (v_space.ambient_dim() != q)
        throw InputError("projection_pair: ambient dimensions differ");
    const long rw = w_space.dim();
    const long rv = v_space.dim();
    if (rw + rv != q)
        throw GeometryError("projection_pair: dim W + dim V != ambient dimension",
                            std::numeric_limits<double>::infinity());

    Eigen::MatrixXd joined(q, q);
    joined.leftCols(rw) = w_space.basis();
    joined.rightCols(rv) = v_space.basis();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(joined);
    const double sigma_min = svd.singularValues()(q - 1);
    const double condition = sigma_min > 0.0
                                 ? svd.singularValues()(0) / sigma_min
                                 : std::numeric_limits<double>::infinity();
    if (!(condition <= max_condition))
        throw GeometryError("projection_pair: subspaces are not complementary "
                            "(condition number " + std::to_string(condition) + ")",
                            condition);

    Eigen::MatrixXd inverse = joined.partialPivLu().solve(Eigen::MatrixXd::Identity(q, q));
    ProjectionPair pair_w{w_space.basis(), inverse.topRows(rw)};
    ProjectionPair pair_v{v_space.basis(), inverse.bottomRows(rv)};
    return {pair_w, pair_v};
}

/// Kernel of a full-row-rank map (r x q) as a subspace of R^q.
inline Subspace kernel_of(const Eigen::MatrixXd& map, double rank_tol = kDefaultRankTol) {
    const long q = map.cols();
    if (map.rows() == 0) return Subspace::full(q);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(map, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    long rank = 0;
    while (rank < sigma.size() && sigma(rank) >= rank_tol * sigma(0)) ++rank;
    if (rank == q) return Subspace::zero(q);
    return Subspace::from_orthonormal(svd.matrixV().rightCols(q - rank));
}

/// P = U * D, the projection onto image(U) along kernel(D).
inline ObliqueProjector oblique_projector(const ProjectionPair& pair) {
    ObliqueProjector proj;
    proj.P = pair.U * pair.D;
    proj.onto = span_of(pair.U);
    proj.along = kernel_of(pair.D);
    return proj;
}

}  // namespace pex
