#pragma once

#include <Eigen/Dense>
#include <algorithm>

#include "pex/projection.hpp"
#include "pex/signal.hpp"
#include "pex/subspace.hpp"

namespace pex {

/// Split of a regressor w = U_W * w_pe + U_V * w_perp against a complementary
/// pair of subspaces. The split itself is pure linear algebra; whether w_pe is
/// actually PE and w_perp non-PE is a claim to be checked with the excitation
/// tests.
struct PEDecomposition {
    Subspace W = Subspace::zero(0);
    Subspace V = Subspace::zero(0);
    Eigen::MatrixXd U_W;  // insertion maps used for the reconstruction
    Eigen::MatrixXd U_V;
    SampledSignal w_pe;    // dim = dim(W)
    SampledSignal w_perp;  // dim = q - dim(W)
    double reconstruction_residual = 0.0;  // max column error relative to max column norm
};

inline PEDecomposition pe_decompose(const SampledSignal& w, const Subspace& w_space,
                                    const Subspace& v_space) {
    if (w_space.ambient_dim() != w.dim())
        throw InputError("pe_decompose: subspace ambient dimension must match the signal");
    auto [pair_w, pair_v] = projection_pair(w_space, v_space);

    PEDecomposition out;
    out.W = w_space;
    out.V = v_space;
    out.U_W = pair_w.U;
    out.U_V = pair_v.U;
    out.w_pe = SampledSignal(w.grid, pair_w.D * w.values, w.continuity_tag);
    out.w_perp = SampledSignal(w.grid, pair_v.D * w.values, w.continuity_tag);

    Eigen::MatrixXd recon = out.U_W * out.w_pe.values + out.U_V * out.w_perp.values;
    double worst = 0.0;
    double scale = 0.0;
    for (long j = 0; j < w.samples(); ++j) {
        worst = std::max(worst, (recon.col(j) - w.values.col(j)).norm());
        scale = std::max(scale, w.values.col(j).norm());
    }
    out.reconstruction_residual = scale > 0.0 ? worst / scale : worst;
    return out;
}

}  // namespace pex
