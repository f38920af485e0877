#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pex/adaptive.hpp"
#include "pex/gram.hpp"
#include "pex/pe_tests.hpp"
#include "pex/signal.hpp"

using namespace pex;

namespace {

AdaptiveProblem scalar_constant_problem(double t_end, double psi0) {
    TimeGrid grid = TimeGrid::over(0.0, t_end, 1e-3);
    SampledSignal w = sample_constant(Eigen::VectorXd::Ones(1), grid);
    Eigen::VectorXd psi_true(1), psi_hat0(1);
    psi_true << 1.0;
    psi_hat0 << psi0;
    return AdaptiveProblem(w, psi_true, psi_hat0, Eigen::MatrixXd::Identity(1, 1));
}

AdaptiveProblem half_excited_problem() {
    // w = (sin t, 0): only the first component is ever updated.
    TimeGrid grid = TimeGrid::over(0.0, 200.0, 1e-3);
    SampledSignal sin_part = sample_sinusoid_mix({1.0}, {1.0}, {0.0},
                                                 Eigen::MatrixXd::Identity(1, 1), grid);
    SampledSignal w = stack(sin_part, sample_constant(Eigen::VectorXd::Zero(1), grid));
    Eigen::VectorXd psi_true(2), psi_hat0(2);
    psi_true << 1.0, 2.0;
    psi_hat0 << 0.0, 0.0;
    return AdaptiveProblem(w, psi_true, psi_hat0, Eigen::MatrixXd::Identity(2, 2));
}

}  // namespace

TEST_CASE("starting at the true parameters is an equilibrium") {
    TimeGrid grid = TimeGrid::over(0.0, 10.0, 1e-3);
    SampledSignal w = sample_sinusoid_mix({1.0, 2.0}, {1.0, 0.7}, {0.0, 0.4},
                                          Eigen::MatrixXd::Identity(2, 2), grid);
    Eigen::VectorXd psi(2);
    psi << -1.0, 2.5;
    AdaptiveProblem problem(w, psi, psi, Eigen::MatrixXd::Identity(2, 2));
    RunResult result = simulate_gradient_law(problem, 1e-3, 10.0);
    CHECK((result.psi_hat_final - psi).norm() < 1e-14);
    CHECK(result.error_trace.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(result.trajectory.col(0) == psi);
    CHECK(check_error_regulation(result, 0.5, 1e-12));
}

TEST_CASE("scalar constant regressor matches the closed-form exponential") {
    AdaptiveProblem problem = scalar_constant_problem(10.0, 0.0);
    RunResult result = simulate_gradient_law(problem, 1e-3, 10.0, Integrator::Rk4);
    // psi_tilde(t) = psi_tilde(0) exp(-t) for w = 1, Gamma = 1.
    for (long k = 0; k < result.times.size(); k += 997) {
        const double expected = 1.0 - std::exp(-result.times(k));
        CHECK(result.trajectory(0, k) == Catch::Approx(expected).margin(1e-6));
    }
    CHECK(result.psi_hat_final(0) ==
          Catch::Approx(1.0 - std::exp(-10.0)).margin(1e-6));
}

TEST_CASE("euler also converges on the scalar problem, just less accurately") {
    AdaptiveProblem problem = scalar_constant_problem(10.0, 0.0);
    RunResult result = simulate_gradient_law(problem, 1e-3, 10.0, Integrator::Euler);
    CHECK(result.psi_hat_final(0) == Catch::Approx(1.0 - std::exp(-10.0)).margin(1e-2));
    CHECK(result.integrator == "euler");
}

TEST_CASE("half-excited regressor identifies only the excited component") {
    AdaptiveProblem problem = half_excited_problem();
    RunResult result = simulate_gradient_law(problem, 1e-3, 200.0);

    CHECK(std::abs(result.psi_hat_final(0) - 1.0) < 1e-2);
    CHECK(result.psi_hat_final(1) == 0.0);  // second component never updated

    SECTION("error regulation holds on the tail") {
        CHECK(check_error_regulation(result, 0.25, 1e-2));
    }

    SECTION("the final estimate lies on psi + W^perp for W = span{e1}") {
        Subspace w_space = span_of(Eigen::MatrixXd::Identity(2, 2).leftCols(1));
        auto [ok, distance] = check_affine_set_membership(result.psi_hat_final,
                                                          problem.psi_true, w_space, 1e-2);
        CHECK(ok);
        CHECK(distance < 1e-2);

        // Constructed violation: stepping off the affine set by a unit of W.
        Eigen::VectorXd off = problem.psi_true + Eigen::VectorXd::Unit(2, 0);
        auto [bad, dist_bad] = check_affine_set_membership(off, problem.psi_true,
                                                           w_space, 0.5);
        CHECK_FALSE(bad);
        CHECK(dist_bad == Catch::Approx(1.0));
    }
}

TEST_CASE("a frozen gain keeps the error from regulating") {
    TimeGrid grid = TimeGrid::over(0.0, 20.0, 1e-3);
    SampledSignal w = sample_constant(Eigen::VectorXd::Ones(1), grid);
    Eigen::VectorXd psi_true(1), psi_hat0(1);
    psi_true << 1.0;
    psi_hat0 << 0.0;
    AdaptiveProblem frozen = AdaptiveProblem::unchecked_gain(
        w, psi_true, psi_hat0, Eigen::MatrixXd::Zero(1, 1));
    RunResult result = simulate_gradient_law(frozen, 1e-3, 20.0);
    CHECK(result.psi_hat_final(0) == 0.0);
    CHECK_FALSE(check_error_regulation(result, 0.5, 1e-2));
}

TEST_CASE("Lyapunov energy is non-increasing along trajectories") {
    TimeGrid grid = TimeGrid::over(0.0, 30.0, 1e-3);
    SampledSignal w = sample_sinusoid_mix({1.0, 2.3}, {1.0, 0.8}, {0.0, 1.1},
                                          Eigen::MatrixXd::Identity(2, 2), grid);
    Eigen::MatrixXd gain(2, 2);
    gain << 2.0, 0.3, 0.3, 1.0;
    Eigen::VectorXd psi_true(2), psi_hat0(2);
    psi_true << 1.0, -2.0;
    psi_hat0 << -0.5, 0.5;
    AdaptiveProblem problem(w, psi_true, psi_hat0, gain);
    RunResult result = simulate_gradient_law(problem, 1e-3, 30.0);

    Eigen::LLT<Eigen::MatrixXd> gain_chol(gain);
    double prev = std::numeric_limits<double>::infinity();
    for (long k = 0; k < result.times.size(); ++k) {
        Eigen::VectorXd err = result.trajectory.col(k) - psi_true;
        const double v = err.dot(gain_chol.solve(err));
        CHECK(v <= prev + 1e-8);
        prev = v;
    }
}

TEST_CASE("with an isotropic gain the unexcited component never moves") {
    TimeGrid grid = TimeGrid::over(0.0, 50.0, 1e-3);
    // w(t) stays inside W = span{(1, 1)/sqrt(2)} exactly.
    Eigen::MatrixXd embed(2, 1);
    embed << 1.0, 1.0;
    SampledSignal sin_part = sample_sinusoid_mix({1.0}, {1.0}, {0.0}, embed, grid);
    Eigen::VectorXd psi_true(2), psi_hat0(2);
    psi_true << 2.0, -1.0;
    psi_hat0 << 0.0, 0.0;
    AdaptiveProblem problem(sin_part, psi_true, psi_hat0,
                            0.5 * Eigen::MatrixXd::Identity(2, 2));
    RunResult result = simulate_gradient_law(problem, 1e-3, 50.0);

    Subspace w_space = span_of(embed);
    Eigen::MatrixXd perp = Eigen::MatrixXd::Identity(2, 2) - w_space.orthogonal_projector();
    Eigen::VectorXd initial = perp * (psi_hat0 - psi_true);
    for (long k = 0; k < result.times.size(); k += 499) {
        Eigen::VectorXd current = perp * (result.trajectory.col(k) - psi_true);
        CHECK((current - initial).norm() < 1e-9);
    }
}

TEST_CASE("PE regressor drives the parameter error to zero") {
    TimeGrid grid = TimeGrid::over(0.0, 60.0, 1e-3);
    SampledSignal w = sample_sinusoid_mix({1.0, 1.0}, {1.0, 1.0},
                                          {0.0, std::numbers::pi / 2.0},
                                          Eigen::MatrixXd::Identity(2, 2), grid);
    // Confirm PE first, then check convergence at a horizon matched to it.
    GramSweep sweep = build_gram_sweep(w);
    REQUIRE(matrix_pe_test(sweep, 2.0 * std::numbers::pi, 0.0, 0.4).pass);

    Eigen::VectorXd psi_true(2), psi_hat0(2);
    psi_true << 1.5, -0.7;
    psi_hat0 << 0.0, 0.0;
    AdaptiveProblem problem(w, psi_true, psi_hat0, Eigen::MatrixXd::Identity(2, 2));
    RunResult result = simulate_gradient_law(problem, 1e-3, 60.0);
    CHECK((result.psi_hat_final - psi_true).norm() < 1e-3);
}

TEST_CASE("prior-knowledge target") {
    Eigen::VectorXd psi_true(2), psi_o(2);
    psi_true << 1.0, 2.0;
    psi_o << 0.0, 0.0;

    SECTION("full excitation forces full identification") {
        CHECK((prior_knowledge_target(psi_o, psi_true, Subspace::full(2)) - psi_true).norm() ==
              0.0);
    }

    SECTION("no excitation keeps the prior") {
        CHECK((prior_knowledge_target(psi_o, psi_true, Subspace::zero(2)) - psi_o).norm() ==
              0.0);
    }

    SECTION("partial excitation projects, verified by grid search") {
        Subspace w_space = span_of(Eigen::MatrixXd::Identity(2, 2).leftCols(1));
        Eigen::VectorXd target = prior_knowledge_target(psi_o, psi_true, w_space);
        Eigen::VectorXd expected(2);
        expected << 1.0, 0.0;
        CHECK((target - expected).norm() < 1e-14);

        Eigen::VectorXd brute = oracle::closest_point_grid_search(psi_o, psi_true, w_space,
                                                                  5.0, 100001);
        CHECK((target - brute).norm() < 1e-3);
    }
}

TEST_CASE("retention experiment lands on the closest admissible point") {
    AdaptiveProblem problem = half_excited_problem();  // psi_hat0 = psi_o = 0
    Subspace w_space = span_of(Eigen::MatrixXd::Identity(2, 2).leftCols(1));
    RetentionReport report = retention_experiment(problem, w_space, 1e-3, 200.0, 1e-2);
    CHECK(report.ok);
    Eigen::VectorXd expected(2);
    expected << 1.0, 0.0;
    CHECK((report.target - expected).norm() < 1e-14);
    CHECK(report.gap < 1e-2);
}

TEST_CASE("retention with psi_o = psi_true stays put") {
    TimeGrid grid = TimeGrid::over(0.0, 20.0, 1e-3);
    SampledSignal sin_part = sample_sinusoid_mix({1.0}, {1.0}, {0.0},
                                                 Eigen::MatrixXd::Identity(1, 1), grid);
    SampledSignal w = stack(sin_part, sample_constant(Eigen::VectorXd::Zero(1), grid));
    Eigen::VectorXd psi(2);
    psi << 1.0, 2.0;
    AdaptiveProblem problem(w, psi, psi, Eigen::MatrixXd::Identity(2, 2));
    Subspace w_space = span_of(Eigen::MatrixXd::Identity(2, 2).leftCols(1));
    RetentionReport report = retention_experiment(problem, w_space, 1e-3, 20.0, 1e-9);
    CHECK(report.ok);
}

TEST_CASE("retention with a PE regressor identifies the truth regardless of prior") {
    TimeGrid grid = TimeGrid::over(0.0, 60.0, 1e-3);
    SampledSignal w = sample_sinusoid_mix({1.0, 1.0}, {1.0, 1.0},
                                          {0.0, std::numbers::pi / 2.0},
                                          Eigen::MatrixXd::Identity(2, 2), grid);
    Eigen::VectorXd psi_true(2), psi_o(2);
    psi_true << 1.5, -0.7;
    psi_o << 10.0, 10.0;
    AdaptiveProblem problem(w, psi_true, psi_o, Eigen::MatrixXd::Identity(2, 2));
    RetentionReport report = retention_experiment(problem, Subspace::full(2), 1e-3, 60.0, 1e-2);
    CHECK(report.ok);
    CHECK((report.target - psi_true).norm() < 1e-12);
}

TEST_CASE("retention experiment rejects anisotropic gains") {
    AdaptiveProblem problem = half_excited_problem();
    Eigen::MatrixXd gain(2, 2);
    gain << 1.0, 0.0, 0.0, 2.0;
    AdaptiveProblem skewed(problem.w, problem.psi_true, problem.psi_hat0, gain);
    Subspace w_space = span_of(Eigen::MatrixXd::Identity(2, 2).leftCols(1));
    CHECK_THROWS_AS(retention_experiment(skewed, w_space, 1e-3, 1.0, 1e-2), InputError);
}

TEST_CASE("divergent integration reports the first bad step") {
    TimeGrid grid = TimeGrid::over(0.0, 20.0, 1e-3);
    SampledSignal w = sample_constant(Eigen::VectorXd::Ones(1), grid);
    Eigen::VectorXd psi_true(1), psi_hat0(1);
    psi_true << 1.0;
    psi_hat0 << 0.0;
    AdaptiveProblem stiff(w, psi_true, psi_hat0, 1e6 * Eigen::MatrixXd::Identity(1, 1));
    try {
        simulate_gradient_law(stiff, 0.1, 20.0, Integrator::Euler);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.step > 0);
        CHECK(e.time > 0.0);
    }
}

TEST_CASE("simulation contract errors") {
    AdaptiveProblem problem = scalar_constant_problem(10.0, 0.0);
    CHECK_THROWS_AS(simulate_gradient_law(problem, -1.0, 5.0), InputError);
    CHECK_THROWS_AS(simulate_gradient_law(problem, 1e-3, 50.0), RangeError);

    TimeGrid grid = TimeGrid::over(0.0, 1.0, 1e-3);
    SampledSignal w = sample_constant(Eigen::VectorXd::Ones(1), grid);
    Eigen::VectorXd psi(1);
    psi << 1.0;
    CHECK_THROWS_AS(AdaptiveProblem(w, psi, psi, -Eigen::MatrixXd::Identity(1, 1)),
                    InputError);
    CHECK_THROWS_AS(AdaptiveProblem(w, Eigen::VectorXd::Ones(2), psi,
                                    Eigen::MatrixXd::Identity(1, 1)),
                    InputError);
}
