#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pex/signal.hpp"

using namespace pex;

namespace {
const TimeGrid kShortGrid(0.0, 0.01, 1001);  // [0, 10]
}

TEST_CASE("sinusoid mix evaluates sin/cos pair directly") {
    const double half_pi = std::numbers::pi / 2.0;
    SampledSignal w = sample_sinusoid_mix({1.0, 1.0}, {1.0, 1.0}, {0.0, half_pi},
                                          Eigen::MatrixXd::Identity(2, 2), kShortGrid);
    REQUIRE(w.dim() == 2);
    REQUIRE(w.continuity_tag == ContinuityTag::UniformlyContinuous);
    for (long j = 0; j < w.samples(); j += 97) {
        const double t = kShortGrid.time(j);
        CHECK(w.values(0, j) == Catch::Approx(std::sin(t)).margin(1e-15));
        CHECK(w.values(1, j) == Catch::Approx(std::cos(t)).margin(1e-15));
    }
}

TEST_CASE("sinusoid mix zero amplitude gives the zero signal") {
    SampledSignal w = sample_sinusoid_mix({1.0}, {0.0}, {0.0},
                                          Eigen::MatrixXd::Ones(2, 1), kShortGrid);
    CHECK(w.values.isZero(0.0));
}

TEST_CASE("sinusoid mix with repeated rows has rank-1 sample range") {
    Eigen::MatrixXd mixing(2, 2);
    mixing << 1.0, 0.0, 1.0, 0.0;
    SampledSignal w = sample_sinusoid_mix({1.0, 1.0}, {1.0, 1.0}, {0.0, 0.3}, mixing, kShortGrid);
    // All columns proportional to (1, 1).
    for (long j = 0; j < w.samples(); ++j)
        CHECK(w.values(0, j) == Catch::Approx(w.values(1, j)).margin(1e-15));
}

TEST_CASE("sinusoid mix validates lengths and mixing shape") {
    CHECK_THROWS_AS(sample_sinusoid_mix({1.0, 2.0}, {1.0}, {0.0, 0.0},
                                        Eigen::MatrixXd::Identity(2, 2), kShortGrid),
                    InputError);
    CHECK_THROWS_AS(sample_sinusoid_mix({1.0}, {1.0}, {0.0},
                                        Eigen::MatrixXd::Identity(2, 2), kShortGrid),
                    InputError);
}

TEST_CASE("gamma schedule matches partial-sum enumeration") {
    GammaSchedule schedule = GammaSchedule::covering(1000.0);

    SECTION("frozen examples") {
        CHECK(gamma_eval(schedule, 1.0) == 1.0);  // interval 1 = [0, 2)
        CHECK(gamma_eval(schedule, 3.0) == 0.0);  // interval 2 = [2, 6)
        CHECK(gamma_eval(schedule, 2.0) == 0.0);  // right-continuous at the boundary
    }

    SECTION("agrees with the enumeration oracle on a dense sweep") {
        for (double t = 0.0; t < 600.0; t += 0.37)
            CHECK(gamma_eval(schedule, t) == oracle::pulse_value(t));
    }

    SECTION("interval lengths are exactly 2^k") {
        double prev = 0.0;
        for (std::size_t k = 1; k <= schedule.boundaries.size(); ++k) {
            CHECK(schedule.boundaries[k - 1] - prev == std::pow(2.0, static_cast<double>(k)));
            prev = schedule.boundaries[k - 1];
        }
    }

    SECTION("negative time is rejected") {
        CHECK_THROWS_AS(gamma_eval(schedule, -0.5), InputError);
    }
}

TEST_CASE("pathological pair splits a constant exactly") {
    TimeGrid grid(0.0, 0.01, 12601);  // [0, 126] = intervals k = 1..6
    SampledSignal v = sample_constant(Eigen::VectorXd::Ones(1), grid);
    auto [w1, w2] = pathological_pair(v);

    SECTION("w1 is the pulse train, w2 its complement, sum is v bit-for-bit") {
        for (long j = 0; j < grid.n; ++j) {
            const double g = oracle::pulse_value(grid.time(j));
            CHECK(w1.values(0, j) == g);
            CHECK(w2.values(0, j) == 1.0 - g);
            CHECK(w1.values(0, j) + w2.values(0, j) == v.values(0, j));
        }
    }

    SECTION("pointwise product is identically zero") {
        CHECK((w1.values.array() * w2.values.array()).matrix().isZero(0.0));
    }
}

TEST_CASE("pathological pair of the zero signal is zero") {
    SampledSignal v = sample_constant(Eigen::VectorXd::Zero(2), kShortGrid);
    auto [w1, w2] = pathological_pair(v);
    CHECK(w1.values.isZero(0.0));
    CHECK(w2.values.isZero(0.0));
}

TEST_CASE("pathological pair of a sinusoid multiplies to zero on the grid") {
    SampledSignal v = sample_sinusoid_mix({1.0}, {1.0}, {0.0},
                                          Eigen::MatrixXd::Identity(1, 1), kShortGrid);
    auto [w1, w2] = pathological_pair(v);
    CHECK((w1.values.array() * w2.values.array()).matrix().isZero(0.0));
    CHECK((w1.values + w2.values) == v.values);
}

TEST_CASE("apply_linear_map basics") {
    SampledSignal w = sample_sinusoid_mix({1.0, 2.0}, {1.0, 0.5}, {0.0, 1.0},
                                          Eigen::MatrixXd::Identity(2, 2), kShortGrid);

    SECTION("identity map returns an identical signal") {
        SampledSignal mapped = apply_linear_map(Eigen::MatrixXd::Identity(2, 2), w);
        CHECK(mapped.values == w.values);
        CHECK(mapped.continuity_tag == w.continuity_tag);
    }

    SECTION("zero map returns the zero signal") {
        SampledSignal mapped = apply_linear_map(Eigen::MatrixXd::Zero(3, 2), w);
        CHECK(mapped.dim() == 3);
        CHECK(mapped.values.isZero(0.0));
    }

    SECTION("row-sum map turns the pathological pair into the constant one") {
        TimeGrid grid(0.0, 0.01, 3001);
        auto [w1, w2] = pathological_pair(sample_constant(Eigen::VectorXd::Ones(1), grid));
        SampledSignal pair = stack(w1, w2);
        Eigen::MatrixXd sum_map(1, 2);
        sum_map << 1.0, 1.0;
        SampledSignal total = apply_linear_map(sum_map, pair);
        CHECK(total.values == Eigen::MatrixXd::Ones(1, grid.n));
    }

    SECTION("dimension mismatch is rejected") {
        CHECK_THROWS_AS(apply_linear_map(Eigen::MatrixXd::Identity(3, 3), w), InputError);
    }

    SECTION("composition matches the product map") {
        Eigen::MatrixXd l1(3, 2), l2(2, 3);
        l1 << 0.3, -1.2, 2.0, 0.7, -0.4, 1.1;
        l2 << 1.0, 0.2, -0.5, 0.0, -1.3, 0.8;
        SampledSignal a = apply_linear_map(l2, apply_linear_map(l1, w));
        SampledSignal b = apply_linear_map(l2 * l1, w);
        CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("stack concatenates and takes the weakest continuity tag") {
    SampledSignal s1 = sample_sinusoid_mix({1.0}, {1.0}, {0.0},
                                           Eigen::MatrixXd::Identity(1, 1), kShortGrid);
    SampledSignal s2 = sample_sinusoid_mix({1.0}, {1.0}, {std::numbers::pi / 2.0},
                                           Eigen::MatrixXd::Identity(1, 1), kShortGrid);

    SampledSignal both = stack(s1, s2);
    CHECK(both.dim() == 2);
    CHECK(both.values.topRows(1) == s1.values);
    CHECK(both.values.bottomRows(1) == s2.values);
    CHECK(both.continuity_tag == ContinuityTag::UniformlyContinuous);

    SampledSignal rough(kShortGrid, s2.values, ContinuityTag::UniformlyPiecewiseContinuous);
    CHECK(stack(s1, rough).continuity_tag == ContinuityTag::UniformlyPiecewiseContinuous);

    TimeGrid other(0.0, 0.02, 501);
    SampledSignal mismatched = sample_constant(Eigen::VectorXd::Ones(1), other);
    CHECK_THROWS_AS(stack(s1, mismatched), InputError);
}

TEST_CASE("envelope_scale") {
    SampledSignal ones = sample_constant(Eigen::VectorXd::Ones(1), kShortGrid);

    SECTION("rate zero is the identity") {
        SampledSignal same = envelope_scale(ones, 0.0);
        CHECK(same.values == ones.values);
    }

    SECTION("rate one on the constant gives exp(-t)") {
        SampledSignal decayed = envelope_scale(ones, 1.0);
        for (long j = 0; j < decayed.samples(); j += 53)
            CHECK(decayed.values(0, j) ==
                  Catch::Approx(std::exp(-kShortGrid.time(j))).epsilon(1e-14));
    }

    SECTION("negative rate is rejected") {
        CHECK_THROWS_AS(envelope_scale(ones, -1.0), InputError);
    }
}

TEST_CASE("generators are deterministic given parameters") {
    SampledSignal a = sample_sinusoid_mix({1.3, 2.7}, {0.8, 1.1}, {0.1, 0.9},
                                          Eigen::MatrixXd::Identity(2, 2), kShortGrid);
    SampledSignal b = sample_sinusoid_mix({1.3, 2.7}, {0.8, 1.1}, {0.1, 0.9},
                                          Eigen::MatrixXd::Identity(2, 2), kShortGrid);
    CHECK(a.values == b.values);
}
