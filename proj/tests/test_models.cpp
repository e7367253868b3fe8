// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#include <doctest.h>

#include <cmath>
#include <random>

#include "core/models.hpp"

using namespace ricmag;

TEST_CASE("scalar benchmark: logistic coefficient endpoints")
{
    const ScalarBenchmark bench = ScalarBenchmark::logistic();
    // Direct evaluation: a(0) = 10/(1+e^20), a(5) = 5, a(10) ~ 10.
    CHECK(bench.a(0.0) == doctest::Approx(10.0 / (1.0 + std::exp(20.0))).epsilon(1e-12));
    CHECK(bench.a(0.0) == doctest::Approx(2.0612e-8).epsilon(1e-3));
    CHECK(bench.a(5.0) == doctest::Approx(5.0));
    CHECK(bench.a(10.0) == doctest::Approx(10.0 / (1.0 + std::exp(-20.0))).epsilon(1e-12));
}

TEST_CASE("scalar_problem: the 1x1 problem encodes q, sqrt(s), r = 1")
{
    ScalarBenchmark bench;
    bench.q = 2.0;
    bench.s = 4.0;
    bench.a = [](double t) { return 0.5 * t; };
    const LTVProblem prob = scalar_problem(bench);
    CHECK(prob.state_dim == 1);
    CHECK(prob.control_dim == 1);
    CHECK(prob.a(3.0)(0, 0) == doctest::Approx(1.5));
    CHECK(prob.b(0.0)(0, 0) == doctest::Approx(2.0)); // sqrt(s)
    CHECK(prob.q(0.0)(0, 0) == doctest::Approx(2.0));
    CHECK(prob.r(0.0)(0, 0) == doctest::Approx(1.0));
    CHECK(prob.s(0.0)(0, 0) == doctest::Approx(4.0)); // B R^{-1} B' = s
}

TEST_CASE("quadrotor params: derived relative inertias")
{
    const QuadrotorParams params;
    CHECK(params.i1() == doctest::Approx((0.0075 - 0.0130) / 0.0075).epsilon(1e-12));
    CHECK(params.i1() == doctest::Approx(-0.733333333).epsilon(1e-6));
    CHECK(params.i2() == doctest::Approx((0.0130 - 0.0075) / 0.0075).epsilon(1e-12));
    CHECK(params.i3() == doctest::Approx(0.0));
}

TEST_CASE("quadrotor factorization: sparsity pattern and cross terms")
{
    const QuadrotorBenchmark bench = quadrotor_benchmark();
    Vector x(6);
    x << 0.2, 10.0, -0.3, 20.0, 0.5, -1.0;

    const Matrix a = bench.problem.sdre_a(0.0, x);
    // Integrator rows.
    CHECK(a(0, 1) == 1.0);
    CHECK(a(2, 3) == 1.0);
    CHECK(a(4, 5) == 1.0);
    // Rate-row couplings with alpha_i = 1: a24 = I1 psi', a42 = I2 psi',
    // a62 = I3 theta'; the (1-alpha) columns vanish.
    const QuadrotorParams params;
    CHECK(a(1, 3) == doctest::Approx(params.i1() * x(5)).epsilon(1e-12));
    CHECK(a(1, 3) == doctest::Approx(0.733333333).epsilon(1e-6)); // (-0.7333)(-1)
    CHECK(a(1, 5) == 0.0);
    CHECK(a(3, 1) == doctest::Approx(params.i2() * x(5)).epsilon(1e-12));
    CHECK(a(3, 5) == 0.0);
    CHECK(a(5, 1) == doctest::Approx(params.i3() * x(3)).epsilon(1e-12));
    CHECK(a(5, 3) == 0.0);
    // Everything else is zero.
    int nonzeros = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (a(i, j) != 0.0)
                ++nonzeros;
    CHECK(nonzeros <= 7); // 3 integrator ones + at most 4 couplings (i3 = 0 here)

    const Matrix b = bench.problem.sdre_b(0.0, x);
    CHECK(b(1, 0) == doctest::Approx(0.23 / 0.0075).epsilon(1e-12));
    CHECK(b(1, 0) == doctest::Approx(30.666667).epsilon(1e-6));
    CHECK(b(3, 1) == doctest::Approx(0.23 / 0.0075).epsilon(1e-12));
    CHECK(b(5, 2) == doctest::Approx(1.0 / 0.0130).epsilon(1e-12));
    CHECK(b.cwiseAbs().sum()
          == doctest::Approx(b(1, 0) + b(3, 1) + b(5, 2)).epsilon(1e-12));
}

TEST_CASE("quadrotor factorization identity holds exactly, for any alpha split")
{
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);

    Vector q_diag(6);
    q_diag << 1.0, 0.1, 1.0, 0.1, 1.0, 0.1;
    Vector r_diag(3);
    r_diag << 1.0, 0.1, 1.0;

    for (double alpha : {1.0, 0.0, 0.37}) {
        QuadrotorParams params;
        params.alpha1 = alpha;
        params.alpha2 = 1.0 - alpha;
        params.alpha3 = 0.5 * alpha;
        const NonlinearProblem prob =
            quadrotor_problem(params, 0.01 * q_diag.asDiagonal().toDenseMatrix(),
                              r_diag.asDiagonal().toDenseMatrix());
        for (int trial = 0; trial < 50; ++trial) {
            Vector x(6), u(3);
            for (int i = 0; i < 6; ++i)
                x(i) = entry(rng);
            for (int i = 0; i < 3; ++i)
                u(i) = entry(rng);
            const Vector lhs = prob.sdre_a(0.0, x) * x + prob.sdre_b(0.0, x) * u;
            const Vector rhs = prob.f_a(0.0, x) + prob.f_b(0.0, x, u);
            CHECK((lhs - rhs).norm() == 0.0); // identical products, exact match
        }
    }
}

TEST_CASE("quadrotor Jacobians match central finite differences")
{
    const QuadrotorBenchmark bench = quadrotor_benchmark();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> entry(-3.0, 3.0);
    const double delta = 1e-5;

    for (int trial = 0; trial < 100; ++trial) {
        Vector x(6), u(3);
        for (int i = 0; i < 6; ++i)
            x(i) = entry(rng);
        for (int i = 0; i < 3; ++i)
            u(i) = entry(rng);

        const Matrix jx = bench.problem.jac_x_fa(0.0, x)
                          + bench.problem.jac_x_fb(0.0, x, u);
        Matrix fd(6, 6);
        for (int j = 0; j < 6; ++j) {
            Vector hi = x, lo = x;
            hi(j) += delta;
            lo(j) -= delta;
            fd.col(j) = (bench.problem.f_a(0.0, hi) + bench.problem.f_b(0.0, hi, u)
                         - bench.problem.f_a(0.0, lo) - bench.problem.f_b(0.0, lo, u))
                        / (2.0 * delta);
        }
        CHECK((jx - fd).cwiseAbs().maxCoeff() < 1e-6);

        const Matrix ju = bench.problem.jac_u_fb(0.0, x, u);
        Matrix fdu(6, 3);
        for (int j = 0; j < 3; ++j) {
            Vector hi = u, lo = u;
            hi(j) += delta;
            lo(j) -= delta;
            fdu.col(j) =
                (bench.problem.f_b(0.0, x, hi) - bench.problem.f_b(0.0, x, lo)) / (2.0 * delta);
        }
        CHECK((ju - fdu).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("quadrotor benchmark: grid and initial state")
{
    const QuadrotorBenchmark bench = quadrotor_benchmark();
    CHECK(bench.grid.steps == 80); // 10 / 0.125
    CHECK(bench.grid.h == doctest::Approx(0.125));
    CHECK(bench.grid.tf == doctest::Approx(10.0));

    CHECK(bench.x0(0) == doctest::Approx(70.0 * M_PI / 180.0).epsilon(1e-12));
    CHECK(bench.x0(0) == doctest::Approx(1.221730476).epsilon(1e-9));
    CHECK(bench.x0(1) == 10.0);
    CHECK(bench.x0(2) == doctest::Approx(1.221730476).epsilon(1e-9));
    CHECK(bench.x0(3) == 20.0);
    CHECK(bench.x0(4) == doctest::Approx(-2.268928028).epsilon(1e-9));
    CHECK(bench.x0(5) == -1.0);

    CHECK(degrees_to_radians(180.0) == doctest::Approx(M_PI));
}

TEST_CASE("quadrotor weights")
{
    const QuadrotorBenchmark bench = quadrotor_benchmark();
    Vector x = Vector::Zero(6);
    const Matrix q = bench.problem.q(0.0, x);
    const Matrix r = bench.problem.r(0.0, x);
    CHECK(q(0, 0) == doctest::Approx(0.01));
    CHECK(q(1, 1) == doctest::Approx(0.001));
    CHECK(q(5, 5) == doctest::Approx(0.001));
    CHECK(r(0, 0) == doctest::Approx(1.0));
    CHECK(r(1, 1) == doctest::Approx(0.1));
    CHECK(r(2, 2) == doctest::Approx(1.0));
}
