// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#include <doctest.h>

#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "core/models.hpp"
#include "core/riccati.hpp"

using namespace ricmag;

namespace {

LTVProblem scalar_constant(double a, double q, double s)
{
    ScalarBenchmark bench;
    bench.q = q;
    bench.s = s;
    bench.a = [a](double) { return a; };
    return scalar_problem(bench);
}

// Analytic solution of p' = -1 + p^2, p(tf) = 0: p(t) = tanh(tf - t).
double tanh_solution(double t, double tf)
{
    return std::tanh(tf - t);
}

// Exact backward implicit-Euler recursion for the scalar equation
// p' = -q - 2 a p + s p^2: one step solves the quadratic
//   s h p^2 + (1 - 2 a h) p - (k + h q) = 0
// and Newton started from k >= 0 picks the positive root when a <= 0.
double implicit_euler_scalar_step(double k, double a, double q, double s, double h)
{
    const double b = 1.0 - 2.0 * a * h;
    const double c = -(k + h * q);
    return (-b + std::sqrt(b * b - 4.0 * s * h * c)) / (2.0 * s * h);
}

// Exact backward implicit-midpoint step: with m = (p + k)/2,
//   s h m^2 + (2 - 2 a h) m - (2 k + h q) = 0,  p = 2 m - k;
// the Newton iterate from k selects the root of smaller magnitude.
double implicit_midpoint_scalar_step(double k, double a, double q, double s, double h)
{
    const double qa = s * h;
    const double qb = 2.0 - 2.0 * a * h;
    const double qc = -(2.0 * k + h * q);
    const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
    const double m1 = (-qb + disc) / (2.0 * qa);
    const double m2 = (-qb - disc) / (2.0 * qa);
    const double m = std::abs(m1 - k) < std::abs(m2 - k) ? m1 : m2;
    return 2.0 * m - k;
}

// Piecewise coefficient: zero on the last step before tf, strongly
// negative before that. The jump size 5 exceeds 2/h for h = 1/2, which is
// exactly where the midpoint rule loses positivity.
std::function<double(double)> piecewise_a(double tf, double h, double value)
{
    return [tf, h, value](double t) { return t >= tf - h ? 0.0 : value; };
}

} // namespace

TEST_CASE("magnus2 on the constant scalar problem reproduces tanh exactly")
{
    const LTVProblem prob = scalar_constant(0.0, 1.0, 1.0);
    const Matrix p_final = Matrix::Zero(1, 1);

    // The generator is constant, so a single exponential per step is the
    // exact flow for any h.
    for (int steps : {1, 5, 20}) {
        const TimeGrid grid = TimeGrid::uniform(0.0, 10.0, steps);
        const RiccatiSolution sol = riccati_backward(
            prob, grid, IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal), p_final);
        for (int node = 0; node <= steps; ++node) {
            CHECK(std::abs(sol.p[node](0, 0) - tanh_solution(grid.node(node), 10.0)) < 1e-10);
        }
    }
}

TEST_CASE("magnus2-trapezoidal matches tanh within 1e-3 at h = 1/2")
{
    const LTVProblem prob = scalar_constant(0.0, 1.0, 1.0);
    const TimeGrid grid = TimeGrid::uniform(0.0, 10.0, 20);
    const RiccatiSolution sol = riccati_backward(
        prob, grid, IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal), Matrix::Zero(1, 1));
    for (int node = 0; node <= 20; ++node)
        CHECK(std::abs(sol.p[node](0, 0) - tanh_solution(grid.node(node), 10.0)) < 1e-3);
}

TEST_CASE("zero weight keeps P at the zero fixed point")
{
    // Q = 0 with P_f = 0: P = 0 solves the equation for any A, S.
    Matrix a(2, 2);
    a << 0.4, -1.0, 0.3, 0.2;
    LTVProblem prob = LTVProblem::constant(a, Matrix::Identity(2, 2), Matrix::Zero(2, 2),
                                           Matrix::Identity(2, 2));
    const TimeGrid grid = TimeGrid::uniform(0.0, 5.0, 10);
    for (auto family : {IntegratorFamily::Magnus2Trapezoidal, IntegratorFamily::Magnus4Simpson}) {
        const RiccatiSolution sol =
            riccati_backward(prob, grid, IntegratorSpec::of(family), Matrix::Zero(2, 2));
        for (const Matrix& p : sol.p)
            CHECK(p.norm() < 1e-12);
    }
}

TEST_CASE("stiff logistic coefficient: magnus2 stays nonnegative, midpoint does not")
{
    const LTVProblem prob = scalar_problem(ScalarBenchmark::logistic());
    const TimeGrid grid = TimeGrid::uniform(0.0, 10.0, 20); // h = 1/2

    const RiccatiSolution magnus = riccati_backward(
        prob, grid, IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal), Matrix::Zero(1, 1));
    for (double eig : magnus.min_eigenvalues)
        CHECK(eig >= 0.0);

    const RiccatiSolution midpoint = riccati_backward_direct(
        prob, grid, IntegratorSpec::of(IntegratorFamily::RkImplicitMidpoint), Matrix::Zero(1, 1));
    CHECK(midpoint.min_eigenvalue_global() < 0.0);
}

TEST_CASE("piecewise coefficient defeats the implicit midpoint rule in two steps")
{
    ScalarBenchmark bench;
    bench.a = piecewise_a(10.0, 0.5, -5.0);
    const LTVProblem prob = scalar_problem(bench);
    const TimeGrid grid = TimeGrid::uniform(0.0, 10.0, 20);

    const RiccatiSolution sol = riccati_backward_direct(
        prob, grid, IntegratorSpec::of(IntegratorFamily::RkImplicitMidpoint), Matrix::Zero(1, 1));

    // Oracle recursion: first step sees a = 0 (midpoint at tf - h/2), the
    // second sees a = -5 (midpoint at tf - 3h/2).
    const double p1 = implicit_midpoint_scalar_step(0.0, 0.0, 1.0, 1.0, 0.5);
    const double p2 = implicit_midpoint_scalar_step(p1, -5.0, 1.0, 1.0, 0.5);
    CHECK(p2 < 0.0);
    CHECK(sol.p[19](0, 0) == doctest::Approx(p1).epsilon(1e-10));
    CHECK(sol.p[18](0, 0) == doctest::Approx(p2).epsilon(1e-10));
}

TEST_CASE("same piecewise data: implicit Euler keeps every node nonnegative")
{
    ScalarBenchmark bench;
    bench.a = piecewise_a(10.0, 0.5, -5.0);
    const LTVProblem prob = scalar_problem(bench);
    const TimeGrid grid = TimeGrid::uniform(0.0, 10.0, 20);

    const RiccatiSolution sol = riccati_backward_direct(
        prob, grid, IntegratorSpec::of(IntegratorFamily::EulerImplicit), Matrix::Zero(1, 1));

    double p_oracle = 0.0;
    for (int node = 19; node >= 0; --node) {
        const double a_eval = bench.a(grid.node(node)); // implicit stage at the target node
        p_oracle = implicit_euler_scalar_step(p_oracle, a_eval, 1.0, 1.0, 0.5);
        CHECK(p_oracle >= 0.0);
        CHECK(sol.p[node](0, 0) == doctest::Approx(p_oracle).epsilon(1e-10));
    }
    CHECK(sol.min_eigenvalue_global() >= 0.0);
}

TEST_CASE("explicit Euler converges to tanh at first order")
{
    const LTVProblem prob = scalar_constant(0.0, 1.0, 1.0);
    const TimeGrid grid = TimeGrid::uniform(0.0, 10.0, 1000); // h = 0.01
    const RiccatiSolution sol = riccati_backward_direct(
        prob, grid, IntegratorSpec::of(IntegratorFamily::EulerExplicit), Matrix::Zero(1, 1));
    CHECK(std::abs(sol.p[0](0, 0) - tanh_solution(0.0, 10.0)) < 1e-2);
}

TEST_CASE("direct and embedded integrators agree on a smooth problem")
{
    ScalarBenchmark bench;
    bench.a = [](double t) { return 0.1 * std::sin(t); };
    const LTVProblem prob = scalar_problem(bench);
    const double h = 1e-3;
    const TimeGrid grid = TimeGrid::uniform(0.0, 10.0, static_cast<int>(std::round(10.0 / h)));

    const RiccatiSolution embedded = riccati_backward(
        prob, grid, IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal), Matrix::Zero(1, 1));
    const RiccatiSolution direct = riccati_backward_direct(
        prob, grid, IntegratorSpec::of(IntegratorFamily::EulerImplicit), Matrix::Zero(1, 1));

    for (int node = 0; node <= grid.steps; node += 100)
        CHECK(std::abs(embedded.p[node](0, 0) - direct.p[node](0, 0)) < 10.0 * h);
}

TEST_CASE("unconditional positivity of the second-order exponential rules")
{
    // Randomized problems with positive definite weights; every recorded
    // eigenvalue stays above -1e-9 for small and large steps alike.
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> entry(-0.3, 0.3);

    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const int m = 1 + static_cast<int>(rng() % n);
        Matrix a0(n, n), a1(n, n), b(n, m), gq(n, n), gr(m, m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                a0(i, j) = entry(rng);
                a1(i, j) = entry(rng);
                gq(i, j) = entry(rng);
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                b(i, j) = entry(rng);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                gr(i, j) = entry(rng);
        const Matrix q = 0.3 * Matrix::Identity(n, n) + gq * gq.transpose();
        const Matrix r = 0.3 * Matrix::Identity(m, m) + gr * gr.transpose();
        const double omega = 0.5 + 1.5 * (trial % 4) / 3.0;

        LTVProblem prob;
        prob.state_dim = n;
        prob.control_dim = m;
        prob.a = [a0, a1, omega](double t) { return Matrix(a0 + std::sin(omega * t) * a1); };
        prob.b = [b](double) { return b; };
        prob.q = [q](double) { return q; };
        prob.r = [r](double) { return r; };

        for (int steps : {100, 10, 1}) { // h = 0.1, 1, 10
            const TimeGrid grid = TimeGrid::uniform(0.0, 10.0, steps);
            for (auto family :
                 {IntegratorFamily::Magnus2Midpoint, IntegratorFamily::Magnus2Trapezoidal}) {
                const RiccatiSolution sol =
                    riccati_backward(prob, grid, IntegratorSpec::of(family), Matrix::Zero(n, n));
                CAPTURE(trial);
                CAPTURE(steps);
                CHECK(sol.min_eigenvalue_global() > -1e-9);
                for (double defect : sol.symmetry_defects)
                    CHECK(defect <= 1e-9);
                for (const Matrix& p : sol.p)
                    CHECK(symmetry_defect(p) == 0.0);
            }
        }
    }
}

TEST_CASE("final condition handling")
{
    const LTVProblem prob = scalar_constant(0.0, 1.0, 1.0);
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 4);
    const IntegratorSpec spec = IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal);

    const Matrix pf = Matrix::Constant(1, 1, 0.25);
    const RiccatiSolution sol = riccati_backward(prob, grid, spec, pf);
    CHECK(sol.p[4](0, 0) == 0.25); // stored final condition is exact

    Matrix asym(2, 2);
    asym << 1.0, 0.5, 0.0, 1.0;
    LTVProblem prob2 = LTVProblem::constant(Matrix::Zero(2, 2), Matrix::Identity(2, 2),
                                            Matrix::Identity(2, 2), Matrix::Identity(2, 2));
    CHECK_THROWS_AS(static_cast<void>(riccati_backward(prob2, grid, spec, asym)), Error);
    CHECK_THROWS_AS(
        static_cast<void>(riccati_backward(prob, grid, spec, Matrix::Zero(3, 3))), Error);
}

TEST_CASE("family routing between the embedding and the direct stepper")
{
    const LTVProblem prob = scalar_constant(0.0, 1.0, 1.0);
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 4);
    CHECK_THROWS_AS(static_cast<void>(riccati_backward(
                        prob, grid, IntegratorSpec::of(IntegratorFamily::EulerImplicit),
                        Matrix::Zero(1, 1))),
                    Error);
    CHECK_THROWS_AS(static_cast<void>(riccati_backward_direct(
                        prob, grid, IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal),
                        Matrix::Zero(1, 1))),
                    Error);
}

TEST_CASE("fourth-order families are exact for constant generators in one step")
{
    const LTVProblem prob = scalar_constant(0.3, 1.0, 1.0);
    const TimeGrid one_step = TimeGrid::uniform(0.0, 2.0, 1);
    const TimeGrid fine = TimeGrid::uniform(0.0, 2.0, 2000);
    const RiccatiSolution ref = riccati_backward(
        prob, fine, IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal), Matrix::Zero(1, 1));
    for (auto family : {IntegratorFamily::Magnus4Gauss, IntegratorFamily::Magnus4Simpson,
                        IntegratorFamily::Magnus2Midpoint}) {
        const RiccatiSolution sol =
            riccati_backward(prob, one_step, IntegratorSpec::of(family), Matrix::Zero(1, 1));
        CHECK(std::abs(sol.p[0](0, 0) - ref.p[0](0, 0)) < 1e-9);
    }
}

TEST_CASE("embedding restart keeps long stiff horizons accurate")
{
    // Decoupled 2x2 problem with well separated rates: the raw embedding's
    // W conditioning grows like exp((sigma1 - sigma2) t) and crosses the
    // restart threshold well before t0; the recovered P must still match
    // the direct route.
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 3.0;
    a(1, 1) = 0.0;
    const LTVProblem prob = LTVProblem::constant(a, Matrix::Identity(2, 2),
                                                 Matrix::Identity(2, 2), Matrix::Identity(2, 2));

    const TimeGrid grid = TimeGrid::uniform(0.0, 10.0, 100);
    const RiccatiSolution embedded = riccati_backward(
        prob, grid, IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal), Matrix::Zero(2, 2));

    // Without restarts cond(W) would reach ~exp(21.6) ~ 2e9; recorded
    // conditioning must stay below the failure threshold throughout.
    double max_cond = 0.0;
    for (int node = 0; node < grid.steps; ++node)
        max_cond = std::max(max_cond, embedded.w_condition[node]);
    CHECK(max_cond < 1e8);
    CHECK(max_cond > 1e4); // the problem does stress the embedding

    const TimeGrid fine = TimeGrid::uniform(0.0, 10.0, 10000);
    const RiccatiSolution direct = riccati_backward_direct(
        prob, fine, IntegratorSpec::of(IntegratorFamily::EulerImplicit), Matrix::Zero(2, 2));
    CHECK((embedded.p[0] - direct.p[0]).norm() < 5e-3);
    // Decoupled: P stays diagonal, both entries positive.
    CHECK(embedded.p[0](0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(embedded.min_eigenvalue_global() >= 0.0);
}

TEST_CASE("a single step that blows the conditioning past 1e8 fails loudly")
{
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 4.0;
    a(1, 1) = 0.0;
    const LTVProblem prob = LTVProblem::constant(a, Matrix::Identity(2, 2),
                                                 Matrix::Identity(2, 2), Matrix::Identity(2, 2));
    const TimeGrid grid = TimeGrid::uniform(0.0, 12.0, 2); // h = 6
    CHECK_THROWS_WITH_AS(
        static_cast<void>(riccati_backward(
            prob, grid, IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal),
            Matrix::Zero(2, 2))),
        doctest::Contains("node"), Error);
}

TEST_CASE("fourth-order backward pass feeds a double-step Simpson forward pass")
{
    // Backward Gauss pass on the fine grid, forward Simpson pass with a
    // stride of two (its samples land on stored nodes). The end state must
    // match a fine trapezoidal reference to fourth-order-like accuracy.
    ScalarBenchmark bench;
    bench.a = [](double t) { return 0.1 * std::sin(t); };
    const LTVProblem prob = scalar_problem(bench);
    const Vector x0 = Vector::Constant(1, 1.0);

    const TimeGrid grid = TimeGrid::uniform(0.0, 10.0, 200);
    const RiccatiSolution rsol = riccati_backward(
        prob, grid, IntegratorSpec::of(IntegratorFamily::Magnus4Gauss), Matrix::Zero(1, 1));
    const Trajectory traj = state_forward(
        prob, rsol, x0, IntegratorSpec::of(IntegratorFamily::Magnus4Simpson), 2);
    CHECK(traj.grid.steps == 100);

    const TimeGrid fine = TimeGrid::uniform(0.0, 10.0, 100000);
    const RiccatiSolution ref_sol = riccati_backward(
        prob, fine, IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal), Matrix::Zero(1, 1));
    const Trajectory ref = state_forward(
        prob, ref_sol, x0, IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal));
    CHECK(std::abs(traj.states.back()(0) - ref.states.back()(0)) < 1e-7);
}
