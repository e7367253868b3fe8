// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "core/models.hpp"
#include "core/problem.hpp"

using namespace ricmag;

TEST_CASE("TimeGrid invariants")
{
    const TimeGrid grid = TimeGrid::uniform(0.0, 10.0, 80);
    CHECK(grid.h == doctest::Approx(0.125));
    CHECK(grid.node(0) == 0.0);
    CHECK(grid.node(80) == doctest::Approx(10.0));
    CHECK(grid.node_count() == 81);
    CHECK_THROWS_AS(TimeGrid::uniform(1.0, 1.0, 10), Error);
    CHECK_THROWS_AS(TimeGrid::uniform(0.0, 1.0, 0), Error);
}

TEST_CASE("hamiltonian: scalar block formula")
{
    const double a = 0.7, b = 2.0, q = 3.0, r = 4.0;
    LTVProblem prob = LTVProblem::constant(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b),
                                           Matrix::Constant(1, 1, q), Matrix::Constant(1, 1, r));
    const Matrix m = hamiltonian(prob, 0.0);
    CHECK(m(0, 0) == doctest::Approx(-a));
    CHECK(m(0, 1) == doctest::Approx(-q));
    CHECK(m(1, 0) == doctest::Approx(-b * b / r));
    CHECK(m(1, 1) == doctest::Approx(a));
}

TEST_CASE("hamiltonian: A=0, B=Q=R=I gives the cross block pattern")
{
    const Matrix id = Matrix::Identity(2, 2);
    LTVProblem prob = LTVProblem::constant(Matrix::Zero(2, 2), id, id, id);
    const Matrix m = hamiltonian(prob, 1.0);
    CHECK((m.topLeftCorner(2, 2)).norm() == doctest::Approx(0.0));
    CHECK((m.topRightCorner(2, 2) + id).norm() == doctest::Approx(0.0));
    CHECK((m.bottomLeftCorner(2, 2) + id).norm() == doctest::Approx(0.0));
    CHECK((m.bottomRightCorner(2, 2)).norm() == doctest::Approx(0.0));
}

TEST_CASE("hamiltonian: quadrotor S block at a frozen state")
{
    const QuadrotorBenchmark bench = quadrotor_benchmark();
    Vector x(6);
    x << 0.0, 10.0, 0.0, 20.0, 0.0, -1.0;

    LTVProblem frozen;
    frozen.state_dim = 6;
    frozen.control_dim = 3;
    frozen.a = [&](double t) { return bench.problem.sdre_a(t, x); };
    frozen.b = [&](double t) { return bench.problem.sdre_b(t, x); };
    frozen.q = [&](double t) { return bench.problem.q(t, x); };
    frozen.r = [&](double t) { return bench.problem.r(t, x); };

    const Matrix m = hamiltonian(frozen, 0.0);
    const Matrix s = -m.bottomLeftCorner(6, 6);
    // S = B R^{-1} B' is diagonal; S_22 = (L/I_x)^2 / R_11 by direct arithmetic.
    const double expected_s22 = std::pow(0.23 / 0.0075, 2) / 1.0;
    CHECK(s(1, 1) == doctest::Approx(expected_s22).epsilon(1e-12));
    CHECK(expected_s22 == doctest::Approx(940.44).epsilon(1e-4));
    CHECK(s(3, 3) == doctest::Approx(std::pow(0.23 / 0.0075, 2) / 0.1).epsilon(1e-12));
    CHECK(s(5, 5) == doctest::Approx(std::pow(1.0 / 0.0130, 2) / 1.0).epsilon(1e-12));
}

TEST_CASE("hamiltonian lies in the symplectic algebra")
{
    // Off-diagonal blocks symmetric, diagonal blocks negative transposes.
    Matrix a(2, 2), b(2, 1), q(2, 2), r(1, 1);
    a << 0.3, -1.2, 0.8, 0.1;
    b << 1.0, -0.5;
    q << 2.0, 0.3, 0.3, 1.0;
    r << 0.7;
    LTVProblem prob = LTVProblem::constant(a, b, q, r);
    const Matrix m = hamiltonian(prob, 0.0);
    const Matrix tl = m.topLeftCorner(2, 2);
    const Matrix br = m.bottomRightCorner(2, 2);
    CHECK((tl + br.transpose()).norm() < 1e-14);
    CHECK(symmetry_defect(m.topRightCorner(2, 2)) < 1e-14);
    CHECK(symmetry_defect(m.bottomLeftCorner(2, 2)) < 1e-14);
}

TEST_CASE("hamiltonian reports singular R")
{
    Matrix r = Matrix::Zero(1, 1);
    LTVProblem prob = LTVProblem::constant(Matrix::Zero(1, 1), Matrix::Identity(1, 1),
                                           Matrix::Identity(1, 1), r);
    CHECK_THROWS_WITH_AS(static_cast<void>(hamiltonian(prob, 0.0)),
                         doctest::Contains("not invertible"), Error);
}

namespace {

Trajectory constant_trajectory(const TimeGrid& grid, double x_value, double u_value)
{
    Trajectory traj;
    traj.grid = grid;
    traj.states.assign(grid.node_count(), Vector::Constant(1, x_value));
    traj.controls.assign(grid.node_count(), Vector::Constant(1, u_value));
    return traj;
}

} // namespace

TEST_CASE("cost: zero trajectory and constant integrand")
{
    LTVProblem prob = LTVProblem::constant(Matrix::Zero(1, 1), Matrix::Identity(1, 1),
                                           Matrix::Identity(1, 1), Matrix::Identity(1, 1));
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 4);
    CHECK(trajectory_cost(prob, constant_trajectory(grid, 0.0, 0.0)) == doctest::Approx(0.0));
    // x = 1, u = 0, Q = R = 1 over [0, 1]: integral of 1 is 1, exact for
    // the trapezoidal rule.
    CHECK(trajectory_cost(prob, constant_trajectory(grid, 1.0, 0.0)) == doctest::Approx(1.0));
}

TEST_CASE("cost: trapezoidal rule is exact for degree <= 1 integrands")
{
    LTVProblem prob = LTVProblem::constant(Matrix::Zero(1, 1), Matrix::Identity(1, 1),
                                           Matrix::Identity(1, 1), Matrix::Identity(1, 1));
    // Choose x_n = sqrt(1 + t_n) so the integrand x'Qx = 1 + t is linear.
    auto build = [&](int steps) {
        const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, steps);
        Trajectory traj;
        traj.grid = grid;
        traj.states.resize(grid.node_count());
        traj.controls.assign(grid.node_count(), Vector::Zero(1));
        for (int k = 0; k < grid.node_count(); ++k)
            traj.states[k] = Vector::Constant(1, std::sqrt(1.0 + grid.node(k)));
        return traj;
    };
    const double coarse = trajectory_cost(prob, build(4));
    const double fine = trajectory_cost(prob, build(64));
    CHECK(coarse == doctest::Approx(fine).epsilon(1e-13));
    CHECK(coarse == doctest::Approx(4.0).epsilon(1e-13)); // integral of 1+t over [0,2]
}

TEST_CASE("cost: length mismatch is an error")
{
    LTVProblem prob = LTVProblem::constant(Matrix::Zero(1, 1), Matrix::Identity(1, 1),
                                           Matrix::Identity(1, 1), Matrix::Identity(1, 1));
    Trajectory traj = constant_trajectory(TimeGrid::uniform(0.0, 1.0, 4), 1.0, 0.0);
    traj.controls.pop_back();
    CHECK_THROWS_AS(static_cast<void>(trajectory_cost(prob, traj)), Error);
}

TEST_CASE("trapezoid_running ends at the full integral")
{
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 10);
    std::vector<double> g(grid.node_count());
    for (int k = 0; k < grid.node_count(); ++k)
        g[k] = std::cos(grid.node(k));
    const auto running = trapezoid_running(grid, g);
    CHECK(running.front() == 0.0);
    CHECK(running.back() == doctest::Approx(trapezoid(grid, g)).epsilon(1e-15));
}
