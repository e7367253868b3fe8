// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#include "core/models.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace ricmag {

double degrees_to_radians(double degrees)
{
    return degrees * M_PI / 180.0;
}

ScalarBenchmark ScalarBenchmark::logistic()
{
    ScalarBenchmark bench;
    bench.a = [tf = bench.t_f](double t) { return 10.0 / (1.0 + std::exp(-4.0 * (t - tf / 2.0))); };
    return bench;
}

LTVProblem scalar_problem(const ScalarBenchmark& bench)
{
    if (!(bench.q > 0.0) || !(bench.s > 0.0))
        fail(ErrorCode::InvalidArgument, "scalar_problem: q and s must be positive");
    if (!bench.a)
        fail(ErrorCode::InvalidArgument, "scalar_problem: coefficient a(t) not set");

    LTVProblem prob;
    prob.state_dim = 1;
    prob.control_dim = 1;
    prob.a = [a = bench.a](double t) { return Matrix::Constant(1, 1, a(t)); };
    prob.b = [b = std::sqrt(bench.s)](double) { return Matrix::Constant(1, 1, b); };
    prob.q = [q = bench.q](double) { return Matrix::Constant(1, 1, q); };
    prob.r = [](double) { return Matrix::Identity(1, 1); };
    return prob;
}

TimeGrid scalar_riccati_grid(const ScalarBenchmark& bench)
{
    const double steps = bench.t_f / bench.h_p;
    if (std::abs(steps - std::round(steps)) > 1e-9)
        fail(ErrorCode::InvalidArgument, "scalar benchmark: h_p must divide t_f");
    return TimeGrid::uniform(0.0, bench.t_f, static_cast<int>(std::round(steps)));
}

NonlinearProblem quadrotor_problem(const QuadrotorParams& params, const Matrix& q_weight,
                                   const Matrix& r_weight)
{
    if (!(params.inertia_x > 0.0 && params.inertia_y > 0.0 && params.inertia_z > 0.0))
        fail(ErrorCode::InvalidArgument, "quadrotor_problem: inertias must be positive");
    if (q_weight.rows() != 6 || q_weight.cols() != 6 || r_weight.rows() != 3
        || r_weight.cols() != 3)
        fail(ErrorCode::InvalidArgument, "quadrotor_problem: weights must be 6x6 and 3x3");

    const double lam = params.inflow_ratio;
    const double i1 = params.i1();
    const double i2 = params.i2();
    const double i3 = params.i3();
    const double a1 = params.alpha1;
    const double a2 = params.alpha2;
    const double a3 = params.alpha3;

    // State x = (phi, phi', theta, theta', psi, psi'). The cross couplings
    // sit on the rate rows; the split between the two admissible columns is
    // controlled by the alphas.
    auto a_of = [=](double, const Vector& x) {
        Matrix a = Matrix::Zero(6, 6);
        a(0, 1) = 1.0;
        a(2, 3) = 1.0;
        a(4, 5) = 1.0;
        a(1, 3) = lam * a1 * i1 * x(5);         // alpha1 * I1 * psi'
        a(1, 5) = lam * (1.0 - a1) * i1 * x(3); // (1-alpha1) * I1 * theta'
        a(3, 1) = lam * a2 * i2 * x(5);
        a(3, 5) = lam * (1.0 - a2) * i2 * x(1);
        a(5, 1) = lam * a3 * i3 * x(3);
        a(5, 3) = lam * (1.0 - a3) * i3 * x(1);
        return a;
    };

    Matrix b = Matrix::Zero(6, 3);
    b(1, 0) = params.arm_length / params.inertia_x;
    b(3, 1) = params.arm_length / params.inertia_y;
    b(5, 2) = 1.0 / params.inertia_z;

    NonlinearProblem prob;
    prob.state_dim = 6;
    prob.control_dim = 3;
    prob.sdre_a = a_of;
    prob.sdre_b = [b](double, const Vector&) { return b; };
    prob.f_a = [a_of](double t, const Vector& x) { return Vector(a_of(t, x) * x); };
    prob.f_b = [b](double, const Vector&, const Vector& u) { return Vector(b * u); };
    // f_a written out: (x2, lam*I1*x4*x6, x4, lam*I2*x2*x6, x6, lam*I3*x2*x4);
    // the alphas cancel, so the Jacobian below is alpha-free.
    prob.jac_x_fa = [=](double, const Vector& x) {
        Matrix j = Matrix::Zero(6, 6);
        j(0, 1) = 1.0;
        j(2, 3) = 1.0;
        j(4, 5) = 1.0;
        j(1, 3) = lam * i1 * x(5);
        j(1, 5) = lam * i1 * x(3);
        j(3, 1) = lam * i2 * x(5);
        j(3, 5) = lam * i2 * x(1);
        j(5, 1) = lam * i3 * x(3);
        j(5, 3) = lam * i3 * x(1);
        return j;
    };
    prob.jac_x_fb = [](double, const Vector&, const Vector&) {
        return Matrix(Matrix::Zero(6, 6));
    };
    prob.jac_u_fb = [b](double, const Vector&, const Vector&) { return b; };
    prob.q = [q_weight](double, const Vector&) { return q_weight; };
    prob.r = [r_weight](double, const Vector&) { return r_weight; };
    return prob;
}

QuadrotorBenchmark quadrotor_benchmark()
{
    Vector q_diag(6);
    q_diag << 1.0, 0.1, 1.0, 0.1, 1.0, 0.1;
    const Matrix q_weight = 0.01 * q_diag.asDiagonal().toDenseMatrix();
    Vector r_diag(3);
    r_diag << 1.0, 0.1, 1.0;
    const Matrix r_weight = r_diag.asDiagonal();

    QuadrotorBenchmark bench;
    bench.problem = quadrotor_problem(QuadrotorParams{}, q_weight, r_weight);
    bench.grid = TimeGrid::uniform(0.0, 10.0, 80);
    bench.x0 = Vector(6);
    bench.x0 << degrees_to_radians(70.0), 10.0, degrees_to_radians(70.0), 20.0,
        degrees_to_radians(-130.0), -1.0;
    return bench;
}

} // namespace ricmag
