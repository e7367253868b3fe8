// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors
//
// Bundled benchmark problems: a scalar Riccati equation whose stiff
// coefficient exposes positivity loss in standard implicit schemes, and a
// six-state quadrotor attitude stabilization model with three torque-like
// inputs.

#pragma once

#include "core/nonlinear.hpp"

namespace ricmag {

/// Scalar problem p' = -q - 2 a(t) p + s p^2, p(tf) = 0, together with the
/// closed-loop state equation x' = (a(t) - s p(t)) x.
struct ScalarBenchmark {
    double q = 1.0;
    double s = 1.0;
    std::function<double(double)> a; // time-varying coefficient
    double t_f = 10.0;
    double h_p = 0.5; // step for the Riccati pass
    double h_x = 1.0; // step for the state pass
    double x0 = 1.0;

    /// The stiff logistic coefficient a(t) = 10 / (1 + exp(-4 (t - tf/2))).
    static ScalarBenchmark logistic();
};

/// 1x1 LQ problem whose Riccati equation is exactly the benchmark's scalar
/// equation under backward integration (A = a, Q = q, B = sqrt(s), R = 1).
LTVProblem scalar_problem(const ScalarBenchmark& bench);

TimeGrid scalar_riccati_grid(const ScalarBenchmark& bench);

/// Rigid-body attitude parameters. The relative inertias are derived, never
/// stored, so they cannot go stale.
struct QuadrotorParams {
    double inertia_x = 0.0075; // kg m^2
    double inertia_y = 0.0075;
    double inertia_z = 0.0130;
    double arm_length = 0.23; // m
    double inflow_ratio = 1.0;
    // Split of the gyroscopic cross terms between the state-dependent
    // factorization's columns; the dynamics do not depend on them.
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double alpha3 = 1.0;

    double i1() const { return (inertia_y - inertia_z) / inertia_x; }
    double i2() const { return (inertia_z - inertia_x) / inertia_y; }
    double i3() const { return (inertia_x - inertia_y) / inertia_z; }
};

/// Attitude model with state (phi, phi', theta, theta', psi, psi') and
/// three control inputs formed from rotor thrusts. Weights may be any
/// constant symmetric matrices (Q psd, R pd).
NonlinearProblem quadrotor_problem(const QuadrotorParams& params, const Matrix& q_weight,
                                   const Matrix& r_weight);

/// The stock stabilization scenario: default parameters and weights,
/// t in [0, 10] with 80 steps, and a start at a badly tilted orientation
/// with high rates (angles given in degrees here, stored in radians).
struct QuadrotorBenchmark {
    NonlinearProblem problem;
    TimeGrid grid;
    Vector x0;
};

QuadrotorBenchmark quadrotor_benchmark();

double degrees_to_radians(double degrees);

} // namespace ricmag
