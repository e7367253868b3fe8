// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors
//
// Linear-quadratic problem instances over an equidistant grid, the
// Hamiltonian block matrix of the linear V/W embedding, and the running
// cost functional.

#pragma once

#include <functional>
#include <vector>

#include "core/dense.hpp"
#include "core/grid.hpp"

namespace ricmag {

/// Time-dependent matrix evaluation map. Must be pure: the solvers may
/// evaluate it at any node (and any iteration) in any order.
using MatrixFn = std::function<Matrix(double)>;
using VectorFn = std::function<Vector(double)>;

/// Linear time-varying problem
///   minimize integral of x'Q(t)x + u'R(t)u
///   subject to x' = A(t)x + B(t)u
/// with Q(t) symmetric psd and R(t) symmetric pd.
struct LTVProblem {
    int state_dim = 0;
    int control_dim = 0;
    MatrixFn a;
    MatrixFn b;
    MatrixFn q;
    MatrixFn r;

    static LTVProblem constant(const Matrix& a, const Matrix& b, const Matrix& q,
                               const Matrix& r);

    /// S(t) = B(t) R(t)^{-1} B(t)^T (symmetric psd).
    Matrix s(double t) const;
};

/// Grid-sampled state/control pair with its accumulated quadratic cost.
struct Trajectory {
    TimeGrid grid;
    std::vector<Vector> states;   // x_n, n = 0..N
    std::vector<Vector> controls; // u_n, n = 0..N
    double cost = 0.0;
};

/// The 2n x 2n generator of the linear embedding,
///   [ -A(t)^T  -Q(t) ]
///   [ -S(t)     A(t) ],
/// an element of the symplectic algebra (off-diagonal blocks symmetric,
/// diagonal blocks negative transposes of each other).
Matrix hamiltonian(const LTVProblem& prob, double t);

/// Composite trapezoidal quadrature of g over the grid nodes.
double trapezoid(const TimeGrid& grid, const std::vector<double>& g);

/// Partial trapezoidal sums: out[k] integrates g over [t_0, t_k], out[0] = 0.
std::vector<double> trapezoid_running(const TimeGrid& grid, const std::vector<double>& g);

/// Trapezoidal approximation of the quadratic cost along a trajectory.
double trajectory_cost(const LTVProblem& prob, const Trajectory& traj);

/// Nodal integrand samples x'Qx + u'Ru used by the cost quadrature.
std::vector<double> cost_integrand(const LTVProblem& prob, const Trajectory& traj);

} // namespace ricmag
