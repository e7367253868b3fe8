// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors
//
// Nonlinear optimal control via three linearization strategies:
//  - SDRE: factor the dynamics as A(t,x)x + B(t,x)u and solve an algebraic
//    Riccati equation at every node while stepping the state;
//  - waveform relaxation: freeze the factored coefficients along the
//    previous trajectory iterate and re-solve the linear problem;
//  - Taylor-type linearization: expand the vector field around the previous
//    iterate, compensating the expansion residual through a disturbance
//    feedforward co-state.

#pragma once

#include "core/propagation.hpp"

namespace ricmag {

using StateMatrixFn = std::function<Matrix(double, const Vector&)>;
using StateFieldFn = std::function<Vector(double, const Vector&)>;
using ControlFieldFn = std::function<Vector(double, const Vector&, const Vector&)>;
using ControlMatrixFn = std::function<Matrix(double, const Vector&, const Vector&)>;
using FeasibilityFn = std::function<bool(double, const Vector&)>;

/// Control-affine nonlinear problem
///   x' = f_a(t, x) + f_b(t, x, u),
/// with a state-dependent factorization f_a = sdre_a(t,x) x,
/// f_b = sdre_b(t,x) u, analytic Jacobians, and (possibly state-dependent)
/// quadratic weights.
struct NonlinearProblem {
    int state_dim = 0;
    int control_dim = 0;
    StateFieldFn f_a;
    ControlFieldFn f_b;
    StateMatrixFn sdre_a;
    StateMatrixFn sdre_b;
    StateMatrixFn jac_x_fa;   // D_x f_a
    ControlMatrixFn jac_x_fb; // D_x f_b
    ControlMatrixFn jac_u_fb; // D_u f_b
    StateMatrixFn q;
    StateMatrixFn r;
    // Optional state-bounds predicate evaluated on the solution trajectory
    // (finiteness is always enforced separately). Empty means always feasible.
    FeasibilityFn feasibility;
};

/// Convergence record of an outer linearization loop.
struct IterationReport {
    int iterations = 0;
    std::vector<double> residuals; // ||X^k - X^{k-1}||_2 per iteration (stacked grid 2-norm)
    bool converged = false;
    bool diverged = false; // non-finite values encountered
};

struct NonlinearResult {
    Trajectory trajectory;
    IterationReport report;
    std::vector<double> min_eig_p;  // per node, from the final Riccati pass
    double min_eig_p_global = 0.0;  // across all outer iterations
    bool feasible = true;           // problem's state-bounds predicate on the result
};

/// State-dependent Riccati equation stepping (no outer iteration): at each
/// node P solves the frozen algebraic Riccati equation and the state is
/// advanced by explicit or implicit Euler on the closed loop.
NonlinearResult solve_sdre(const NonlinearProblem& prob, const TimeGrid& grid, const Vector& x0,
                           IntegratorFamily stepper);

/// Waveform relaxation: freeze A, B, Q, R along the previous iterate,
/// solve the Riccati equation backward and the state forward, repeat until
/// the stacked state difference drops below tol. The default initial guess
/// is the linear homotopy (1 - t/tf) x0.
NonlinearResult solve_waveform(const NonlinearProblem& prob, const TimeGrid& grid,
                               const Vector& x0, const IntegratorSpec& riccati_spec,
                               const IntegratorSpec& state_spec, double tol, int max_iter,
                               const std::vector<Vector>* initial_guess = nullptr);

/// Taylor-type linearization with disturbance compensation: linearize the
/// vector field around (X^k, u^k), solve the Riccati and feedforward
/// equations backward, then the inhomogeneous closed loop forward.
NonlinearResult solve_taylor(const NonlinearProblem& prob, const TimeGrid& grid, const Vector& x0,
                             const IntegratorSpec& riccati_spec, const IntegratorSpec& state_spec,
                             double tol, int max_iter,
                             const std::vector<Vector>* initial_state_guess = nullptr,
                             const std::vector<Vector>* initial_control_guess = nullptr);

/// Wraps a linear problem in the nonlinear interface (exact factorization,
/// zero expansion residual). Handy for cross-checking the strategies
/// against the direct linear pipeline.
NonlinearProblem nonlinear_from_linear(const LTVProblem& prob);

/// Nonlinear running cost along a trajectory with the problem's
/// (state-dependent) weights.
double nonlinear_cost(const NonlinearProblem& prob, const Trajectory& traj);

/// Piecewise-linear interpolant through grid samples; exact at the nodes.
class GridInterpolant {
public:
    GridInterpolant(const TimeGrid& grid, std::vector<Vector> values);

    Vector operator()(double t) const;
    const std::vector<Vector>& values() const { return values_; }

private:
    TimeGrid grid_;
    std::vector<Vector> values_;
};

} // namespace ricmag
