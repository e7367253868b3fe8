// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#include "core/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"

namespace ricmag {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<Vector> homotopy_guess(const TimeGrid& grid, const Vector& x0)
{
    std::vector<Vector> guess(grid.node_count());
    for (int k = 0; k < grid.node_count(); ++k) {
        const double theta = (grid.node(k) - grid.t0) / (grid.tf - grid.t0);
        guess[k] = (1.0 - theta) * x0;
    }
    return guess;
}

double stacked_norm(const std::vector<Vector>& a, const std::vector<Vector>& b)
{
    double sum = 0.0;
    for (size_t k = 0; k < a.size(); ++k)
        sum += (a[k] - b[k]).squaredNorm();
    return std::sqrt(sum);
}

// Freezes the factored coefficients along a state iterate.
LTVProblem frozen_problem(const NonlinearProblem& prob, const GridInterpolant& x_iter)
{
    LTVProblem lin;
    lin.state_dim = prob.state_dim;
    lin.control_dim = prob.control_dim;
    lin.a = [&prob, x_iter](double t) { return prob.sdre_a(t, x_iter(t)); };
    lin.b = [&prob, x_iter](double t) { return prob.sdre_b(t, x_iter(t)); };
    lin.q = [&prob, x_iter](double t) { return prob.q(t, x_iter(t)); };
    lin.r = [&prob, x_iter](double t) { return prob.r(t, x_iter(t)); };
    return lin;
}

// Linearization around (X^k, u^k): system matrices and expansion residual.
LTVProblem taylor_problem(const NonlinearProblem& prob, const GridInterpolant& x_iter,
                          const GridInterpolant& u_iter)
{
    LTVProblem lin;
    lin.state_dim = prob.state_dim;
    lin.control_dim = prob.control_dim;
    lin.a = [&prob, x_iter, u_iter](double t) {
        const Vector x = x_iter(t);
        return Matrix(prob.jac_x_fa(t, x) + prob.jac_x_fb(t, x, u_iter(t)));
    };
    lin.b = [&prob, x_iter, u_iter](double t) { return prob.jac_u_fb(t, x_iter(t), u_iter(t)); };
    lin.q = [&prob, x_iter](double t) { return prob.q(t, x_iter(t)); };
    lin.r = [&prob, x_iter](double t) { return prob.r(t, x_iter(t)); };
    return lin;
}

VectorFn taylor_residual(const NonlinearProblem& prob, const LTVProblem& lin,
                         const GridInterpolant& x_iter, const GridInterpolant& u_iter)
{
    return [&prob, &lin, x_iter, u_iter](double t) {
        const Vector x = x_iter(t);
        const Vector u = u_iter(t);
        return Vector(prob.f_a(t, x) + prob.f_b(t, x, u) - lin.a(t) * x - lin.b(t) * u);
    };
}

RiccatiSolution backward_pass(const LTVProblem& lin, const TimeGrid& grid,
                              const IntegratorSpec& spec)
{
    const Matrix p_final = Matrix::Zero(lin.state_dim, lin.state_dim);
    return spec.is_magnus() ? riccati_backward(lin, grid, spec, p_final)
                            : riccati_backward_direct(lin, grid, spec, p_final);
}

// The feedforward equation reuses nodal P values, so families sampling
// between nodes fall back to the trapezoidal exponential rule.
IntegratorSpec feedforward_spec(const IntegratorSpec& riccati_spec)
{
    switch (riccati_spec.family) {
    case IntegratorFamily::Magnus2Trapezoidal:
    case IntegratorFamily::EulerExplicit:
    case IntegratorFamily::EulerImplicit:
    case IntegratorFamily::RkTrapezoidal:
        return riccati_spec;
    default:
        return IntegratorSpec::of(IntegratorFamily::Magnus2Trapezoidal);
    }
}

Trajectory guess_trajectory(const TimeGrid& grid, const std::vector<Vector>& states, int m)
{
    Trajectory traj;
    traj.grid = grid;
    traj.states = states;
    traj.controls.assign(grid.node_count(), Vector::Zero(m));
    traj.cost = kInf;
    return traj;
}

bool within_state_bounds(const NonlinearProblem& prob, const Trajectory& traj)
{
    if (!prob.feasibility)
        return true;
    for (size_t k = 0; k < traj.states.size(); ++k)
        if (!prob.feasibility(traj.grid.node(static_cast<int>(k)), traj.states[k]))
            return false;
    return true;
}

} // namespace

GridInterpolant::GridInterpolant(const TimeGrid& grid, std::vector<Vector> values)
    : grid_(grid), values_(std::move(values))
{
    if (static_cast<int>(values_.size()) != grid_.node_count())
        fail(ErrorCode::InvalidArgument, "GridInterpolant: sample count does not match grid");
}

Vector GridInterpolant::operator()(double t) const
{
    double theta = (t - grid_.t0) / grid_.h;
    theta = std::clamp(theta, 0.0, static_cast<double>(grid_.steps));
    const double snapped = std::round(theta);
    if (std::abs(theta - snapped) < 1e-9)
        return values_[static_cast<size_t>(snapped)];
    const int k = static_cast<int>(std::floor(theta));
    const double w = theta - k;
    return (1.0 - w) * values_[k] + w * values_[k + 1];
}

NonlinearProblem nonlinear_from_linear(const LTVProblem& prob)
{
    NonlinearProblem nl;
    nl.state_dim = prob.state_dim;
    nl.control_dim = prob.control_dim;
    nl.f_a = [prob](double t, const Vector& x) { return Vector(prob.a(t) * x); };
    nl.f_b = [prob](double t, const Vector&, const Vector& u) { return Vector(prob.b(t) * u); };
    nl.sdre_a = [prob](double t, const Vector&) { return prob.a(t); };
    nl.sdre_b = [prob](double t, const Vector&) { return prob.b(t); };
    nl.jac_x_fa = [prob](double t, const Vector&) { return prob.a(t); };
    nl.jac_x_fb = [n = prob.state_dim](double, const Vector&, const Vector&) {
        return Matrix(Matrix::Zero(n, n));
    };
    nl.jac_u_fb = [prob](double t, const Vector&, const Vector&) { return prob.b(t); };
    nl.q = [prob](double t, const Vector&) { return prob.q(t); };
    nl.r = [prob](double t, const Vector&) { return prob.r(t); };
    return nl;
}

double nonlinear_cost(const NonlinearProblem& prob, const Trajectory& traj)
{
    std::vector<double> g(traj.states.size());
    for (size_t k = 0; k < traj.states.size(); ++k) {
        const double t = traj.grid.node(static_cast<int>(k));
        const Vector& x = traj.states[k];
        const Vector& u = traj.controls[k];
        g[k] = x.dot(prob.q(t, x) * x) + u.dot(prob.r(t, x) * u);
    }
    return trapezoid(traj.grid, g);
}

NonlinearResult solve_sdre(const NonlinearProblem& prob, const TimeGrid& grid, const Vector& x0,
                           IntegratorFamily stepper)
{
    if (stepper != IntegratorFamily::EulerExplicit && stepper != IntegratorFamily::EulerImplicit)
        fail(ErrorCode::InvalidArgument,
             "solve_sdre steps the closed loop with euler-explicit or euler-implicit");
    if (x0.size() != prob.state_dim)
        fail(ErrorCode::InvalidArgument, "solve_sdre: initial state has wrong dimension");

    const int n = prob.state_dim;
    const double h = grid.h;

    NonlinearResult result;
    result.trajectory.grid = grid;
    result.trajectory.states.assign(grid.node_count(), Vector::Zero(n));
    result.trajectory.controls.assign(grid.node_count(), Vector::Zero(prob.control_dim));
    result.min_eig_p.assign(grid.node_count(), 0.0);
    result.trajectory.states[0] = x0;

    Matrix p_prev; // warm start for the node-to-node ARE solves
    auto riccati_at = [&](double t, const Vector& x) -> Matrix {
        const Matrix a = prob.sdre_a(t, x);
        const Matrix b = prob.sdre_b(t, x);
        const Matrix r = prob.r(t, x);
        const Matrix s = symmetrize(b * solve_linear(r, b.transpose()));
        const Matrix p =
            solve_are(a, s, prob.q(t, x), p_prev.size() > 0 ? &p_prev : nullptr);
        p_prev = p;
        return p;
    };

    for (int k = 0; k <= grid.steps; ++k) {
        const double t = grid.node(k);
        Vector& x = result.trajectory.states[k];
        Matrix p;
        if (k == 0 || stepper == IntegratorFamily::EulerExplicit) {
            p = riccati_at(t, x);
        } else {
            // Implicit Euler: the coefficients and the Riccati solution are
            // evaluated at the unknown end point; iterate the frozen linear
            // solve to the fixed point.
            const Vector& x_prev = result.trajectory.states[k - 1];
            Vector y = x_prev;
            bool settled = false;
            for (int pass = 0; pass < 50; ++pass) {
                p = riccati_at(t, y);
                const Matrix d =
                    prob.sdre_a(t, y)
                    - symmetrize(prob.sdre_b(t, y)
                                 * solve_linear(prob.r(t, y), prob.sdre_b(t, y).transpose()))
                          * p;
                const Vector y_next =
                    solve_linear(Matrix::Identity(n, n) - h * d, x_prev);
                const double delta = (y_next - y).norm();
                y = y_next;
                if (!y.allFinite()) {
                    std::ostringstream msg;
                    msg << "solve_sdre: non-finite state at node " << k;
                    fail(ErrorCode::Diverged, msg.str());
                }
                if (delta <= 1e-10 * std::max(1.0, x_prev.norm())) {
                    settled = true;
                    break;
                }
            }
            if (!settled) {
                std::ostringstream msg;
                msg << "solve_sdre: implicit Euler fixed point did not settle at node " << k;
                fail(ErrorCode::NoConvergence, msg.str());
            }
            x = y;
            p = riccati_at(t, x);
        }

        const Matrix b = prob.sdre_b(t, x);
        const Matrix r = prob.r(t, x);
        result.trajectory.controls[k] = -solve_linear(r, b.transpose() * (p * x));
        result.min_eig_p[k] = spd_report(p).min_eigenvalue;

        if (k < grid.steps && stepper == IntegratorFamily::EulerExplicit) {
            const Matrix s = symmetrize(b * solve_linear(r, b.transpose()));
            const Matrix d = prob.sdre_a(t, x) - s * p;
            result.trajectory.states[k + 1] = x + h * d * x;
            if (!result.trajectory.states[k + 1].allFinite()) {
                std::ostringstream msg;
                msg << "solve_sdre: non-finite state at node " << k + 1;
                fail(ErrorCode::Diverged, msg.str());
            }
        }
    }

    result.trajectory.cost = nonlinear_cost(prob, result.trajectory);
    result.report.converged = true;
    result.min_eig_p_global =
        *std::min_element(result.min_eig_p.begin(), result.min_eig_p.end());
    result.feasible = within_state_bounds(prob, result.trajectory);
    return result;
}

NonlinearResult solve_waveform(const NonlinearProblem& prob, const TimeGrid& grid,
                               const Vector& x0, const IntegratorSpec& riccati_spec,
                               const IntegratorSpec& state_spec, double tol, int max_iter,
                               const std::vector<Vector>* initial_guess)
{
    std::vector<Vector> iterate = initial_guess ? *initial_guess : homotopy_guess(grid, x0);
    if (static_cast<int>(iterate.size()) != grid.node_count())
        fail(ErrorCode::InvalidArgument, "solve_waveform: initial guess does not match grid");

    NonlinearResult result;
    result.trajectory = guess_trajectory(grid, iterate, prob.control_dim);
    result.min_eig_p_global = kInf;

    for (int iter = 1; iter <= max_iter; ++iter) {
        try {
            const LTVProblem lin = frozen_problem(prob, GridInterpolant(grid, iterate));
            const RiccatiSolution rsol = backward_pass(lin, grid, riccati_spec);
            Trajectory traj = state_forward(lin, rsol, x0, state_spec);

            const double residual = stacked_norm(traj.states, iterate);
            result.report.residuals.push_back(residual);
            result.report.iterations = iter;
            result.min_eig_p = rsol.min_eigenvalues;
            result.min_eig_p_global =
                std::min(result.min_eig_p_global, rsol.min_eigenvalue_global());

            iterate = traj.states;
            traj.cost = nonlinear_cost(prob, traj);
            result.trajectory = traj;

            if (!std::isfinite(residual))
                fail(ErrorCode::Diverged, "solve_waveform: non-finite iterate");
            if (residual < tol) {
                result.report.converged = true;
                result.feasible = within_state_bounds(prob, result.trajectory);
                return result;
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Diverged)
                throw;
            result.report.diverged = true;
            result.trajectory.cost = kInf;
            result.feasible = false;
            return result;
        }
    }
    result.feasible = within_state_bounds(prob, result.trajectory);
    return result; // max_iter exhausted with finite iterates
}

NonlinearResult solve_taylor(const NonlinearProblem& prob, const TimeGrid& grid, const Vector& x0,
                             const IntegratorSpec& riccati_spec, const IntegratorSpec& state_spec,
                             double tol, int max_iter,
                             const std::vector<Vector>* initial_state_guess,
                             const std::vector<Vector>* initial_control_guess)
{
    std::vector<Vector> x_iter =
        initial_state_guess ? *initial_state_guess : homotopy_guess(grid, x0);
    std::vector<Vector> u_iter(grid.node_count(), Vector::Zero(prob.control_dim));
    if (initial_control_guess)
        u_iter = *initial_control_guess;
    if (static_cast<int>(x_iter.size()) != grid.node_count()
        || static_cast<int>(u_iter.size()) != grid.node_count())
        fail(ErrorCode::InvalidArgument, "solve_taylor: initial guess does not match grid");

    const IntegratorSpec ff_spec = feedforward_spec(riccati_spec);

    NonlinearResult result;
    result.trajectory = guess_trajectory(grid, x_iter, prob.control_dim);
    result.min_eig_p_global = kInf;

    for (int iter = 1; iter <= max_iter; ++iter) {
        try {
            const GridInterpolant x_interp(grid, x_iter);
            const GridInterpolant u_interp(grid, u_iter);
            const LTVProblem lin = taylor_problem(prob, x_interp, u_interp);
            const VectorFn cbar = taylor_residual(prob, lin, x_interp, u_interp);

            const RiccatiSolution rsol = backward_pass(lin, grid, riccati_spec);
            const FeedforwardSolution ff = feedforward_backward(lin, rsol, cbar, ff_spec);
            Trajectory traj = state_forward_inhomogeneous(lin, rsol, ff, cbar, x0, state_spec);

            const double residual = stacked_norm(traj.states, x_iter);
            result.report.residuals.push_back(residual);
            result.report.iterations = iter;
            result.min_eig_p = rsol.min_eigenvalues;
            result.min_eig_p_global =
                std::min(result.min_eig_p_global, rsol.min_eigenvalue_global());

            x_iter = traj.states;
            u_iter = traj.controls;
            traj.cost = nonlinear_cost(prob, traj);
            result.trajectory = traj;

            if (!std::isfinite(residual))
                fail(ErrorCode::Diverged, "solve_taylor: non-finite iterate");
            if (residual < tol) {
                result.report.converged = true;
                result.feasible = within_state_bounds(prob, result.trajectory);
                return result;
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Diverged)
                throw;
            result.report.diverged = true;
            result.trajectory.cost = kInf;
            result.feasible = false;
            return result;
        }
    }
    result.feasible = within_state_bounds(prob, result.trajectory);
    return result;
}

} // namespace ricmag
