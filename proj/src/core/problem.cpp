// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#include "core/problem.hpp"

#include <sstream>

namespace ricmag {

LTVProblem LTVProblem::constant(const Matrix& a, const Matrix& b, const Matrix& q,
                                const Matrix& r)
{
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(b.cols());
    if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n || r.rows() != m
        || r.cols() != m)
        fail(ErrorCode::InvalidArgument, "LTVProblem: inconsistent matrix dimensions");
    LTVProblem prob;
    prob.state_dim = n;
    prob.control_dim = m;
    prob.a = [a](double) { return a; };
    prob.b = [b](double) { return b; };
    prob.q = [q](double) { return q; };
    prob.r = [r](double) { return r; };
    return prob;
}

Matrix LTVProblem::s(double t) const
{
    const Matrix bt = b(t);
    Matrix rinv_bt;
    try {
        rinv_bt = solve_linear(r(t), bt.transpose());
    } catch (const Error& e) {
        std::ostringstream msg;
        msg << "control weight R(t) at t = " << t << " is not invertible: " << e.what();
        fail(ErrorCode::Singular, msg.str());
    }
    return symmetrize(bt * rinv_bt);
}

Matrix hamiltonian(const LTVProblem& prob, double t)
{
    const int n = prob.state_dim;
    const Matrix at = prob.a(t);
    const Matrix qt = prob.q(t);
    const Matrix st = prob.s(t);
    Matrix m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = -at.transpose();
    m.topRightCorner(n, n) = -qt;
    m.bottomLeftCorner(n, n) = -st;
    m.bottomRightCorner(n, n) = at;
    return m;
}

double trapezoid(const TimeGrid& grid, const std::vector<double>& g)
{
    if (static_cast<int>(g.size()) != grid.node_count())
        fail(ErrorCode::InvalidArgument, "trapezoid: sample count does not match grid");
    double sum = 0.0;
    for (int k = 0; k < grid.steps; ++k)
        sum += 0.5 * grid.h * (g[k] + g[k + 1]);
    return sum;
}

std::vector<double> trapezoid_running(const TimeGrid& grid, const std::vector<double>& g)
{
    if (static_cast<int>(g.size()) != grid.node_count())
        fail(ErrorCode::InvalidArgument, "trapezoid_running: sample count does not match grid");
    std::vector<double> out(g.size(), 0.0);
    for (int k = 1; k < grid.node_count(); ++k)
        out[k] = out[k - 1] + 0.5 * grid.h * (g[k - 1] + g[k]);
    return out;
}

std::vector<double> cost_integrand(const LTVProblem& prob, const Trajectory& traj)
{
    if (traj.states.size() != traj.controls.size())
        fail(ErrorCode::InvalidArgument, "cost_integrand: state/control length mismatch");
    if (static_cast<int>(traj.states.size()) != traj.grid.node_count())
        fail(ErrorCode::InvalidArgument, "cost_integrand: trajectory does not match its grid");
    std::vector<double> g(traj.states.size());
    for (size_t k = 0; k < traj.states.size(); ++k) {
        const double t = traj.grid.node(static_cast<int>(k));
        const Vector& x = traj.states[k];
        const Vector& u = traj.controls[k];
        g[k] = x.dot(prob.q(t) * x) + u.dot(prob.r(t) * u);
    }
    return g;
}

double trajectory_cost(const LTVProblem& prob, const Trajectory& traj)
{
    return trapezoid(traj.grid, cost_integrand(prob, traj));
}

} // namespace ricmag
