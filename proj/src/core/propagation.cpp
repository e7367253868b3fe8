// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#include "core/propagation.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace ricmag {

namespace {

constexpr double kAuxiliaryTol = 1e-10;

// Nodal data of a linear (possibly inhomogeneous) system y' = D(t) y + g(t)
// sampled on the fine grid.
struct NodalSystem {
    std::vector<Matrix> d;
    std::vector<Vector> g; // empty when homogeneous
    bool inhomogeneous() const { return !g.empty(); }
};

Matrix augmented(const Matrix& d, const Vector& g)
{
    const Eigen::Index n = d.rows();
    Matrix out = Matrix::Zero(n + 1, n + 1);
    out.topLeftCorner(n, n) = d;
    out.topRightCorner(n, 1) = g;
    return out;
}

// Maps the spec's sample offsets onto fine-grid indices for the step
// between fine nodes `lo` and `lo + stride`. Throws when a sample does
// not land on a stored node.
std::vector<int> sample_indices(const IntegratorSpec& spec, int lo, int stride)
{
    std::vector<int> idx(spec.nodes.size());
    for (size_t i = 0; i < spec.nodes.size(); ++i) {
        const double pos = spec.nodes[i] * stride;
        const double rounded = std::round(pos);
        if (std::abs(pos - rounded) > 1e-9) {
            std::ostringstream msg;
            msg << integrator_name(spec.family)
                << " samples the generator between stored nodes (offset " << spec.nodes[i]
                << " at stride " << stride << "); no Riccati values exist there";
            fail(ErrorCode::InvalidArgument, msg.str());
        }
        idx[i] = lo + static_cast<int>(rounded);
    }
    return idx;
}

// One linear step of size `big_h` between fine nodes lo and lo+stride
// (forward) or from lo+stride down to lo (backward).
Vector step_linear(const NodalSystem& sys, const IntegratorSpec& spec, int lo, int stride,
                   double big_h, StepDirection direction, const Vector& y_in)
{
    const Eigen::Index n = y_in.size();
    const int hi = lo + stride;
    const double sigma = direction == StepDirection::Forward ? 1.0 : -1.0;
    const int from = direction == StepDirection::Forward ? lo : hi;
    const int to = direction == StepDirection::Forward ? hi : lo;
    const Matrix id = Matrix::Identity(n, n);
    const Vector zero = Vector::Zero(n);
    auto g_at = [&](int node) -> Vector { return sys.inhomogeneous() ? sys.g[node] : zero; };

    if (spec.is_magnus()) {
        const std::vector<int> idx = sample_indices(spec, lo, stride);
        std::vector<Matrix> samples(idx.size());
        for (size_t i = 0; i < idx.size(); ++i)
            samples[i] = sys.inhomogeneous() ? augmented(sys.d[idx[i]], sys.g[idx[i]])
                                             : sys.d[idx[i]];
        const Matrix propagator = magnus_step(samples, spec, big_h, direction);
        if (!sys.inhomogeneous())
            return propagator * y_in;
        Vector aug(n + 1);
        aug.head(n) = y_in;
        aug(n) = 1.0;
        aug = propagator * aug;
        if (std::abs(aug(n) - 1.0) > kAuxiliaryTol)
            fail(ErrorCode::Internal,
                 "homogenized propagation: auxiliary coordinate drifted from 1");
        return aug.head(n);
    }

    switch (spec.family) {
    case IntegratorFamily::EulerExplicit:
        return y_in + sigma * big_h * (sys.d[from] * y_in + g_at(from));
    case IntegratorFamily::EulerImplicit:
        return solve_linear(id - sigma * big_h * sys.d[to],
                            y_in + sigma * big_h * g_at(to));
    case IntegratorFamily::RkTrapezoidal:
        return solve_linear(id - 0.5 * sigma * big_h * sys.d[to],
                            (id + 0.5 * sigma * big_h * sys.d[from]) * y_in
                                + 0.5 * sigma * big_h * (g_at(from) + g_at(to)));
    case IntegratorFamily::RkImplicitMidpoint: {
        const int mid = sample_indices(spec, lo, stride)[0];
        return solve_linear(id - 0.5 * sigma * big_h * sys.d[mid],
                            (id + 0.5 * sigma * big_h * sys.d[mid]) * y_in
                                + sigma * big_h * g_at(mid));
    }
    default:
        fail(ErrorCode::Internal, "step_linear: unreachable family");
    }
}

void check_stride(const TimeGrid& grid, const IntegratorSpec& spec, int stride)
{
    if (stride < 1 || grid.steps % stride != 0)
        fail(ErrorCode::InvalidArgument, "state stride must divide the Riccati step count");
    if (spec.family == IntegratorFamily::Magnus4Gauss)
        fail(ErrorCode::InvalidArgument,
             "magnus4-gauss samples off-grid and cannot reuse the Riccati nodes for the "
             "state pass; use magnus4-simpson");
    // Midpoint-type samples must land on nodes; checked per step anyway,
    // reported early here for a clearer message.
    sample_indices(spec, 0, stride);
}

NodalSystem closed_loop_system(const LTVProblem& prob, const RiccatiSolution& rsol)
{
    NodalSystem sys;
    sys.d.resize(rsol.grid.node_count());
    for (int k = 0; k < rsol.grid.node_count(); ++k) {
        const double t = rsol.grid.node(k);
        sys.d[k] = prob.a(t) - prob.s(t) * rsol.p[k];
    }
    return sys;
}

} // namespace

std::vector<Vector> control_sequence(const LTVProblem& prob, const RiccatiSolution& rsol,
                                     const std::vector<Vector>& states, int stride,
                                     const FeedforwardSolution* ff)
{
    std::vector<Vector> controls(states.size());
    for (size_t j = 0; j < states.size(); ++j) {
        const int node = static_cast<int>(j) * stride;
        if (node >= rsol.grid.node_count())
            fail(ErrorCode::InvalidArgument, "control_sequence: states exceed the Riccati grid");
        const double t = rsol.grid.node(node);
        Vector costate = rsol.p[node] * states[j];
        if (ff != nullptr)
            costate += ff->v[node];
        controls[j] = -solve_linear(prob.r(t), prob.b(t).transpose() * costate);
    }
    return controls;
}

Trajectory state_forward(const LTVProblem& prob, const RiccatiSolution& rsol, const Vector& x0,
                         const IntegratorSpec& spec, int stride)
{
    if (x0.size() != prob.state_dim)
        fail(ErrorCode::InvalidArgument, "state_forward: initial state has wrong dimension");
    if (static_cast<int>(rsol.p.size()) != rsol.grid.node_count())
        fail(ErrorCode::InvalidArgument, "state_forward: Riccati solution does not match its grid");
    check_stride(rsol.grid, spec, stride);

    const NodalSystem sys = closed_loop_system(prob, rsol);
    const double big_h = stride * rsol.grid.h;

    Trajectory traj;
    traj.grid = TimeGrid::uniform(rsol.grid.t0, rsol.grid.tf, rsol.grid.steps / stride);
    traj.states.resize(traj.grid.node_count());
    traj.states[0] = x0;
    for (int j = 0; j < traj.grid.steps; ++j) {
        traj.states[j + 1] = step_linear(sys, spec, j * stride, stride, big_h,
                                         StepDirection::Forward, traj.states[j]);
        if (!traj.states[j + 1].allFinite()) {
            std::ostringstream msg;
            msg << "state_forward: non-finite state at node " << j + 1;
            fail(ErrorCode::Diverged, msg.str());
        }
    }
    traj.controls = control_sequence(prob, rsol, traj.states, stride);
    traj.cost = trajectory_cost(prob, traj);
    return traj;
}

MatrixFn homogenize(const MatrixFn& m, const VectorFn& c)
{
    return [m, c](double t) {
        const Matrix mt = m(t);
        const Vector ct = c(t);
        if (mt.rows() != mt.cols() || ct.size() != mt.rows())
            fail(ErrorCode::InvalidArgument, "homogenize: incompatible shapes");
        return augmented(mt, ct);
    };
}

FeedforwardSolution feedforward_backward(const LTVProblem& prob, const RiccatiSolution& rsol,
                                         const VectorFn& c, const IntegratorSpec& spec)
{
    check_stride(rsol.grid, spec, 1);

    const TimeGrid& grid = rsol.grid;
    NodalSystem sys;
    sys.d.resize(grid.node_count());
    sys.g.resize(grid.node_count());
    for (int k = 0; k < grid.node_count(); ++k) {
        const double t = grid.node(k);
        sys.d[k] = rsol.p[k] * prob.s(t) - prob.a(t).transpose();
        sys.g[k] = -rsol.p[k] * c(t);
    }

    FeedforwardSolution ff;
    ff.grid = grid;
    ff.v.assign(grid.node_count(), Vector::Zero(prob.state_dim));
    for (int node = grid.steps - 1; node >= 0; --node) {
        ff.v[node] = step_linear(sys, spec, node, 1, grid.h, StepDirection::Backward,
                                 ff.v[node + 1]);
        if (!ff.v[node].allFinite()) {
            std::ostringstream msg;
            msg << "feedforward_backward: non-finite co-state at node " << node;
            fail(ErrorCode::Diverged, msg.str());
        }
    }
    return ff;
}

Trajectory state_forward_inhomogeneous(const LTVProblem& prob, const RiccatiSolution& rsol,
                                       const FeedforwardSolution& ff, const VectorFn& c,
                                       const Vector& x0, const IntegratorSpec& spec)
{
    if (!ff.grid.same_as(rsol.grid))
        fail(ErrorCode::InvalidArgument, "state_forward_inhomogeneous: grid mismatch");
    check_stride(rsol.grid, spec, 1);

    const TimeGrid& grid = rsol.grid;
    NodalSystem sys = closed_loop_system(prob, rsol);
    sys.g.resize(grid.node_count());
    for (int k = 0; k < grid.node_count(); ++k) {
        const double t = grid.node(k);
        sys.g[k] = -prob.s(t) * ff.v[k] + c(t);
    }

    Trajectory traj;
    traj.grid = grid;
    traj.states.resize(grid.node_count());
    traj.states[0] = x0;
    for (int j = 0; j < grid.steps; ++j) {
        traj.states[j + 1] =
            step_linear(sys, spec, j, 1, grid.h, StepDirection::Forward, traj.states[j]);
        if (!traj.states[j + 1].allFinite()) {
            std::ostringstream msg;
            msg << "state_forward_inhomogeneous: non-finite state at node " << j + 1;
            fail(ErrorCode::Diverged, msg.str());
        }
    }
    traj.controls = control_sequence(prob, rsol, traj.states, 1, &ff);
    traj.cost = trajectory_cost(prob, traj);
    return traj;
}

} // namespace ricmag
