// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#include "core/riccati.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"

namespace ricmag {

namespace {

constexpr double kRestartCondition = 1e6;
constexpr double kFailCondition = 1e8;

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector vec(const Matrix& m)
{
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index n)
{
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

// Riccati vector field f(P) = -P A - A^T P + P S P - Q with frozen coefficients.
struct RiccatiField {
    Matrix a, s, q;

    Matrix operator()(const Matrix& p) const
    {
        return -p * a - a.transpose() * p + p * s * p - q;
    }

    // Frechet derivative f'(P)[H] = -H A - A^T H + H S P + P S H in
    // Kronecker form (column-major vec).
    Matrix jacobian(const Matrix& p) const
    {
        const Eigen::Index n = a.rows();
        const Matrix id = Matrix::Identity(n, n);
        return -kron(a.transpose(), id) - kron(id, a.transpose())
               + kron((s * p).transpose(), id) + kron(id, p * s);
    }
};

// Solves G(P) = P + c0 + gamma * f(alpha P + beta K) = 0 by damped Newton,
// started from K. This is the exact implicit stage of the baseline schemes.
Matrix newton_implicit_stage(const RiccatiField& field, const Matrix& k, const Matrix& c0,
                             double gamma, double alpha, double beta, int node)
{
    const Eigen::Index n = k.rows();
    const Matrix id_big = Matrix::Identity(n * n, n * n);
    const double tol = 1e-12 * std::max(1.0, k.norm());

    Matrix p = k;
    auto residual = [&](const Matrix& cand) -> Matrix {
        return cand + c0 + gamma * field(alpha * cand + beta * k);
    };

    Matrix g = residual(p);
    for (int iter = 0; iter < 50; ++iter) {
        if (!all_finite(g)) {
            std::ostringstream msg;
            msg << "implicit stage produced non-finite values at node " << node;
            fail(ErrorCode::Diverged, msg.str());
        }
        if (g.norm() <= tol)
            return p;

        const Matrix ptilde = alpha * p + beta * k;
        const Matrix jac = id_big + gamma * alpha * field.jacobian(ptilde);
        const Vector delta = jac.partialPivLu().solve(vec(g));
        const Matrix step = unvec(delta, n);

        double lambda = 1.0;
        Matrix p_next = p - step;
        Matrix g_next = residual(p_next);
        for (int halving = 0; halving < 12 && (!all_finite(g_next) || g_next.norm() >= g.norm());
             ++halving) {
            lambda *= 0.5;
            p_next = p - lambda * step;
            g_next = residual(p_next);
        }
        p = p_next;
        g = g_next;
    }
    std::ostringstream msg;
    msg << "implicit stage Newton did not reach residual 1e-12 within 50 iterations at node "
        << node << " (residual " << g.norm() << ")";
    fail(ErrorCode::NoConvergence, msg.str());
}

void record_node(RiccatiSolution& sol, int node, const Matrix& p_raw, double w_cond)
{
    sol.symmetry_defects[node] = symmetry_defect(p_raw);
    const Matrix p_sym = symmetrize(p_raw);
    sol.p[node] = p_sym;
    sol.min_eigenvalues[node] = spd_report(p_sym).min_eigenvalue;
    sol.w_condition[node] = w_cond;
}

RiccatiSolution make_solution(const TimeGrid& grid, int state_dim)
{
    RiccatiSolution sol;
    sol.grid = grid;
    sol.p.assign(grid.node_count(), Matrix::Zero(state_dim, state_dim));
    sol.min_eigenvalues.assign(grid.node_count(), 0.0);
    sol.w_condition.assign(grid.node_count(), std::numeric_limits<double>::quiet_NaN());
    sol.symmetry_defects.assign(grid.node_count(), 0.0);
    return sol;
}

void check_final_condition(const LTVProblem& prob, const Matrix& p_final)
{
    if (p_final.rows() != prob.state_dim || p_final.cols() != prob.state_dim)
        fail(ErrorCode::InvalidArgument, "riccati: final condition has wrong dimensions");
    if (!all_finite(p_final))
        fail(ErrorCode::InvalidArgument, "riccati: final condition has non-finite entries");
    if (symmetry_defect(p_final) > 1e-9 * std::max(1.0, p_final.norm()))
        fail(ErrorCode::InvalidArgument, "riccati: final condition must be symmetric");
}

} // namespace

double RiccatiSolution::min_eigenvalue_global() const
{
    double min_eig = std::numeric_limits<double>::infinity();
    for (double e : min_eigenvalues)
        min_eig = std::min(min_eig, e);
    return min_eig;
}

RiccatiSolution riccati_backward(const LTVProblem& prob, const TimeGrid& grid,
                                 const IntegratorSpec& spec, const Matrix& p_final)
{
    if (!spec.is_magnus())
        fail(ErrorCode::InvalidArgument,
             "riccati_backward integrates the linear embedding and needs a Magnus family; "
             "use riccati_backward_direct for the baseline schemes");
    check_final_condition(prob, p_final);

    const int n = prob.state_dim;
    RiccatiSolution sol = make_solution(grid, n);
    record_node(sol, grid.steps, p_final, 1.0);

    Matrix stacked(2 * n, n);
    stacked.topRows(n) = sol.p[grid.steps];
    stacked.bottomRows(n) = Matrix::Identity(n, n);

    std::vector<Matrix> samples(spec.nodes.size());
    for (int node = grid.steps - 1; node >= 0; --node) {
        const double t_lo = grid.node(node);
        for (size_t i = 0; i < spec.nodes.size(); ++i)
            samples[i] = hamiltonian(prob, t_lo + spec.nodes[i] * grid.h);

        const Matrix propagator = magnus_step(samples, spec, grid.h, StepDirection::Backward);
        stacked = propagator * stacked;
        if (!all_finite(stacked)) {
            std::ostringstream msg;
            msg << "riccati_backward: non-finite propagation at node " << node;
            fail(ErrorCode::Diverged, msg.str());
        }

        const Matrix v = stacked.topRows(n);
        const Matrix w = stacked.bottomRows(n);
        const double cond = condition_estimate(w);
        if (!(cond < kFailCondition)) {
            std::ostringstream msg;
            msg << "riccati_backward: W is singular to tolerance at node " << node
                << " (condition estimate " << cond << "); P = V W^{-1} is not defined there";
            fail(ErrorCode::Singular, msg.str());
        }

        Matrix p_raw;
        try {
            p_raw = solve_linear(w.transpose(), v.transpose()).transpose();
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "riccati_backward: failed to invert W at node " << node << ": " << e.what();
            fail(ErrorCode::Singular, msg.str());
        }
        record_node(sol, node, p_raw, cond);

        // Long horizons degrade the embedding; restart it from the recovered
        // P before the conditioning hits the failure threshold.
        if (cond > kRestartCondition) {
            stacked.topRows(n) = sol.p[node];
            stacked.bottomRows(n) = Matrix::Identity(n, n);
        }
    }
    return sol;
}

RiccatiSolution riccati_backward_direct(const LTVProblem& prob, const TimeGrid& grid,
                                        const IntegratorSpec& spec, const Matrix& p_final)
{
    switch (spec.family) {
    case IntegratorFamily::EulerExplicit:
    case IntegratorFamily::EulerImplicit:
    case IntegratorFamily::RkImplicitMidpoint:
    case IntegratorFamily::RkTrapezoidal:
        break;
    default:
        fail(ErrorCode::InvalidArgument,
             "riccati_backward_direct supports the Euler/RK baselines; "
             "use riccati_backward for the Magnus families");
    }
    check_final_condition(prob, p_final);

    const double h = grid.h;
    RiccatiSolution sol = make_solution(grid, prob.state_dim);
    record_node(sol, grid.steps, p_final, std::numeric_limits<double>::quiet_NaN());

    auto field_at = [&](double t) -> RiccatiField {
        return RiccatiField{prob.a(t), prob.s(t), prob.q(t)};
    };

    for (int node = grid.steps - 1; node >= 0; --node) {
        const Matrix& k = sol.p[node + 1];
        const double t_lo = grid.node(node);
        const double t_hi = grid.node(node + 1);
        Matrix p_raw;

        switch (spec.family) {
        case IntegratorFamily::EulerExplicit:
            p_raw = k - h * field_at(t_hi)(k);
            break;
        case IntegratorFamily::EulerImplicit:
            p_raw = newton_implicit_stage(field_at(t_lo), k, -k, h, 1.0, 0.0, node);
            break;
        case IntegratorFamily::RkImplicitMidpoint:
            p_raw = newton_implicit_stage(field_at(0.5 * (t_lo + t_hi)), k, -k, h, 0.5, 0.5, node);
            break;
        case IntegratorFamily::RkTrapezoidal: {
            const Matrix c0 = -k + 0.5 * h * field_at(t_hi)(k);
            p_raw = newton_implicit_stage(field_at(t_lo), k, c0, 0.5 * h, 1.0, 0.0, node);
            break;
        }
        default:
            fail(ErrorCode::Internal, "riccati_backward_direct: unreachable family");
        }

        if (!all_finite(p_raw)) {
            std::ostringstream msg;
            msg << "riccati_backward_direct: non-finite P at node " << node;
            fail(ErrorCode::Diverged, msg.str());
        }
        record_node(sol, node, p_raw, std::numeric_limits<double>::quiet_NaN());
    }
    return sol;
}

Matrix solve_lyapunov(const Matrix& f, const Matrix& c)
{
    const Eigen::Index n = f.rows();
    if (f.cols() != n || c.rows() != n || c.cols() != n)
        fail(ErrorCode::InvalidArgument, "solve_lyapunov: dimension mismatch");
    const Matrix id = Matrix::Identity(n, n);
    const Matrix lhs = kron(id, f.transpose()) + kron(f.transpose(), id);
    const Eigen::FullPivLU<Matrix> lu(lhs);
    if (!lu.isInvertible())
        fail(ErrorCode::Singular, "solve_lyapunov: singular Lyapunov operator");
    Matrix p = unvec(lu.solve(-vec(c)), n);
    if (!all_finite(p))
        fail(ErrorCode::Singular, "solve_lyapunov: non-finite solution");
    if (symmetry_defect(c) <= 1e-12 * std::max(1.0, c.norm()))
        p = symmetrize(p);
    return p;
}

namespace {

double care_residual_norm(const Matrix& a, const Matrix& s, const Matrix& q, const Matrix& p)
{
    return (a.transpose() * p + p * a - p * s * p + q).norm();
}

// Magnitude of the terms entering the residual; the roundoff floor of any
// double-precision solve sits a few epsilon below this.
double care_scale(const Matrix& a, const Matrix& s, const Matrix& q, const Matrix& p)
{
    return std::max(1.0, q.norm() + 2.0 * a.norm() * p.norm() + s.norm() * p.norm() * p.norm());
}

double max_real_eigenvalue(const Matrix& m)
{
    const Eigen::EigenSolver<Matrix> es(m, false);
    if (es.info() != Eigen::Success)
        fail(ErrorCode::Internal, "eigensolver failed");
    return es.eigenvalues().real().maxCoeff();
}

// Quadratically convergent once started from a stabilizing iterate.
Matrix newton_kleinman(const Matrix& a, const Matrix& s, const Matrix& q, Matrix p)
{
    double best_res = care_residual_norm(a, s, q, p);
    Matrix best = p;
    int non_improving = 0;
    for (int iter = 0; iter < 60; ++iter) {
        const Matrix f = a - s * p;
        p = solve_lyapunov(f, q + p * s * p);
        if (!all_finite(p))
            fail(ErrorCode::AreFailure, "solve_are: Newton-Kleinman iteration diverged");
        const double res = care_residual_norm(a, s, q, p);
        if (res < best_res) {
            best_res = res;
            best = p;
            non_improving = 0;
        } else if (++non_improving >= 3) {
            break; // roundoff floor (or a barely stabilizable problem)
        }
        if (res <= 1e-14 * care_scale(a, s, q, p))
            break;
    }
    return best;
}

// Stable invariant subspace of the Hamiltonian [[A, -S], [-Q, -A^T]].
Matrix invariant_subspace_solution(const Matrix& a, const Matrix& s, const Matrix& q)
{
    const Eigen::Index n = a.rows();
    Matrix ham(2 * n, 2 * n);
    ham.topLeftCorner(n, n) = a;
    ham.topRightCorner(n, n) = -s;
    ham.bottomLeftCorner(n, n) = -q;
    ham.bottomRightCorner(n, n) = -a.transpose();

    const Eigen::EigenSolver<Matrix> es(ham);
    if (es.info() != Eigen::Success)
        fail(ErrorCode::AreFailure, "solve_are: Hamiltonian eigendecomposition failed");

    const double axis_tol = 1e-9 * std::max(1.0, ham.norm());
    Eigen::MatrixXcd basis(2 * n, n);
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        if (es.eigenvalues()(i).real() < -axis_tol) {
            if (count == n)
                fail(ErrorCode::AreFailure, "solve_are: stable subspace has excess dimension");
            basis.col(count++) = es.eigenvectors().col(i);
        }
    }
    if (count != n)
        fail(ErrorCode::AreFailure,
             "solve_are: Hamiltonian has eigenvalues on the imaginary axis to tolerance; "
             "no stabilizing solution");

    const Eigen::MatrixXcd u1 = basis.topRows(n);
    const Eigen::MatrixXcd u2 = basis.bottomRows(n);
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(u1.transpose());
    if (!lu.isInvertible())
        fail(ErrorCode::AreFailure, "solve_are: stable subspace is not a graph over the state");
    const Eigen::MatrixXcd pt = lu.solve(u2.transpose());
    return symmetrize(pt.transpose().real());
}

} // namespace

Matrix solve_are(const Matrix& a_in, const Matrix& s_in, const Matrix& q_in,
                 const Matrix* warm_start)
{
    const Eigen::Index n = a_in.rows();
    if (a_in.cols() != n || s_in.rows() != n || s_in.cols() != n || q_in.rows() != n
        || q_in.cols() != n)
        fail(ErrorCode::InvalidArgument, "solve_are: dimension mismatch");
    if (!all_finite(a_in) || !all_finite(s_in) || !all_finite(q_in))
        fail(ErrorCode::InvalidArgument, "solve_are: non-finite entries");

    const Matrix& a = a_in;
    const Matrix s = symmetrize(s_in);
    const Matrix q = symmetrize(q_in);

    Matrix p;
    bool have_stabilizing_seed = false;
    if (warm_start != nullptr && warm_start->rows() == n && warm_start->cols() == n
        && all_finite(*warm_start)) {
        p = symmetrize(*warm_start);
        have_stabilizing_seed = max_real_eigenvalue(a - s * p) < 0.0;
    }
    if (!have_stabilizing_seed) {
        // Seed: Lyapunov solve of the shifted (Hurwitz) dynamics.
        try {
            const double shift = std::max(0.0, max_real_eigenvalue(a)) + 1.0;
            const Matrix f0 = a - shift * Matrix::Identity(n, n);
            const Matrix q_reg = q + 1e-6 * std::max(1.0, q.norm()) * Matrix::Identity(n, n);
            p = solve_lyapunov(f0, q_reg);
            have_stabilizing_seed = max_real_eigenvalue(a - s * p) < 0.0;
        } catch (const Error&) {
            have_stabilizing_seed = false;
        }
    }

    if (have_stabilizing_seed) {
        try {
            p = newton_kleinman(a, s, q, p);
        } catch (const Error&) {
            have_stabilizing_seed = false;
        }
    }

    // Accept at 1e-8 absolute, relaxed only by the roundoff floor of the
    // problem's own magnitude (barely stabilizable pairs push ||P|| up and
    // with it the smallest representable residual).
    auto res_tol = [&](const Matrix& cand) {
        return std::max(1e-8, 1e-12 * care_scale(a, s, q, cand));
    };
    if (!have_stabilizing_seed || care_residual_norm(a, s, q, p) > res_tol(p)
        || max_real_eigenvalue(a - s * p) >= 0.0) {
        p = invariant_subspace_solution(a, s, q);
        p = newton_kleinman(a, s, q, p); // polish
    }

    if (care_residual_norm(a, s, q, p) > res_tol(p))
        fail(ErrorCode::AreFailure, "solve_are: residual tolerance not met");
    if (max_real_eigenvalue(a - s * p) >= 0.0)
        fail(ErrorCode::AreFailure, "solve_are: computed solution is not stabilizing");
    return p;
}

} // namespace ricmag
