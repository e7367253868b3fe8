// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors
//
// Backward-in-time integration of the matrix Riccati differential equation
//   P' = -P A(t) - A(t)^T P + P S(t) P - Q(t),   P(tf) given,
// either through the linear embedding
//   d/dt [V; W] = M(t) [V; W],  P = V W^{-1}
// with exponential (Magnus) propagators, or by direct Runge-Kutta/Euler
// stepping of the quadratic field. Also hosts the algebraic Riccati solver
// used by the state-dependent technique.

#pragma once

#include <vector>

#include "core/integrators.hpp"
#include "core/problem.hpp"

namespace ricmag {

/// Grid-sampled Riccati solution with positivity diagnostics.
struct RiccatiSolution {
    TimeGrid grid;
    std::vector<Matrix> p;                // symmetric P_n, n = 0..N (p[N] = final condition)
    std::vector<double> min_eigenvalues;  // smallest eigenvalue of P_n
    std::vector<double> w_condition;      // cond_2(W) per node; NaN for direct methods
    std::vector<double> symmetry_defects; // defect of the raw P_n before symmetrization

    double min_eigenvalue_global() const;
};

/// Integrates the linear V/W embedding backward from [P_f; I] at tf and
/// recovers P_n = V_n W_n^{-1} (symmetrized) at every node. Requires a
/// Magnus family. Restarts the embedding (V <- P_n, W <- I) once cond(W)
/// exceeds 1e6 and fails loudly past 1e8 or when W is singular.
RiccatiSolution riccati_backward(const LTVProblem& prob, const TimeGrid& grid,
                                 const IntegratorSpec& spec, const Matrix& p_final);

/// Steps the Riccati field itself backward with one of the baseline
/// families (explicit/implicit Euler, implicit midpoint, trapezoidal RK).
/// Implicit stages are solved exactly by a damped Newton iteration on the
/// matrix equation (residual 1e-12). Positivity may be lost; the recorded
/// min_eigenvalues expose that.
RiccatiSolution riccati_backward_direct(const LTVProblem& prob, const TimeGrid& grid,
                                        const IntegratorSpec& spec, const Matrix& p_final);

/// Stabilizing symmetric psd solution of
///   0 = -P A - A^T P + P S P - Q
/// by Newton-Kleinman iteration seeded from a Lyapunov solve of the shifted
/// (stabilized) dynamics, falling back to the Hamiltonian invariant-subspace
/// method when the seed is not stabilizing. Residual <= 1e-8.
/// A caller-supplied warm start is used instead of the Lyapunov seed when
/// it is stabilizing (the SDRE loop passes the previous node's solution).
Matrix solve_are(const Matrix& a, const Matrix& s, const Matrix& q,
                 const Matrix* warm_start = nullptr);

/// Solves F^T P + P F + C = 0 (dense Kronecker form; sizes here are tiny).
Matrix solve_lyapunov(const Matrix& f, const Matrix& c);

} // namespace ricmag
