// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors
//
// Forward state integration under the closed-loop generator
// D(t) = A(t) - S(t) P(t), control extraction, the backward disturbance
// feedforward equation, and homogenization of inhomogeneous linear systems.
//
// All propagation here consumes the Riccati solution at grid nodes only;
// integrator families whose samples fall between nodes are rejected unless
// a coarser state stride makes the samples land on stored nodes.

#pragma once

#include "core/riccati.hpp"

namespace ricmag {

/// Co-state of the disturbance feedforward equation, V_N = 0.
struct FeedforwardSolution {
    TimeGrid grid;
    std::vector<Vector> v; // v_n, n = 0..N
};

/// Integrates x' = (A(t) - S(t) P(t)) x forward from x0 on the Riccati
/// grid coarsened by `stride` (state step = stride * h). Midpoint-sampling
/// families need an even stride so their samples land on stored nodes;
/// magnus4-gauss is not available for the state pass. Controls and cost
/// are filled in.
Trajectory state_forward(const LTVProblem& prob, const RiccatiSolution& rsol, const Vector& x0,
                         const IntegratorSpec& spec, int stride = 1);

/// Feedback controls u_j = -R^{-1} B^T (P X + V) at the trajectory nodes;
/// `stride` maps trajectory nodes onto Riccati nodes, `ff` adds the
/// feedforward co-state when present.
std::vector<Vector> control_sequence(const LTVProblem& prob, const RiccatiSolution& rsol,
                                     const std::vector<Vector>& states, int stride = 1,
                                     const FeedforwardSolution* ff = nullptr);

/// Backward integration of the disturbance co-state
///   V' = (P S(t) - A(t)^T) V - P C(t),  V(tf) = 0,
/// through the homogenized linear system. A(t), B(t), R(t) are taken from
/// `prob` (the linearized problem), P from `rsol`.
FeedforwardSolution feedforward_backward(const LTVProblem& prob, const RiccatiSolution& rsol,
                                         const VectorFn& c, const IntegratorSpec& spec);

/// Augments y' = M(t) y + C(t) into the homogeneous system
///   d/dt [y; 1] = [[M(t), C(t)], [0, 0]] [y; 1].
MatrixFn homogenize(const MatrixFn& m, const VectorFn& c);

/// Forward pass of the linearized inhomogeneous closed loop
///   x' = (A - S P) x - S V + C,
/// with feedforward controls u = -R^{-1} B^T (P x + V). Used by the
/// Taylor-type linearization loop.
Trajectory state_forward_inhomogeneous(const LTVProblem& prob, const RiccatiSolution& rsol,
                                       const FeedforwardSolution& ff, const VectorFn& c,
                                       const Vector& x0, const IntegratorSpec& spec);

} // namespace ricmag
