// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors
//
// Integrator families and the commutator-free exponential propagators
// built from weighted samples of a time-dependent generator M(t).

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "core/dense.hpp"

namespace ricmag {

enum class IntegratorFamily {
    Magnus2Midpoint,
    Magnus2Trapezoidal,
    Magnus4Gauss,
    Magnus4Simpson,
    EulerExplicit,
    EulerImplicit,
    RkImplicitMidpoint,
    RkTrapezoidal,
};

enum class StepDirection { Forward, Backward };

enum class PositivityClass { Unconditional, Conditional };

struct QuadratureWeight {
    double node;   // c_i in [0, 1], offset within the step
    double weight; // b_i
};

/// Describes one integrator family: where the generator is sampled within
/// a step and how the samples combine.
///
/// For the exponential (Magnus) families the forward propagator over
/// [t, t+h] is the left-to-right product of factors
///   exp(h * sum_i factors[k][i] * M(t + nodes[i]*h)),
/// with factors.back() applied first (rightmost). The one-exponential
/// second-order rules have a single factor; the fourth-order
/// commutator-free rules have two.
struct IntegratorSpec {
    IntegratorFamily family = IntegratorFamily::Magnus2Trapezoidal;
    std::vector<double> nodes;
    std::vector<std::vector<double>> factors;

    static IntegratorSpec of(IntegratorFamily family);
    static std::optional<IntegratorFamily> parse(std::string_view name);

    bool is_magnus() const;
    bool is_fourth_order() const;
    int sample_count() const { return static_cast<int>(nodes.size()); }

    /// Flattened (node, weight) pairs across all exponential factors; for
    /// the baseline Runge-Kutta/Euler families, the nodal weights of the
    /// underlying quadrature.
    std::vector<QuadratureWeight> quadrature_weights() const;
};

std::string_view integrator_name(IntegratorFamily family);

/// Single step of the exponential propagator: the product of matrix
/// exponentials prescribed by `spec` from generator samples
/// `samples[i] = M(t + nodes[i]*h)`. The backward direction returns the
/// exact inverse map (negated exponents, factor order reversed).
/// Only valid for the Magnus families; node counts must match the spec.
Matrix magnus_step(std::span<const Matrix> samples, const IntegratorSpec& spec, double h,
                   StepDirection direction);

/// Classifies the spec's quadrature: `Unconditional` when every weight is
/// positive (the weighted sample sum of a positive definite map stays
/// positive definite for every h), `Conditional` when a negative weight
/// restricts that to small enough steps. Requires a positive weight sum.
PositivityClass quadrature_positivity_class(const IntegratorSpec& spec);

} // namespace ricmag
