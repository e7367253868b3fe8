// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#include "core/integrators.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace ricmag {

namespace {

const double kSqrt3 = std::sqrt(3.0);

} // namespace

IntegratorSpec IntegratorSpec::of(IntegratorFamily family)
{
    IntegratorSpec spec;
    spec.family = family;
    switch (family) {
    case IntegratorFamily::Magnus2Midpoint:
        spec.nodes = {0.5};
        spec.factors = {{1.0}};
        break;
    case IntegratorFamily::Magnus2Trapezoidal:
        spec.nodes = {0.0, 1.0};
        spec.factors = {{0.5, 0.5}};
        break;
    case IntegratorFamily::Magnus4Gauss: {
        // Gauss-Legendre samples; the factor weighting the early sample by
        // beta acts first so the second Magnus term is matched with the
        // right sign (order verified against the order conditions).
        const double alpha = 0.25 - kSqrt3 / 6.0;
        const double beta = 0.25 + kSqrt3 / 6.0;
        spec.nodes = {0.5 - kSqrt3 / 6.0, 0.5 + kSqrt3 / 6.0};
        spec.factors = {{alpha, beta}, {beta, alpha}};
        break;
    }
    case IntegratorFamily::Magnus4Simpson:
        spec.nodes = {0.0, 0.5, 1.0};
        spec.factors = {{-1.0 / 12.0, 4.0 / 12.0, 3.0 / 12.0},
                        {3.0 / 12.0, 4.0 / 12.0, -1.0 / 12.0}};
        break;
    case IntegratorFamily::EulerExplicit:
        spec.nodes = {0.0};
        spec.factors = {{1.0}};
        break;
    case IntegratorFamily::EulerImplicit:
        spec.nodes = {1.0};
        spec.factors = {{1.0}};
        break;
    case IntegratorFamily::RkImplicitMidpoint:
        spec.nodes = {0.5};
        spec.factors = {{1.0}};
        break;
    case IntegratorFamily::RkTrapezoidal:
        spec.nodes = {0.0, 1.0};
        spec.factors = {{0.5, 0.5}};
        break;
    }
    return spec;
}

std::string_view integrator_name(IntegratorFamily family)
{
    switch (family) {
    case IntegratorFamily::Magnus2Midpoint: return "magnus2-midpoint";
    case IntegratorFamily::Magnus2Trapezoidal: return "magnus2-trapezoidal";
    case IntegratorFamily::Magnus4Gauss: return "magnus4-gauss";
    case IntegratorFamily::Magnus4Simpson: return "magnus4-simpson";
    case IntegratorFamily::EulerExplicit: return "euler-explicit";
    case IntegratorFamily::EulerImplicit: return "euler-implicit";
    case IntegratorFamily::RkImplicitMidpoint: return "rk-implicit-midpoint";
    case IntegratorFamily::RkTrapezoidal: return "rk-trapezoidal";
    }
    return "unknown";
}

std::optional<IntegratorFamily> IntegratorSpec::parse(std::string_view name)
{
    for (IntegratorFamily family :
         {IntegratorFamily::Magnus2Midpoint, IntegratorFamily::Magnus2Trapezoidal,
          IntegratorFamily::Magnus4Gauss, IntegratorFamily::Magnus4Simpson,
          IntegratorFamily::EulerExplicit, IntegratorFamily::EulerImplicit,
          IntegratorFamily::RkImplicitMidpoint, IntegratorFamily::RkTrapezoidal}) {
        if (name == integrator_name(family))
            return family;
    }
    return std::nullopt;
}

bool IntegratorSpec::is_magnus() const
{
    switch (family) {
    case IntegratorFamily::Magnus2Midpoint:
    case IntegratorFamily::Magnus2Trapezoidal:
    case IntegratorFamily::Magnus4Gauss:
    case IntegratorFamily::Magnus4Simpson:
        return true;
    default:
        return false;
    }
}

bool IntegratorSpec::is_fourth_order() const
{
    return family == IntegratorFamily::Magnus4Gauss || family == IntegratorFamily::Magnus4Simpson;
}

std::vector<QuadratureWeight> IntegratorSpec::quadrature_weights() const
{
    std::vector<QuadratureWeight> weights;
    for (const auto& factor : factors)
        for (size_t i = 0; i < factor.size(); ++i)
            weights.push_back({nodes[i], factor[i]});
    return weights;
}

Matrix magnus_step(std::span<const Matrix> samples, const IntegratorSpec& spec, double h,
                   StepDirection direction)
{
    if (!spec.is_magnus())
        fail(ErrorCode::InvalidArgument,
             "magnus_step: not an exponential family: " + std::string(integrator_name(spec.family)));
    if (static_cast<int>(samples.size()) != spec.sample_count()) {
        std::ostringstream msg;
        msg << "magnus_step: " << integrator_name(spec.family) << " needs " << spec.sample_count()
            << " generator samples, got " << samples.size();
        fail(ErrorCode::InvalidArgument, msg.str());
    }

    const Eigen::Index dim = samples[0].rows();
    const double sign = direction == StepDirection::Forward ? 1.0 : -1.0;

    Matrix propagator = Matrix::Identity(dim, dim);
    // Forward: factors.back() acts first. Backward: the inverse map, so the
    // factor order is reversed along with the sign of the exponents.
    const int k = static_cast<int>(spec.factors.size());
    for (int step = 0; step < k; ++step) {
        const auto& factor = direction == StepDirection::Forward
                                 ? spec.factors[static_cast<size_t>(k - 1 - step)]
                                 : spec.factors[static_cast<size_t>(step)];
        Matrix omega = Matrix::Zero(dim, dim);
        for (size_t i = 0; i < factor.size(); ++i)
            omega += factor[i] * samples[i];
        propagator = expm(sign * h * omega) * propagator;
    }
    return propagator;
}

PositivityClass quadrature_positivity_class(const IntegratorSpec& spec)
{
    const auto weights = spec.quadrature_weights();
    double sum = 0.0;
    bool has_negative = false;
    for (const auto& w : weights) {
        sum += w.weight;
        if (w.weight < 0.0)
            has_negative = true;
    }
    if (sum <= 0.0)
        fail(ErrorCode::InvalidArgument, "quadrature_positivity_class: weights must sum positive");
    return has_negative ? PositivityClass::Conditional : PositivityClass::Unconditional;
}

} // namespace ricmag
