// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#pragma once

#include "core/errors.hpp"

namespace ricmag {

/// Equidistant time grid t_n = t0 + n*h, n = 0..steps.
struct TimeGrid {
    double t0 = 0.0;
    double tf = 1.0;
    int steps = 1;
    double h = 1.0;

    static TimeGrid uniform(double t0, double tf, int steps)
    {
        if (!(tf > t0))
            fail(ErrorCode::InvalidArgument, "TimeGrid: tf must exceed t0");
        if (steps < 1)
            fail(ErrorCode::InvalidArgument, "TimeGrid: need at least one step");
        return TimeGrid{t0, tf, steps, (tf - t0) / steps};
    }

    double node(int n) const { return t0 + n * h; }
    int node_count() const { return steps + 1; }

    bool same_as(const TimeGrid& other) const
    {
        return t0 == other.t0 && tf == other.tf && steps == other.steps;
    }
};

} // namespace ricmag
