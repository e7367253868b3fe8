// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors
//
// Dense small-matrix kernels shared by every solver module: matrix
// exponential, linear solves with condition monitoring, and
// symmetry/positivity diagnostics. All functions are pure; matrices are
// at most a couple dozen rows here, so robustness wins over asymptotics.

#pragma once

#include <Eigen/Dense>

namespace ricmag {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetry/positivity diagnostic of a square matrix.
struct SpdReport {
    bool is_symmetric = false;   // symmetry_defect <= tolerance
    double min_eigenvalue = 0.0; // smallest eigenvalue of (P + P^T)/2
    double symmetry_defect = 0.0; // max_ij |P_ij - P_ji|
};

/// Matrix exponential e^M by scaling-and-squaring with diagonal Pade
/// approximants of order up to (13,13), following Higham (2005).
/// Throws for non-square or non-finite input.
Matrix expm(const Matrix& m);

/// Solves A X = B for square A. Throws ErrorCode::Singular (with an
/// estimated condition number in the message) when A is singular to
/// working tolerance.
Matrix solve_linear(const Matrix& a, const Matrix& b);

/// 2-norm condition number sigma_max / sigma_min; +inf when singular.
double condition_estimate(const Matrix& a);

/// Symmetry defect and extreme eigenvalue of the symmetrized input.
SpdReport spd_report(const Matrix& p, double tol = 1e-9);

/// (P + P^T)/2
Matrix symmetrize(const Matrix& p);

double symmetry_defect(const Matrix& p);

bool all_finite(const Matrix& m);

} // namespace ricmag
