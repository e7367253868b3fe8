// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#include "core/dense.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace ricmag {

namespace {

// Pade numerator/denominator split: after each helper, (V+U)(V-U)^{-1}
// approximates exp(A) around A = 0.

void pade3(const Matrix& a, Matrix& u, Matrix& v)
{
    const double b[] = {120., 60., 12., 1.};
    const Matrix a2 = a * a;
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    u = a * (b[3] * a2 + b[1] * id);
    v = b[2] * a2 + b[0] * id;
}

void pade5(const Matrix& a, Matrix& u, Matrix& v)
{
    const double b[] = {30240., 15120., 3360., 420., 30., 1.};
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade7(const Matrix& a, Matrix& u, Matrix& v)
{
    const double b[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade9(const Matrix& a, Matrix& u, Matrix& v)
{
    const double b[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                        2162160.,     110880.,     3960.,       90.,        1.};
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix a8 = a6 * a2;
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade13(const Matrix& a, Matrix& u, Matrix& v)
{
    const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                        1187353796428800.,  129060195264000.,   10559470521600.,
                        670442572800.,      33522128640.,       1323241920.,
                        40840800.,          960960.,            16380.,
                        182.,               1.};
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2
             + b[1] * id);
    v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

} // namespace

bool all_finite(const Matrix& m)
{
    return m.allFinite();
}

Matrix expm(const Matrix& m)
{
    if (m.rows() != m.cols() || m.rows() < 1)
        fail(ErrorCode::InvalidArgument, "expm: matrix must be square and non-empty");
    if (!all_finite(m))
        fail(ErrorCode::InvalidArgument, "expm: matrix has non-finite entries");

    // Order selection thresholds from Higham (2005), Table 2.3.
    const double l1 = m.cwiseAbs().colwise().sum().maxCoeff();
    Matrix u, v;
    int squarings = 0;
    if (l1 < 1.495585217958292e-2) {
        pade3(m, u, v);
    } else if (l1 < 2.539398330063230e-1) {
        pade5(m, u, v);
    } else if (l1 < 9.504178996162932e-1) {
        pade7(m, u, v);
    } else if (l1 < 2.097847961257068e0) {
        pade9(m, u, v);
    } else {
        const double theta13 = 5.371920351148152;
        std::frexp(l1 / theta13, &squarings);
        if (squarings < 0)
            squarings = 0;
        const Matrix scaled = m.unaryExpr([squarings](double x) { return std::ldexp(x, -squarings); });
        pade13(scaled, u, v);
    }

    Matrix result = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i)
        result = result * result;
    if (!all_finite(result))
        fail(ErrorCode::Diverged, "expm: result has non-finite entries");
    return result;
}

double condition_estimate(const Matrix& a)
{
    const Eigen::JacobiSVD<Matrix> svd(a);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0)
        return std::numeric_limits<double>::infinity();
    return smax / smin;
}

Matrix solve_linear(const Matrix& a, const Matrix& b)
{
    if (a.rows() != a.cols())
        fail(ErrorCode::InvalidArgument, "solve_linear: coefficient matrix must be square");
    if (a.rows() != b.rows())
        fail(ErrorCode::InvalidArgument, "solve_linear: incompatible right-hand side");
    if (!all_finite(a) || !all_finite(b))
        fail(ErrorCode::InvalidArgument, "solve_linear: non-finite entries");

    const Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) {
        std::ostringstream msg;
        msg << "solve_linear: matrix singular to tolerance (condition estimate "
            << condition_estimate(a) << ")";
        fail(ErrorCode::Singular, msg.str());
    }
    return lu.solve(b);
}

Matrix symmetrize(const Matrix& p)
{
    if (p.rows() != p.cols())
        fail(ErrorCode::InvalidArgument, "symmetrize: matrix must be square");
    return 0.5 * (p + p.transpose());
}

double symmetry_defect(const Matrix& p)
{
    if (p.rows() != p.cols())
        fail(ErrorCode::InvalidArgument, "symmetry_defect: matrix must be square");
    return (p - p.transpose()).cwiseAbs().maxCoeff();
}

SpdReport spd_report(const Matrix& p, double tol)
{
    SpdReport report;
    report.symmetry_defect = symmetry_defect(p);
    report.is_symmetric = report.symmetry_defect <= tol;
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(p), Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
        fail(ErrorCode::Internal, "spd_report: eigensolver failed to converge");
    report.min_eigenvalue = eig.eigenvalues().minCoeff();
    return report;
}

} // namespace ricmag
