// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#include <doctest.h>

#include <cmath>
#include <random>

#include "core/dense.hpp"
#include "core/errors.hpp"

using namespace ricmag;

namespace {

Matrix random_matrix(std::mt19937& rng, int n, double scale)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = scale * dist(rng);
    return m;
}

// Smallest eigenvalue of a symmetric 2x2 via the characteristic polynomial,
// independent of the library eigensolver.
double min_eig_2x2(double a, double b, double c, double d)
{
    const double tr = a + d;
    const double det = a * d - b * c;
    return 0.5 * (tr - std::sqrt(tr * tr - 4.0 * det));
}

} // namespace

TEST_CASE("expm: identity, diagonal and nilpotent cases")
{
    CHECK((expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() == doctest::Approx(0.0));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    const Matrix ed = expm(d);
    CHECK(ed(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
    CHECK(ed(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(std::abs(ed(0, 1)) < 1e-15);

    Matrix nilpotent = Matrix::Zero(2, 2);
    nilpotent(0, 1) = 1.0;
    const Matrix en = expm(nilpotent);
    CHECK(en(0, 0) == doctest::Approx(1.0));
    CHECK(en(0, 1) == doctest::Approx(1.0));
    CHECK(en(1, 0) == doctest::Approx(0.0));
    CHECK(en(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("expm: scaling-and-squaring handles large norms")
{
    // exp of a 1x1 with |M| up to 1e3 against std::exp.
    for (double v : {-700.0, -3.5, 0.1, 12.0, 700.0}) {
        const Matrix e = expm(Matrix::Constant(1, 1, v));
        CHECK(e(0, 0) == doctest::Approx(std::exp(v)).epsilon(1e-12));
    }
    // rotation block: exp([[0, w], [-w, 0]]) is a rotation by w.
    const double w = 200.0;
    Matrix rot(2, 2);
    rot << 0.0, w, -w, 0.0;
    const Matrix er = expm(rot);
    CHECK(er(0, 0) == doctest::Approx(std::cos(w)).epsilon(1e-9));
    CHECK(er(0, 1) == doctest::Approx(std::sin(w)).epsilon(1e-9));
}

TEST_CASE("expm: inverse property on random matrices")
{
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> scale(0.3, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        Matrix m = random_matrix(rng, n, 1.0) * scale(rng);
        if (m.norm() > 10.0)
            m *= 10.0 / m.norm(); // ||M|| <= 10
        const Matrix prod = expm(m) * expm(-m);
        CHECK((prod - Matrix::Identity(n, n)).norm() < 1e-10);
    }
}

TEST_CASE("expm: symplectic generators give symplectic propagators")
{
    std::mt19937 rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const Matrix a = random_matrix(rng, n, 1.0);
        const Matrix b = symmetrize(random_matrix(rng, n, 1.0));
        const Matrix c = symmetrize(random_matrix(rng, n, 1.0));
        Matrix m(2 * n, 2 * n);
        m.topLeftCorner(n, n) = a;
        m.topRightCorner(n, n) = b;
        m.bottomLeftCorner(n, n) = c;
        m.bottomRightCorner(n, n) = -a.transpose();

        Matrix j = Matrix::Zero(2 * n, 2 * n);
        j.topRightCorner(n, n) = Matrix::Identity(n, n);
        j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);

        const Matrix phi = expm(m);
        CHECK((phi.transpose() * j * phi - j).norm() < 1e-9);
    }
}

TEST_CASE("expm rejects bad input")
{
    CHECK_THROWS_AS(expm(Matrix::Zero(2, 3)), Error);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(expm(bad), Error);
}

TEST_CASE("solve_linear: identity, diagonal, singular")
{
    Matrix b(2, 2);
    b << 1.0, 2.0, 3.0, 4.0;
    CHECK((solve_linear(Matrix::Identity(2, 2), b) - b).norm() == doctest::Approx(0.0));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    const Matrix x = solve_linear(d, Matrix::Identity(2, 2));
    CHECK(x(0, 0) == doctest::Approx(0.5));
    CHECK(x(1, 1) == doctest::Approx(0.25));

    Matrix singular(2, 2);
    singular << 1.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_WITH_AS(static_cast<void>(solve_linear(singular, Matrix::Identity(2, 2))),
                         doctest::Contains("singular"), Error);
}

TEST_CASE("solve_linear: round trip on random systems")
{
    std::mt19937 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const Matrix a = random_matrix(rng, n, 1.0) + 3.0 * Matrix::Identity(n, n);
        const Matrix b = random_matrix(rng, n, 1.0);
        const Matrix x = solve_linear(a, b);
        CHECK((a * x - b).norm() <= 1e-10 * std::max(1.0, b.norm()));
    }
}

TEST_CASE("spd_report: identity, indefinite diagonal, 2x2 oracle")
{
    const SpdReport id = spd_report(Matrix::Identity(2, 2), 1e-12);
    CHECK(id.is_symmetric);
    CHECK(id.min_eigenvalue == doctest::Approx(1.0));
    CHECK(id.symmetry_defect == 0.0);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    CHECK(spd_report(d, 1e-12).min_eigenvalue == doctest::Approx(-2.0));

    Matrix p(2, 2);
    p << 2.0, 1.0, 1.0, 2.0;
    CHECK(spd_report(p, 1e-12).min_eigenvalue
          == doctest::Approx(min_eig_2x2(2.0, 1.0, 1.0, 2.0)).epsilon(1e-12));
    CHECK(min_eig_2x2(2.0, 1.0, 1.0, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("symmetrize")
{
    CHECK((symmetrize(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);

    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 2.0;
    const Matrix s = symmetrize(m);
    CHECK(s(0, 1) == doctest::Approx(1.0));
    CHECK(s(1, 0) == doctest::Approx(1.0));

    std::mt19937 rng(5);
    const Matrix p = random_matrix(rng, 4, 2.0);
    CHECK((symmetrize(symmetrize(p)) - symmetrize(p)).norm() == 0.0);
}
