#include "ifd/errors.hpp"
#include "ifd/matfun.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace ifd;
using testutil::rel_err;

TEST_SUITE("matfun") {

TEST_CASE("construction symmetrizes exactly") {
    Matrix m(2, 2);
    m << 1.0, 2.0, 2.0 + 1e-9, 3.0;
    const SymmetricMatrix s(m);
    CHECK(s(0, 1) == s(1, 0));
    CHECK_THROWS_AS(SymmetricMatrix(Matrix(2, 3)), InvalidInput);
}

TEST_CASE("spectral_decompose small cases") {
    auto id = spectral_decompose(SymmetricMatrix::identity(3));
    CHECK(id.eigenvalues.isApprox(Vector::Ones(3)));
    CHECK(rel_err(id.eigenvectors * id.eigenvectors.transpose(), Matrix::Identity(3, 3)) < 1e-14);

    auto d = spectral_decompose(SymmetricMatrix::diagonal(Eigen::Vector2d(5.0, 2.0)));
    CHECK(d.eigenvalues[0] == doctest::Approx(2.0));
    CHECK(d.eigenvalues[1] == doctest::Approx(5.0));

    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    auto s = spectral_decompose(SymmetricMatrix(swap));
    CHECK(s.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(s.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("spectral_decompose reconstructs and is orthogonal") {
    NormalSource src(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = testutil::random_symmetric(src, 2 + trial % 7);
        const auto [lam, q] = spectral_decompose(a);
        const Matrix back = q * lam.asDiagonal() * q.transpose();
        CHECK((back - a.matrix()).norm() <= 1e-10 * a.matrix().norm());
        CHECK((q.transpose() * q - Matrix::Identity(a.dim(), a.dim())).norm() < 1e-12);
        for (Eigen::Index i = 1; i < lam.size(); ++i) CHECK(lam[i - 1] <= lam[i]);
    }
}

TEST_CASE("non-finite input is rejected") {
    Matrix m = Matrix::Identity(2, 2);
    m(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(spectral_decompose(SymmetricMatrix(m)), InvalidInput);
}

TEST_CASE("eigenvalues agree with characteristic-polynomial bisection") {
    NormalSource src(12);
    for (int dim = 1; dim <= 3; ++dim) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto a = testutil::random_symmetric(src, dim);
            const auto roots = oracle::charpoly_eigenvalues(a.matrix());
            const auto lam = spectral_decompose(a).eigenvalues;
            REQUIRE(roots.size() == static_cast<std::size_t>(dim));
            for (int i = 0; i < dim; ++i) CHECK(lam[i] == doctest::Approx(roots[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("apply_spectral_function named wrappers") {
    CHECK(rel_err(sym_exp(SymmetricMatrix(Matrix::Zero(2, 2))).matrix(), Matrix::Identity(2, 2)) == 0.0);

    const double e = std::numbers::e;
    const auto l = sym_log(SymmetricMatrix::diagonal(Eigen::Vector2d(e, e * e)));
    CHECK(l(0, 0) == doctest::Approx(1.0));
    CHECK(l(1, 1) == doctest::Approx(2.0));

    Matrix a(2, 2);
    a << 2, 1, 1, 2;
    const SymmetricMatrix sa(a);
    CHECK(rel_err(sym_exp(sym_log(sa)).matrix(), a) < 1e-10);

    const auto r = sym_inv_sqrt(sa);
    CHECK(rel_err(r.matrix() * a * r.matrix(), Matrix::Identity(2, 2)) < 1e-12);
    CHECK(rel_err(sym_sqrt(sa).matrix() * sym_sqrt(sa).matrix(), a) < 1e-12);
    CHECK(rel_err(spd_inverse(sa).matrix() * a, Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("identity function returns the matrix") {
    NormalSource src(13);
    const auto a = testutil::random_symmetric(src, 6);
    const auto b = apply_spectral_function(a, [](double x) { return x; });
    CHECK((a.matrix() - b.matrix()).norm() <= 1e-12 * a.matrix().norm());
}

TEST_CASE("log of a non-positive eigenvalue names it") {
    Matrix a(2, 2);
    a << 1, 0, 0, -2;
    try {
        sym_log(SymmetricMatrix(a));
        FAIL("expected DomainError");
    } catch (const DomainError& err) {
        CHECK(std::string(err.what()).find("-2") != std::string::npos);
    }
}

TEST_CASE("log_det_spd") {
    CHECK(log_det_spd(SymmetricMatrix::identity(4)) == 0.0);
    CHECK(log_det_spd(SymmetricMatrix::diagonal(Eigen::Vector2d(2, 8))) == doctest::Approx(std::log(16.0)));
    CHECK_THROWS_AS(log_det_spd(SymmetricMatrix::diagonal(Eigen::Vector2d(1, 0))), NotPositiveDefinite);
    CHECK_THROWS_AS(log_det_spd(SymmetricMatrix::diagonal(Eigen::Vector2d(1, -1))), NotPositiveDefinite);

    NormalSource src(14);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = testutil::random_spd(src, 5);
        const double ld = log_det_spd(a);
        CHECK(ld == doctest::Approx(sym_log(a).matrix().trace()).epsilon(1e-10));
        CHECK(ld == doctest::Approx(std::log(a.matrix().determinant())).epsilon(1e-8));
    }
}

TEST_CASE("det(exp A) = exp(tr A)") {
    NormalSource src(15);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = testutil::random_symmetric(src, 4);
        const double det = sym_exp(a).matrix().determinant();
        CHECK(det == doctest::Approx(std::exp(a.matrix().trace())).epsilon(1e-8));
    }
}

TEST_CASE("positive definiteness threshold is relative") {
    CHECK(is_positive_definite(SymmetricMatrix::diagonal(Eigen::Vector2d(1e-20, 1e-20))));
    CHECK_FALSE(is_positive_definite(SymmetricMatrix::diagonal(Eigen::Vector2d(1e-13, 1.0))));
    CHECK(is_positive_definite(SymmetricMatrix::diagonal(Eigen::Vector2d(1e-11, 1.0))));
}

TEST_CASE("neumann_inverse") {
    const auto zero = neumann_inverse(Matrix::Zero(3, 3), 4);
    CHECK(rel_err(zero.inverse, Matrix::Identity(3, 3)) == 0.0);

    Matrix half(1, 1);
    half << 0.5;
    const auto r = neumann_inverse(half, 1);
    CHECK(r.inverse(0, 0) == doctest::Approx(0.5));
    CHECK(r.error_bound == doctest::Approx(0.5));
    CHECK(std::abs(r.inverse(0, 0) - 2.0 / 3.0) <= r.error_bound);

    CHECK_THROWS_AS(neumann_inverse(Matrix::Identity(2, 2), 3), SeriesDiverges);

    NormalSource src(16);
    for (int order : {0, 1, 3, 8}) {
        Matrix m = testutil::random_matrix(src, 4, 4);
        m *= 0.6 / spectral_norm(m);
        const auto nr = neumann_inverse(m, order);
        const Matrix exact = (Matrix::Identity(4, 4) + m).inverse();
        CHECK(spectral_norm(nr.inverse - exact) <= nr.error_bound * (1 + 1e-12));
    }
}

TEST_CASE("general_exp matches the spectral path on symmetric input") {
    NormalSource src(17);
    const auto a = testutil::random_symmetric(src, 5);
    CHECK(rel_err(general_exp(a.matrix()), sym_exp(a).matrix()) < 1e-12);
    Matrix rot(2, 2);
    rot << 0, -1, 1, 0;
    const Matrix e = general_exp(std::numbers::pi / 2 * rot);
    CHECK(rel_err(e, rot) < 1e-14);
}

}
