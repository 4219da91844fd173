#include "ifd/dynamics.hpp"
#include "ifd/errors.hpp"
#include "ifd/kleingordon.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace ifd;
using testutil::rel_err;

namespace {

struct Moments {
    Vector mean;
    Matrix cov;
};

Moments moments(const std::vector<Vector>& xs) {
    Vector m = Vector::Zero(xs.front().size());
    for (const auto& x : xs) m += x;
    m /= static_cast<double>(xs.size());
    Matrix c = Matrix::Zero(m.size(), m.size());
    for (const auto& x : xs) c += (x - m) * (x - m).transpose();
    c /= static_cast<double>(xs.size() - 1);
    return {m, c};
}

AffineDynamics random_dynamics(NormalSource& src, Eigen::Index n, double norm) {
    Matrix l = testutil::random_matrix(src, n, n);
    l /= spectral_norm(l);
    return AffineDynamics(l, testutil::random_vector(src, n), norm);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("trivial evolutions") {
    NormalSource src(31);
    const GaussianDensity p(testutil::random_vector(src, 3), testutil::random_spd(src, 3));
    const auto same = push_forward(p, AffineDynamics(Matrix::Zero(3, 3), Vector::Zero(3), 0.1));
    CHECK(same.mean() == p.mean());
    CHECK(same.cov().matrix() == p.cov().matrix());

    const Vector c = testutil::random_vector(src, 3);
    const auto shifted = push_forward(p, AffineDynamics(Matrix::Zero(3, 3), c, 0.25));
    CHECK(rel_err(shifted.mean(), p.mean() + 0.25 * c) < 1e-15);
    CHECK(shifted.cov().matrix() == p.cov().matrix());
}

TEST_CASE("step size guard") {
    const GaussianDensity p(Vector::Zero(2), SymmetricMatrix::identity(2));
    CHECK_THROWS_AS(push_forward(p, AffineDynamics(2.0 * Matrix::Identity(2, 2), 0.5)), StepTooLarge);
    CHECK_NOTHROW(push_forward(p, AffineDynamics(2.0 * Matrix::Identity(2, 2), 0.49)));
    CHECK_THROWS_AS(AffineDynamics(Matrix::Identity(2, 2), -0.1), InvalidInput);
    CHECK_THROWS_AS(push_forward(p, AffineDynamics(Matrix::Identity(3, 3), 0.1)), InvalidInput);
}

TEST_CASE("product and expanded covariance forms agree") {
    NormalSource src(32);
    for (int trial = 0; trial < 10; ++trial) {
        const GaussianDensity p(testutil::random_vector(src, 4), testutil::random_spd(src, 4));
        const auto dyn = random_dynamics(src, 4, 0.3);
        const Matrix& l = dyn.generator;
        const Matrix& d = p.cov().matrix();
        const Matrix expanded = d + dyn.dt * (l * d + d * l.transpose()) + dyn.dt * dyn.dt * l * d * l.transpose();
        CHECK(rel_err(push_forward(p, dyn).cov().matrix(), expanded) < 1e-12);
    }
}

TEST_CASE("push forward matches sampled moments and inverts") {
    NormalSource src(33);
    const GaussianDensity p(testutil::random_vector(src, 3), testutil::random_spd(src, 3));
    const auto dyn = random_dynamics(src, 3, 0.5);
    const auto q = push_forward(p, dyn);
    auto xs = sample(p, 99, 100000);
    std::vector<Vector> ys;
    for (const auto& x : xs) ys.push_back(dyn.apply(x));
    const auto mq = moments(ys);
    const double count = static_cast<double>(ys.size());
    for (Eigen::Index i = 0; i < 3; ++i) {
        CHECK(std::abs(mq.mean[i] - q.mean()[i]) < 5 * std::sqrt(q.cov()(i, i) / count));
        for (Eigen::Index j = 0; j < 3; ++j) {
            const double se = std::sqrt((q.cov()(i, i) * q.cov()(j, j) + q.cov()(i, j) * q.cov()(i, j)) / count);
            CHECK(std::abs(mq.cov(i, j) - q.cov()(i, j)) < 5 * se);
        }
    }
    // round trip through the exact inverse map
    std::vector<Vector> back;
    for (const auto& y : ys) back.push_back(dyn.apply_inverse(y));
    const auto mb = moments(back);
    const auto mx = moments(xs);
    CHECK(rel_err(mb.mean, mx.mean) < 1e-10);
    CHECK(rel_err(mb.cov, mx.cov) < 1e-10);
}

TEST_CASE("approximate precision: trivial and scalar cases") {
    NormalSource src(34);
    const auto d = testutil::random_spd(src, 3);
    const auto zero_step = approx_inv_cov(d, AffineDynamics(testutil::random_matrix(src, 3, 3), 0.0));
    CHECK(rel_err(zero_step.matrix(), d.matrix().inverse()) < 1e-12);

    const double ell = 0.7;
    std::vector<double> dts, errs;
    for (double dt : {0.04, 0.02, 0.01, 0.005}) {
        const auto approx = approx_inv_cov(SymmetricMatrix::identity(1), AffineDynamics(Matrix::Constant(1, 1, ell), dt));
        CHECK(approx(0, 0) == doctest::Approx(1 - 2 * dt * ell).epsilon(1e-14));
        const double exact = 1.0 / ((1 + dt * ell) * (1 + dt * ell));
        const double diff = exact - approx(0, 0);
        CHECK(diff == doctest::Approx(3 * dt * dt * ell * ell).epsilon(0.2));
        dts.push_back(dt);
        errs.push_back(diff);
    }
    CHECK(testutil::slope(dts, errs) == doctest::Approx(2.0).epsilon(0.05));

    // a step so large the approximation stops being a precision
    CHECK_THROWS_AS(approx_inv_cov(SymmetricMatrix::identity(1), AffineDynamics(Matrix::Constant(1, 1, 1.0), 0.6)),
                    StepTooLarge);
}

TEST_CASE("approximate precision: Klein-Gordon order check") {
    const kg::KGModel model;
    const auto post = posterior_covariance(kg::prior(model), kg::measurement(model));
    const Matrix l = kg::build_generator(model);
    double prev = 0.0;
    for (int n = 4; n <= 8; ++n) {
        const double dt = 1.0 / (1 << n);
        const AffineDynamics dyn(l, dt);
        const Matrix g = dyn.step_matrix();
        const Matrix exact = (g * post.matrix() * g.transpose()).inverse();
        const double err = (approx_inv_cov(post, dyn).matrix() - exact).norm();
        if (prev > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.2));
        prev = err;
    }
}

TEST_CASE("information error of the approximate precision") {
    // KL(N(m, D'') || N(m, D*)) is bounded by C dt^2; its actual decay is
    // fourth order because the trace and log-det terms cancel to second order.
    const kg::KGModel model;
    const auto post = posterior_covariance(kg::prior(model), kg::measurement(model));
    const Matrix l = kg::build_generator(model);
    const Vector m = Vector::Zero(model.signal_dim());
    std::vector<double> dts, kls;
    for (int n = 4; n <= 9; ++n) {
        const double dt = 1.0 / (1 << n);
        const AffineDynamics dyn(l, dt);
        const Matrix g = dyn.step_matrix();
        const SymmetricMatrix dpp(g * post.matrix() * g.transpose());
        kls.push_back(kl_divergence_precision(m, dpp, m, approx_inv_cov(post, dyn)));
        dts.push_back(dt);
    }
    const double c = kls.front() / (dts.front() * dts.front());
    for (std::size_t i = 0; i < kls.size(); ++i) CHECK(kls[i] <= c * dts[i] * dts[i] * (1 + 1e-12));
    CHECK(testutil::slope(dts, kls) == doctest::Approx(4.0).epsilon(0.3 / 4.0));
}

TEST_CASE("jacobian determinant") {
    CHECK(jacobian_det(AffineDynamics(Matrix::Zero(3, 3), 0.1)) == 1.0);
    const Matrix d = Eigen::Vector2d(0.3, -2.0).asDiagonal();
    CHECK(jacobian_det(AffineDynamics(d, 0.1)) == doctest::Approx((1 + 0.03) * (1 - 0.2)));

    NormalSource src(35);
    const Matrix l = testutil::random_matrix(src, 4, 4);
    double prev_fwd = 0, prev_inv = 0;
    for (double dt : {0.02, 0.01, 0.005, 0.0025}) {
        const double det = jacobian_det(AffineDynamics(l, dt));
        const double fwd = std::abs(det - (1 + dt * l.trace()));
        const double inv = std::abs(1.0 / det - (1 - dt * l.trace()));
        if (prev_fwd > 0) {
            CHECK(prev_fwd / fwd == doctest::Approx(4.0).epsilon(0.2));
            CHECK(prev_inv / inv == doctest::Approx(4.0).epsilon(0.2));
        }
        prev_fwd = fwd;
        prev_inv = inv;
    }
}

TEST_CASE("neumann series against the Klein-Gordon step") {
    const kg::KGModel model;
    const Matrix l = kg::build_generator(model);
    const double dt = 0.5 / spectral_norm(l);
    const Matrix m = dt * l;
    const Matrix exact = (Matrix::Identity(m.rows(), m.cols()) + m).inverse();
    for (int order : {1, 4, 12}) {
        const auto nr = neumann_inverse(m, order);
        CHECK(spectral_norm(nr.inverse - exact) <= nr.error_bound);
    }
}

}
