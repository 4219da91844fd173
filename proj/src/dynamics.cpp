#include "ifd/dynamics.hpp"

#include "ifd/errors.hpp"

#include <cmath>
#include <string>

namespace ifd {

AffineDynamics::AffineDynamics(Matrix l, Vector c, double step)
    : generator(std::move(l)), drift(std::move(c)), dt(step) {
    if (generator.rows() != generator.cols() || drift.size() != generator.rows())
        throw InvalidInput("AffineDynamics: dimension mismatch");
    if (!std::isfinite(dt) || dt < 0) throw InvalidInput("AffineDynamics: dt must be >= 0");
    if (!generator.allFinite() || !drift.allFinite())
        throw InvalidInput("AffineDynamics: non-finite entries");
}

AffineDynamics::AffineDynamics(Matrix l, double step)
    : AffineDynamics(l, Vector::Zero(l.rows()), step) {}

Matrix AffineDynamics::step_matrix() const {
    return Matrix::Identity(dim(), dim()) + dt * generator;
}

Vector AffineDynamics::apply(const Vector& x) const {
    return x + dt * (generator * x + drift);
}

Vector AffineDynamics::apply_inverse(const Vector& y) const {
    return step_matrix().partialPivLu().solve(y - dt * drift);
}

void AffineDynamics::check_step() const {
    const double norm = dt * spectral_norm(generator);
    if (!(norm < 1.0))
        throw StepTooLarge("||dt L|| = " + std::to_string(norm) + " is not below 1");
}

GaussianDensity push_forward(const GaussianDensity& post, const AffineDynamics& dyn) {
    if (post.dim() != dyn.dim()) throw InvalidInput("push_forward: dimension mismatch");
    dyn.check_step();
    return affine_transform(post, dyn.step_matrix(), dyn.dt * dyn.drift);
}

SymmetricMatrix approx_inv_cov(const SymmetricMatrix& d, const AffineDynamics& dyn) {
    if (d.dim() != dyn.dim()) throw InvalidInput("approx_inv_cov: dimension mismatch");
    const Matrix dinv = spd_inverse(d).matrix();
    const Matrix& l = dyn.generator;
    SymmetricMatrix out(dinv - dyn.dt * (dinv * l + l.transpose() * dinv));
    if (!is_positive_definite(out))
        throw StepTooLarge("approx_inv_cov: result not positive definite at dt = " +
                           std::to_string(dyn.dt));
    return out;
}

double jacobian_det(const AffineDynamics& dyn) {
    return dyn.step_matrix().partialPivLu().determinant();
}

}  // namespace ifd
