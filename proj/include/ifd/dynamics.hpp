#pragma once

#include "ifd/gaussian.hpp"

namespace ifd {

// x -> (1 + dt L) x + dt c
struct AffineDynamics {
    Matrix generator;
    Vector drift;
    double dt = 0.0;

    AffineDynamics(Matrix l, Vector c, double step);
    AffineDynamics(Matrix l, double step);

    Eigen::Index dim() const { return generator.rows(); }
    Matrix step_matrix() const;
    Vector apply(const Vector& x) const;
    // Exact inverse map, via dense LU solve.
    Vector apply_inverse(const Vector& y) const;
    // Throws StepTooLarge unless ||dt L||_2 < 1.
    void check_step() const;
};

GaussianDensity push_forward(const GaussianDensity& post, const AffineDynamics& dyn);

// D^-1 - dt (D^-1 L + L^T D^-1)
SymmetricMatrix approx_inv_cov(const SymmetricMatrix& d, const AffineDynamics& dyn);

double jacobian_det(const AffineDynamics& dyn);

}  // namespace ifd
