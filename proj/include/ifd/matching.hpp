#pragma once

#include "ifd/gaussian.hpp"

#include <string_view>

namespace ifd {

enum class Branch { regular, zero, projected };

std::string_view to_string(Branch b);

inline constexpr double kNullspaceRelTol = 1e-10;

// Entropic matching of the new posterior N(m'(u'), D') to the evolved density
// N(m*, D*), given through its precision D*^-1.
class MatchProblem {
public:
    MatchProblem(Vector evolved_mean, SymmetricMatrix evolved_inv_cov, GaussianDensity new_prior,
                 LinearMeasurement new_meas);

    const Vector& evolved_mean() const { return m_star_; }
    const SymmetricMatrix& evolved_inv_cov() const { return inv_d_star_; }
    const GaussianDensity& new_prior() const { return prior_; }
    const LinearMeasurement& new_meas() const { return meas_; }

    const Matrix& filter() const { return w_; }          // W'
    const SymmetricMatrix& post_cov() const { return d_; }  // D'
    const SymmetricMatrix& hessian() const { return h_; }   // W'^T D*^-1 W'
    // D' Phi'^-1 psi' = psi' - W' R' psi', the data-independent part of m'(u').
    const Vector& mean_offset() const { return offset_; }

    Eigen::Index data_dim() const { return meas_.data_dim(); }
    Vector posterior_mean(const Vector& u) const;

    // Same prior/measurement, different evolved mean; avoids recomputing W', D'.
    MatchProblem with_evolved_mean(Vector m_star) const;

private:
    Vector m_star_;
    SymmetricMatrix inv_d_star_;
    GaussianDensity prior_;
    LinearMeasurement meas_;
    Matrix w_;
    SymmetricMatrix d_;
    SymmetricMatrix h_;
    Vector offset_;
};

double objective(const MatchProblem& p, const Vector& u);
Vector objective_gradient(const MatchProblem& p, const Vector& u);

struct MatchResult {
    Vector u;
    Branch branch;
};

MatchResult match(const MatchProblem& p);

struct Projector {
    Matrix p;  // rank x dim, orthonormal rows
    Eigen::Index rank;
};

Projector nullspace_projector(const SymmetricMatrix& m, double rel_tol = kNullspaceRelTol);

}  // namespace ifd
