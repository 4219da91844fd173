#include "ifd/matching.hpp"

#include "ifd/errors.hpp"

namespace ifd {

std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::regular: return "regular";
        case Branch::zero: return "zero";
        case Branch::projected: return "projected";
    }
    return "?";
}

MatchProblem::MatchProblem(Vector evolved_mean, SymmetricMatrix evolved_inv_cov,
                           GaussianDensity new_prior, LinearMeasurement new_meas)
    : m_star_(std::move(evolved_mean)),
      inv_d_star_(std::move(evolved_inv_cov)),
      prior_(std::move(new_prior)),
      meas_(std::move(new_meas)) {
    const auto n = prior_.dim();
    if (m_star_.size() != n || inv_d_star_.dim() != n || meas_.signal_dim() != n)
        throw InvalidInput("MatchProblem: dimension mismatch");
    require_positive_definite(inv_d_star_, "MatchProblem evolved precision");
    w_ = wiener_filter(prior_, meas_, Representation::data_space);
    d_ = posterior_covariance(prior_, meas_);
    h_ = SymmetricMatrix(w_.transpose() * inv_d_star_.matrix() * w_);
    offset_ = prior_.mean() - w_ * (meas_.response() * prior_.mean());
}

Vector MatchProblem::posterior_mean(const Vector& u) const {
    if (u.size() != data_dim()) throw InvalidInput("MatchProblem: data vector has wrong dimension");
    return offset_ + w_ * u;
}

MatchProblem MatchProblem::with_evolved_mean(Vector m_star) const {
    if (m_star.size() != m_star_.size()) throw InvalidInput("MatchProblem: dimension mismatch");
    MatchProblem out = *this;
    out.m_star_ = std::move(m_star);
    return out;
}

double objective(const MatchProblem& p, const Vector& u) {
    return kl_divergence_precision(p.posterior_mean(u), p.post_cov(), p.evolved_mean(),
                                   p.evolved_inv_cov());
}

Vector objective_gradient(const MatchProblem& p, const Vector& u) {
    if (u.size() != p.data_dim()) throw InvalidInput("objective_gradient: wrong dimension");
    return p.hessian().matrix() * u +
           p.filter().transpose() * (p.evolved_inv_cov().matrix() * (p.mean_offset() - p.evolved_mean()));
}

Projector nullspace_projector(const SymmetricMatrix& m, double rel_tol) {
    const auto [lam, q] = spectral_decompose(m);
    const Eigen::Index n = lam.size();
    if (n == 0 || !(lam[n - 1] > 0)) return {Matrix(0, n), 0};
    const double cut = rel_tol * lam[n - 1];
    Eigen::Index first = n;
    while (first > 0 && lam[first - 1] > cut) --first;
    const Eigen::Index rank = n - first;
    return {q.rightCols(rank).transpose(), rank};
}

MatchResult match(const MatchProblem& p) {
    const Matrix& w = p.filter();
    const Matrix& prec = p.evolved_inv_cov().matrix();
    const Matrix wt_prec = w.transpose() * prec;
    const Projector proj = nullspace_projector(p.hessian());
    const Eigen::Index dim = p.data_dim();

    if (proj.rank == dim) {
        const Vector& psi = p.new_prior().mean();
        const Vector rhs = wt_prec * (p.evolved_mean() - psi);
        Vector u = p.hessian().matrix().ldlt().solve(rhs) + p.new_meas().response() * psi;
        return {std::move(u), Branch::regular};
    }

    const Vector delta = p.evolved_mean() - p.mean_offset();
    const Vector b = wt_prec * delta;
    const double scale = spectral_norm(wt_prec) * delta.norm();
    const Vector pb = proj.p * b;
    if (proj.rank == 0 || !(pb.norm() > 1e-12 * scale)) return {Vector::Zero(dim), Branch::zero};

    const Matrix reduced = proj.p * p.hessian().matrix() * proj.p.transpose();
    Vector u = proj.p.transpose() * reduced.ldlt().solve(pb);
    return {std::move(u), Branch::projected};
}

}  // namespace ifd
