#include "ifd/gaussian.hpp"

#include "ifd/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ifd {

namespace {

void require_dims(bool ok, const std::string& what) {
    if (!ok) throw InvalidInput(what + ": dimension mismatch");
}

// Solve S X = B for symmetric positive definite S.
Matrix spd_solve(const SymmetricMatrix& s, const Matrix& b, const char* what) {
    require_positive_definite(s, what);
    return s.matrix().llt().solve(b);
}

double quad_form(const SymmetricMatrix& s, const Vector& x) {
    return x.dot(s.matrix().llt().solve(x));
}

// 1/2 [ sum(l - 1 - log l) + dm^T P dm ], l the eigenvalues of the relative
// covariance. Written with log1p so tiny KL values survive cancellation.
double kl_from_relative(const SymmetricMatrix& rel, double mean_term) {
    const Vector lam = spectral_decompose(rel).eigenvalues;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (!(lam[i] > 0)) throw NotPositiveDefinite("kl_divergence: covariance not positive definite");
        const double x = lam[i] - 1.0;
        acc += x - std::log1p(x);
    }
    return 0.5 * (acc + mean_term);
}

}  // namespace

GaussianDensity::GaussianDensity(Vector mean, SymmetricMatrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
    require_dims(mean_.size() == cov_.dim(), "GaussianDensity");
    if (!mean_.allFinite()) throw InvalidInput("GaussianDensity: non-finite mean");
    require_positive_definite(cov_, "GaussianDensity covariance");
}

LinearMeasurement::LinearMeasurement(Matrix response, SymmetricMatrix noise_cov)
    : r_(std::move(response)), n_(std::move(noise_cov)) {
    require_dims(r_.rows() == n_.dim(), "LinearMeasurement");
    if (!r_.allFinite()) throw InvalidInput("LinearMeasurement: non-finite response");
    require_positive_definite(n_, "LinearMeasurement noise covariance");
}

Matrix wiener_filter(const GaussianDensity& prior, const LinearMeasurement& meas,
                     Representation rep) {
    require_dims(prior.dim() == meas.signal_dim(), "wiener_filter");
    const Matrix& r = meas.response();
    const Matrix& phi = prior.cov().matrix();
    if (rep == Representation::signal_space) {
        const Matrix rt_ninv = spd_solve(meas.noise_cov(), r, "wiener_filter noise").transpose();
        const SymmetricMatrix d = posterior_covariance(prior, meas);
        return d.matrix() * rt_ninv;
    }
    const SymmetricMatrix s(r * phi * r.transpose() + meas.noise_cov().matrix());
    // W = Phi R^T S^-1  <=>  W^T = S^-1 R Phi
    return spd_solve(s, r * phi, "wiener_filter data-space inner matrix").transpose();
}

SymmetricMatrix posterior_covariance(const GaussianDensity& prior, const LinearMeasurement& meas) {
    require_dims(prior.dim() == meas.signal_dim(), "posterior_covariance");
    const Matrix& r = meas.response();
    const Matrix info = spd_inverse(prior.cov()).matrix() +
                        r.transpose() * spd_solve(meas.noise_cov(), r, "noise covariance");
    return spd_inverse(SymmetricMatrix(info));
}

GaussianDensity posterior(const GaussianDensity& prior, const LinearMeasurement& meas,
                          const Vector& d) {
    require_dims(prior.dim() == meas.signal_dim() && d.size() == meas.data_dim(), "posterior");
    const Matrix w = wiener_filter(prior, meas, Representation::data_space);
    Vector m = prior.mean() + w * (d - meas.response() * prior.mean());
    return {std::move(m), posterior_covariance(prior, meas)};
}

double kl_divergence(const GaussianDensity& p, const GaussianDensity& q) {
    require_dims(p.dim() == q.dim(), "kl_divergence");
    // Whiten with the Cholesky factor of q's covariance: l = eig(L^-1 S1 L^-T).
    Eigen::LLT<Matrix> llt(q.cov().matrix());
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("kl_divergence: q covariance");
    const Matrix lower = llt.matrixL();
    const Matrix half = lower.triangularView<Eigen::Lower>().solve(p.cov().matrix());
    const Matrix rel = lower.triangularView<Eigen::Lower>().solve(half.transpose());
    const Vector z = lower.triangularView<Eigen::Lower>().solve(p.mean() - q.mean());
    return kl_from_relative(SymmetricMatrix(rel), z.squaredNorm());
}

double kl_divergence_precision(const Vector& m1, const SymmetricMatrix& s1, const Vector& m2,
                               const SymmetricMatrix& prec2) {
    require_dims(m1.size() == s1.dim() && m2.size() == prec2.dim() && m1.size() == m2.size(),
                 "kl_divergence_precision");
    Eigen::LLT<Matrix> llt(prec2.matrix());
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("kl_divergence: precision");
    const Matrix lower = llt.matrixL();
    const Matrix rel = lower.transpose() * s1.matrix() * lower;
    const Vector z = lower.transpose() * (m1 - m2);
    return kl_from_relative(SymmetricMatrix(rel), z.squaredNorm());
}

double differential_entropy(const GaussianDensity& p) {
    const double k = static_cast<double>(p.dim());
    return 0.5 * (k * std::log(2.0 * std::numbers::pi * std::numbers::e) + log_det_spd(p.cov()));
}

double log_density(const GaussianDensity& p, const Vector& x) {
    require_dims(x.size() == p.dim(), "log_density");
    const double k = static_cast<double>(p.dim());
    return -0.5 * (k * std::log(2.0 * std::numbers::pi) + log_det_spd(p.cov()) +
                   quad_form(p.cov(), x - p.mean()));
}

GaussianDensity evidence(const GaussianDensity& prior, const LinearMeasurement& meas) {
    require_dims(prior.dim() == meas.signal_dim(), "evidence");
    const Matrix& r = meas.response();
    return {r * prior.mean(),
            SymmetricMatrix(r * prior.cov().matrix() * r.transpose() + meas.noise_cov().matrix())};
}

double info_hamiltonian(const GaussianDensity& prior, const LinearMeasurement& meas,
                        const Vector& d, const Vector& s) {
    require_dims(prior.dim() == meas.signal_dim() && d.size() == meas.data_dim() &&
                     s.size() == prior.dim(),
                 "info_hamiltonian");
    const GaussianDensity likelihood(meas.response() * s, meas.noise_cov());
    return -log_density(likelihood, d) - log_density(prior, s);
}

GaussianDensity affine_transform(const GaussianDensity& p, const Matrix& g, const Vector& c) {
    require_dims(g.cols() == p.dim() && g.rows() == c.size(), "affine_transform");
    return {g * p.mean() + c, SymmetricMatrix(g * p.cov().matrix() * g.transpose())};
}

std::vector<Vector> sample(const GaussianDensity& p, NormalSource& source, int count) {
    if (count <= 0) throw InvalidInput("sample: count must be positive");
    const Matrix root = sym_sqrt(p.cov()).matrix();
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));
    Vector xi(p.dim());
    for (int i = 0; i < count; ++i) {
        for (Eigen::Index j = 0; j < xi.size(); ++j) xi[j] = source();
        out.emplace_back(p.mean() + root * xi);
    }
    return out;
}

std::vector<Vector> sample(const GaussianDensity& p, std::uint64_t seed, int count) {
    NormalSource source(seed);
    return sample(p, source, count);
}

}  // namespace ifd
