#pragma once

#include "ifd/matfun.hpp"
#include "ifd/random.hpp"

#include <cstdint>
#include <vector>

namespace ifd {

class GaussianDensity {
public:
    GaussianDensity(Vector mean, SymmetricMatrix cov);

    const Vector& mean() const { return mean_; }
    const SymmetricMatrix& cov() const { return cov_; }
    Eigen::Index dim() const { return mean_.size(); }

private:
    Vector mean_;
    SymmetricMatrix cov_;
};

class LinearMeasurement {
public:
    LinearMeasurement(Matrix response, SymmetricMatrix noise_cov);

    const Matrix& response() const { return r_; }
    const SymmetricMatrix& noise_cov() const { return n_; }
    Eigen::Index signal_dim() const { return r_.cols(); }
    Eigen::Index data_dim() const { return r_.rows(); }

private:
    Matrix r_;
    SymmetricMatrix n_;
};

enum class Representation { signal_space, data_space };

Matrix wiener_filter(const GaussianDensity& prior, const LinearMeasurement& meas,
                     Representation rep = Representation::data_space);

// (Phi^-1 + R^T N^-1 R)^-1
SymmetricMatrix posterior_covariance(const GaussianDensity& prior, const LinearMeasurement& meas);

GaussianDensity posterior(const GaussianDensity& prior, const LinearMeasurement& meas,
                          const Vector& d);

double kl_divergence(const GaussianDensity& p, const GaussianDensity& q);

// KL(N(m1, s1) || N(m2, inv(prec2))) without forming the second covariance.
double kl_divergence_precision(const Vector& m1, const SymmetricMatrix& s1, const Vector& m2,
                               const SymmetricMatrix& prec2);

double differential_entropy(const GaussianDensity& p);

double log_density(const GaussianDensity& p, const Vector& x);

// Marginal N(R psi, R Phi R^T + N) of the data.
GaussianDensity evidence(const GaussianDensity& prior, const LinearMeasurement& meas);

// -log P(d | s) - log P(s), with all normalization constants.
double info_hamiltonian(const GaussianDensity& prior, const LinearMeasurement& meas,
                        const Vector& d, const Vector& s);

// Law of G x + c for x ~ p.
GaussianDensity affine_transform(const GaussianDensity& p, const Matrix& g, const Vector& c);

std::vector<Vector> sample(const GaussianDensity& p, NormalSource& source, int count);
std::vector<Vector> sample(const GaussianDensity& p, std::uint64_t seed, int count);

}  // namespace ifd
