#include "ifd/matfun.hpp"

#include "ifd/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ifd {

namespace {

constexpr double kPdRelTol = 1e-12;

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(const Matrix& m) {
    if (m.rows() != m.cols())
        throw InvalidInput("SymmetricMatrix: matrix is " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()));
    a_ = 0.5 * (m + m.transpose());
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index n) {
    return SymmetricMatrix(Matrix::Identity(n, n));
}

SymmetricMatrix SymmetricMatrix::diagonal(const Vector& d) {
    return SymmetricMatrix(Matrix(d.asDiagonal()));
}

SpectralDecomposition spectral_decompose(const SymmetricMatrix& a) {
    require_finite(a.matrix(), "spectral_decompose");
    if (a.dim() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
    if (es.info() != Eigen::Success) throw DomainError("spectral_decompose: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

SymmetricMatrix apply_spectral_function(const SymmetricMatrix& a,
                                        const std::function<double(double)>& f) {
    auto [lam, q] = spectral_decompose(a);
    Vector fl(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        fl[i] = f(lam[i]);
        if (!std::isfinite(fl[i])) {
            std::ostringstream os;
            os.precision(17);
            os << "spectral function undefined at eigenvalue " << lam[i];
            throw DomainError(os.str());
        }
    }
    return SymmetricMatrix(q * fl.asDiagonal() * q.transpose());
}

SymmetricMatrix sym_exp(const SymmetricMatrix& a) {
    return apply_spectral_function(a, [](double x) { return std::exp(x); });
}

SymmetricMatrix sym_log(const SymmetricMatrix& a) {
    return apply_spectral_function(a, [](double x) {
        return x > 0 ? std::log(x) : std::numeric_limits<double>::quiet_NaN();
    });
}

SymmetricMatrix sym_sqrt(const SymmetricMatrix& a) {
    // tiny negative round-off on a PSD matrix is clipped
    double scale = a.matrix().cwiseAbs().maxCoeff();
    return apply_spectral_function(a, [scale](double x) {
        if (x < -1e-12 * scale) return std::numeric_limits<double>::quiet_NaN();
        return std::sqrt(std::max(x, 0.0));
    });
}

SymmetricMatrix sym_inv_sqrt(const SymmetricMatrix& a) {
    require_positive_definite(a, "sym_inv_sqrt");
    return apply_spectral_function(a, [](double x) { return 1.0 / std::sqrt(x); });
}

SymmetricMatrix spd_inverse(const SymmetricMatrix& a) {
    require_positive_definite(a, "spd_inverse");
    return apply_spectral_function(a, [](double x) { return 1.0 / x; });
}

double log_det_spd(const SymmetricMatrix& a) {
    auto lam = spectral_decompose(a).eigenvalues;
    if (lam.size() == 0) return 0.0;
    if (!(lam[0] > kPdRelTol * std::abs(lam[lam.size() - 1])) || !(lam[0] > 0))
        throw NotPositiveDefinite("log_det_spd: smallest eigenvalue " + std::to_string(lam[0]));
    return lam.array().log().sum();
}

bool is_positive_definite(const SymmetricMatrix& a) {
    if (!a.matrix().allFinite()) return false;
    auto lam = spectral_decompose(a).eigenvalues;
    if (lam.size() == 0) return true;
    return lam[0] > 0 && lam[0] > kPdRelTol * lam[lam.size() - 1];
}

void require_positive_definite(const SymmetricMatrix& a, const char* what) {
    if (!is_positive_definite(a)) throw NotPositiveDefinite(std::string(what) + ": not positive definite");
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(m).singularValues()[0];
}

NeumannResult neumann_inverse(const Matrix& m, int order) {
    if (m.rows() != m.cols()) throw InvalidInput("neumann_inverse: matrix not square");
    if (order < 0) throw InvalidInput("neumann_inverse: negative order");
    require_finite(m, "neumann_inverse");
    const double norm = spectral_norm(m);
    if (norm >= 1.0)
        throw SeriesDiverges("neumann_inverse: ||M|| = " + std::to_string(norm) + " >= 1");

    Matrix term = Matrix::Identity(m.rows(), m.cols());
    Matrix sum = term;
    for (int k = 1; k <= order; ++k) {
        term = -(term * m);
        sum += term;
    }
    return {sum, std::pow(norm, order + 1) / (1.0 - norm)};
}

Matrix general_exp(const Matrix& m) {
    if (m.rows() != m.cols()) throw InvalidInput("general_exp: matrix not square");
    require_finite(m, "general_exp");
    return m.exp();
}

}  // namespace ifd
