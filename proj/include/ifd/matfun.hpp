#pragma once

#include <Eigen/Dense>

#include <functional>

namespace ifd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense symmetric matrix; the constructor symmetrizes its argument so that
// entries(i, j) == entries(j, i) holds bit-exactly afterwards.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(const Matrix& m);

    static SymmetricMatrix identity(Eigen::Index n);
    static SymmetricMatrix diagonal(const Vector& d);

    Eigen::Index dim() const { return a_.rows(); }
    const Matrix& matrix() const { return a_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return a_(i, j); }

private:
    Matrix a_;
};

struct SpectralDecomposition {
    Vector eigenvalues;  // ascending
    Matrix eigenvectors;  // columns, orthonormal
};

SpectralDecomposition spectral_decompose(const SymmetricMatrix& a);

SymmetricMatrix apply_spectral_function(const SymmetricMatrix& a,
                                        const std::function<double(double)>& f);

SymmetricMatrix sym_exp(const SymmetricMatrix& a);
SymmetricMatrix sym_log(const SymmetricMatrix& a);
SymmetricMatrix sym_sqrt(const SymmetricMatrix& a);
SymmetricMatrix sym_inv_sqrt(const SymmetricMatrix& a);
SymmetricMatrix spd_inverse(const SymmetricMatrix& a);

double log_det_spd(const SymmetricMatrix& a);

// lambda_min > 1e-12 * lambda_max
bool is_positive_definite(const SymmetricMatrix& a);
void require_positive_definite(const SymmetricMatrix& a, const char* what);

struct NeumannResult {
    Matrix inverse;
    double error_bound;
};

// sum_{k=0}^{order} (-M)^k ~ (1 + M)^{-1}
NeumannResult neumann_inverse(const Matrix& m, int order);

double spectral_norm(const Matrix& m);

// Exponential of a general (non-symmetric) square matrix.
Matrix general_exp(const Matrix& m);

}  // namespace ifd
