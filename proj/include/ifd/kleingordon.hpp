#pragma once

#include "ifd/gaussian.hpp"

#include <complex>
#include <vector>

namespace ifd::kg {

// Periodic 1-D Klein-Gordon field on [0, 2pi) with Fourier modes |k| < n,
// observed through Y box-averaging pixels.
//
// Packed signal (4n-2 reals): phi-part then chi-part, each mode 0 followed by
// (Re, Im) for k = 1..n-1. Packed data (2Y reals): same scheme per part with
// data modes k = 0..(Y-1)/2.
struct KGModel {
    int n_modes = 4;
    int Y = 5;
    double mu = 1.0;
    double beta = 1.0;
    double sigma_n2 = 0.01;

    void validate() const;
    bool operator==(const KGModel&) const = default;

    Eigen::Index part_dim() const { return 2 * n_modes - 1; }
    Eigen::Index signal_dim() const { return 4 * n_modes - 2; }
    Eigen::Index data_part_dim() const { return Y; }
    Eigen::Index data_dim() const { return 2 * Y; }
    int data_modes() const { return (Y - 1) / 2; }  // highest data mode index
    double delta() const;
    double omega(int k) const;
};

enum class Part { phi, chi };

// Complex coefficients for k = 0..n-1; negative modes follow by conjugation.
struct ComplexField {
    std::vector<std::complex<double>> phi;
    std::vector<std::complex<double>> chi;
};

Vector pack(const KGModel& model, const ComplexField& f);
ComplexField unpack(const KGModel& model, const Vector& packed);

// Pixel data (phi pixels then chi pixels) <-> packed Fourier data.
// Forward weight Delta e^{ikj Delta}, inverse weight (1/2pi) e^{-ikj Delta}.
Vector dft_data(const KGModel& model, const Vector& pixels);
Vector idft_data(const KGModel& model, const Vector& packed);
// All Y complex coefficients of one part.
std::vector<std::complex<double>> dft_coefficients(int Y, const Vector& pixels);

// Field value at x of one part of a packed signal.
double field_at(const KGModel& model, const Vector& packed_part, double x);

SymmetricMatrix build_prior_cov(const KGModel& model);
Matrix build_response_block(const KGModel& model);  // R^_r, Y x (2n-1)
Matrix build_response(const KGModel& model);        // blockdiag(R^_r, R^_r)
Matrix build_generator(const KGModel& model);       // L_r
Matrix exact_step(const KGModel& model, double dt);  // A_r(dt)
double field_energy(const KGModel& model, const Vector& packed);

// Diagonal of R^_r Phi^(part) R^_r^T from the closed-form sums.
Vector rphi_rt_diag(const KGModel& model, Part part);

// Condition number of R^ Phi^(phi) R^T when the data modes run up to
// (Y+1)/2 and so carry one conjugate pair twice. Diagnostic only.
double literal_layout_condition(const KGModel& model);

GaussianDensity prior(const KGModel& model);
LinearMeasurement measurement(const KGModel& model);

// Diagonal of 1 + sigma^2 (R^ Phi R^T)^-1, the noise correction in M'_r.
Vector noise_correction(const KGModel& model);

Matrix build_update_generator(const KGModel& model);           // M'_r
Matrix build_update_matrix(const KGModel& model, double dt);   // 1 + dt M'_r
void check_step(const KGModel& model, double dt);
Vector direct_simulate(const KGModel& model, const Vector& d0, double t);

}  // namespace ifd::kg
