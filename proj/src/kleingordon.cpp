#include "ifd/kleingordon.hpp"

#include "ifd/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ifd::kg {

namespace {

constexpr double pi = std::numbers::pi;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

int mod(int a, int m) { return ((a % m) + m) % m; }

// Rows: data modes 0..kmax packed as (0, Re 1, Im 1, ...); columns: signal part.
Matrix response_block(const KGModel& model, int kmax) {
    const int n = model.n_modes;
    const int y = model.Y;
    const double half = model.delta() / 2.0;
    Matrix r = Matrix::Zero(1 + 2 * kmax, model.part_dim());
    r(0, 0) = 1.0;
    for (int k = 1; k <= kmax; ++k) {
        for (int l = 1; l < n; ++l) {
            const double c = std::cos(l * half);
            const double s = std::sin(l * half);
            const double w = sinc(l * half);
            Eigen::Matrix2d blk = Eigen::Matrix2d::Zero();
            if (mod(l, y) == k) blk += Eigen::Matrix2d{{c, s}, {-s, c}};
            if (mod(-l, y) == k) blk += Eigen::Matrix2d{{c, s}, {s, -c}};
            r.block<2, 2>(2 * k - 1, 2 * l - 1) = w * blk;
        }
    }
    return r;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

void require_size(const Vector& v, Eigen::Index n, const char* what) {
    if (v.size() != n)
        throw InvalidInput(std::string(what) + ": expected " + std::to_string(n) + " entries, got " +
                           std::to_string(v.size()));
}

// Packed real layout of one part from complex coefficients 0..count-1.
void pack_part(const std::vector<std::complex<double>>& c, Eigen::Ref<Vector> out) {
    out[0] = c[0].real();
    for (std::size_t k = 1; k < c.size(); ++k) {
        out[2 * k - 1] = c[k].real();
        out[2 * k] = c[k].imag();
    }
}

std::vector<std::complex<double>> unpack_part(const Eigen::Ref<const Vector>& v) {
    const auto count = static_cast<std::size_t>((v.size() + 1) / 2);
    std::vector<std::complex<double>> c(count);
    c[0] = v[0];
    for (std::size_t k = 1; k < count; ++k) c[k] = {v[2 * k - 1], v[2 * k]};
    return c;
}

}  // namespace

void KGModel::validate() const {
    if (n_modes < 2) throw InvalidInput("n_modes must be at least 2");
    if (Y <= 1) throw UnsupportedPixelCount("Y must be greater than 1");
    if (Y % 2 == 0) throw UnsupportedPixelCount("Y must be odd, got " + std::to_string(Y));
    if (!std::isfinite(mu)) throw InvalidInput("mu must be finite");
    if (mu == 0.0) throw DegenerateMassError("mu = 0: zero-mode prior variance diverges");
    if (!(beta > 0) || !std::isfinite(beta)) throw InvalidInput("beta must be positive");
    if (!(sigma_n2 > 0) || !std::isfinite(sigma_n2)) throw InvalidInput("sigma_n2 must be positive");
}

double KGModel::delta() const { return 2.0 * pi / Y; }

double KGModel::omega(int k) const { return std::sqrt(double(k) * k + mu * mu); }

Vector pack(const KGModel& model, const ComplexField& f) {
    const auto n = static_cast<std::size_t>(model.n_modes);
    if (f.phi.size() != n || f.chi.size() != n) throw InvalidInput("pack: need n_modes coefficients per part");
    for (const auto* c : {&f.phi[0], &f.chi[0]})
        if (std::abs(c->imag()) > 1e-12 * (1.0 + std::abs(c->real())))
            throw InvalidInput("pack: mode 0 of a real field must be real");
    Vector out(model.signal_dim());
    pack_part(f.phi, out.head(model.part_dim()));
    pack_part(f.chi, out.tail(model.part_dim()));
    return out;
}

ComplexField unpack(const KGModel& model, const Vector& packed) {
    require_size(packed, model.signal_dim(), "unpack");
    return {unpack_part(packed.head(model.part_dim())), unpack_part(packed.tail(model.part_dim()))};
}

std::vector<std::complex<double>> dft_coefficients(int Y, const Vector& pixels) {
    if (Y % 2 == 0) throw UnsupportedPixelCount("Y must be odd, got " + std::to_string(Y));
    require_size(pixels, Y, "dft_coefficients");
    const double delta = 2.0 * pi / Y;
    std::vector<std::complex<double>> c(static_cast<std::size_t>(Y));
    for (int k = 0; k < Y; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < Y; ++j) acc += delta * std::polar(1.0, mod(k * j, Y) * delta) * pixels[j];
        c[static_cast<std::size_t>(k)] = acc;
    }
    return c;
}

Vector dft_data(const KGModel& model, const Vector& pixels) {
    if (model.Y % 2 == 0) throw UnsupportedPixelCount("Y must be odd, got " + std::to_string(model.Y));
    require_size(pixels, model.data_dim(), "dft_data");
    const int y = model.Y;
    Vector out(model.data_dim());
    for (int part = 0; part < 2; ++part) {
        auto c = dft_coefficients(y, pixels.segment(part * y, y));
        c.resize(static_cast<std::size_t>(model.data_modes() + 1));
        pack_part(c, out.segment(part * y, y));
    }
    return out;
}

Vector idft_data(const KGModel& model, const Vector& packed) {
    if (model.Y % 2 == 0) throw UnsupportedPixelCount("Y must be odd, got " + std::to_string(model.Y));
    require_size(packed, model.data_dim(), "idft_data");
    const int y = model.Y;
    const double delta = model.delta();
    Vector out(model.data_dim());
    for (int part = 0; part < 2; ++part) {
        const auto half = unpack_part(packed.segment(part * y, y));
        std::vector<std::complex<double>> c(static_cast<std::size_t>(y));
        for (std::size_t k = 0; k < half.size(); ++k) {
            c[k] = half[k];
            if (k > 0) c[static_cast<std::size_t>(y) - k] = std::conj(half[k]);
        }
        for (int j = 0; j < y; ++j) {
            std::complex<double> acc = 0.0;
            for (int k = 0; k < y; ++k) acc += std::polar(1.0, -mod(k * j, y) * delta) * c[static_cast<std::size_t>(k)];
            out[part * y + j] = acc.real() / (2.0 * pi);
        }
    }
    return out;
}

double field_at(const KGModel& model, const Vector& packed_part, double x) {
    require_size(packed_part, model.part_dim(), "field_at");
    double acc = packed_part[0];
    for (int k = 1; k < model.n_modes; ++k)
        acc += 2.0 * (packed_part[2 * k - 1] * std::cos(k * x) + packed_part[2 * k] * std::sin(k * x));
    return acc / (2.0 * pi);
}

SymmetricMatrix build_prior_cov(const KGModel& model) {
    model.validate();
    const Eigen::Index p = model.part_dim();
    const double b = model.beta;
    Vector diag(model.signal_dim());
    diag[0] = 2.0 * pi / (b * model.mu * model.mu);
    diag[p] = 2.0 * pi / b;
    for (int k = 1; k < model.n_modes; ++k) {
        const double w2 = model.omega(k) * model.omega(k);
        diag[2 * k - 1] = diag[2 * k] = pi / (b * w2);
        diag[p + 2 * k - 1] = diag[p + 2 * k] = pi / b;
    }
    return SymmetricMatrix::diagonal(diag);
}

Matrix build_response_block(const KGModel& model) {
    model.validate();
    return response_block(model, model.data_modes());
}

Matrix build_response(const KGModel& model) {
    const Matrix r = build_response_block(model);
    return block_diag(r, r);
}

Matrix build_generator(const KGModel& model) {
    model.validate();
    const Eigen::Index p = model.part_dim();
    Matrix l = Matrix::Zero(2 * p, 2 * p);
    l.topRightCorner(p, p).setIdentity();
    l(p, 0) = -model.mu * model.mu;
    for (int k = 1; k < model.n_modes; ++k) {
        const double w2 = model.omega(k) * model.omega(k);
        l(p + 2 * k - 1, 2 * k - 1) = -w2;
        l(p + 2 * k, 2 * k) = -w2;
    }
    return l;
}

Matrix exact_step(const KGModel& model, double dt) {
    model.validate();
    const Eigen::Index p = model.part_dim();
    Matrix a = Matrix::Zero(2 * p, 2 * p);
    auto put = [&](Eigen::Index i, double w) {
        const double c = std::cos(w * dt);
        const double s = std::sin(w * dt);
        a(i, i) = c;
        a(i, p + i) = s / w;
        a(p + i, i) = -w * s;
        a(p + i, p + i) = c;
    };
    put(0, std::abs(model.mu));
    for (int k = 1; k < model.n_modes; ++k) {
        put(2 * k - 1, model.omega(k));
        put(2 * k, model.omega(k));
    }
    return a;
}

double field_energy(const KGModel& model, const Vector& packed) {
    require_size(packed, model.signal_dim(), "field_energy");
    const Eigen::Index p = model.part_dim();
    const double mu2 = model.mu * model.mu;
    double e = (packed[p] * packed[p] + mu2 * packed[0] * packed[0]) / (4.0 * pi);
    for (int k = 1; k < model.n_modes; ++k) {
        const double w2 = model.omega(k) * model.omega(k);
        const double phi2 = packed[2 * k - 1] * packed[2 * k - 1] + packed[2 * k] * packed[2 * k];
        const double chi2 = packed[p + 2 * k - 1] * packed[p + 2 * k - 1] + packed[p + 2 * k] * packed[p + 2 * k];
        e += (chi2 + w2 * phi2) / (2.0 * pi);
    }
    return e;
}

Vector rphi_rt_diag(const KGModel& model, Part part) {
    model.validate();
    const int y = model.Y;
    const double b = model.beta;
    const double half = model.delta() / 2.0;
    Vector out(y);
    out[0] = part == Part::phi ? 2.0 * pi / (b * model.mu * model.mu) : 2.0 * pi / b;
    for (int k = 1; k <= model.data_modes(); ++k) {
        double acc = 0.0;
        for (int m = 1; m < model.n_modes; ++m) {
            const int hits = (mod(m, y) == k) + (mod(m, y) == y - k);
            if (hits == 0) continue;
            const double weight = part == Part::phi ? 1.0 / (model.omega(m) * model.omega(m)) : 1.0;
            const double s = sinc(m * half);
            acc += hits * weight * s * s;
        }
        out[2 * k - 1] = out[2 * k] = pi / b * acc;
    }
    return out;
}

double literal_layout_condition(const KGModel& model) {
    model.validate();
    const Matrix r = response_block(model, (model.Y + 1) / 2);
    const Matrix phi = build_prior_cov(model).matrix().topLeftCorner(model.part_dim(), model.part_dim());
    const Vector lam = spectral_decompose(SymmetricMatrix(r * phi * r.transpose())).eigenvalues;
    if (!(lam[0] > 0)) return std::numeric_limits<double>::infinity();
    return lam[lam.size() - 1] / lam[0];
}

GaussianDensity prior(const KGModel& model) {
    return {Vector::Zero(model.signal_dim()), build_prior_cov(model)};
}

LinearMeasurement measurement(const KGModel& model) {
    return {build_response(model), SymmetricMatrix(model.sigma_n2 * Matrix::Identity(model.data_dim(), model.data_dim()))};
}

namespace {

Vector stacked_b(const KGModel& model) {
    Vector b(model.data_dim());
    b << rphi_rt_diag(model, Part::phi), rphi_rt_diag(model, Part::chi);
    for (Eigen::Index i = 0; i < b.size(); ++i)
        if (!(b[i] > 0))
            throw NotPositiveDefinite(
                "R Phi R^T has a zero diagonal entry; need n_modes - 1 >= (Y - 1) / 2");
    return b;
}

}  // namespace

Vector noise_correction(const KGModel& model) {
    return (1.0 + model.sigma_n2 / stacked_b(model).array()).matrix();
}

Matrix build_update_generator(const KGModel& model) {
    const Vector b = stacked_b(model);
    const Vector left = (1.0 + model.sigma_n2 / b.array()).matrix();
    const Vector right = (1.0 / (b.array() + model.sigma_n2)).matrix();
    const Matrix r = build_response(model);
    const Matrix core = r * build_generator(model) * build_prior_cov(model).matrix() * r.transpose();
    return left.asDiagonal() * core * right.asDiagonal();
}

void check_step(const KGModel& model, double dt) {
    if (!std::isfinite(dt) || dt < 0) throw InvalidInput("dt must be a finite non-negative number");
    const double w = model.omega(model.n_modes - 1);
    if (!(dt * w < 1.0))
        throw StepTooLarge("dt = " + std::to_string(dt) + " violates dt^2 < omega_{n-1}^-2 = " +
                           std::to_string(1.0 / (w * w)));
}

Matrix build_update_matrix(const KGModel& model, double dt) {
    model.validate();
    check_step(model, dt);
    return Matrix::Identity(model.data_dim(), model.data_dim()) + dt * build_update_generator(model);
}

Vector direct_simulate(const KGModel& model, const Vector& d0, double t) {
    require_size(d0, model.data_dim(), "direct_simulate");
    if (!std::isfinite(t)) throw InvalidInput("direct_simulate: non-finite time");
    return general_exp(t * build_update_generator(model)) * d0;
}

}  // namespace ifd::kg
