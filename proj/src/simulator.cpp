#include "ifd/simulator.hpp"

#include "ifd/dynamics.hpp"
#include "ifd/errors.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace ifd::sim {

using nlohmann::json;

namespace {

const std::set<std::string> kFields = {"n_modes", "Y", "mu", "beta", "sigma_n2", "T",
                                       "N", "seed", "initial_data", "scheme"};

const json& required(const json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(key, "missing required field");
    return *it;
}

double get_real(const json& j, const std::string& key) {
    const json& v = required(j, key);
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key, "expected a finite number");
    return x;
}

std::int64_t get_int(const json& j, const std::string& key) {
    const json& v = required(j, key);
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    return v.get<std::int64_t>();
}

Scheme parse_scheme(const std::string& s) {
    if (s == "iterated") return Scheme::iterated;
    if (s == "direct") return Scheme::direct;
    if (s == "both") return Scheme::both;
    throw ConfigError("scheme", "expected iterated, direct or both, got '" + s + "'");
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::iterated: return "iterated";
        case Scheme::direct: return "direct";
        case Scheme::both: return "both";
    }
    return "?";
}

Vector read_vector_file(const std::string& path, Eigen::Index expected) {
    std::ifstream in(path);
    if (!in) throw ConfigError("initial_data", "cannot open '" + path + "'");
    std::vector<double> values;
    std::string token;
    while (in >> token) {
        std::stringstream ss(token);
        std::string piece;
        while (std::getline(ss, piece, ',')) {
            if (piece.empty()) continue;
            try {
                std::size_t used = 0;
                values.push_back(std::stod(piece, &used));
                if (used != piece.size()) throw std::invalid_argument(piece);
            } catch (const std::exception&) {
                throw ConfigError("initial_data", "not a number: '" + piece + "'");
            }
        }
    }
    if (static_cast<Eigen::Index>(values.size()) != expected)
        throw ConfigError("initial_data", "expected " + std::to_string(expected) + " values, found " +
                                              std::to_string(values.size()));
    return Eigen::Map<Vector>(values.data(), expected);
}

std::string fmt_real(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

double RunConfig::dt() const { return T / static_cast<double>(steps()); }

std::int64_t RunConfig::steps() const { return std::int64_t{1} << N; }

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!kFields.count(key)) throw ConfigError(key, "unknown field");

    RunConfig cfg;
    const auto n_modes = get_int(j, "n_modes");
    if (n_modes < 2 || n_modes > 10000) throw ConfigError("n_modes", "must be in [2, 10000]");
    cfg.model.n_modes = static_cast<int>(n_modes);

    const auto y = get_int(j, "Y");
    if (y <= 1 || y % 2 == 0 || y > 100001) throw ConfigError("Y", "must be an odd integer > 1");
    cfg.model.Y = static_cast<int>(y);

    cfg.model.mu = get_real(j, "mu");
    if (cfg.model.mu == 0.0) throw ConfigError("mu", "must be nonzero (massless zero mode has no prior)");
    cfg.model.beta = get_real(j, "beta");
    if (!(cfg.model.beta > 0)) throw ConfigError("beta", "must be positive");
    cfg.model.sigma_n2 = get_real(j, "sigma_n2");
    if (!(cfg.model.sigma_n2 > 0)) throw ConfigError("sigma_n2", "must be positive");

    cfg.T = get_real(j, "T");
    if (!(cfg.T > 0)) throw ConfigError("T", "must be positive");
    const auto n = get_int(j, "N");
    if (n < 0 || n > 30) throw ConfigError("N", "must be in [0, 30]");
    cfg.N = static_cast<int>(n);

    const json& seed = required(j, "seed");
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
        throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = seed.get<std::uint64_t>();

    if (auto it = j.find("initial_data"); it != j.end()) {
        if (!it->is_string() || it->get<std::string>().empty())
            throw ConfigError("initial_data", "expected \"generate\" or a file path");
        cfg.initial_data = it->get<std::string>();
    }
    if (auto it = j.find("scheme"); it != j.end()) {
        if (!it->is_string()) throw ConfigError("scheme", "expected a string");
        cfg.scheme = parse_scheme(it->get<std::string>());
    }
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    return json{{"n_modes", cfg.model.n_modes}, {"Y", cfg.model.Y},
                {"mu", cfg.model.mu},           {"beta", cfg.model.beta},
                {"sigma_n2", cfg.model.sigma_n2}, {"T", cfg.T},
                {"N", cfg.N},                   {"seed", cfg.seed},
                {"initial_data", cfg.initial_data}, {"scheme", scheme_name(cfg.scheme)}};
}

void validate(const RunConfig& cfg) {
    cfg.model.validate();
    kg::check_step(cfg.model, cfg.dt());
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    RunConfig cfg = config_from_json(j);
    validate(cfg);
    return cfg;
}

Vector initial_data(const RunConfig& cfg) {
    const auto& model = cfg.model;
    if (cfg.initial_data != "generate") return read_vector_file(cfg.initial_data, model.data_dim());
    NormalSource source(cfg.seed);
    const Vector signal = sample(kg::prior(model), source, 1).front();
    Vector d = kg::build_response(model) * signal;
    const double sd = std::sqrt(model.sigma_n2);
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] += sd * source();
    return d;
}

Vector exact_reference_at(const kg::KGModel& model, const Vector& d0, double t) {
    const Matrix w = wiener_filter(kg::prior(model), kg::measurement(model));
    return kg::build_response(model) * (kg::exact_step(model, t) * (w * d0));
}

std::vector<StepRecord> run_ifd(const RunConfig& cfg) {
    validate(cfg);
    const auto& model = cfg.model;
    const double dt = cfg.dt();
    const Vector d0 = initial_data(cfg);

    const GaussianDensity pri = kg::prior(model);
    const LinearMeasurement meas = kg::measurement(model);
    const Matrix r = meas.response();
    const Matrix w = wiener_filter(pri, meas);
    const SymmetricMatrix d = posterior_covariance(pri, meas);
    const Matrix m_r = kg::build_update_matrix(model, dt);

    const AffineDynamics dyn(kg::build_generator(model), dt);
    const Matrix g = dyn.step_matrix();
    const Matrix a = kg::exact_step(model, dt);
    const Vector zero = Vector::Zero(model.signal_dim());
    const GaussianDensity exact_cov(zero, SymmetricMatrix(a * d.matrix() * a.transpose()));
    const GaussianDensity approx_cov(zero, SymmetricMatrix(g * d.matrix() * g.transpose()));
    const MatchProblem problem(zero, approx_inv_cov(d, dyn), pri, meas);
    const Vector m0 = w * d0;

    std::vector<StepRecord> out;
    out.reserve(static_cast<std::size_t>(cfg.steps()));
    Vector u = d0;
    double cumulative = 0.0;
    std::int64_t irregular = 0;
    for (std::int64_t i = 1; i <= cfg.steps(); ++i) {
        const Vector m = w * u;
        const double kl = kl_divergence(GaussianDensity(a * m, exact_cov.cov()),
                                        GaussianDensity(g * m, approx_cov.cov()));
        const MatchResult matched = match(problem.with_evolved_mean(g * m));
        if (matched.branch != Branch::regular && irregular++ == 0)
            spdlog::warn("step {}: entropic matching fell into the {} branch", i,
                         to_string(matched.branch));

        StepRecord rec;
        rec.step = i;
        rec.t = static_cast<double>(i) * dt;
        u = m_r * u;
        rec.data = u;
        rec.kl_step = kl;
        cumulative += kl;
        rec.kl_cumulative = cumulative;
        rec.exact_deviation = (u - r * (kg::exact_step(model, rec.t) * m0)).norm();
        rec.branch = matched.branch;
        out.push_back(std::move(rec));
    }
    if (irregular > 0)
        spdlog::warn("{} of {} steps were not in the regular matching branch", irregular, cfg.steps());
    return out;
}

std::vector<StepRecord> run_exact_reference(const RunConfig& cfg) {
    validate(cfg);
    const auto& model = cfg.model;
    const Vector d0 = initial_data(cfg);
    const Matrix r = kg::build_response(model);
    const Vector m0 = wiener_filter(kg::prior(model), kg::measurement(model)) * d0;
    std::vector<StepRecord> out;
    out.reserve(static_cast<std::size_t>(cfg.steps()));
    for (std::int64_t i = 1; i <= cfg.steps(); ++i) {
        StepRecord rec;
        rec.step = i;
        rec.t = static_cast<double>(i) * cfg.dt();
        rec.data = r * (kg::exact_step(model, rec.t) * m0);
        out.push_back(std::move(rec));
    }
    return out;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw InvalidInput("fit_loglog: size mismatch");
    if (x.size() < 3) throw InsufficientSweep("need at least 3 points for a slope fit");
    const auto n = static_cast<Eigen::Index>(x.size());
    Matrix design(n, 2);
    Vector rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw DomainError("fit_loglog: values must be positive");
        design(i, 0) = std::log(x[i]);
        design(i, 1) = 1.0;
        rhs[i] = std::log(y[i]);
    }
    const Vector coef = design.colPivHouseholderQr().solve(rhs);
    const double rms = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(n));
    return {coef[0], coef[1], rms};
}

SweepResult convergence_sweep(const RunConfig& cfg, const std::vector<int>& n_list) {
    if (n_list.size() < 3) throw InsufficientSweep("convergence sweep needs at least 3 values of N");
    SweepResult res;
    const Vector d0 = initial_data(cfg);
    const Vector direct = kg::direct_simulate(cfg.model, d0, cfg.T);
    res.direct_deviation = (direct - exact_reference_at(cfg.model, d0, cfg.T)).norm();

    std::vector<double> dts, kl_first, kl_total, dev, gap;
    for (int n : n_list) {
        RunConfig c = cfg;
        c.N = n;
        const auto records = run_ifd(c);
        SweepRow row;
        row.N = n;
        row.dt = c.dt();
        row.kl_first = records.front().kl_step;
        row.kl_total = records.back().kl_cumulative;
        row.final_deviation = records.back().exact_deviation;
        row.direct_gap = (records.back().data - direct).norm();
        res.rows.push_back(row);
        dts.push_back(row.dt);
        kl_first.push_back(row.kl_first);
        kl_total.push_back(row.kl_total);
        dev.push_back(row.final_deviation);
        gap.push_back(row.direct_gap);
    }
    res.kl_first = fit_loglog(dts, kl_first);
    res.kl_total = fit_loglog(dts, kl_total);
    res.final_deviation = fit_loglog(dts, dev);
    res.direct_gap = fit_loglog(dts, gap);
    return res;
}

void write_report(const std::vector<StepRecord>& records, std::ostream& out, Format format) {
    if (format == Format::json) {
        json arr = json::array();
        for (const auto& r : records) {
            arr.push_back({{"step", r.step},
                           {"t", r.t},
                           {"kl_step", r.kl_step},
                           {"kl_cumulative", r.kl_cumulative},
                           {"exact_deviation", r.exact_deviation},
                           {"branch", r.branch ? std::string(to_string(*r.branch)) : "none"},
                           {"data", std::vector<double>(r.data.data(), r.data.data() + r.data.size())}});
        }
        out << arr.dump(2) << '\n';
        return;
    }
    const Eigen::Index width = records.empty() ? 0 : records.front().data.size();
    out << "step,t,kl_step,kl_cumulative,exact_deviation,branch";
    for (Eigen::Index i = 0; i < width; ++i) out << ",data_" << i;
    out << '\n';
    for (const auto& r : records) {
        out << r.step << ',' << fmt_real(r.t) << ',' << fmt_real(r.kl_step) << ','
            << fmt_real(r.kl_cumulative) << ',' << fmt_real(r.exact_deviation) << ','
            << (r.branch ? to_string(*r.branch) : std::string_view("none"));
        for (Eigen::Index i = 0; i < r.data.size(); ++i) out << ',' << fmt_real(r.data[i]);
        out << '\n';
    }
}

void write_report(const std::vector<StepRecord>& records, const std::filesystem::path& path,
                  Format format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_report(records, out, format);
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace ifd::sim
