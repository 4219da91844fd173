#pragma once

#include "ifd/kleingordon.hpp"
#include "ifd/matching.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ifd::sim {

enum class Scheme { iterated, direct, both };

struct RunConfig {
    kg::KGModel model;
    double T = 1.0;
    int N = 4;
    std::uint64_t seed = 0;
    std::string initial_data = "generate";  // or a file path
    Scheme scheme = Scheme::iterated;

    double dt() const;
    std::int64_t steps() const;
    bool operator==(const RunConfig&) const = default;
};

struct StepRecord {
    std::int64_t step = 0;
    double t = 0.0;
    Vector data;
    double kl_step = 0.0;
    double kl_cumulative = 0.0;
    double exact_deviation = 0.0;
    std::optional<Branch> branch;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);
void validate(const RunConfig& cfg);

// Measured data d^_r(0): drawn from the generative model, or read from file.
Vector initial_data(const RunConfig& cfg);

// Noise-free reference R A_r(t) W d0.
Vector exact_reference_at(const kg::KGModel& model, const Vector& d0, double t);

std::vector<StepRecord> run_ifd(const RunConfig& cfg);
std::vector<StepRecord> run_exact_reference(const RunConfig& cfg);

struct SweepRow {
    int N = 0;
    double dt = 0.0;
    double kl_first = 0.0;  // per-step KL at the measured data
    double kl_total = 0.0;
    double final_deviation = 0.0;
    double direct_gap = 0.0;  // ||iterated(T) - direct(T)||
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms of log residuals
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double direct_deviation = 0.0;  // ||direct(T) - exact reference(T)||
    SlopeFit kl_first;
    SlopeFit kl_total;
    SlopeFit final_deviation;
    SlopeFit direct_gap;
};

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);
SweepResult convergence_sweep(const RunConfig& cfg, const std::vector<int>& n_list);

enum class Format { csv, json };

void write_report(const std::vector<StepRecord>& records, std::ostream& out, Format format);
void write_report(const std::vector<StepRecord>& records, const std::filesystem::path& path,
                  Format format);

}  // namespace ifd::sim
