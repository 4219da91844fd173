#include "ifd/errors.hpp"
#include "ifd/simulator.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace ifd;

std::vector<int> parse_n_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(piece, &used);
            if (used != piece.size()) throw std::invalid_argument(piece);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("n-list", "not an integer: '" + piece + "'");
        }
    }
    return out;
}

void emit(const std::vector<sim::StepRecord>& records, const std::string& out, sim::Format fmt) {
    if (out.empty())
        sim::write_report(records, std::cout, fmt);
    else
        sim::write_report(records, std::filesystem::path(out), fmt);
}

void log_layout(const kg::KGModel& model) {
    spdlog::info("cond(R Phi R^T) with the redundant data range k <= (Y+1)/2 would be {:.3e}; "
                 "using k <= (Y-1)/2",
                 kg::literal_layout_condition(model));
}

int simulate(const std::string& config, const std::string& out, sim::Format fmt) {
    const auto cfg = sim::load_config(config);
    log_layout(cfg.model);
    if (cfg.scheme == sim::Scheme::direct) {
        const Vector d0 = sim::initial_data(cfg);
        sim::StepRecord rec;
        rec.step = cfg.steps();
        rec.t = cfg.T;
        rec.data = kg::direct_simulate(cfg.model, d0, cfg.T);
        rec.exact_deviation = (rec.data - sim::exact_reference_at(cfg.model, d0, cfg.T)).norm();
        emit({rec}, out, fmt);
        return 0;
    }
    const auto records = sim::run_ifd(cfg);
    emit(records, out, fmt);
    if (cfg.scheme == sim::Scheme::both) {
        const Vector direct = kg::direct_simulate(cfg.model, sim::initial_data(cfg), cfg.T);
        spdlog::info("||iterated(T) - direct(T)|| = {:.17g}", (records.back().data - direct).norm());
    }
    return 0;
}

int sweep(const std::string& config, const std::string& n_list) {
    const auto cfg = sim::load_config(config);
    const auto res = sim::convergence_sweep(cfg, parse_n_list(n_list));
    std::cout << std::setprecision(17);
    std::cout << "N,dt,kl_first,kl_total,final_deviation,direct_gap\n";
    for (const auto& r : res.rows)
        std::cout << r.N << ',' << r.dt << ',' << r.kl_first << ',' << r.kl_total << ','
                  << r.final_deviation << ',' << r.direct_gap << '\n';
    auto line = [](const char* name, const sim::SlopeFit& f) {
        std::cout << "# slope " << name << ' ' << std::setprecision(6) << f.slope << " residual "
                  << f.residual << '\n';
    };
    line("kl_first", res.kl_first);
    line("kl_total", res.kl_total);
    line("final_deviation", res.final_deviation);
    line("direct_gap", res.direct_gap);
    std::cout << "# direct_vs_exact " << std::setprecision(17) << res.direct_deviation << '\n';
    return 0;
}

int compare_exact(const std::string& config, const std::string& out, sim::Format fmt) {
    const auto cfg = sim::load_config(config);
    auto reference = sim::run_exact_reference(cfg);
    const auto ifd_run = sim::run_ifd(cfg);
    for (std::size_t i = 0; i < reference.size(); ++i)
        reference[i].exact_deviation = ifd_run[i].exact_deviation;
    emit(reference, out, fmt);
    return 0;
}

int direct(const std::string& config) {
    const auto cfg = sim::load_config(config);
    const Vector d0 = sim::initial_data(cfg);
    const Vector dT = kg::direct_simulate(cfg.model, d0, cfg.T);
    const Vector ref = sim::exact_reference_at(cfg.model, d0, cfg.T);
    nlohmann::json j{{"T", cfg.T},
                     {"data", std::vector<double>(dT.data(), dT.data() + dT.size())},
                     {"exact_reference", std::vector<double>(ref.data(), ref.data() + ref.size())},
                     {"exact_deviation", (dT - ref).norm()}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("ifd-sim"));

    CLI::App app{"Information field dynamics for the periodic Klein-Gordon field"};
    app.require_subcommand(1);
    std::string config, out, n_list, format = "csv";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON run configuration")->required();
    };
    auto* sim_cmd = app.add_subcommand("simulate", "run the iterated scheme and write per-step records");
    add_common(sim_cmd);
    sim_cmd->add_option("--out", out, "output file (default: stdout)");
    sim_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* sweep_cmd = app.add_subcommand("sweep", "order-of-convergence sweep over N");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--n-list", n_list, "comma-separated N values")->required();

    auto* cmp_cmd = app.add_subcommand("compare-exact", "exact reference trajectory vs the scheme");
    add_common(cmp_cmd);
    cmp_cmd->add_option("--out", out, "output file (default: stdout)");
    cmp_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* direct_cmd = app.add_subcommand("direct", "closed-form exp(T M') evolution");
    add_common(direct_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const auto fmt = format == "json" ? sim::Format::json : sim::Format::csv;
    try {
        if (*sim_cmd) return simulate(config, out, fmt);
        if (*sweep_cmd) return sweep(config, n_list);
        if (*cmp_cmd) return compare_exact(config, out, fmt);
        if (*direct_cmd) return direct(config);
    } catch (const ConfigError& e) {
        spdlog::error("config error: {}", e.what());
        return 1;
    } catch (const NumericError& e) {
        spdlog::error("numeric failure: {}", e.what());
        return 2;
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 1;
}
