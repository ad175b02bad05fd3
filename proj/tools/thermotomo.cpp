#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "thermotomo/config.hpp"
#include "thermotomo/errors.hpp"
#include "thermotomo/kernels.hpp"
#include "thermotomo/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace thermotomo;

    CLI::App app{"thermotomo: thermoacoustic tomography with a piecewise-constant sound speed"};
    app.require_subcommand(1, 1);
    std::string config_path;
    std::optional<std::string> trace_path;

    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "run configuration file")->required();
        return sub;
    };
    add("forward", "simulate the phantom and write the boundary trace");
    CLI::App* reconstruct = add("reconstruct", "run the Neumann series on a recorded trace");
    reconstruct->add_option("--trace", trace_path, "trace file (default: <output_dir>/trace.taws)");
    add("raytrace", "trace reflect/transmit branches and check visibility");
    add("knorm", "estimate the norm of the error operator by power iteration");
    add("energy", "report the fraction of energy left in omega at time T");
    add("roundtrip", "forward then reconstruct, compared against the phantom");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitConfig;
    }

    try {
        kernels::configure_threads_from_env();
        const std::string sub = app.get_subcommands().front()->get_name();
        if (!std::filesystem::exists(config_path)) throw ConfigError("config file not found: " + config_path);
        const RunConfig cfg = load_run_config(config_path);
        auto& log = std::cerr;

        if (sub == "forward") {
            run_forward(cfg, log);
        } else if (sub == "reconstruct") {
            std::optional<std::filesystem::path> tp;
            if (trace_path) tp = *trace_path;
            const auto run = run_reconstruct(cfg, tp, log);
            std::cout << "mu_hat " << num(run.report.mu_hat) << "\n";
        } else if (sub == "raytrace") {
            const auto run = run_raytrace(cfg, log);
            std::cout << "visible " << (run.visibility.visible ? "yes" : "no") << "\n";
        } else if (sub == "knorm") {
            const auto run = run_knorm(cfg, log);
            std::cout << "mu_hat " << num(run.mu_hat) << "\n";
        } else if (sub == "energy") {
            const double ratio = run_energy(cfg, log);
            std::cout << "energy_decay_ratio " << num(ratio) << "\n";
        } else if (sub == "roundtrip") {
            const auto run = run_roundtrip(cfg, log);
            const auto& last = run.report.terms.back();
            std::cout << "terms " << run.report.terms.size() << " err_HD " << num(last.err_hd) << " err_L2 "
                      << num(last.err_l2) << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
