// crowdsim: command-line front end.
//
//   crowdsim run --config FILE [--seed N] [--ticks N] [--out DIR] [--metrics]
//   crowdsim sweep-fd --config FILE [--densities a,b,...] [--repeats N] [--seed N] [--out DIR]
//   crowdsim sweep-bottleneck --config FILE [--widths a,b,...] [--repeats N] [--seed N] [--out DIR]
//   crowdsim validate --config FILE [--seed N] [--repeats N] [--checks a,b,...]
//
// Exit status: 0 on success, 1 on a failed run or failed check, 2 on bad
// arguments or an invalid configuration.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crowd/config.hpp"
#include "crowd/experiments.hpp"
#include "crowd/validation.hpp"

namespace {

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

crowd::SimConfig load(const Common& c) {
    crowd::SimConfig cfg = crowd::load_config(c.config_path);
    if (c.seed) cfg.seed = *c.seed;
    if (c.out) cfg.output_dir = *c.out;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semicontinuous pedestrian crowd simulator"};
    app.require_subcommand(1);

    Common run_opts, fd_opts, bn_opts, val_opts;
    std::optional<std::uint64_t> ticks;
    bool metrics = false;
    std::string densities, widths;
    std::vector<int> checks;
    int fd_repeats = 10, bn_repeats = 10, val_repeats = 10;

    auto* run = app.add_subcommand("run", "Simulate the configured scenario and write trajectory.csv");
    run->add_option("--config", run_opts.config_path, "JSON configuration")->required();
    run->add_option("--seed", run_opts.seed, "Override the configured seed");
    run->add_option("--ticks", ticks, "Override the configured tick count");
    run->add_option("--out", run_opts.out, "Output directory");
    run->add_flag("--metrics", metrics, "Also write roi.csv (corridor) or crossings.csv (room)");

    auto* fd = app.add_subcommand("sweep-fd", "Corridor density sweep; writes fd.csv");
    fd->add_option("--config", fd_opts.config_path, "JSON configuration")->required();
    fd->add_option("--densities", densities, "Comma-separated target densities [1/m^2]");
    fd->add_option("--repeats", fd_repeats, "Runs per density")->check(CLI::PositiveNumber);
    fd->add_option("--seed", fd_opts.seed, "Base seed");
    fd->add_option("--out", fd_opts.out, "Output directory");

    auto* bn = app.add_subcommand("sweep-bottleneck", "Room door-width sweep; writes flow.csv");
    bn->add_option("--config", bn_opts.config_path, "JSON configuration")->required();
    bn->add_option("--widths", widths, "Comma-separated door widths [m]");
    bn->add_option("--repeats", bn_repeats, "Runs per width")->check(CLI::PositiveNumber);
    bn->add_option("--seed", bn_opts.seed, "Base seed");
    bn->add_option("--out", bn_opts.out, "Output directory");

    auto* val = app.add_subcommand("validate", "Run the acceptance checks");
    val->add_option("--config", val_opts.config_path, "JSON configuration")->required();
    val->add_option("--seed", val_opts.seed, "Base seed");
    val->add_option("--repeats", val_repeats, "Runs per measured point")->check(CLI::PositiveNumber);
    val->add_option("--checks", checks, "Comma-separated criterion ids (default: all)")
        ->delimiter(',')
        ->check(CLI::Range(1, 9));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            crowd::SimConfig cfg = load(run_opts);
            if (ticks) cfg.ticks = *ticks;
            crowd::run_simulation(cfg, cfg.output_dir, crowd::RunOutputs{.metrics = metrics});
            std::cout << "wrote " << cfg.output_dir << "/trajectory.csv\n";
        } else if (*fd) {
            crowd::SimConfig cfg = load(fd_opts);
            const auto list =
                densities.empty() ? crowd::kDefaultDensities : crowd::parse_number_list(densities);
            if (cfg.scenario.kind != crowd::ScenarioKind::corridor) {
                throw crowd::ConfigError("sweep-fd needs a corridor configuration");
            }
            std::ostringstream csv;
            crowd::write_fd_csv(csv, crowd::sweep_fd(cfg, list, fd_repeats));
            crowd::write_file(cfg.output_dir, "fd.csv", csv.str());
            std::cout << "wrote " << cfg.output_dir << "/fd.csv\n";
        } else if (*bn) {
            crowd::SimConfig cfg = load(bn_opts);
            const auto list =
                widths.empty() ? crowd::kDefaultWidths : crowd::parse_number_list(widths);
            if (cfg.scenario.kind != crowd::ScenarioKind::room) {
                throw crowd::ConfigError("sweep-bottleneck needs a room configuration");
            }
            for (const double w : list) {
                if (!(w > 0.0 && w < cfg.scenario.size_y)) {
                    throw crowd::ConfigError("door width " + crowd::format_number(w) +
                                             " must lie in (0, room side)");
                }
            }
            std::ostringstream csv;
            crowd::write_flow_csv(csv, crowd::sweep_bottleneck(cfg, list, bn_repeats));
            crowd::write_file(cfg.output_dir, "flow.csv", csv.str());
            std::cout << "wrote " << cfg.output_dir << "/flow.csv\n";
        } else if (*val) {
            const crowd::SimConfig cfg = load(val_opts);
            auto opt = crowd::validation::options_from_config(cfg);
            opt.repeats = val_repeats;
            bool all = true;
            crowd::validation::run_acceptance(opt, [&](const crowd::validation::CheckResult& r) {
                all = all && r.passed;
                std::cout << crowd::validation::format_result(r) << std::endl;
            }, std::set<int>(checks.begin(), checks.end()));
            std::cout << (all ? "all checks passed" : "some checks FAILED") << '\n';
            return all ? 0 : 1;
        }
    } catch (const crowd::ConfigError& e) {
        std::cerr << "crowdsim: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "crowdsim: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "crowdsim: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
