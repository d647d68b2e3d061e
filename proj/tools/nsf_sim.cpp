// nsf_sim: compressible Navier-Stokes-Fourier runs with dissipativity
// diagnostics. Subcommands: run, resume, equilibrium, check-eos.
// Exit codes: 0 success, 2 validation/configuration failure, 3 numerical
// failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nsf/simulation.hpp"

namespace {

int load_spec(const std::string& path, nsf::app::RunSpec& spec) {
    std::ifstream is(path);
    if (!is) {
        std::cerr << "cannot open config file '" << path << "'\n";
        return 2;
    }
    std::stringstream ss;
    ss << is.rdbuf();
    auto outcome = nsf::app::parse_config(ss.str());
    if (!outcome.ok()) {
        std::cerr << outcome.error_text();
        return 2;
    }
    spec = *outcome.spec;
    return 0;
}

int report_result(const nsf::app::RunResult& res) {
    if (res.exit_code == 0)
        std::cout << "ok: " << res.steps << " steps to t = " << res.t_final << ", outputs in "
                  << res.out_dir << "\n";
    else
        std::cerr << "failed (" << res.exit_code << "): " << res.message << "\n";
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D compressible Navier-Stokes-Fourier simulator with ballistic-energy "
                 "and entropy diagnostics"};
    app.require_subcommand(1);

    std::string config_path, snapshot_path, out_dir = "out";
    std::uint64_t seed = 0;
    long max_steps = -1;

    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for randomized initial perturbations");
    app.add_option("--max-steps", max_steps, "cap on the number of time steps");

    auto* cmd_run = app.add_subcommand("run", "execute a configured run");
    cmd_run->add_option("config", config_path, "config file")->required();

    auto* cmd_resume = app.add_subcommand("resume", "continue from a snapshot");
    cmd_resume->add_option("snapshot", snapshot_path, "snapshot file")->required();
    cmd_resume->add_option("config", config_path, "config file")->required();

    auto* cmd_eq = app.add_subcommand("equilibrium", "solve and write the stationary profile");
    cmd_eq->add_option("config", config_path, "config file")->required();

    auto* cmd_eos = app.add_subcommand("check-eos", "equation-of-state property report");
    cmd_eos->add_option("config", config_path, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    nsf::app::RunSpec spec;
    if (int rc = load_spec(config_path, spec); rc != 0) return rc;

    nsf::app::RunOptions opts;
    opts.out_dir = out_dir;
    opts.seed = seed;
    opts.max_steps_override = max_steps;

    try {
        if (cmd_run->parsed()) return report_result(nsf::app::run(spec, opts));
        if (cmd_resume->parsed())
            return report_result(nsf::app::resume(snapshot_path, spec, opts));
        if (cmd_eq->parsed()) return report_result(nsf::app::run_equilibrium(spec, opts));
        if (cmd_eos->parsed()) {
            auto [ok, text] = nsf::app::check_eos(spec);
            std::cout << text;
            return ok ? 0 : 2;
        }
    } catch (const nsf::solver::StepError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
