// Run orchestration: initial state construction, the step loop with
// diagnostics records and snapshots, resume from snapshot, the run summary,
// and the EOS property report behind the check-eos subcommand.
#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nsf/config.hpp"
#include "nsf/diagnostics.hpp"
#include "nsf/equilibrium.hpp"
#include "nsf/harmonic.hpp"
#include "nsf/io.hpp"
#include "nsf/solver.hpp"

namespace nsf::app {

struct RunOptions {
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    long max_steps_override = -1;  // <0: use the spec's value
};

struct RunResult {
    int exit_code = 0;  // 0 ok, 2 validation failure, 3 numerical failure
    std::string message;
    std::vector<diag::DiagnosticsRecord> records;
    std::string out_dir;
    double t_final = 0.0;
    long steps = 0;
};

class Simulation {
  public:
    Simulation(const RunSpec& spec, std::uint64_t seed)
        : spec_(spec),
          eos_(spec.eos),
          sol_(spec.grid, eos_, spec.transport, spec.boundary, spec.scheme),
          state_(build_initial_state(spec, eos_, seed)) {}

    Simulation(const RunSpec& spec, solver::FluidState state, long step, long floors)
        : spec_(spec),
          eos_(spec.eos),
          sol_(spec.grid, eos_, spec.transport, spec.boundary, spec.scheme),
          state_(std::move(state)),
          step_(step),
          floors_cum_(floors) {}

    const RunSpec& spec() const { return spec_; }
    const thermo::Eos& eos() const { return eos_; }
    solver::Solver& solver() { return sol_; }
    solver::FluidState& state() { return state_; }
    long step_index() const { return step_; }
    long floors_cum() const { return floors_cum_; }

    long max_steps(const RunOptions& opts) const {
        return opts.max_steps_override >= 0 ? opts.max_steps_override : spec_.scheme.max_steps;
    }

    bool done(long step_limit) const {
        return state_.t >= spec_.control.t_end || step_ >= step_limit;
    }

    // Harmonic extension of the boundary temperature (static data: cached).
    const domain::TemperatureExtension& extension() {
        if (!ext_.has_value()) {
            ext_ = domain::harmonic_extension(spec_.boundary, state_.t, spec_.grid, 1e-12);
            ext_->time_dependent = false;  // scalar presets are static in time
        }
        return *ext_;
    }

    solver::StepReport step_once() {
        auto rep = sol_.step(state_);
        floors_cum_ += rep.floor_triggers;
        influx_acc_ += rep.mass_influx;
        outflux_acc_ += rep.mass_outflux;
        ++step_;
        return rep;
    }

    // Full diagnostics record at the current state; resets the interval
    // boundary-mass accumulators.
    diag::DiagnosticsRecord record() {
        floors_cum_ += sol_.sync(state_, state_.t);
        auto rec = diag::collect(sol_, extension(), nullptr, step_, floors_cum_, influx_acc_,
                                 outflux_acc_);
        influx_acc_ = 0.0;
        outflux_acc_ = 0.0;
        return rec;
    }

  private:
    RunSpec spec_;
    thermo::Eos eos_;
    solver::Solver sol_;
    solver::FluidState state_;
    long step_ = 0;
    long floors_cum_ = 0;
    double influx_acc_ = 0.0;
    double outflux_acc_ = 0.0;
    std::optional<domain::TemperatureExtension> ext_;
};

namespace detail {

inline std::string snapshot_name(long step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%09ld.bin", step);
    return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << text;
}

// Windowed positive part of the ballistic inequality residual over
// consecutive tau-windows covered by the records.
inline double max_positive_ballistic_residual(const std::vector<diag::DiagnosticsRecord>& recs,
                                              double tau) {
    if (recs.size() < 2) return 0.0;
    double worst = 0.0;
    std::size_t a = 0;
    for (std::size_t b = 1; b < recs.size(); ++b) {
        if (recs[b].t - recs[a].t >= tau) {
            worst = std::max(worst, diag::ballistic_inequality_residual(recs, a, b));
            a = b;
        }
    }
    return std::max(worst, 0.0);
}

inline std::string build_summary(const RunSpec& spec, const std::vector<diag::DiagnosticsRecord>& recs,
                                 const std::string& status, const std::string& detail,
                                 const Simulation* sim_for_equilibrium) {
    std::ostringstream os;
    os.precision(17);
    os << "status = " << status << "\n";
    if (!detail.empty()) os << "detail = " << detail << "\n";
    if (recs.empty()) return os.str();
    const auto& last = recs.back();
    os << "steps = " << last.step << "\n";
    os << "t_final = " << last.t << "\n";
    os << "floors_total = " << last.floors_cum << "\n";

    diag::Series eb, tot;
    double min_sigma = std::numeric_limits<double>::infinity();
    double max_rho = -std::numeric_limits<double>::infinity();
    for (const auto& r : recs) {
        eb.t.push_back(r.t);
        eb.v.push_back(r.ballistic);
        tot.t.push_back(r.t);
        tot.v.push_back(r.total);
        min_sigma = std::min(min_sigma, r.min_sigma);
        max_rho = std::max(max_rho, r.max_rho);
    }
    os << "ballistic_trailing_max = " << diag::dissipativity_estimate(eb) << "\n";
    os << "total_energy_trailing_max = " << diag::dissipativity_estimate(tot) << "\n";
    os << "min_entropy_production = " << min_sigma << "\n";
    os << "max_density = " << max_rho << "\n";
    if (spec.eos.hard_sphere.enabled)
        os << "hard_sphere_bound_ok = "
           << (max_rho < spec.eos.hard_sphere.rho_bar ? "yes" : "no") << "\n";
    os << "mass_balance_residual = "
       << (recs.size() > 1 ? diag::mass_balance_residual(recs, 0, recs.size() - 1) : 0.0) << "\n";
    os << "ballistic_residual_max_pos = "
       << max_positive_ballistic_residual(recs, spec.control.tau) << "\n";

    // dichotomy verdict; constants from the config or auto-calibrated
    if (eb.t.back() - eb.t.front() >= 2.0 * spec.control.tau) {
        const double trail = diag::dissipativity_estimate(eb);
        double e_max = *std::max_element(eb.v.begin(), eb.v.end());
        const double ecrit = spec.control.dichotomy_ecrit != 0.0 ? spec.control.dichotomy_ecrit
                                                                 : trail + 0.05 * std::abs(trail) +
                                                                       1e-12;
        const double drop = spec.control.dichotomy_drop != 0.0
                                ? spec.control.dichotomy_drop
                                : std::max(1e-3 * (e_max - trail), 1e-300);
        const auto v = diag::dichotomy_classify(eb, spec.control.tau, ecrit, drop);
        os << "dichotomy_ecrit = " << ecrit << "\n";
        os << "dichotomy_drop = " << drop << "\n";
        os << "dichotomy_windows = " << v.classes.size() << "\n";
        int below = 0, dec = 0, neither = 0;
        for (auto c : v.classes) {
            below += c == diag::WindowClass::BelowThreshold;
            dec += c == diag::WindowClass::StrictlyDecreasing;
            neither += c == diag::WindowClass::Neither;
        }
        os << "dichotomy_below = " << below << "\n";
        os << "dichotomy_decreasing = " << dec << "\n";
        os << "dichotomy_neither = " << neither << "\n";
        os << "dissipative_consistent = " << (v.dissipative_consistent ? "yes" : "no") << "\n";
        os << "limsup_estimate = " << v.limsup_estimate << "\n";
    }

    if (spec.boundary.mode == domain::Mode::RigidEquilibrium) {
        double worst_rise = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < recs.size(); ++k)
            worst_rise = std::max(worst_rise, recs[k].lyapunov - recs[k - 1].lyapunov);
        os << "lyapunov_initial = " << recs.front().lyapunov << "\n";
        os << "lyapunov_final = " << recs.back().lyapunov << "\n";
        os << "lyapunov_max_rise = " << worst_rise << "\n";
        if (spec.control.equilibrium_compare && sim_for_equilibrium != nullptr) {
            auto* sim = const_cast<Simulation*>(sim_for_equilibrium);
            const double M = recs.front().mass;
            auto prof = equil::solve_equilibrium(spec.scheme.force, spec.boundary, M, spec.grid,
                                                 sim->eos());
            sim->solver().sync(sim->state(), sim->state().t);
            const auto cm = equil::convergence_metrics(sim->solver(), prof);
            const double rho_e_norm =
                equil::lp_norm(prof.rho_E, 5.0 / 3.0, spec.grid.cell_area());
            os << "equilibrium_lambda = " << prof.lambda << "\n";
            os << "equilibrium_mass = " << prof.mass << "\n";
            os << "d_rho = " << cm.d_rho << "\n";
            os << "d_rho_rel = " << cm.d_rho / rho_e_norm << "\n";
            os << "d_mom = " << cm.d_mom << "\n";
            os << "d_theta = " << cm.d_theta << "\n";
        }
    }
    return os.str();
}

}  // namespace detail

// Execute a validated spec: validation report, step loop with records and
// snapshots, summary. Deterministic for a fixed spec and seed.
inline RunResult run(const RunSpec& spec, const RunOptions& opts) {
    namespace fs = std::filesystem;
    RunResult res;
    res.out_dir = opts.out_dir;
    fs::create_directories(opts.out_dir);
    detail::write_text(opts.out_dir + "/config.echo.cfg", echo_config(spec));

    std::vector<double> t_samples = {0.0, 0.25 * spec.control.t_end, 0.5 * spec.control.t_end,
                                     spec.control.t_end};
    const double rho_cap = spec.eos.hard_sphere.enabled
                               ? spec.eos.hard_sphere.rho_bar
                               : std::numeric_limits<double>::infinity();
    const auto report =
        domain::validate_boundary_data(spec.boundary, spec.grid, t_samples, rho_cap);
    detail::write_text(opts.out_dir + "/validation.txt", report.to_text());
    if (!report.pass) {
        res.exit_code = 2;
        res.message = "boundary data validation failed";
        detail::write_text(opts.out_dir + "/summary.txt",
                           detail::build_summary(spec, {}, "validation-failure", res.message,
                                                 nullptr));
        return res;
    }

    Simulation sim(spec, opts.seed);
    SeriesWriter series(opts.out_dir + "/series.csv");
    const long limit = sim.max_steps(opts);

    auto snapshot = [&](long step) {
        write_snapshot(opts.out_dir + "/" + detail::snapshot_name(step), sim.state(), spec.grid,
                       step, sim.floors_cum(), spec.physics_hash());
    };

    res.records.push_back(sim.record());
    series.append(res.records.back());
    std::string failure;
    while (!sim.done(limit)) {
        try {
            sim.step_once();
        } catch (const std::exception& e) {
            failure = e.what();
            break;
        }
        if (sim.step_index() % spec.control.output_every == 0 || sim.done(limit)) {
            res.records.push_back(sim.record());
            series.append(res.records.back());
        }
        if (spec.control.snapshot_every > 0 &&
            sim.step_index() % spec.control.snapshot_every == 0)
            snapshot(sim.step_index());
    }
    series.flush();
    snapshot(sim.step_index());  // final (or last consistent) state
    res.t_final = sim.state().t;
    res.steps = sim.step_index();

    if (!failure.empty()) {
        res.exit_code = 3;
        res.message = failure;
        detail::write_text(opts.out_dir + "/summary.txt",
                           detail::build_summary(spec, res.records, "numerical-failure", failure,
                                                 nullptr));
        return res;
    }
    detail::write_text(opts.out_dir + "/summary.txt",
                       detail::build_summary(spec, res.records, "ok", "", &sim));
    res.message = "ok";
    return res;
}

// Continue a run from a snapshot. The snapshot must match the spec's grid and
// physics hash; output cadence and horizon may differ.
inline RunResult resume(const std::string& snapshot_path, const RunSpec& spec,
                        const RunOptions& opts) {
    namespace fs = std::filesystem;
    RunResult res;
    res.out_dir = opts.out_dir;
    fs::create_directories(opts.out_dir);

    Snapshot snap;
    try {
        snap = read_snapshot(snapshot_path, spec.grid);
    } catch (const std::exception& e) {
        res.exit_code = 2;
        res.message = e.what();
        detail::write_text(opts.out_dir + "/summary.txt",
                           "status = resume-refused\ndetail = " + res.message + "\n");
        return res;
    }
    if (snap.header.physics_hash != spec.physics_hash()) {
        res.exit_code = 2;
        std::ostringstream os;
        os << "snapshot/spec physics mismatch: snapshot hash " << std::hex
           << snap.header.physics_hash << ", spec hash " << spec.physics_hash() << std::dec
           << " (grid " << snap.header.nx << "x" << snap.header.ny << " dx " << snap.header.dx
           << " dy " << snap.header.dy << " t " << snap.header.time << ")";
        res.message = os.str();
        detail::write_text(opts.out_dir + "/summary.txt",
                           "status = resume-refused\ndetail = " + res.message + "\n");
        return res;
    }

    detail::write_text(opts.out_dir + "/config.echo.cfg", echo_config(spec));
    Simulation sim(spec, std::move(snap.state), (long)snap.header.step,
                   (long)snap.header.floors_cum);
    SeriesWriter series(opts.out_dir + "/series.csv");
    const long limit = sim.max_steps(opts);

    res.records.push_back(sim.record());
    series.append(res.records.back());
    std::string failure;
    while (!sim.done(limit)) {
        try {
            sim.step_once();
        } catch (const std::exception& e) {
            failure = e.what();
            break;
        }
        if (sim.step_index() % spec.control.output_every == 0 || sim.done(limit)) {
            res.records.push_back(sim.record());
            series.append(res.records.back());
        }
        if (spec.control.snapshot_every > 0 &&
            sim.step_index() % spec.control.snapshot_every == 0)
            write_snapshot(opts.out_dir + "/" + detail::snapshot_name(sim.step_index()),
                           sim.state(), spec.grid, sim.step_index(), sim.floors_cum(),
                           spec.physics_hash());
    }
    series.flush();
    write_snapshot(opts.out_dir + "/" + detail::snapshot_name(sim.step_index()), sim.state(),
                   spec.grid, sim.step_index(), sim.floors_cum(), spec.physics_hash());
    res.t_final = sim.state().t;
    res.steps = sim.step_index();
    if (!failure.empty()) {
        res.exit_code = 3;
        res.message = failure;
        detail::write_text(opts.out_dir + "/summary.txt",
                           detail::build_summary(spec, res.records, "numerical-failure", failure,
                                                 nullptr));
        return res;
    }
    detail::write_text(opts.out_dir + "/summary.txt",
                       detail::build_summary(spec, res.records, "ok", "", &sim));
    res.message = "ok";
    return res;
}

// Solve the stationary profile only and write it as delimited text.
inline RunResult run_equilibrium(const RunSpec& spec, const RunOptions& opts) {
    namespace fs = std::filesystem;
    RunResult res;
    res.out_dir = opts.out_dir;
    fs::create_directories(opts.out_dir);
    thermo::Eos eos(spec.eos);
    const double M = spec.init.rho0 * spec.grid.lx() * spec.grid.ly();
    try {
        auto prof = equil::solve_equilibrium(spec.scheme.force, spec.boundary, M, spec.grid, eos);
        std::ostringstream os;
        os.precision(17);
        os << "x,y,rho_E\n";
        for (int j = 0; j < spec.grid.ny; ++j)
            for (int i = 0; i < spec.grid.nx; ++i)
                os << spec.grid.xc(i) << "," << spec.grid.yc(j) << "," << prof.rho_E(i, j) << "\n";
        detail::write_text(opts.out_dir + "/equilibrium.csv", os.str());
        std::ostringstream sum;
        sum.precision(17);
        sum << "status = ok\nlambda = " << prof.lambda << "\nmass = " << prof.mass
            << "\nmass_target = " << M << "\niterations = " << prof.iterations << "\n";
        detail::write_text(opts.out_dir + "/summary.txt", sum.str());
    } catch (const std::exception& e) {
        res.exit_code = 2;
        res.message = e.what();
        detail::write_text(opts.out_dir + "/summary.txt",
                           std::string("status = infeasible\ndetail = ") + e.what() + "\n");
        return res;
    }
    res.message = "ok";
    return res;
}

// EOS property report: structural validity, Gibbs consistency sweep,
// hard-sphere structure, monotonicity, inversion round-trip, Third-law probe.
inline std::pair<bool, std::string> check_eos(const RunSpec& spec) {
    std::ostringstream os;
    bool all_ok = true;
    auto line = [&](const std::string& name, bool ok, double value) {
        os << (ok ? "PASS " : "FAIL ") << name << " = " << value << "\n";
        all_ok = all_ok && ok;
    };
    thermo::Eos eos(spec.eos);
    const double rho_hi =
        eos.hard_sphere_enabled() ? 0.95 * eos.rho_bar() : 2.0;
    const double rho_lo = 0.01, th_lo = 0.05, th_hi = 5.0;
    const int n = 24;
    double worst_gibbs = 0.0, min_dpdr = std::numeric_limits<double>::infinity();
    double worst_roundtrip = 0.0;
    for (int a = 0; a <= n; ++a) {
        for (int b = 0; b <= n; ++b) {
            const double rho = rho_lo + (rho_hi - rho_lo) * a / n;
            const double th = th_lo + (th_hi - th_lo) * b / n;
            const auto [rt, rr] = eos.gibbs_residual(rho, th);
            const double scale_t = std::abs(eos.de_dtheta(rho, th)) + 1.0;
            const double scale_r =
                std::abs(eos.pressure(rho, th)) / (rho * rho) + std::abs(eos.entropy(rho, th)) * th / rho + 1.0;
            worst_gibbs = std::max(worst_gibbs,
                                   std::max(std::abs(rt) / scale_t, std::abs(rr) / scale_r));
            min_dpdr = std::min(min_dpdr, eos.dp_drho(rho, th));
            const double re = rho * eos.internal_energy(rho, th);
            const double th_back = eos.theta_from_internal_energy(rho, re);
            worst_roundtrip = std::max(worst_roundtrip, std::abs(th_back - th) / th);
        }
    }
    line("gibbs_residual_max_rel", worst_gibbs < 1e-6, worst_gibbs);
    line("dp_drho_min", min_dpdr > 0.0, min_dpdr);
    line("theta_roundtrip_max_rel", worst_roundtrip < 1e-10, worst_roundtrip);
    line("structural_h2_bound", eos.structural_bound() > 0.0, eos.structural_bound());
    if (eos.hard_sphere_enabled()) {
        line("p_hs_at_zero", eos.hard_sphere_pressure(0.0) == 0.0, eos.hard_sphere_pressure(0.0));
        const double near = eos.rho_bar() - 1e-6;
        line("p_blowup_near_rho_bar", eos.pressure(near, 1.0) > 1e18, eos.pressure(near, 1.0));
        bool increasing = true;
        double prev = 0.0;
        for (int k = 1; k <= 200; ++k) {
            const double r = eos.rho_bar() * k / 201.0;
            const double v = eos.hard_sphere_pressure(r);
            increasing = increasing && (v > prev);
            prev = v;
        }
        line("p_hs_strictly_increasing", increasing, prev);
    }
    // Third-law probe at rho = 1
    std::vector<double>&& seq = [] {
        std::vector<double> s;
        for (int k = 0; k <= 13; ++k) s.push_back(2.0 * std::pow(0.5, k));
        return s;
    }();
    const auto probe = thermo::third_law_probe(1.0, eos, seq);
    os << "INFO third_law_verdict = " << thermo::to_string(probe.verdict) << "\n";
    os << "INFO third_law_s_final = " << probe.s_values.back() << "\n";
    os << (all_ok ? "RESULT PASS" : "RESULT FAIL") << "\n";
    return {all_ok, os.str()};
}

}  // namespace nsf::app
