// Run configuration: flat key=value sections in plain text, strictly
// validated (unknown sections or keys are errors with line references), plus
// the typed RunSpec the rest of the code consumes. Preset-valued keys use
// "name" or "name:p1,p2,..." syntax.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nsf/boundary.hpp"
#include "nsf/core.hpp"
#include "nsf/solver.hpp"
#include "nsf/thermo.hpp"

namespace nsf::app {

struct InitSpec {
    enum class Kind { Uniform, Perturbed } kind = Kind::Uniform;
    double rho0 = 1.0;
    double ux0 = 0.0;
    double uy0 = 0.0;
    double theta0 = 1.0;
    double amp_rho = 0.0;
    double amp_u = 0.0;
    double amp_theta = 0.0;
};

struct RunControl {
    double t_end = 1.0;
    long output_every = 1;    // steps between diagnostic records
    long snapshot_every = 0;  // steps between snapshots (0: final only)
    double tau = 1.0;         // diagnostics window length
    bool equilibrium_compare = false;
    double dichotomy_ecrit = 0.0;  // 0: auto-calibrate in the summary
    double dichotomy_drop = 0.0;
};

struct RunSpec {
    Grid grid;
    thermo::EosSpec eos;
    thermo::TransportSpec transport;
    domain::BoundaryData boundary;
    solver::SchemeConfig scheme;
    InitSpec init;
    RunControl control;

    // Hash of everything that determines the trajectory from a given state
    // (grid, constitutive laws, boundary data, scheme). Initial data and
    // output cadence deliberately excluded so a resume may change them.
    std::uint64_t physics_hash() const {
        std::ostringstream os;
        os.precision(17);
        os << grid.nx << ' ' << grid.ny << ' ' << grid.dx << ' ' << grid.dy << ' '
           << grid.origin.x << ' ' << grid.origin.y << '|';
        os << int(eos.kind) << ' ' << eos.p_inf << ' ' << eos.a << ' ' << eos.entropy_const << ' '
           << eos.hard_sphere.enabled << ' ' << eos.hard_sphere.rho_bar << ' '
           << eos.hard_sphere.beta << ' ' << eos.hard_sphere.c << '|';
        os << transport.mu0 << ' ' << transport.Lambda << ' ' << transport.eta0 << ' '
           << transport.kappa0 << ' ' << transport.beta_kappa << '|';
        auto sp = [&os](const domain::ScalarPreset& p) {
            os << int(p.kind) << ' ' << p.c0 << ' ' << p.cx << ' ' << p.cy << ' ' << p.cxy << ';';
        };
        os << int(boundary.mode) << ' ';
        sp(boundary.rho_B);
        sp(boundary.theta_B);
        os << int(boundary.u_B.kind) << ' ' << boundary.u_B.a << ' ' << boundary.u_B.b << ' '
           << boundary.u_B.c << ' ' << boundary.u_B.d << '|';
        os << scheme.cfl << ' ' << int(scheme.flux) << ' ' << scheme.rho_floor << ' '
           << scheme.theta_floor << ' ' << scheme.dt_min << ' ' << scheme.dt_cap << ' '
           << int(scheme.force.kind) << ' ' << scheme.force.gx << ' ' << scheme.force.gy;
        return fnv1a(os.str());
    }
};

// Deterministic initial state: optional seeded uniform perturbations in a
// fixed cell order.
inline solver::FluidState build_initial_state(const RunSpec& spec, const thermo::Eos& eos,
                                              std::uint64_t seed) {
    solver::FluidState s(spec.grid);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const auto& in = spec.init;
    for (int j = 0; j < spec.grid.ny; ++j) {
        for (int i = 0; i < spec.grid.nx; ++i) {
            double rho = in.rho0, ux = in.ux0, uy = in.uy0, th = in.theta0;
            if (in.kind == InitSpec::Kind::Perturbed) {
                rho *= 1.0 + in.amp_rho * unit(rng);
                ux += in.amp_u * unit(rng);
                uy += in.amp_u * unit(rng);
                th *= 1.0 + in.amp_theta * unit(rng);
            }
            s.rho(i, j) = rho;
            s.mom_x(i, j) = rho * ux;
            s.mom_y(i, j) = rho * uy;
            s.rho_e(i, j) = rho * eos.internal_energy(rho, th);
        }
    }
    s.t = 0.0;
    return s;
}

// --- parser ------------------------------------------------------------------

struct ConfigError {
    int line = 0;
    std::string key;
    std::string message;
};

struct ParseOutcome {
    std::optional<RunSpec> spec;
    std::vector<ConfigError> errors;
    bool ok() const { return spec.has_value() && errors.empty(); }
    std::string error_text() const {
        std::ostringstream os;
        for (const auto& e : errors) {
            os << "config error";
            if (e.line > 0) os << " (line " << e.line << ")";
            if (!e.key.empty()) os << " [" << e.key << "]";
            os << ": " << e.message << "\n";
        }
        return os.str();
    }
};

namespace detail {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Preset {
    std::string name;
    std::vector<double> params;
};

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

inline bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

inline bool parse_preset(const std::string& s, Preset& out) {
    const auto colon = s.find(':');
    out.name = trim(colon == std::string::npos ? s : s.substr(0, colon));
    out.params.clear();
    if (colon == std::string::npos) return !out.name.empty();
    std::stringstream ss(s.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        double v;
        if (!parse_double(trim(tok), v)) return false;
        out.params.push_back(v);
    }
    return !out.name.empty();
}

}  // namespace detail

// Parse and fully validate a config text. Unknown sections or keys, malformed
// values, and cross-field constraint violations are all collected as errors.
inline ParseOutcome parse_config(const std::string& text) {
    using detail::Entry;
    ParseOutcome out;
    auto fail = [&out](int line, const std::string& key, const std::string& msg) {
        out.errors.push_back({line, key, msg});
    };

    static const std::map<std::string, std::vector<std::string>> known = {
        {"grid", {"nx", "ny", "lx", "ly"}},
        {"eos", {"structural", "p_inf", "a", "entropy_const", "hard_sphere", "rho_bar", "beta_hs", "c_hs"}},
        {"transport", {"mu0", "Lambda", "eta0", "kappa0", "beta_kappa"}},
        {"boundary", {"mode", "rho", "theta", "u"}},
        {"force", {"force"}},
        {"scheme", {"cfl", "flux", "rho_floor", "theta_floor", "max_steps", "dt_min", "dt_cap"}},
        {"init", {"init"}},
        {"run", {"t_end", "output_every", "snapshot_every", "tau", "equilibrium_compare",
                 "dichotomy_ecrit", "dichotomy_drop"}},
    };

    std::map<std::string, std::map<std::string, Entry>> table;
    {
        std::istringstream is(text);
        std::string raw;
        std::string section;
        int line_no = 0;
        while (std::getline(is, raw)) {
            ++line_no;
            std::string line = raw;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    fail(line_no, "", "malformed section header");
                    continue;
                }
                section = detail::trim(line.substr(1, line.size() - 2));
                if (known.find(section) == known.end())
                    fail(line_no, section, "unknown section");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                fail(line_no, "", "expected key = value");
                continue;
            }
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (section.empty()) {
                fail(line_no, key, "key outside any section");
                continue;
            }
            auto ks = known.find(section);
            if (ks != known.end()) {
                bool ok = false;
                for (const auto& k : ks->second) ok = ok || (k == key);
                if (!ok) {
                    fail(line_no, section + "." + key, "unknown key");
                    continue;
                }
            }
            if (table[section].count(key))
                fail(line_no, section + "." + key, "duplicate key");
            else
                table[section][key] = {value, line_no, false};
        }
    }

    auto get = [&table](const std::string& sec, const std::string& key) -> Entry* {
        auto s = table.find(sec);
        if (s == table.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    };
    auto get_double = [&](const std::string& sec, const std::string& key, double dflt,
                          bool required = false) {
        Entry* e = get(sec, key);
        if (e == nullptr) {
            if (required) fail(0, sec + "." + key, "missing required key");
            return dflt;
        }
        double v;
        if (!detail::parse_double(e->value, v)) {
            fail(e->line, sec + "." + key, "not a number: '" + e->value + "'");
            return dflt;
        }
        return v;
    };
    auto get_long = [&](const std::string& sec, const std::string& key, long dflt) {
        return (long)get_double(sec, key, (double)dflt);
    };
    auto get_bool = [&](const std::string& sec, const std::string& key, bool dflt) {
        Entry* e = get(sec, key);
        if (e == nullptr) return dflt;
        if (e->value == "on" || e->value == "true") return true;
        if (e->value == "off" || e->value == "false") return false;
        fail(e->line, sec + "." + key, "expected on/off");
        return dflt;
    };

    RunSpec spec;

    // grid
    const int nx = (int)get_double("grid", "nx", 0, true);
    const int ny = (int)get_double("grid", "ny", 0, true);
    const double lx = get_double("grid", "lx", 1.0);
    const double ly = get_double("grid", "ly", 1.0);
    if (out.errors.empty()) {
        try {
            spec.grid = Grid(nx, ny, lx / std::max(nx, 1), ly / std::max(ny, 1));
        } catch (const std::exception& e) {
            fail(0, "grid", e.what());
        }
    }

    // eos
    {
        Entry* e = get("eos", "structural");
        const std::string kind = e ? e->value : "linear";
        if (kind == "linear")
            spec.eos.kind = thermo::StructuralKind::Linear;
        else if (kind == "linear-polytropic")
            spec.eos.kind = thermo::StructuralKind::LinearPolytropic;
        else
            fail(e ? e->line : 0, "eos.structural",
                 "unknown structural preset '" + kind + "' (linear | linear-polytropic)");
        spec.eos.p_inf = get_double("eos", "p_inf", 0.0);
        spec.eos.a = get_double("eos", "a", 0.0);
        spec.eos.entropy_const = get_double("eos", "entropy_const", 0.0);
        spec.eos.hard_sphere.enabled = get_bool("eos", "hard_sphere", false);
        spec.eos.hard_sphere.rho_bar = get_double("eos", "rho_bar", 1.0);
        spec.eos.hard_sphere.beta = get_double("eos", "beta_hs", 4.0);
        spec.eos.hard_sphere.c = get_double("eos", "c_hs", 1.0);
        if (spec.eos.hard_sphere.enabled && spec.eos.hard_sphere.beta <= 3.0) {
            Entry* b = get("eos", "beta_hs");
            fail(b ? b->line : 0, "eos.beta_hs",
                 "hard-sphere exponent must satisfy beta > 3 (admissible blow-up form)");
        }
        if (spec.eos.kind == thermo::StructuralKind::Linear && spec.eos.p_inf != 0.0)
            fail(0, "eos.p_inf", "p_inf requires structural = linear-polytropic");
    }

    // transport
    spec.transport.mu0 = get_double("transport", "mu0", 0.1);
    spec.transport.Lambda = get_double("transport", "Lambda", 1.0);
    spec.transport.eta0 = get_double("transport", "eta0", 0.0);
    spec.transport.kappa0 = get_double("transport", "kappa0", 0.1);
    spec.transport.beta_kappa = get_double("transport", "beta_kappa", 1.0);
    try {
        spec.transport.validate();
    } catch (const std::exception& e) {
        fail(0, "transport", e.what());
    }

    // boundary
    {
        Entry* e = get("boundary", "mode");
        const std::string mode = e ? e->value : "impermeable";
        if (mode == "flow-through")
            spec.boundary.mode = domain::Mode::FlowThrough;
        else if (mode == "impermeable")
            spec.boundary.mode = domain::Mode::Impermeable;
        else if (mode == "rigid-equilibrium")
            spec.boundary.mode = domain::Mode::RigidEquilibrium;
        else
            fail(e ? e->line : 0, "boundary.mode", "unknown mode '" + mode + "'");

        auto scalar_preset = [&](const char* key, domain::ScalarPreset dflt) {
            Entry* en = get("boundary", key);
            if (en == nullptr) return dflt;
            detail::Preset p;
            if (!detail::parse_preset(en->value, p)) {
                fail(en->line, std::string("boundary.") + key, "malformed preset value");
                return dflt;
            }
            auto need = [&](std::size_t n) {
                if (p.params.size() != n)
                    fail(en->line, std::string("boundary.") + key,
                         "preset '" + p.name + "' expects " + std::to_string(n) + " parameters");
                return p.params.size() == n;
            };
            if (p.name == "constant" && need(1)) return domain::ScalarPreset::constant(p.params[0]);
            if (p.name == "bilinear" && need(4))
                return domain::ScalarPreset::bilinear(p.params[0], p.params[1], p.params[2],
                                                      p.params[3]);
            if (p.name == "linear-y" && need(2))
                return domain::ScalarPreset::linear_y(p.params[0], p.params[1], ly);
            if (p.name != "constant" && p.name != "bilinear" && p.name != "linear-y")
                fail(en->line, std::string("boundary.") + key,
                     "unknown scalar preset '" + p.name + "'");
            return dflt;
        };
        spec.boundary.rho_B = scalar_preset("rho", domain::ScalarPreset::constant(1.0));
        spec.boundary.theta_B = scalar_preset("theta", domain::ScalarPreset::constant(1.0));

        Entry* eu = get("boundary", "u");
        if (eu != nullptr) {
            detail::Preset p;
            if (!detail::parse_preset(eu->value, p)) {
                fail(eu->line, "boundary.u", "malformed preset value");
            } else if (p.name == "uniform" && p.params.size() == 2) {
                spec.boundary.u_B = domain::VectorPreset::uniform(p.params[0], p.params[1]);
            } else if (p.name == "linear-x" && p.params.size() == 2) {
                spec.boundary.u_B = domain::VectorPreset::linear_x(p.params[0], p.params[1], lx);
            } else if (p.name == "parabolic-x" && p.params.size() == 2) {
                spec.boundary.u_B = domain::VectorPreset::parabolic_x(p.params[0], p.params[1], ly);
            } else if (p.name == "shear-decay-x" && p.params.size() == 3) {
                spec.boundary.u_B =
                    domain::VectorPreset::shear_decay_x(p.params[0], p.params[1], p.params[2]);
            } else {
                fail(eu->line, "boundary.u",
                     "unknown velocity preset or wrong parameter count: '" + eu->value + "'");
            }
        }
    }

    // force
    {
        Entry* e = get("force", "force");
        if (e != nullptr) {
            detail::Preset p;
            if (!detail::parse_preset(e->value, p)) {
                fail(e->line, "force.force", "malformed preset value");
            } else if (p.name == "none" && p.params.empty()) {
                spec.scheme.force = solver::ForcePreset::zero();
            } else if (p.name == "constant" && p.params.size() == 2) {
                spec.scheme.force = solver::ForcePreset::constant(p.params[0], p.params[1]);
            } else if (p.name == "potential-linear-y" && p.params.size() == 1) {
                spec.scheme.force = solver::ForcePreset::potential_linear_y(p.params[0]);
            } else {
                fail(e->line, "force.force", "unknown force preset '" + e->value + "'");
            }
        }
    }

    // scheme
    spec.scheme.cfl = get_double("scheme", "cfl", 0.35);
    {
        Entry* e = get("scheme", "flux");
        const std::string f = e ? e->value : "rusanov";
        if (f == "rusanov")
            spec.scheme.flux = solver::FluxScheme::Rusanov;
        else if (f == "upwind")
            spec.scheme.flux = solver::FluxScheme::Upwind;
        else
            fail(e ? e->line : 0, "scheme.flux", "unknown flux scheme '" + f + "'");
    }
    spec.scheme.rho_floor = get_double("scheme", "rho_floor", 1e-10);
    spec.scheme.theta_floor = get_double("scheme", "theta_floor", 1e-8);
    spec.scheme.max_steps = get_long("scheme", "max_steps", 1000000);
    spec.scheme.dt_min = get_double("scheme", "dt_min", 1e-12);
    {
        Entry* e = get("scheme", "dt_cap");
        if (e != nullptr && e->value != "none") {
            double v;
            if (detail::parse_double(e->value, v))
                spec.scheme.dt_cap = v;
            else
                fail(e->line, "scheme.dt_cap", "expected a number or 'none'");
        }
    }
    try {
        spec.scheme.validate();
    } catch (const std::exception& e) {
        fail(0, "scheme", e.what());
    }

    // init
    {
        Entry* e = get("init", "init");
        if (e != nullptr) {
            detail::Preset p;
            if (!detail::parse_preset(e->value, p)) {
                fail(e->line, "init.init", "malformed preset value");
            } else if (p.name == "uniform" && p.params.size() == 4) {
                spec.init.kind = InitSpec::Kind::Uniform;
                spec.init.rho0 = p.params[0];
                spec.init.ux0 = p.params[1];
                spec.init.uy0 = p.params[2];
                spec.init.theta0 = p.params[3];
            } else if (p.name == "perturbed" && p.params.size() == 7) {
                spec.init.kind = InitSpec::Kind::Perturbed;
                spec.init.rho0 = p.params[0];
                spec.init.ux0 = p.params[1];
                spec.init.uy0 = p.params[2];
                spec.init.theta0 = p.params[3];
                spec.init.amp_rho = p.params[4];
                spec.init.amp_u = p.params[5];
                spec.init.amp_theta = p.params[6];
            } else {
                fail(e->line, "init.init", "unknown init preset or wrong parameter count");
            }
        }
        if (spec.init.rho0 <= 0.0 || spec.init.theta0 <= 0.0)
            fail(0, "init.init", "initial density and temperature must be positive");
    }

    // run control
    spec.control.t_end = get_double("run", "t_end", 1.0);
    spec.control.output_every = get_long("run", "output_every", 1);
    spec.control.snapshot_every = get_long("run", "snapshot_every", 0);
    spec.control.tau = get_double("run", "tau", 1.0);
    spec.control.equilibrium_compare = get_bool("run", "equilibrium_compare", false);
    spec.control.dichotomy_ecrit = get_double("run", "dichotomy_ecrit", 0.0);
    spec.control.dichotomy_drop = get_double("run", "dichotomy_drop", 0.0);
    if (spec.control.t_end <= 0.0) fail(0, "run.t_end", "t_end must be positive");
    if (spec.control.output_every < 1) fail(0, "run.output_every", "output_every must be >= 1");
    if (spec.control.tau <= 0.0) fail(0, "run.tau", "tau must be positive");

    // cross-field rules
    if (spec.boundary.mode == domain::Mode::RigidEquilibrium) {
        if (!spec.boundary.theta_B.is_constant())
            fail(0, "boundary.theta",
                 "rigid-equilibrium mode requires constant boundary temperature");
        if (!spec.boundary.u_B.is_zero())
            fail(0, "boundary.u",
                 "rigid-equilibrium mode requires u = uniform:0,0 on a rectangle");
        if (spec.scheme.force.kind == solver::ForcePreset::Kind::Zero &&
            spec.control.equilibrium_compare) {
            // allowed: uniform equilibrium, nothing to check
        }
    }
    if (spec.control.equilibrium_compare &&
        spec.boundary.mode != domain::Mode::RigidEquilibrium)
        fail(0, "run.equilibrium_compare", "equilibrium comparison requires rigid-equilibrium mode");

    if (out.errors.empty()) out.spec = std::move(spec);
    return out;
}

// Canonical echo of a resolved spec, itself parseable.
inline std::string echo_config(const RunSpec& s) {
    std::ostringstream os;
    os.precision(17);
    os << "[grid]\nnx = " << s.grid.nx << "\nny = " << s.grid.ny << "\nlx = " << s.grid.lx()
       << "\nly = " << s.grid.ly() << "\n\n";
    os << "[eos]\nstructural = "
       << (s.eos.kind == thermo::StructuralKind::Linear ? "linear" : "linear-polytropic")
       << "\np_inf = " << s.eos.p_inf << "\na = " << s.eos.a
       << "\nentropy_const = " << s.eos.entropy_const
       << "\nhard_sphere = " << (s.eos.hard_sphere.enabled ? "on" : "off")
       << "\nrho_bar = " << s.eos.hard_sphere.rho_bar << "\nbeta_hs = " << s.eos.hard_sphere.beta
       << "\nc_hs = " << s.eos.hard_sphere.c << "\n\n";
    os << "[transport]\nmu0 = " << s.transport.mu0 << "\nLambda = " << s.transport.Lambda
       << "\neta0 = " << s.transport.eta0 << "\nkappa0 = " << s.transport.kappa0
       << "\nbeta_kappa = " << s.transport.beta_kappa << "\n\n";
    auto scalar = [&os](const domain::ScalarPreset& p) {
        if (p.kind == domain::ScalarPresetKind::Constant)
            os << "constant:" << p.c0;
        else
            os << "bilinear:" << p.c0 << "," << p.cx << "," << p.cy << "," << p.cxy;
    };
    os << "[boundary]\nmode = " << domain::mode_name(s.boundary.mode) << "\nrho = ";
    scalar(s.boundary.rho_B);
    os << "\ntheta = ";
    scalar(s.boundary.theta_B);
    os << "\nu = ";
    switch (s.boundary.u_B.kind) {
        case domain::VectorPresetKind::Uniform:
            os << "uniform:" << s.boundary.u_B.a << "," << s.boundary.u_B.b;
            break;
        case domain::VectorPresetKind::LinearX:
            os << "linear-x:" << s.boundary.u_B.a << "," << s.boundary.u_B.b;
            break;
        case domain::VectorPresetKind::ParabolicX:
            os << "parabolic-x:" << s.boundary.u_B.a << "," << s.boundary.u_B.b;
            break;
        case domain::VectorPresetKind::ShearDecayX:
            os << "shear-decay-x:" << s.boundary.u_B.a << "," << s.boundary.u_B.b << ","
               << s.boundary.u_B.c;
            break;
    }
    os << "\n\n[force]\nforce = ";
    switch (s.scheme.force.kind) {
        case solver::ForcePreset::Kind::Zero: os << "none"; break;
        case solver::ForcePreset::Kind::Constant:
            os << "constant:" << s.scheme.force.gx << "," << s.scheme.force.gy;
            break;
        case solver::ForcePreset::Kind::PotentialLinearY:
            os << "potential-linear-y:" << s.scheme.force.gy;
            break;
    }
    os << "\n\n[scheme]\ncfl = " << s.scheme.cfl << "\nflux = "
       << (s.scheme.flux == solver::FluxScheme::Rusanov ? "rusanov" : "upwind")
       << "\nrho_floor = " << s.scheme.rho_floor << "\ntheta_floor = " << s.scheme.theta_floor
       << "\nmax_steps = " << s.scheme.max_steps << "\ndt_min = " << s.scheme.dt_min
       << "\ndt_cap = ";
    if (std::isfinite(s.scheme.dt_cap))
        os << s.scheme.dt_cap;
    else
        os << "none";
    os << "\n\n[init]\ninit = ";
    if (s.init.kind == InitSpec::Kind::Uniform)
        os << "uniform:" << s.init.rho0 << "," << s.init.ux0 << "," << s.init.uy0 << ","
           << s.init.theta0;
    else
        os << "perturbed:" << s.init.rho0 << "," << s.init.ux0 << "," << s.init.uy0 << ","
           << s.init.theta0 << "," << s.init.amp_rho << "," << s.init.amp_u << ","
           << s.init.amp_theta;
    os << "\n\n[run]\nt_end = " << s.control.t_end << "\noutput_every = " << s.control.output_every
       << "\nsnapshot_every = " << s.control.snapshot_every << "\ntau = " << s.control.tau
       << "\nequilibrium_compare = " << (s.control.equilibrium_compare ? "on" : "off")
       << "\ndichotomy_ecrit = " << s.control.dichotomy_ecrit
       << "\ndichotomy_drop = " << s.control.dichotomy_drop << "\n";
    return os.str();
}

}  // namespace nsf::app
