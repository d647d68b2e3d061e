// Scalar functionals tracked along a run: ballistic energy, mass/energy
// budgets, entropy production, the windowed ballistic-energy inequality
// residual, the Gauss-Green identity residual for the harmonic extension,
// mass-balance accounting, and the dichotomy / dissipativity classifiers.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nsf/harmonic.hpp"
#include "nsf/solver.hpp"

namespace nsf::diag {

struct StalenessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IncompleteWindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-record scalar budget. Flux-like entries are instantaneous rates
// (integrands of the time integrals in the windowed inequality); interval
// entries accumulate between consecutive records.
struct DiagnosticsRecord {
    double t = 0.0;
    long step = 0;
    double mass = 0.0;
    double kinetic = 0.0;   // integral of rho |u - u_B|^2 / 2
    double internal = 0.0;  // integral of rho e
    double total = 0.0;     // kinetic + internal
    double entropy_total = 0.0;  // integral of rho s
    double ballistic = 0.0;      // kinetic + internal - integral of theta~ rho s
    double entropy_production = 0.0;      // integral of sigma
    double ballistic_dissipation = 0.0;   // integral of theta~ sigma
    double flux_in_bracket = 0.0;   // inflow convex bracket, signed by u_B . n
    double flux_out_bracket = 0.0;  // outflow convex bracket, signed by u_B . n
    double rhs_convective = 0.0;  // [rho (u-u_B)x(u-u_B) + p I - S] : D u_B
    double rhs_force = 0.0;       // rho (u-u_B) . (g - dt u_B - u_B . grad u_B)
    double rhs_theta = 0.0;       // rho s (dt theta~ + u . grad theta~) + (q/theta) . grad theta~
    double lyapunov = 0.0;  // rigid-equilibrium functional (0 unless that mode)
    double min_rho = 0.0, max_rho = 0.0;
    double min_theta = 0.0, max_theta = 0.0;
    double min_sigma = 0.0;
    long floors_cum = 0;
    double influx_interval = 0.0;   // boundary mass in since the previous record
    double outflux_interval = 0.0;  // boundary mass out since the previous record
};

inline void check_extension_current(const domain::TemperatureExtension& ext, double t) {
    if (ext.time_dependent && std::abs(ext.t - t) > 1e-12 * std::max(1.0, std::abs(t)))
        throw StalenessError("temperature extension is stale for the requested time");
}

// E_B = sum of [ rho |u - u_B|^2 / 2 + rho e - theta~ rho s ] cell integrals.
inline double ballistic_energy(const solver::Solver& sol,
                               const domain::TemperatureExtension& ext) {
    check_extension_current(ext, sol.sync_time());
    const Grid& g = sol.grid();
    const auto& bd = sol.boundary_data();
    const double t = sol.sync_time();
    long double acc = 0.0L;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double rho = sol.density()(i, j);
            const double th = sol.theta()(i, j);
            const Vec2 uB = bd.velocity(t, g.xc(i), g.yc(j));
            const double du = sol.velocity_x()(i, j) - uB.x;
            const double dv = sol.velocity_y()(i, j) - uB.y;
            const double e = sol.eos().internal_energy(rho, th);
            const double s = sol.eos().entropy(rho, th);
            acc += (long double)(0.5 * rho * (du * du + dv * dv) + rho * e -
                                 ext.theta_tilde(i, j) * rho * s);
        }
    }
    return (double)acc * g.cell_area();
}

struct Budget {
    double mass = 0.0;
    double kinetic = 0.0;
    double internal = 0.0;
    double total = 0.0;
};

inline Budget budget(const solver::Solver& sol) {
    const Grid& g = sol.grid();
    const auto& bd = sol.boundary_data();
    const double t = sol.sync_time();
    long double m = 0.0L, k = 0.0L, e = 0.0L;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double rho = sol.density()(i, j);
            const Vec2 uB = bd.velocity(t, g.xc(i), g.yc(j));
            const double du = sol.velocity_x()(i, j) - uB.x;
            const double dv = sol.velocity_y()(i, j) - uB.y;
            m += (long double)rho;
            k += (long double)(0.5 * rho * (du * du + dv * dv));
            e += (long double)(rho * sol.eos().internal_energy(rho, sol.theta()(i, j)));
        }
    }
    Budget b;
    b.mass = (double)m * g.cell_area();
    b.kinetic = (double)k * g.cell_area();
    b.internal = (double)e * g.cell_area();
    b.total = b.kinetic + b.internal;
    return b;
}

struct EntropyProduction {
    Field sigma;         // (1/theta)(S : Du + kappa |grad theta|^2 / theta), cellwise
    double integral = 0.0;
    double min_cell = 0.0;
};

inline EntropyProduction entropy_production(const solver::Solver& sol) {
    const Grid& g = sol.grid();
    EntropyProduction out{Field(g)};
    long double acc = 0.0L;
    double mn = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double th = sol.theta()(i, j);
            const Vec2 gt = sol.grad_theta_cell(i, j);
            const double cond = sol.transport().kappa(th) * gt.norm2() / th;
            const double sig = (sol.viscous_dissipation_cell(i, j) + cond) / th;
            out.sigma(i, j) = sig;
            acc += (long double)sig;
            mn = std::min(mn, sig);
        }
    }
    out.integral = (double)acc * g.cell_area();
    out.min_cell = mn;
    return out;
}

// Instantaneous integrands of the windowed ballistic inequality, gathered in
// one pass over the prepared solver state.
struct BallisticTerms {
    double dissipation = 0.0;     // integral of theta~ sigma
    double flux_in = 0.0;         // inflow bracket (signed, u_B.n < 0)
    double flux_out = 0.0;        // outflow bracket (signed, u_B.n > 0)
    double rhs_convective = 0.0;
    double rhs_force = 0.0;
    double rhs_theta = 0.0;
};

// d_ext: harmonic extension of the boundary data's time derivative; pass
// nullptr for static data (term drops).
inline BallisticTerms ballistic_terms(const solver::Solver& sol,
                                      const domain::TemperatureExtension& ext,
                                      const domain::TemperatureExtension* d_ext = nullptr) {
    check_extension_current(ext, sol.sync_time());
    const Grid& g = sol.grid();
    const auto& bd = sol.boundary_data();
    const auto& eos = sol.eos();
    const auto& tr = sol.transport();
    const double t = sol.sync_time();
    const auto& part = sol.partition();
    BallisticTerms out;

    long double disp = 0.0L, conv = 0.0L, force = 0.0L, th_term = 0.0L;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.xc(i), y = g.yc(j);
            const double rho = sol.density()(i, j);
            const double th = sol.theta()(i, j);
            const double tt = ext.theta_tilde(i, j);
            const Vec2 gt = sol.grad_theta_cell(i, j);
            const double sig =
                (sol.viscous_dissipation_cell(i, j) + tr.kappa(th) * gt.norm2() / th) / th;
            disp += (long double)(tt * sig);

            const Vec2 uB = bd.velocity(t, x, y);
            const Mat2 duB = bd.velocity_gradient(t, x, y).sym();
            const double du = sol.velocity_x()(i, j) - uB.x;
            const double dv = sol.velocity_y()(i, j) - uB.y;
            const Mat2 S = sol.stress_cell(i, j);
            const double p = sol.pressure_field()(i, j);
            // [rho (u-u_B) x (u-u_B) + p I - S] : D u_B
            const Mat2 m{rho * du * du + p - S.xx, rho * du * dv - S.xy,
                         rho * dv * du - S.yx, rho * dv * dv + p - S.yy};
            conv += (long double)m.contract(duB);

            const Vec2 gf = sol.config().force.g(x, y);
            const Vec2 uB_t = bd.velocity_dt(t, x, y);
            const Mat2 J = bd.velocity_gradient(t, x, y);
            const Vec2 adv{J.xx * uB.x + J.xy * uB.y, J.yx * uB.x + J.yy * uB.y};
            force += (long double)(rho * (du * (gf.x - uB_t.x - adv.x) +
                                          dv * (gf.y - uB_t.y - adv.y)));

            const double s = eos.entropy(rho, th);
            const Vec2 gtt{(ext.theta_tilde(i + 1, j) - ext.theta_tilde(i - 1, j)) / (2.0 * g.dx),
                           (ext.theta_tilde(i, j + 1) - ext.theta_tilde(i, j - 1)) / (2.0 * g.dy)};
            const double dt_tt = (d_ext != nullptr) ? d_ext->theta_tilde(i, j) : 0.0;
            const double u_dot_gtt =
                sol.velocity_x()(i, j) * gtt.x + sol.velocity_y()(i, j) * gtt.y;
            // q / theta = -kappa grad theta / theta
            const double q_term = -tr.kappa(th) * (gt.x * gtt.x + gt.y * gtt.y) / th;
            th_term += (long double)(rho * s * (dt_tt + u_dot_gtt) + q_term);
        }
    }
    const double area = g.cell_area();
    out.dissipation = (double)disp * area;
    out.rhs_convective = (double)conv * area;
    out.rhs_force = (double)force * area;
    out.rhs_theta = (double)th_term * area;

    // boundary brackets, signed with u_B . n
    long double fin = 0.0L, fout = 0.0L;
    for (std::size_t k = 0; k < part.faces.size(); ++k) {
        const auto& f = part.faces[k];
        const Vec2 uB = bd.velocity(t, f.pos.x, f.pos.y);
        const double un = uB.dot(f.normal);
        const double thB = bd.theta(t, f.pos.x, f.pos.y);
        if (part.labels[k] == domain::FaceLabel::Inflow) {
            const double rhoB = bd.rho(t, f.pos.x, f.pos.y);
            const double br =
                rhoB * eos.internal_energy(rhoB, thB) - thB * rhoB * eos.entropy(rhoB, thB);
            fin += (long double)(br * un * f.length);
        } else if (part.labels[k] == domain::FaceLabel::Outflow) {
            const double rho = sol.density()(f.i, f.j);  // interior trace
            const double br =
                rho * eos.internal_energy(rho, thB) - thB * rho * eos.entropy(rho, thB);
            fout += (long double)(br * un * f.length);
        }
    }
    out.flux_in = (double)fin;
    out.flux_out = (double)fout;
    return out;
}

// Rigid-equilibrium Lyapunov functional:
// integral of [ rho |u-u_B|^2/2 + rho e - rho (G + |u_B|^2/2) - theta_B rho s ].
inline double lyapunov_functional(const solver::Solver& sol) {
    const Grid& g = sol.grid();
    const auto& bd = sol.boundary_data();
    const double t = sol.sync_time();
    const double thB = bd.theta(t, g.xc(0), g.yc(0));
    long double acc = 0.0L;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.xc(i), y = g.yc(j);
            const double rho = sol.density()(i, j);
            const double th = sol.theta()(i, j);
            const Vec2 uB = bd.velocity(t, x, y);
            const double du = sol.velocity_x()(i, j) - uB.x;
            const double dv = sol.velocity_y()(i, j) - uB.y;
            const double pot = sol.config().force.potential(x, y) + 0.5 * uB.norm2();
            acc += (long double)(0.5 * rho * (du * du + dv * dv) +
                                 rho * sol.eos().internal_energy(rho, th) - rho * pot -
                                 thB * rho * sol.eos().entropy(rho, th));
        }
    }
    return (double)acc * g.cell_area();
}

// Gauss-Green residual for the discrete-harmonic extension:
// face-quadrature of grad K(theta) . grad theta~ over interior faces minus
// the boundary integral of K(theta_B) d theta~ / dn. O(h) for smooth states,
// ~solver tolerance for constant theta.
inline double gauss_green_residual(const solver::Solver& sol,
                                   const domain::TemperatureExtension& ext) {
    const Grid& g = sol.grid();
    const auto& tr = sol.transport();
    const auto& bd = sol.boundary_data();
    const double t = sol.sync_time();
    long double vol = 0.0L;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double dK = tr.kappa_primitive(sol.theta()(i, j)) -
                              tr.kappa_primitive(sol.theta()(i - 1, j));
            const double dT = ext.theta_tilde(i, j) - ext.theta_tilde(i - 1, j);
            vol += (long double)(dK * dT) * (g.dy / g.dx);
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dK = tr.kappa_primitive(sol.theta()(i, j)) -
                              tr.kappa_primitive(sol.theta()(i, j - 1));
            const double dT = ext.theta_tilde(i, j) - ext.theta_tilde(i, j - 1);
            vol += (long double)(dK * dT) * (g.dx / g.dy);
        }
    long double bnd = 0.0L;
    for (const auto& f : boundary_faces(g)) {
        const double thB = bd.theta(t, f.pos.x, f.pos.y);
        const double h = (f.side == Side::Left || f.side == Side::Right) ? g.dx : g.dy;
        const double dn = 2.0 * (thB - ext.theta_tilde(f.i, f.j)) / h;
        bnd += (long double)(tr.kappa_primitive(thB) * dn * f.length);
    }
    return (double)(vol - bnd);
}

// Assemble a full record from a prepared solver. `prev` supplies cumulative
// counters; in/out are the boundary-mass interval sums since `prev`.
inline DiagnosticsRecord collect(const solver::Solver& sol,
                                 const domain::TemperatureExtension& ext,
                                 const domain::TemperatureExtension* d_ext, long step,
                                 long floors_cum, double influx_interval,
                                 double outflux_interval) {
    DiagnosticsRecord r;
    r.t = sol.sync_time();
    r.step = step;
    const Budget b = budget(sol);
    r.mass = b.mass;
    r.kinetic = b.kinetic;
    r.internal = b.internal;
    r.total = b.total;
    const Grid& g = sol.grid();
    long double s_int = 0.0L, tts_int = 0.0L;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double rs =
                sol.density()(i, j) * sol.eos().entropy(sol.density()(i, j), sol.theta()(i, j));
            s_int += (long double)rs;
            tts_int += (long double)(ext.theta_tilde(i, j) * rs);
        }
    r.entropy_total = (double)s_int * g.cell_area();
    r.ballistic = r.total - (double)tts_int * g.cell_area();
    const EntropyProduction ep = entropy_production(sol);
    r.entropy_production = ep.integral;
    r.min_sigma = ep.min_cell;
    const BallisticTerms bt = ballistic_terms(sol, ext, d_ext);
    r.ballistic_dissipation = bt.dissipation;
    r.flux_in_bracket = bt.flux_in;
    r.flux_out_bracket = bt.flux_out;
    r.rhs_convective = bt.rhs_convective;
    r.rhs_force = bt.rhs_force;
    r.rhs_theta = bt.rhs_theta;
    if (sol.boundary_data().mode == domain::Mode::RigidEquilibrium)
        r.lyapunov = lyapunov_functional(sol);
    r.min_rho = sol.density().min_interior();
    r.max_rho = sol.density().max_interior();
    r.min_theta = sol.theta().min_interior();
    r.max_theta = sol.theta().max_interior();
    r.floors_cum = floors_cum;
    r.influx_interval = influx_interval;
    r.outflux_interval = outflux_interval;
    return r;
}

namespace detail {
template <typename Get>
double trapezoid(const std::vector<DiagnosticsRecord>& recs, std::size_t a, std::size_t b,
                 Get get) {
    long double acc = 0.0L;
    for (std::size_t k = a; k < b; ++k)
        acc += 0.5L * (long double)(get(recs[k]) + get(recs[k + 1])) *
               (long double)(recs[k + 1].t - recs[k].t);
    return (double)acc;
}
}  // namespace detail

// Windowed ballistic-energy inequality residual over records [a, b]:
// LHS - RHS; <= discretization error for a consistent run.
inline double ballistic_inequality_residual(const std::vector<DiagnosticsRecord>& recs,
                                            std::size_t a, std::size_t b) {
    if (b >= recs.size() || a >= b)
        throw IncompleteWindowError("ballistic residual: bad record window");
    const double dEB = recs[b].ballistic - recs[a].ballistic;
    const double in = detail::trapezoid(recs, a, b, [](auto& r) { return r.flux_in_bracket; });
    const double out = detail::trapezoid(recs, a, b, [](auto& r) { return r.flux_out_bracket; });
    const double disp =
        detail::trapezoid(recs, a, b, [](auto& r) { return r.ballistic_dissipation; });
    const double conv = detail::trapezoid(recs, a, b, [](auto& r) { return r.rhs_convective; });
    const double force = detail::trapezoid(recs, a, b, [](auto& r) { return r.rhs_force; });
    const double theta = detail::trapezoid(recs, a, b, [](auto& r) { return r.rhs_theta; });
    return dEB + in + out + disp - (-conv + force - theta);
}

// [M(b) - M(a)] - (influx - outflux) accumulated over (a, b].
inline double mass_balance_residual(const std::vector<DiagnosticsRecord>& recs, std::size_t a,
                                    std::size_t b) {
    if (b >= recs.size() || a >= b)
        throw IncompleteWindowError("mass balance: bad record window");
    long double in = 0.0L, out = 0.0L;
    for (std::size_t k = a + 1; k <= b; ++k) {
        in += (long double)recs[k].influx_interval;
        out += (long double)recs[k].outflux_interval;
    }
    return (recs[b].mass - recs[a].mass) - (double)(in - out);
}

// --- dichotomy / dissipativity classifiers ----------------------------------

enum class WindowClass { BelowThreshold, StrictlyDecreasing, Neither };

struct DichotomyVerdict {
    std::vector<WindowClass> classes;
    bool dissipative_consistent = false;
    double limsup_estimate = 0.0;
    int first_below = -1;
};

struct Series {
    std::vector<double> t;
    std::vector<double> v;
};

namespace detail {
inline double interp(const Series& s, double t) {
    if (t <= s.t.front()) return s.v.front();
    if (t >= s.t.back()) return s.v.back();
    std::size_t lo = 0, hi = s.t.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (s.t[mid] <= t)
            lo = mid;
        else
            hi = mid;
    }
    const double w = (t - s.t[lo]) / (s.t[hi] - s.t[lo]);
    return s.v[lo] + w * (s.v[hi] - s.v[lo]);
}
}  // namespace detail

// Per unit-time window [I, I+tau]: below-threshold if min E <= Ecrit, else
// strictly-decreasing if E(I+tau) <= E(I) - C, else neither. The trajectory is
// graded dissipative-consistent when a below-threshold window occurs and no
// "neither" window follows it.
inline DichotomyVerdict dichotomy_classify(const Series& E, double tau, double Ecrit, double C) {
    if (E.t.size() < 2) throw std::invalid_argument("dichotomy: series too short");
    const double t0 = E.t.front(), t1 = E.t.back();
    const int n_windows = (int)std::floor((t1 - t0) / tau + 1e-12);
    if (n_windows < 2) throw std::invalid_argument("dichotomy: series must cover >= 2 windows");
    DichotomyVerdict v;
    std::size_t cursor = 0;
    for (int w = 0; w < n_windows; ++w) {
        const double a = t0 + w * tau;
        const double b = a + tau;
        double mn = std::min(detail::interp(E, a), detail::interp(E, b));
        while (cursor + 1 < E.t.size() && E.t[cursor + 1] <= a) ++cursor;
        for (std::size_t k = cursor; k < E.t.size() && E.t[k] <= b; ++k)
            if (E.t[k] >= a) mn = std::min(mn, E.v[k]);
        WindowClass cls;
        if (mn <= Ecrit)
            cls = WindowClass::BelowThreshold;
        else if (detail::interp(E, b) <= detail::interp(E, a) - C)
            cls = WindowClass::StrictlyDecreasing;
        else
            cls = WindowClass::Neither;
        v.classes.push_back(cls);
        if (cls == WindowClass::BelowThreshold && v.first_below < 0) v.first_below = w;
    }
    v.dissipative_consistent = v.first_below >= 0;
    for (std::size_t w = v.first_below >= 0 ? v.first_below : 0; w < v.classes.size(); ++w)
        if (v.first_below >= 0 && v.classes[w] == WindowClass::Neither)
            v.dissipative_consistent = false;
    // empirical stand-in for the limsup: max over the trailing half
    v.limsup_estimate = -std::numeric_limits<double>::infinity();
    const double t_half = 0.5 * (t0 + t1);
    for (std::size_t k = 0; k < E.t.size(); ++k)
        if (E.t[k] >= t_half) v.limsup_estimate = std::max(v.limsup_estimate, E.v[k]);
    return v;
}

// Max of the series over its trailing fraction (default one half).
inline double dissipativity_estimate(const Series& E, double trailing_fraction = 0.5) {
    if (E.t.empty()) throw std::invalid_argument("dissipativity_estimate: empty series");
    const double t_cut = E.t.back() - trailing_fraction * (E.t.back() - E.t.front());
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < E.t.size(); ++k)
        if (E.t[k] >= t_cut) m = std::max(m, E.v[k]);
    return m;
}

}  // namespace nsf::diag
