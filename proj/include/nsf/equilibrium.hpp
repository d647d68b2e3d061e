// Stationary density profiles: the momentum balance at constant boundary
// temperature and rigid tangential boundary velocity reduces pointwise to
//   h(rho_E(x)) = Pi(x) + lambda,   Pi = G + |u_B|^2 / 2,
// with the enthalpy transform h(rho) = integral_1^rho (dp/drho)(z, theta_B)/z dz
// and lambda fixed by the prescribed total mass.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nsf/boundary.hpp"
#include "nsf/core.hpp"
#include "nsf/numerics.hpp"
#include "nsf/solver.hpp"
#include "nsf/thermo.hpp"

namespace nsf::equil {

struct InfeasibleMassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Monotone enthalpy transform at fixed theta_B, cached on a node grid graded
// toward both the vacuum end and (with a hard sphere) the critical density.
class Enthalpy {
  public:
    Enthalpy(const thermo::Eos& eos, double theta_B) : eos_(&eos), theta_B_(theta_B) {
        if (theta_B <= 0.0) throw std::invalid_argument("enthalpy: theta_B must be > 0");
        const double rho_lo = 1e-12;
        std::vector<double> nodes;
        auto push_log = [&nodes](double a, double b, int per_decade) {
            const int n = std::max(8, (int)(per_decade * std::log10(b / a)) + 1);
            for (int k = 0; k < n; ++k) nodes.push_back(a * std::pow(b / a, double(k) / (n - 1)));
        };
        if (eos.hard_sphere_enabled()) {
            const double rb = eos.rho_bar();
            push_log(rho_lo, 0.5 * rb, 512);
            // grade toward the singularity: rho = rb (1 - e^{-tau})
            const double tau0 = -std::log(0.5), tau1 = -std::log(1e-6);
            const int m = 4096;
            for (int k = 1; k <= m; ++k)
                nodes.push_back(rb * (1.0 - std::exp(-(tau0 + (tau1 - tau0) * k / m))));
        } else {
            push_log(rho_lo, 1e6, 512);
        }
        // reference rho = 1 when admissible; otherwise any covered point (the
        // additive constant is absorbed by the mass multiplier)
        const double ref = (nodes.front() <= 1.0 && 1.0 <= nodes.back())
                               ? 1.0
                               : 0.5 * (nodes.front() + nodes.back());
        cache_ = num::CumulativeIntegral(
            std::move(nodes),
            [this](double z) { return eos_->dp_drho(z, theta_B_) / z; }, ref, 1e-13);
    }

    double theta_B() const { return theta_B_; }
    double rho_min() const { return cache_.x_min(); }
    double rho_max() const { return cache_.x_max(); }

    double operator()(double rho) const {
        if (rho <= 0.0) throw std::domain_error("enthalpy: rho must be > 0");
        if (!cache_.covers(rho)) throw std::domain_error("enthalpy: rho outside cached range");
        return cache_(rho);
    }

    double value_min() const { return cache_(cache_.x_min()); }
    double value_max() const { return cache_(cache_.x_max()); }

    // Monotone inverse to 1e-12 relative.
    double inverse(double v) const {
        if (v <= value_min() || v >= value_max())
            throw std::domain_error("inverse_enthalpy: value outside attainable range");
        auto fdf = [this, v](double rho) {
            return std::pair<double, double>(cache_(rho) - v,
                                             eos_->dp_drho(rho, theta_B_) / rho);
        };
        double guess = std::exp(std::clamp(v / theta_B_, -25.0, 25.0));  // exact for P(Z)=Z
        guess = std::clamp(guess, cache_.x_min() * 1.0000001, cache_.x_max() * 0.9999999);
        return num::newton_bisect(fdf, cache_.x_min(), cache_.x_max(), guess, 1e-12);
    }

  private:
    const thermo::Eos* eos_;
    double theta_B_;
    num::CumulativeIntegral cache_;
};

struct EquilibriumProfile {
    Field rho_E;
    double lambda = 0.0;
    double mass = 0.0;
    int iterations = 0;
};

// Sampled hypotheses of the rigid-equilibrium mode; throws on violation.
inline void check_equilibrium_hypotheses(const domain::BoundaryData& bd,
                                         const solver::ForcePreset& force, const Grid& g) {
    if (!bd.theta_B.is_constant())
        throw std::invalid_argument("equilibrium: theta_B must be constant");
    const auto part = domain::classify_boundary(bd, 0.0, g);
    for (std::size_t k = 0; k < part.faces.size(); ++k)
        if (part.labels[k] != domain::FaceLabel::Wall)
            throw std::invalid_argument("equilibrium: u_B . n must vanish on the boundary");
    for (int j = 0; j < g.ny; j += std::max(1, g.ny / 8))
        for (int i = 0; i < g.nx; i += std::max(1, g.nx / 8)) {
            const double x = g.xc(i), y = g.yc(j);
            const Mat2 sg = bd.velocity_gradient(0.0, x, y).sym();
            if (std::abs(sg.xx) + std::abs(sg.xy) + std::abs(sg.yy) > 1e-12)
                throw std::invalid_argument("equilibrium: u_B must be rigid (D u_B = 0)");
            const Vec2 uB = bd.velocity(0.0, x, y);
            if (std::abs(force.g(x, y).dot(uB)) > 1e-12 * std::max(1.0, force.sup_norm()))
                throw std::invalid_argument("equilibrium: grad G . u_B must vanish");
        }
}

// Solve for rho_E with prescribed mass M: rho_E = h^{-1}(Pi + lambda) with a
// scalar monotone root-find on the mass map, tolerance 1e-10 * M.
inline EquilibriumProfile solve_equilibrium(const solver::ForcePreset& force,
                                            const domain::BoundaryData& bd, double M,
                                            const Grid& g, const thermo::Eos& eos) {
    check_equilibrium_hypotheses(bd, force, g);
    if (!(M > 0.0)) throw InfeasibleMassError("equilibrium: mass must be positive");
    const double area_total = g.lx() * g.ly();
    if (eos.hard_sphere_enabled() && M >= eos.rho_bar() * area_total)
        throw InfeasibleMassError("equilibrium: mass at or above the hard-sphere capacity");

    const double thB = bd.theta(0.0, g.xc(0), g.yc(0));
    Enthalpy h(eos, thB);

    Field pi(g);
    double pi_min = std::numeric_limits<double>::infinity();
    double pi_max = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.xc(i), y = g.yc(j);
            const double v =
                force.potential(x, y) + 0.5 * bd.velocity(0.0, x, y).norm2();
            pi(i, j) = v;
            pi_min = std::min(pi_min, v);
            pi_max = std::max(pi_max, v);
        }

    int iters = 0;
    // strictly increasing mass map and its lambda-derivative in one pass
    auto mass_of = [&](double lambda) {
        long double m = 0.0L, dm = 0.0L;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double rho = h.inverse(pi(i, j) + lambda);
                m += (long double)rho;
                dm += (long double)(rho / eos.dp_drho(rho, thB));
            }
        ++iters;
        return std::pair<double, double>((double)m * g.cell_area() - M,
                                         (double)dm * g.cell_area());
    };

    // bracket lambda so pi + lambda stays strictly inside the attainable
    // enthalpy range at every cell (per-endpoint margins: the hard-sphere end
    // can be astronomically large)
    const double margin_lo = 1e-12 * std::max(1.0, std::abs(h.value_min()));
    const double margin_hi = 1e-9 * std::max(1.0, std::abs(h.value_max()));
    double lo = h.value_min() - pi_min + margin_lo;
    double hi = h.value_max() - pi_max - margin_hi;
    if (!(lo < hi)) throw InfeasibleMassError("equilibrium: degenerate enthalpy range");
    if (mass_of(lo).first > 0.0 || mass_of(hi).first < 0.0)
        throw InfeasibleMassError("equilibrium: requested mass outside attainable range");
    // Newton with bisection safeguard, stopping on the mass itself
    double lambda = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const auto [fm, dfm] = mass_of(lambda);
        if (std::abs(fm) <= 1e-10 * M) break;
        if (fm > 0.0)
            hi = lambda;
        else
            lo = lambda;
        double next = lambda - fm / dfm;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        lambda = next;
    }

    EquilibriumProfile prof;
    prof.rho_E = Field(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) prof.rho_E(i, j) = h.inverse(pi(i, j) + lambda);
    prof.lambda = lambda;
    prof.mass = prof.rho_E.sum_interior() * g.cell_area();
    prof.iterations = iters;
    return prof;
}

struct ConvergenceMetrics {
    double d_rho = 0.0;    // L^{5/3} distance of rho to rho_E
    double d_mom = 0.0;    // L^{5/4} distance of rho u to rho_E u_B
    double d_theta = 0.0;  // L^4 distance of theta to theta_B
};

inline double lp_norm(const Field& f, double p, double cell_area) {
    long double acc = 0.0L;
    for (int j = 0; j < f.ny(); ++j)
        for (int i = 0; i < f.nx(); ++i) acc += (long double)std::pow(std::abs(f(i, j)), p);
    return std::pow((double)acc * cell_area, 1.0 / p);
}

// Cell-sum L^p distances of a prepared state to the equilibrium triple.
inline ConvergenceMetrics convergence_metrics(const solver::Solver& sol,
                                              const EquilibriumProfile& prof) {
    const Grid& g = sol.grid();
    if (prof.rho_E.nx() != g.nx || prof.rho_E.ny() != g.ny)
        throw std::invalid_argument("convergence_metrics: grid mismatch");
    const auto& bd = sol.boundary_data();
    const double t = sol.sync_time();
    const double thB = bd.theta(t, g.xc(0), g.yc(0));
    long double a_rho = 0.0L, a_mom = 0.0L, a_th = 0.0L;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double rho = sol.density()(i, j);
            const double dr = std::abs(rho - prof.rho_E(i, j));
            a_rho += (long double)std::pow(dr, 5.0 / 3.0);
            const Vec2 uB = bd.velocity(t, g.xc(i), g.yc(j));
            const double dmx = rho * sol.velocity_x()(i, j) - prof.rho_E(i, j) * uB.x;
            const double dmy = rho * sol.velocity_y()(i, j) - prof.rho_E(i, j) * uB.y;
            a_mom += (long double)std::pow(std::hypot(dmx, dmy), 5.0 / 4.0);
            a_th += (long double)std::pow(std::abs(sol.theta()(i, j) - thB), 4.0);
        }
    ConvergenceMetrics m;
    const double area = g.cell_area();
    m.d_rho = std::pow((double)a_rho * area, 3.0 / 5.0);
    m.d_mom = std::pow((double)a_mom * area, 4.0 / 5.0);
    m.d_theta = std::pow((double)a_th * area, 0.25);
    return m;
}

}  // namespace nsf::equil
