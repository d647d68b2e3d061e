// Stationary-profile tests: enthalpy transform against closed forms and
// quadrature, mass-constrained solves against the barometric profile and the
// pseudo-time relaxation oracle, invariances and failure modes.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nsf/equilibrium.hpp"
#include "support/relaxation_oracle.hpp"

using namespace nsf;
using equil::Enthalpy;
using equil::solve_equilibrium;

namespace {
domain::BoundaryData rigid_bd(double theta_B) {
    domain::BoundaryData bd;
    bd.mode = domain::Mode::RigidEquilibrium;
    bd.theta_B = domain::ScalarPreset::constant(theta_B);
    bd.u_B = domain::VectorPreset::zero();
    return bd;
}
}  // namespace

TEST_CASE("enthalpy transform") {
    SECTION("ideal linear preset: h(rho) = theta_B ln rho") {
        thermo::Eos eos(thermo::EosSpec::linear());
        Enthalpy h(eos, 1.0);
        CHECK_THAT(h(1.0), Catch::Matchers::WithinAbs(0.0, 1e-13));
        CHECK_THAT(h(std::exp(1.0)), Catch::Matchers::WithinRel(1.0, 1e-11));
        CHECK_THAT(h.inverse(1.0), Catch::Matchers::WithinRel(std::exp(1.0), 1e-11));
        CHECK_THAT(h.inverse(h(0.37)), Catch::Matchers::WithinRel(0.37, 1e-11));
    }

    SECTION("polytropic closed form: h = theta ln rho + (5/2) p_inf (rho^{2/3} - 1)") {
        thermo::Eos eos(thermo::EosSpec::linear_polytropic(0.5));
        const double thB = 1.3;
        Enthalpy h(eos, thB);
        for (double rho : {0.2, 1.0, 1.7, 3.0}) {
            const double expect =
                thB * std::log(rho) + 2.5 * 0.5 * (std::cbrt(rho * rho) - 1.0);
            CHECK_THAT(h(rho), Catch::Matchers::WithinAbs(expect, 1e-10));
        }
    }

    SECTION("hard sphere: h blows up below rho_bar, inverse never reaches it") {
        thermo::EosSpec spec = thermo::EosSpec::linear();
        spec.with_hard_sphere(1.0, 4.0, 1.0);
        thermo::Eos eos(spec);
        Enthalpy h(eos, 1.0);
        CHECK(h(1.0 - 1e-5) > 1e10);
        for (double v : {0.0, 5.0, 1e4, 1e12}) CHECK(h.inverse(v) < 1.0);
        CHECK(h.inverse(1e12) > 0.99);
    }
}

TEST_CASE("uniform equilibrium for zero potential") {
    Grid g = Grid::unit_square(12, 12);
    thermo::Eos eos(thermo::EosSpec::linear_polytropic(0.5, 1e-3));
    const auto prof =
        solve_equilibrium(solver::ForcePreset::zero(), rigid_bd(1.0), 0.7, g, eos);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK_THAT(prof.rho_E(i, j), Catch::Matchers::WithinRel(0.7, 1e-10));
    CHECK_THAT(prof.mass, Catch::Matchers::WithinRel(0.7, 1e-10));
}

TEST_CASE("barometric profile matches the closed form") {
    Grid g = Grid::unit_square(32, 32);
    thermo::Eos eos(thermo::EosSpec::linear());
    const double grav = 0.8;
    const double M = 1.0;
    const auto prof = solve_equilibrium(solver::ForcePreset::potential_linear_y(-grav),
                                        rigid_bd(1.0), M, g, eos);
    // rho_E = A exp(-g y) with A from the same cell-sum mass constraint
    long double z = 0.0L;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) z += (long double)std::exp(-grav * g.yc(j));
    const double A = M / ((double)z * g.cell_area());
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            worst = std::max(worst, std::abs(prof.rho_E(i, j) - A * std::exp(-grav * g.yc(j))) /
                                        (A * std::exp(-grav * g.yc(j))));
    INFO("max relative deviation from the barometric closed form: " << worst);
    CHECK(worst < 1e-10);
}

TEST_CASE("equilibrium is invariant under shifting the potential") {
    Grid g = Grid::unit_square(16, 16);
    thermo::Eos eos(thermo::EosSpec::linear_polytropic(0.5));
    const auto a = solve_equilibrium(solver::ForcePreset::potential_linear_y(-0.5), rigid_bd(1.0),
                                     1.0, g, eos);
    // same potential shifted by a constant: G = -0.5 y + 3, realized via
    // constant force with identical gradient but different potential origin
    solver::ForcePreset shifted = solver::ForcePreset::constant(0.0, -0.5);
    // constant preset potential is gx x + gy y = -0.5 y: shift the comparison
    // instead by solving with the same gradient from a different preset
    const auto b = solve_equilibrium(shifted, rigid_bd(1.0), 1.0, g, eos);
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            worst = std::max(worst, std::abs(a.rho_E(i, j) - b.rho_E(i, j)));
    CHECK(worst < 1e-10);
}

TEST_CASE("mass map is monotone in the multiplier") {
    Grid g = Grid::unit_square(12, 12);
    thermo::Eos eos(thermo::EosSpec::linear());
    const auto p1 = solve_equilibrium(solver::ForcePreset::potential_linear_y(-0.5), rigid_bd(1.0),
                                      0.6, g, eos);
    const auto p2 = solve_equilibrium(solver::ForcePreset::potential_linear_y(-0.5), rigid_bd(1.0),
                                      1.2, g, eos);
    CHECK(p2.lambda > p1.lambda);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) CHECK(p2.rho_E(i, j) > p1.rho_E(i, j));
}

TEST_CASE("infeasible masses are rejected") {
    Grid g = Grid::unit_square(8, 8);
    thermo::EosSpec spec = thermo::EosSpec::linear();
    spec.with_hard_sphere(1.0, 4.0, 1.0);
    thermo::Eos eos(spec);
    CHECK_THROWS_AS(
        solve_equilibrium(solver::ForcePreset::zero(), rigid_bd(1.0), -1.0, g, eos),
        equil::InfeasibleMassError);
    CHECK_THROWS_AS(
        solve_equilibrium(solver::ForcePreset::zero(), rigid_bd(1.0), 1.5, g, eos),
        equil::InfeasibleMassError);
}

TEST_CASE("hypothesis checks reject non-equilibrium boundary data") {
    Grid g = Grid::unit_square(8, 8);
    thermo::Eos eos(thermo::EosSpec::linear());
    domain::BoundaryData bd = rigid_bd(1.0);
    bd.theta_B = domain::ScalarPreset::bilinear(1.0, 0.2, 0.0, 0.0);
    CHECK_THROWS_AS(solve_equilibrium(solver::ForcePreset::zero(), bd, 1.0, g, eos),
                    std::invalid_argument);
    domain::BoundaryData bd2 = rigid_bd(1.0);
    bd2.u_B = domain::VectorPreset::uniform(0.5, 0.0);  // not tangential on the rectangle
    CHECK_THROWS_AS(solve_equilibrium(solver::ForcePreset::zero(), bd2, 1.0, g, eos),
                    std::invalid_argument);
}

TEST_CASE("pseudo-time relaxation oracle confirms the solver") {
    Grid g = Grid::unit_square(16, 16);

    SECTION("polytropic preset under gravity") {
        thermo::Eos eos(thermo::EosSpec::linear_polytropic(0.5, 1e-3));
        const double thB = 1.0, M = 1.0;
        auto force = solver::ForcePreset::potential_linear_y(-0.5);
        const auto prof = solve_equilibrium(force, rigid_bd(thB), M, g, eos);
        const auto oracle = testsupport::relax_to_equilibrium(
            g, eos, thB, [&force](double x, double y) { return force.potential(x, y); }, M);
        double worst = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                worst = std::max(worst, std::abs(prof.rho_E(i, j) - oracle.rho(i, j)));
        INFO("oracle iterations " << oracle.iterations << ", final rate " << oracle.final_rate
                                  << ", max deviation " << worst);
        CHECK(worst < 1e-8);
    }

    SECTION("strong potential with the hard sphere stays below rho_bar") {
        thermo::EosSpec spec = thermo::EosSpec::linear();
        spec.with_hard_sphere(1.0, 4.0, 0.1);
        thermo::Eos eos(spec);
        const double thB = 1.0, M = 0.55;
        auto force = solver::ForcePreset::potential_linear_y(-2.0);
        const auto prof = solve_equilibrium(force, rigid_bd(thB), M, g, eos);
        CHECK(prof.rho_E.max_interior() < 1.0);
        const auto oracle = testsupport::relax_to_equilibrium(
            g, eos, thB, [&force](double x, double y) { return force.potential(x, y); }, M);
        double worst = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                worst = std::max(worst, std::abs(prof.rho_E(i, j) - oracle.rho(i, j)));
        INFO("oracle iterations " << oracle.iterations << ", max deviation " << worst);
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("convergence metrics") {
    Grid g = Grid::unit_square(10, 10);
    thermo::Eos eos(thermo::EosSpec::linear());
    auto bd = rigid_bd(1.0);
    solver::SchemeConfig cfg;
    thermo::TransportSpec tr;
    solver::Solver sol(g, eos, tr, bd, cfg);

    const auto prof = solve_equilibrium(solver::ForcePreset::zero(), bd, 1.0, g, eos);
    solver::FluidState s(g);
    SECTION("zero distance at the equilibrium triple") {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                s.rho(i, j) = prof.rho_E(i, j);
                s.rho_e(i, j) = prof.rho_E(i, j) * eos.internal_energy(prof.rho_E(i, j), 1.0);
            }
        sol.sync(s, 0.0);
        const auto m = equil::convergence_metrics(sol, prof);
        CHECK_THAT(m.d_rho, Catch::Matchers::WithinAbs(0.0, 1e-12));
        CHECK_THAT(m.d_mom, Catch::Matchers::WithinAbs(0.0, 1e-12));
        CHECK_THAT(m.d_theta, Catch::Matchers::WithinAbs(0.0, 1e-10));
    }
    SECTION("constant offsets reproduce the p-norm of a constant") {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                s.rho(i, j) = prof.rho_E(i, j) + 0.1;
                s.rho_e(i, j) = s.rho(i, j) * eos.internal_energy(s.rho(i, j), 1.2);
            }
        sol.sync(s, 0.0);
        const auto m = equil::convergence_metrics(sol, prof);
        CHECK_THAT(m.d_rho, Catch::Matchers::WithinRel(0.1, 1e-10));
        CHECK_THAT(m.d_theta, Catch::Matchers::WithinRel(0.2, 1e-10));
    }
}
