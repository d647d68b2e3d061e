// Diagnostics functionals against hand values: ballistic energy, budgets,
// entropy production, Gauss-Green residual, classifiers, and window residuals.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "nsf/diagnostics.hpp"
#include "nsf/harmonic.hpp"
#include "nsf/solver.hpp"

using namespace nsf;
using solver::FluidState;
using solver::SchemeConfig;
using solver::Solver;

namespace {

thermo::Eos& linear_eos() {
    static thermo::Eos eos(thermo::EosSpec::linear());
    return eos;
}

thermo::TransportSpec make_transport(double mu0, double eta0, double kappa0, double bk = 1.0) {
    thermo::TransportSpec tr;
    tr.mu0 = mu0;
    tr.Lambda = 1.0;
    tr.eta0 = eta0;
    tr.kappa0 = kappa0;
    tr.beta_kappa = bk;
    return tr;
}

FluidState make_state(const Grid& g, const thermo::Eos& eos,
                      const std::function<double(double, double)>& rho,
                      const std::function<Vec2(double, double)>& u,
                      const std::function<double(double, double)>& theta) {
    FluidState s(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.xc(i), y = g.yc(j);
            const double r = rho(x, y);
            const Vec2 v = u(x, y);
            s.rho(i, j) = r;
            s.mom_x(i, j) = r * v.x;
            s.mom_y(i, j) = r * v.y;
            s.rho_e(i, j) = r * eos.internal_energy(r, theta(x, y));
        }
    return s;
}

domain::TemperatureExtension const_extension(const Grid& g, double v) {
    return domain::harmonic_extension([v](double, double) { return v; }, 0.0, g, 1e-13);
}

}  // namespace

TEST_CASE("ballistic energy hand values") {
    Grid g = Grid::unit_square(8, 8);
    auto& eos = linear_eos();
    domain::BoundaryData bd;  // u_B = 0, theta_B = 1
    SchemeConfig cfg;
    Solver sol(g, eos, make_transport(0.1, 0.0, 0.1), bd, cfg);
    auto ext = const_extension(g, 1.0);

    SECTION("rest state: E_B equals the internal energy") {
        auto s = make_state(g, eos, [](double, double) { return 1.0; },
                            [](double, double) { return Vec2{}; },
                            [](double, double) { return 1.0; });
        sol.sync(s, 0.0);
        CHECK_THAT(diag::ballistic_energy(sol, ext), Catch::Matchers::WithinRel(1.5, 1e-12));
    }

    SECTION("uniform relative velocity adds the kinetic part") {
        auto s = make_state(g, eos, [](double, double) { return 1.0; },
                            [](double, double) { return Vec2{2.0, 0.0}; },
                            [](double, double) { return 1.0; });
        sol.sync(s, 0.0);
        CHECK_THAT(diag::ballistic_energy(sol, ext), Catch::Matchers::WithinRel(3.5, 1e-12));
    }

    SECTION("raising theta~ by a constant lowers E_B by that times the entropy") {
        auto s = make_state(g, eos, [](double, double) { return 0.5; },
                            [](double, double) { return Vec2{}; },
                            [](double, double) { return 1.0; });
        sol.sync(s, 0.0);
        const double eb0 = diag::ballistic_energy(sol, ext);
        auto ext2 = const_extension(g, 1.0 + 0.3);
        const double eb1 = diag::ballistic_energy(sol, ext2);
        const double s_total = 0.5 * (-std::log(0.5 * 1.0));  // rho s, uniform on unit area
        CHECK(s_total > 0.0);
        CHECK_THAT(eb0 - eb1, Catch::Matchers::WithinRel(0.3 * s_total, 1e-10));
    }
}

TEST_CASE("ballistic energy is invariant under a common shift of u and u_B") {
    Grid g = Grid::unit_square(10, 10);
    auto& eos = linear_eos();
    SchemeConfig cfg;
    auto rho = [](double x, double y) { return 0.8 + 0.1 * std::sin(3 * x) * std::cos(2 * y); };
    auto th = [](double x, double) { return 1.1 + 0.2 * std::cos(x); };
    auto u0 = [](double x, double y) { return Vec2{0.1 * std::sin(y), -0.2 * std::cos(x)}; };
    const Vec2 shift{0.3, -0.2};

    domain::BoundaryData bd0;  // u_B = 0
    Solver sol0(g, eos, make_transport(0.1, 0.0, 0.1), bd0, cfg);
    auto s0 = make_state(g, eos, rho, u0, th);
    sol0.sync(s0, 0.0);
    auto ext = const_extension(g, 1.0);
    const double eb0 = diag::ballistic_energy(sol0, ext);

    domain::BoundaryData bd1;
    bd1.u_B = domain::VectorPreset::uniform(shift.x, shift.y);
    Solver sol1(g, eos, make_transport(0.1, 0.0, 0.1), bd1, cfg);
    auto s1 = make_state(g, eos, rho,
                         [&](double x, double y) { return u0(x, y) + shift; }, th);
    sol1.sync(s1, 0.0);
    CHECK_THAT(diag::ballistic_energy(sol1, ext), Catch::Matchers::WithinRel(eb0, 1e-12));
}

TEST_CASE("staleness guard on the extension") {
    Grid g = Grid::unit_square(8, 8);
    auto& eos = linear_eos();
    domain::BoundaryData bd;
    SchemeConfig cfg;
    Solver sol(g, eos, make_transport(0.1, 0.0, 0.1), bd, cfg);
    auto s = make_state(g, eos, [](double, double) { return 1.0; },
                        [](double, double) { return Vec2{}; },
                        [](double, double) { return 1.0; });
    sol.sync(s, 5.0);
    auto ext = const_extension(g, 1.0);
    ext.time_dependent = true;  // stamped at t = 0, state at t = 5
    CHECK_THROWS_AS(diag::ballistic_energy(sol, ext), diag::StalenessError);
}

TEST_CASE("budget hand values") {
    Grid g = Grid::unit_square(8, 8);
    auto& eos = linear_eos();
    domain::BoundaryData bd;
    SchemeConfig cfg;
    Solver sol(g, eos, make_transport(0.1, 0.0, 0.1), bd, cfg);
    auto s = make_state(g, eos, [](double, double) { return 1.0; },
                        [](double, double) { return Vec2{2.0, 0.0}; },
                        [](double, double) { return 1.0; });
    sol.sync(s, 0.0);
    const auto b = diag::budget(sol);
    CHECK_THAT(b.mass, Catch::Matchers::WithinRel(1.0, 1e-13));
    CHECK_THAT(b.kinetic, Catch::Matchers::WithinRel(2.0, 1e-13));
    CHECK_THAT(b.internal, Catch::Matchers::WithinRel(1.5, 1e-13));
    CHECK_THAT(b.total, Catch::Matchers::WithinRel(3.5, 1e-13));
}

TEST_CASE("entropy production") {
    Grid g = Grid::unit_square(16, 16);
    auto& eos = linear_eos();
    SchemeConfig cfg;

    SECTION("uniform fields produce nothing") {
        domain::BoundaryData bd;
        Solver sol(g, eos, make_transport(1.0, 0.0, 1.0), bd, cfg);
        auto s = make_state(g, eos, [](double, double) { return 1.0; },
                            [](double, double) { return Vec2{}; },
                            [](double, double) { return 1.0; });
        sol.sync(s, 0.0);
        const auto ep = diag::entropy_production(sol);
        CHECK_THAT(ep.integral, Catch::Matchers::WithinAbs(0.0, 1e-14));
        CHECK(ep.min_cell >= 0.0);
    }

    SECTION("shear at mu(1) = 2: sigma = 2 cellwise") {
        domain::BoundaryData bd;
        Solver sol(g, eos, make_transport(1.0, 0.0, 1e-9), bd, cfg);
        auto s = make_state(g, eos, [](double, double) { return 1.0; },
                            [](double, double y) { return Vec2{y, 0.0}; },
                            [](double, double) { return 1.0; });
        sol.sync(s, 0.0);
        const auto ep = diag::entropy_production(sol);
        for (int j = 2; j < g.ny - 2; ++j)
            for (int i = 2; i < g.nx - 2; ++i)
                CHECK_THAT(ep.sigma(i, j), Catch::Matchers::WithinRel(2.0, 1e-10));
    }

    SECTION("pure conduction: sigma = kappa gamma^2 / theta^2 cellwise") {
        const double gamma = 0.5;
        domain::BoundaryData bd;
        bd.theta_B = domain::ScalarPreset::bilinear(1.0, 0.0, gamma, 0.0);
        Solver sol(g, eos, make_transport(1e-9, 0.0, 1.0), bd, cfg);  // kappa = 1 + theta
        auto s = make_state(g, eos, [](double, double) { return 1.0; },
                            [](double, double) { return Vec2{}; },
                            [gamma](double, double y) { return 1.0 + gamma * y; });
        sol.sync(s, 0.0);
        const auto ep = diag::entropy_production(sol);
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i) {
                const double th = 1.0 + gamma * g.yc(j);
                const double expect = (1.0 + th) * gamma * gamma / (th * th);
                CHECK_THAT(ep.sigma(i, j), Catch::Matchers::WithinRel(expect, 1e-9));
                CHECK(ep.sigma(i, j) >= 0.0);
            }
    }
}

TEST_CASE("gauss-green residual") {
    Grid g = Grid::unit_square(16, 16);
    auto& eos = linear_eos();
    SchemeConfig cfg;

    SECTION("uniform temperature and data: both terms vanish") {
        domain::BoundaryData bd;  // theta_B = 1
        Solver sol(g, eos, make_transport(0.1, 0.0, 1.0, 3.0), bd, cfg);
        auto s = make_state(g, eos, [](double, double) { return 1.0; },
                            [](double, double) { return Vec2{}; },
                            [](double, double) { return 1.0; });
        sol.sync(s, 0.0);
        auto ext = domain::harmonic_extension(bd, 0.0, g, 1e-13);
        CHECK_THAT(diag::gauss_green_residual(sol, ext), Catch::Matchers::WithinAbs(0.0, 1e-9));
    }

    SECTION("state equal to its extension: residual is small (O(h))") {
        domain::BoundaryData bd;
        bd.theta_B = domain::ScalarPreset::bilinear(1.5, 0.2, 0.1, 0.3);
        Solver sol(g, eos, make_transport(0.1, 0.0, 1.0, 3.0), bd, cfg);
        auto ext = domain::harmonic_extension(bd, 0.0, g, 1e-13);
        auto s = make_state(g, eos, [](double, double) { return 1.0; },
                            [](double, double) { return Vec2{}; },
                            [](double, double) { return 1.0; });
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                s.rho_e(i, j) = eos.internal_energy(1.0, ext.theta_tilde(i, j));
        sol.sync(s, 0.0);
        // boundary-strip quadrature error only; the refinement study in the
        // acceptance suite pins the decay rate
        CHECK(std::abs(diag::gauss_green_residual(sol, ext)) < 0.05);
    }
}

TEST_CASE("mass balance residual over fabricated records") {
    std::vector<diag::DiagnosticsRecord> recs(4);
    double mass = 2.0;
    for (int k = 0; k < 4; ++k) {
        recs[k].t = k * 0.5;
        recs[k].influx_interval = (k > 0) ? 0.125 : 0.0;
        recs[k].outflux_interval = (k > 0) ? 0.050 : 0.0;
        recs[k].mass = mass;
        mass += 0.125 - 0.050;
    }
    CHECK_THAT(diag::mass_balance_residual(recs, 0, 3), Catch::Matchers::WithinAbs(0.0, 1e-15));
    recs[2].influx_interval += 1e-3;  // corrupted interval: residual flags it
    CHECK_THAT(diag::mass_balance_residual(recs, 0, 3),
               Catch::Matchers::WithinAbs(-1e-3, 1e-12));
    CHECK_THROWS_AS(diag::mass_balance_residual(recs, 3, 3), diag::IncompleteWindowError);
}

TEST_CASE("ballistic inequality residual is ~0 on a steady uniform run") {
    Grid g = Grid::unit_square(12, 12);
    auto& eos = linear_eos();
    domain::BoundaryData bd;  // u_B = 0, theta_B = 1
    SchemeConfig cfg;
    Solver sol(g, eos, make_transport(0.05, 0.0, 0.05), bd, cfg);
    auto s = make_state(g, eos, [](double, double) { return 1.0; },
                        [](double, double) { return Vec2{}; },
                        [](double, double) { return 1.0; });
    auto ext = const_extension(g, 1.0);
    std::vector<diag::DiagnosticsRecord> recs;
    sol.sync(s, s.t);
    recs.push_back(diag::collect(sol, ext, nullptr, 0, 0, 0.0, 0.0));
    for (int n = 1; n <= 5; ++n) {
        sol.step(s);
        sol.sync(s, s.t);
        recs.push_back(diag::collect(sol, ext, nullptr, n, 0, 0.0, 0.0));
    }
    CHECK_THAT(diag::ballistic_inequality_residual(recs, 0, recs.size() - 1),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("dichotomy classifier hand examples") {
    SECTION("linear decay: strictly decreasing windows, then below threshold") {
        diag::Series E;
        for (double t = 0.0; t <= 12.0 + 1e-9; t += 0.25) {
            E.t.push_back(t);
            E.v.push_back(std::max(10.0 - t, 1.0));
        }
        const auto v = diag::dichotomy_classify(E, 1.0, 3.0, 1.0);
        REQUIRE(v.classes.size() == 12);
        // E dips to 3 at t = 7: windows [0,1] .. [5,6] are strictly decreasing
        for (int w = 0; w < 6; ++w)
            CHECK(v.classes[w] == diag::WindowClass::StrictlyDecreasing);
        for (int w = 6; w < 12; ++w) CHECK(v.classes[w] == diag::WindowClass::BelowThreshold);
        CHECK(v.dissipative_consistent);
    }

    SECTION("truncated linear decay: all windows strictly decreasing") {
        diag::Series E;
        for (double t = 0.0; t <= 5.0 + 1e-9; t += 0.25) {
            E.t.push_back(t);
            E.v.push_back(10.0 - t);
        }
        const auto v = diag::dichotomy_classify(E, 1.0, 3.0, 1.0);
        for (auto c : v.classes) CHECK(c == diag::WindowClass::StrictlyDecreasing);
    }

    SECTION("constant series below threshold") {
        diag::Series E;
        for (double t = 0.0; t <= 5.0 + 1e-9; t += 0.5) {
            E.t.push_back(t);
            E.v.push_back(1.0);
        }
        const auto v = diag::dichotomy_classify(E, 1.0, 3.0, 1.0);
        for (auto c : v.classes) CHECK(c == diag::WindowClass::BelowThreshold);
        CHECK(v.dissipative_consistent);
    }

    SECTION("growing series: all neither, not dissipative-consistent") {
        diag::Series E;
        for (double t = 0.0; t <= 5.0 + 1e-9; t += 0.5) {
            E.t.push_back(t);
            E.v.push_back(10.0 + t);
        }
        const auto v = diag::dichotomy_classify(E, 1.0, 3.0, 1.0);
        for (auto c : v.classes) CHECK(c == diag::WindowClass::Neither);
        CHECK_FALSE(v.dissipative_consistent);
    }
}

TEST_CASE("dissipativity estimate") {
    diag::Series E;
    for (int k = 0; k <= 400; ++k) {
        const double t = 20.0 * k / 400.0;
        E.t.push_back(t);
        E.v.push_back(2.0 + std::exp(-t));
    }
    CHECK_THAT(diag::dissipativity_estimate(E, 0.5),
               Catch::Matchers::WithinRel(2.0 + std::exp(-10.0), 1e-12));

    diag::Series C;
    for (double t = 0.0; t <= 3.0; t += 0.5) {
        C.t.push_back(t);
        C.v.push_back(7.25);
    }
    CHECK(diag::dissipativity_estimate(C) == 7.25);

    diag::Series I;
    for (double t = 0.0; t <= 3.0; t += 0.5) {
        I.t.push_back(t);
        I.v.push_back(t);
    }
    CHECK(diag::dissipativity_estimate(I) == 3.0);
}
