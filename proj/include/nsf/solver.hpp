// Finite-volume semi-discretization of the compressible Navier-Stokes-Fourier
// system on a structured grid, evolving (rho, rho u, rho e):
//   - convective fluxes: first-order upwind or Rusanov on interior faces; the
//     pressure gradient is a non-conservative cell term,
//   - diffusion: compact face-based viscous stress and Fourier heat flux,
//   - internal-energy sources S : Du - p div u at cell centers,
//   - Dirichlet data through ghost cells: mirror values for u and theta (the
//     face value equals the datum), density prescribed on inflow and
//     extrapolated from the interior on wall/outflow faces,
//   - two-stage explicit midpoint time stepping with counted floors.
// Boundary convective fluxes use donor states with face speed u_B . n, so the
// discrete mass flux is rho_B u_B.n on inflow, rho_interior u_B.n on outflow,
// and exactly zero across walls.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsf/boundary.hpp"
#include "nsf/core.hpp"
#include "nsf/thermo.hpp"

namespace nsf::solver {

struct StepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FluxScheme { Rusanov, Upwind };

// Driving force presets; every preset is the gradient of the potential
// returned by potential().
struct ForcePreset {
    enum class Kind { Zero, Constant, PotentialLinearY } kind = Kind::Zero;
    double gx = 0.0;
    double gy = 0.0;

    static ForcePreset zero() { return {}; }
    static ForcePreset constant(double gx_, double gy_) { return {Kind::Constant, gx_, gy_}; }
    // G = g1 * y
    static ForcePreset potential_linear_y(double g1) { return {Kind::PotentialLinearY, 0.0, g1}; }

    Vec2 g(double /*x*/, double /*y*/) const {
        if (kind == Kind::Zero) return {0.0, 0.0};
        return {gx, gy};
    }
    double potential(double x, double y) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Constant: return gx * x + gy * y;
            case Kind::PotentialLinearY: return gy * y;
        }
        return 0.0;
    }
    bool is_zero() const { return kind == Kind::Zero || (gx == 0.0 && gy == 0.0); }
    double sup_norm() const { return std::hypot(gx, gy); }
};

struct SchemeConfig {
    double cfl = 0.35;
    FluxScheme flux = FluxScheme::Rusanov;
    double rho_floor = 1e-10;
    double theta_floor = 1e-8;
    long max_steps = 1000000;
    ForcePreset force;
    double dt_min = 1e-12;
    double dt_cap = std::numeric_limits<double>::infinity();

    void validate() const {
        if (!(cfl > 0.0 && cfl < 1.0)) throw std::invalid_argument("scheme: cfl must be in (0,1)");
        if (rho_floor <= 0.0 || theta_floor <= 0.0)
            throw std::invalid_argument("scheme: floors must be positive");
        if (max_steps <= 0) throw std::invalid_argument("scheme: max_steps must be positive");
        if (dt_min <= 0.0) throw std::invalid_argument("scheme: dt_min must be positive");
        if (!(dt_cap > 0.0)) throw std::invalid_argument("scheme: dt_cap must be positive");
    }
};

// Cell-centered conserved fields at a time instant (the ghost ring is scratch).
struct FluidState {
    Field rho;
    Field mom_x;
    Field mom_y;
    Field rho_e;
    double t = 0.0;

    FluidState() = default;
    explicit FluidState(const Grid& g) : rho(g), mom_x(g), mom_y(g), rho_e(g) {}
};

struct StepReport {
    double dt = 0.0;
    double max_wave_speed = 0.0;
    long floor_triggers = 0;
    double mass_influx = 0.0;   // boundary mass entering over the step, >= 0
    double mass_outflux = 0.0;  // boundary mass leaving over the step, >= 0
};

// Convective flux divergences plus the boundary accounting they imply.
struct ConvectiveUpdate {
    Field div_mass;
    Field div_mom_x;
    Field div_mom_y;
    Field div_rho_e;
    double influx_rate = 0.0;  // instantaneous boundary mass rates, >= 0
    double outflux_rate = 0.0;
    double max_wave_speed = 0.0;
};

class Solver {
  public:
    Solver(const Grid& grid, const thermo::Eos& eos, const thermo::TransportSpec& transport,
           const domain::BoundaryData& bd, const SchemeConfig& cfg)
        : g_(grid),
          eos_(eos),
          tr_(transport),
          bd_(bd),
          cfg_(cfg),
          rho_(grid),
          re_(grid),
          ux_(grid),
          uy_(grid),
          theta_(grid, 1.0),
          p_(grid),
          cs_(grid),
          fx_(4, std::vector<double>((grid.nx + 1) * grid.ny)),
          fy_(4, std::vector<double>(grid.nx * (grid.ny + 1))) {
        tr_.validate();
        cfg_.validate();
        part_ = domain::classify_boundary(bd_, 0.0, g_);
        u_static_ = bd_.u_B.is_static();
    }

    const Grid& grid() const { return g_; }
    const thermo::Eos& eos() const { return eos_; }
    const thermo::TransportSpec& transport() const { return tr_; }
    const domain::BoundaryData& boundary_data() const { return bd_; }
    const SchemeConfig& config() const { return cfg_; }
    const domain::BoundaryPartition& partition() const { return part_; }
    double sync_time() const { return t_; }

    // Prepared primitive mirrors of the last synced state (ghosts filled).
    const Field& theta() const { return theta_; }
    const Field& velocity_x() const { return ux_; }
    const Field& velocity_y() const { return uy_; }
    const Field& pressure_field() const { return p_; }
    const Field& density() const { return rho_; }

    // Recover primitives from the state at time t, apply counted floors, and
    // fill the ghost ring. Throws StepError on unrecoverable states.
    long sync(FluidState& s, double t) {
        if (!u_static_ || part_.t != t) part_ = domain::classify_boundary(bd_, t, g_);
        t_ = t;
        long floors = 0;
        for (int j = 0; j < g_.ny; ++j) {
            for (int i = 0; i < g_.nx; ++i) {
                double rho = s.rho(i, j);
                if (!std::isfinite(rho)) throw StepError("sync: non-finite density");
                if (rho < cfg_.rho_floor) {
                    rho = cfg_.rho_floor;
                    s.rho(i, j) = rho;
                    s.mom_x(i, j) = 0.0;
                    s.mom_y(i, j) = 0.0;
                    ++floors;
                }
                double th;
                try {
                    th = eos_.theta_from_internal_energy(rho, s.rho_e(i, j));
                } catch (const thermo::RecoveryError&) {
                    th = -1.0;  // handled below as a floor event
                } catch (const std::exception& e) {
                    throw StepError(std::string("sync: state recovery failed at cell (") +
                                    std::to_string(i) + "," + std::to_string(j) + "): " + e.what());
                }
                if (th < cfg_.theta_floor) {
                    th = cfg_.theta_floor;
                    s.rho_e(i, j) = rho * eos_.internal_energy(rho, th);
                    ++floors;
                }
                rho_(i, j) = rho;
                re_(i, j) = s.rho_e(i, j);
                ux_(i, j) = s.mom_x(i, j) / rho;
                uy_(i, j) = s.mom_y(i, j) / rho;
                theta_(i, j) = th;
                p_(i, j) = eos_.pressure(rho, th);
                cs_(i, j) = eos_.sound_speed(rho, th);
            }
        }
        fill_ghosts();
        return floors;
    }

    // Ghost policy: mirror u and theta so the face value is the boundary
    // datum; density prescribed on inflow, copied elsewhere; ghost pressure
    // from the ghost state.
    void fill_ghosts() {
        for (std::size_t k = 0; k < part_.faces.size(); ++k) {
            const auto& f = part_.faces[k];
            const Vec2 uB = bd_.velocity(t_, f.pos.x, f.pos.y);
            const double thB = bd_.theta(t_, f.pos.x, f.pos.y);
            const int gi = f.i + int(f.normal.x);
            const int gj = f.j + int(f.normal.y);
            const double rho_ghost = (part_.labels[k] == domain::FaceLabel::Inflow)
                                         ? bd_.rho(t_, f.pos.x, f.pos.y)
                                         : rho_(f.i, f.j);
            rho_(gi, gj) = rho_ghost;
            ux_(gi, gj) = 2.0 * uB.x - ux_(f.i, f.j);
            uy_(gi, gj) = 2.0 * uB.y - uy_(f.i, f.j);
            theta_(gi, gj) = std::max(2.0 * thB - theta_(f.i, f.j), cfg_.theta_floor);
            p_(gi, gj) = eos_.pressure(rho_ghost, theta_(gi, gj));
        }
        fill_corners(rho_);
        fill_corners(ux_);
        fill_corners(uy_);
        fill_corners(theta_);
        fill_corners(p_);
    }

    // Newton stress at a cell center from centered gradients:
    // S = 2 mu (Du - (div u / 2) I) + eta div u I  (d = 2).
    Mat2 stress_cell(int i, int j) const {
        const double dudx = (ux_(i + 1, j) - ux_(i - 1, j)) / (2.0 * g_.dx);
        const double dudy = (ux_(i, j + 1) - ux_(i, j - 1)) / (2.0 * g_.dy);
        const double dvdx = (uy_(i + 1, j) - uy_(i - 1, j)) / (2.0 * g_.dx);
        const double dvdy = (uy_(i, j + 1) - uy_(i, j - 1)) / (2.0 * g_.dy);
        const double div = dudx + dvdy;
        const double mu = tr_.mu(theta_(i, j));
        const double eta = tr_.eta(theta_(i, j));
        const double sxy = mu * (dudy + dvdx);
        return {2.0 * mu * (dudx - 0.5 * div) + eta * div, sxy, sxy,
                2.0 * mu * (dvdy - 0.5 * div) + eta * div};
    }

    double div_u_cell(int i, int j) const {
        return (ux_(i + 1, j) - ux_(i - 1, j)) / (2.0 * g_.dx) +
               (uy_(i, j + 1) - uy_(i, j - 1)) / (2.0 * g_.dy);
    }

    // S : Du in the manifestly nonnegative form 2 mu |dev Du|^2 + eta (div u)^2.
    double viscous_dissipation_cell(int i, int j) const {
        const double dudx = (ux_(i + 1, j) - ux_(i - 1, j)) / (2.0 * g_.dx);
        const double dudy = (ux_(i, j + 1) - ux_(i, j - 1)) / (2.0 * g_.dy);
        const double dvdx = (uy_(i + 1, j) - uy_(i - 1, j)) / (2.0 * g_.dx);
        const double dvdy = (uy_(i, j + 1) - uy_(i, j - 1)) / (2.0 * g_.dy);
        const double div = dudx + dvdy;
        const double dxy = 0.5 * (dudy + dvdx);
        const double devxx = dudx - 0.5 * div;
        const double devyy = dvdy - 0.5 * div;
        const double mu = tr_.mu(theta_(i, j));
        const double eta = tr_.eta(theta_(i, j));
        return 2.0 * mu * (devxx * devxx + devyy * devyy + 2.0 * dxy * dxy) + eta * div * div;
    }

    Vec2 grad_theta_cell(int i, int j) const {
        return {(theta_(i + 1, j) - theta_(i - 1, j)) / (2.0 * g_.dx),
                (theta_(i, j + 1) - theta_(i, j - 1)) / (2.0 * g_.dy)};
    }

    // Fourier face flux along +x / +y between a cell and its right/top
    // neighbor (boundary faces use the mirror ghosts).
    double heat_flux_x(int i, int j) const {
        const double th_f = 0.5 * (theta_(i - 1, j) + theta_(i, j));
        return -tr_.kappa(th_f) * (theta_(i, j) - theta_(i - 1, j)) / g_.dx;
    }
    double heat_flux_y(int i, int j) const {
        const double th_f = 0.5 * (theta_(i, j - 1) + theta_(i, j));
        return -tr_.kappa(th_f) * (theta_(i, j) - theta_(i, j - 1)) / g_.dy;
    }

    // Convective flux divergences for (rho, rho u, rho e); requires sync.
    ConvectiveUpdate convective_update() const {
        ConvectiveUpdate out{Field(g_), Field(g_), Field(g_), Field(g_)};
        compute_convective_fluxes();
        const double inv_dx = 1.0 / g_.dx, inv_dy = 1.0 / g_.dy;
        for (int j = 0; j < g_.ny; ++j) {
            for (int i = 0; i < g_.nx; ++i) {
                const int fx = j * (g_.nx + 1) + i;
                const int fy = j * g_.nx + i;
                const int fyN = fy + g_.nx;
                out.div_mass(i, j) = (fx_[0][fx + 1] - fx_[0][fx]) * inv_dx +
                                     (fy_[0][fyN] - fy_[0][fy]) * inv_dy;
                out.div_mom_x(i, j) = (fx_[1][fx + 1] - fx_[1][fx]) * inv_dx +
                                      (fy_[1][fyN] - fy_[1][fy]) * inv_dy;
                out.div_mom_y(i, j) = (fx_[2][fx + 1] - fx_[2][fx]) * inv_dx +
                                      (fy_[2][fyN] - fy_[2][fy]) * inv_dy;
                out.div_rho_e(i, j) = (fx_[3][fx + 1] - fx_[3][fx]) * inv_dx +
                                      (fy_[3][fyN] - fy_[3][fy]) * inv_dy;
            }
        }
        for (std::size_t k = 0; k < part_.faces.size(); ++k) {
            const auto& f = part_.faces[k];
            double flux_out;  // outward mass flow rate through this face
            if (f.side == Side::Left)
                flux_out = -fx_[0][f.j * (g_.nx + 1)] * f.length;
            else if (f.side == Side::Right)
                flux_out = fx_[0][f.j * (g_.nx + 1) + g_.nx] * f.length;
            else if (f.side == Side::Bottom)
                flux_out = -fy_[0][f.i] * f.length;
            else
                flux_out = fy_[0][g_.ny * g_.nx + f.i] * f.length;
            if (flux_out >= 0.0)
                out.outflux_rate += flux_out;
            else
                out.influx_rate -= flux_out;
        }
        double wmax = 0.0;
        for (int j = 0; j < g_.ny; ++j)
            for (int i = 0; i < g_.nx; ++i)
                wmax = std::max(wmax, std::hypot(ux_(i, j), uy_(i, j)) + cs_(i, j));
        if (!std::isfinite(wmax)) throw StepError("convective_update: wave speed overflow");
        out.max_wave_speed = wmax;
        return out;
    }

    // dt = cfl * min over cells of the acoustic, viscous, and conductive
    // stability bounds; requires sync.
    double time_step_size() const {
        const double h = std::min(g_.dx, g_.dy);
        double dt = std::numeric_limits<double>::infinity();
        for (int j = 0; j < g_.ny; ++j) {
            for (int i = 0; i < g_.nx; ++i) {
                const double rho = rho_(i, j);
                const double th = theta_(i, j);
                const double adv = std::hypot(ux_(i, j), uy_(i, j)) + cs_(i, j);
                const double dt_a = h / adv;
                const double dt_v = h * h * rho / (4.0 * tr_.mu(th));
                const double dt_k = h * h * rho * eos_.de_dtheta(rho, th) / (4.0 * tr_.kappa(th));
                dt = std::min(dt, std::min(dt_a, std::min(dt_v, dt_k)));
            }
        }
        if (!std::isfinite(dt) || dt <= 0.0)
            throw StepError("time_step_size: non-finite wave speed");
        return cfg_.cfl * dt;
    }

    // One two-stage midpoint step: s <- s + dt L(s + dt/2 L(s)).
    StepReport step(FluidState& s) {
        StepReport rep;
        rep.floor_triggers += sync(s, s.t);
        double dt = std::min(time_step_size(), cfg_.dt_cap);
        if (dt < cfg_.dt_min)
            throw StepError("step: dt " + std::to_string(dt) + " below dt_min (stiff state)");
        rep.dt = dt;

        if (mid_.rho.nx() == 0) mid_ = s;
        accumulate_rhs(s, mid_, 0.5 * dt, nullptr, rep);
        mid_.t = s.t + 0.5 * dt;
        rep.floor_triggers += sync(mid_, mid_.t);
        // stage 2 slopes at the midpoint; boundary mass accounting from this
        // stage times dt is exact for the committed update
        accumulate_rhs(s, s, dt, &rep, rep);
        s.t += dt;
        return rep;
    }

  private:
    void fill_corners(Field& f) const {
        const int nx = g_.nx, ny = g_.ny;
        f(-1, -1) = f(-1, 0) + f(0, -1) - f(0, 0);
        f(nx, -1) = f(nx, 0) + f(nx - 1, -1) - f(nx - 1, 0);
        f(-1, ny) = f(-1, ny - 1) + f(0, ny) - f(0, ny - 1);
        f(nx, ny) = f(nx, ny - 1) + f(nx - 1, ny) - f(nx - 1, ny - 1);
    }

    void face_flux(int iL, int jL, int iR, int jR, double nx, double ny, double* out) const {
        const double vnL = ux_(iL, jL) * nx + uy_(iL, jL) * ny;
        const double vnR = ux_(iR, jR) * nx + uy_(iR, jR) * ny;
        const double rhoL = rho_(iL, jL), rhoR = rho_(iR, jR);
        const double qL[4] = {rhoL, rhoL * ux_(iL, jL), rhoL * uy_(iL, jL), re_(iL, jL)};
        const double qR[4] = {rhoR, rhoR * ux_(iR, jR), rhoR * uy_(iR, jR), re_(iR, jR)};
        if (cfg_.flux == FluxScheme::Upwind) {
            const double vn = 0.5 * (vnL + vnR);
            const double* q = (vn >= 0.0) ? qL : qR;
            for (int c = 0; c < 4; ++c) out[c] = vn * q[c];
        } else {
            const double lam = std::max(std::abs(vnL) + cs_(iL, jL), std::abs(vnR) + cs_(iR, jR));
            for (int c = 0; c < 4; ++c)
                out[c] = 0.5 * (vnL * qL[c] + vnR * qR[c]) - 0.5 * lam * (qR[c] - qL[c]);
        }
    }

    // Fill the face scratch arrays with convective fluxes. Boundary faces
    // carry donor fluxes with face speed u_B . n (zero across walls).
    void compute_convective_fluxes() const {
        const int nx = g_.nx, ny = g_.ny;
        double f4[4];
        for (int j = 0; j < ny; ++j) {
            for (int i = 1; i < nx; ++i) {
                face_flux(i - 1, j, i, j, 1.0, 0.0, f4);
                const int f = j * (nx + 1) + i;
                for (int c = 0; c < 4; ++c) fx_[c][f] = f4[c];
            }
        }
        for (int j = 1; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                face_flux(i, j - 1, i, j, 0.0, 1.0, f4);
                const int f = j * nx + i;
                for (int c = 0; c < 4; ++c) fy_[c][f] = f4[c];
            }
        }
        for (std::size_t k = 0; k < part_.faces.size(); ++k) {
            const auto& f = part_.faces[k];
            const Vec2 uB = bd_.velocity(t_, f.pos.x, f.pos.y);
            const double vn = uB.dot(f.normal);
            double rho_d = 0.0, ux_d = 0.0, uy_d = 0.0, re_d = 0.0, rate = 0.0;
            switch (part_.labels[k]) {
                case domain::FaceLabel::Wall:
                    break;  // exact zero convective flux
                case domain::FaceLabel::Inflow: {
                    const double rhoB = bd_.rho(t_, f.pos.x, f.pos.y);
                    const double thB = bd_.theta(t_, f.pos.x, f.pos.y);
                    rho_d = rhoB;
                    ux_d = uB.x;
                    uy_d = uB.y;
                    re_d = rhoB * eos_.internal_energy(rhoB, thB);
                    rate = vn;
                    break;
                }
                case domain::FaceLabel::Outflow:
                    rho_d = rho_(f.i, f.j);
                    ux_d = ux_(f.i, f.j);
                    uy_d = uy_(f.i, f.j);
                    re_d = re_(f.i, f.j);
                    rate = vn;
                    break;
            }
            // convert outward-normal flux to the face array's +x/+y orientation
            const double orient = (f.side == Side::Left || f.side == Side::Bottom) ? -1.0 : 1.0;
            const double fm = orient * rate * rho_d;
            const double fmx = orient * rate * rho_d * ux_d;
            const double fmy = orient * rate * rho_d * uy_d;
            const double fe = orient * rate * re_d;
            if (f.side == Side::Left || f.side == Side::Right) {
                const int idx = f.j * (nx + 1) + (f.side == Side::Left ? 0 : nx);
                fx_[0][idx] = fm;
                fx_[1][idx] = fmx;
                fx_[2][idx] = fmy;
                fx_[3][idx] = fe;
            } else {
                const int idx = (f.side == Side::Bottom ? 0 : ny) * nx + f.i;
                fy_[0][idx] = fm;
                fy_[1][idx] = fmx;
                fy_[2][idx] = fmy;
                fy_[3][idx] = fe;
            }
        }
    }

    // out = base + dt * RHS(last-synced state); base and out may alias.
    void accumulate_rhs(const FluidState& base, FluidState& out, double dt, StepReport* acct,
                        StepReport& rep) {
        const ConvectiveUpdate conv = convective_update();
        rep.max_wave_speed = std::max(rep.max_wave_speed, conv.max_wave_speed);
        if (acct != nullptr) {
            acct->mass_influx = conv.influx_rate * dt;
            acct->mass_outflux = conv.outflux_rate * dt;
        }

        const int nx = g_.nx, ny = g_.ny;
        const double inv_dx = 1.0 / g_.dx, inv_dy = 1.0 / g_.dy;
        // viscous and heat face fluxes reuse the convective scratch (the
        // divergences above already captured it)
        std::vector<double>& sxx = fx_[0];  // S_xx at x-faces
        std::vector<double>& sxy = fx_[1];  // S_xy at x-faces
        std::vector<double>& qx = fx_[2];   // heat flux at x-faces
        std::vector<double>& syx = fy_[0];  // S_yx at y-faces
        std::vector<double>& syy = fy_[1];  // S_yy at y-faces
        std::vector<double>& qy = fy_[2];   // heat flux at y-faces

        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i <= nx; ++i) {
                const int L = i - 1, R = i;
                const double dudx = (ux_(R, j) - ux_(L, j)) * inv_dx;
                const double dvdx = (uy_(R, j) - uy_(L, j)) * inv_dx;
                // grouped so the mirrored face rounds identically
                const double dudy = 0.25 * inv_dy *
                                    ((ux_(L, j + 1) + ux_(R, j + 1)) - (ux_(L, j - 1) + ux_(R, j - 1)));
                const double dvdy = 0.25 * inv_dy *
                                    ((uy_(L, j + 1) + uy_(R, j + 1)) - (uy_(L, j - 1) + uy_(R, j - 1)));
                const double th_f = 0.5 * (theta_(L, j) + theta_(R, j));
                const double mu = tr_.mu(th_f), eta = tr_.eta(th_f);
                const double div = dudx + dvdy;
                const int f = j * (nx + 1) + i;
                sxx[f] = 2.0 * mu * (dudx - 0.5 * div) + eta * div;
                sxy[f] = mu * (dudy + dvdx);
                qx[f] = -tr_.kappa(th_f) * (theta_(R, j) - theta_(L, j)) * inv_dx;
            }
        }
        for (int j = 0; j <= ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const int B = j - 1, T = j;
                const double dudy = (ux_(i, T) - ux_(i, B)) * inv_dy;
                const double dvdy = (uy_(i, T) - uy_(i, B)) * inv_dy;
                const double dudx = 0.25 * inv_dx *
                                    ((ux_(i + 1, B) + ux_(i + 1, T)) - (ux_(i - 1, B) + ux_(i - 1, T)));
                const double dvdx = 0.25 * inv_dx *
                                    ((uy_(i + 1, B) + uy_(i + 1, T)) - (uy_(i - 1, B) + uy_(i - 1, T)));
                const double th_f = 0.5 * (theta_(i, B) + theta_(i, T));
                const double mu = tr_.mu(th_f), eta = tr_.eta(th_f);
                const double div = dudx + dvdy;
                const int f = j * nx + i;
                syx[f] = mu * (dudy + dvdx);
                syy[f] = 2.0 * mu * (dvdy - 0.5 * div) + eta * div;
                qy[f] = -tr_.kappa(th_f) * (theta_(i, T) - theta_(i, B)) * inv_dy;
            }
        }

        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const int fxW = j * (nx + 1) + i, fxE = fxW + 1;
                const int fyS = j * nx + i, fyN = fyS + nx;
                const Vec2 gf = cfg_.force.g(g_.xc(i), g_.yc(j));
                const double dpdx = (p_(i + 1, j) - p_(i - 1, j)) * (0.5 * inv_dx);
                const double dpdy = (p_(i, j + 1) - p_(i, j - 1)) * (0.5 * inv_dy);
                const double dvis_x = (sxx[fxE] - sxx[fxW]) * inv_dx + (syx[fyN] - syx[fyS]) * inv_dy;
                const double dvis_y = (sxy[fxE] - sxy[fxW]) * inv_dx + (syy[fyN] - syy[fyS]) * inv_dy;
                const double div_q = (qx[fxE] - qx[fxW]) * inv_dx + (qy[fyN] - qy[fyS]) * inv_dy;
                const double rho = rho_(i, j);
                out.rho(i, j) = base.rho(i, j) - dt * conv.div_mass(i, j);
                out.mom_x(i, j) = base.mom_x(i, j) +
                                  dt * (-conv.div_mom_x(i, j) - dpdx + dvis_x + rho * gf.x);
                out.mom_y(i, j) = base.mom_y(i, j) +
                                  dt * (-conv.div_mom_y(i, j) - dpdy + dvis_y + rho * gf.y);
                out.rho_e(i, j) =
                    base.rho_e(i, j) + dt * (-conv.div_rho_e(i, j) - div_q +
                                             viscous_dissipation_cell(i, j) -
                                             p_(i, j) * div_u_cell(i, j));
            }
        }
    }

    const Grid g_;
    const thermo::Eos& eos_;
    thermo::TransportSpec tr_;
    domain::BoundaryData bd_;
    SchemeConfig cfg_;
    domain::BoundaryPartition part_;
    bool u_static_ = true;
    double t_ = 0.0;

    Field rho_, re_, ux_, uy_, theta_, p_, cs_;
    FluidState mid_;
    // face scratch: x-faces (nx+1) x ny indexed j*(nx+1)+i, y-faces
    // nx x (ny+1) indexed j*nx+i; component order (mass, mom_x, mom_y, rho_e)
    mutable std::vector<std::vector<double>> fx_, fy_;
};

}  // namespace nsf::solver
