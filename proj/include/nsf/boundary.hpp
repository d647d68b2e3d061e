// Boundary data: analytic presets for (rho_B, theta_B, u_B) defined on all of
// space, the inflow/wall/outflow face classification by the sign of u_B . n,
// and validation of the data against the run-mode hypotheses.
#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "nsf/core.hpp"

namespace nsf::domain {

// --- scalar presets ---------------------------------------------------------

enum class ScalarPresetKind { Constant, Bilinear };

// value = c0 + cx x + cy y + cxy x y, all time-independent.
struct ScalarPreset {
    ScalarPresetKind kind = ScalarPresetKind::Constant;
    double c0 = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    double cxy = 0.0;

    static ScalarPreset constant(double v) { return {ScalarPresetKind::Constant, v, 0, 0, 0}; }
    static ScalarPreset bilinear(double c0, double cx, double cy, double cxy) {
        return {ScalarPresetKind::Bilinear, c0, cx, cy, cxy};
    }
    // hot bottom / cold top: linear profile in y over height ly
    static ScalarPreset linear_y(double bottom, double top, double ly) {
        return bilinear(bottom, 0.0, (top - bottom) / ly, 0.0);
    }

    double value(double /*t*/, double x, double y) const {
        if (kind == ScalarPresetKind::Constant) return c0;
        return c0 + cx * x + cy * y + cxy * x * y;
    }
    double dt(double, double, double) const { return 0.0; }
    bool is_constant() const {
        return kind == ScalarPresetKind::Constant || (cx == 0.0 && cy == 0.0 && cxy == 0.0);
    }
    bool is_static() const { return true; }
};

// --- velocity presets -------------------------------------------------------

enum class VectorPresetKind {
    Uniform,      // u = (ax, ay)
    LinearX,      // u = (u0 + (u1-u0) x / lx, 0)
    ParabolicX,   // u = (base + amp 4 (y/ly)(1 - y/ly), 0)
    ShearDecayX,  // u = (amp sin(k y) exp(-rate t), 0)
};

struct VectorPreset {
    VectorPresetKind kind = VectorPresetKind::Uniform;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    static VectorPreset uniform(double ax, double ay) {
        return {VectorPresetKind::Uniform, ax, ay, 0, 0};
    }
    static VectorPreset zero() { return uniform(0.0, 0.0); }
    static VectorPreset linear_x(double u0, double u1, double lx) {
        return {VectorPresetKind::LinearX, u0, u1, lx, 0};
    }
    static VectorPreset parabolic_x(double base, double amp, double ly) {
        return {VectorPresetKind::ParabolicX, base, amp, ly, 0};
    }
    static VectorPreset shear_decay_x(double amp, double k, double rate) {
        return {VectorPresetKind::ShearDecayX, amp, k, rate, 0};
    }

    Vec2 value(double t, double x, double y) const {
        switch (kind) {
            case VectorPresetKind::Uniform: return {a, b};
            case VectorPresetKind::LinearX: return {a + (b - a) * x / c, 0.0};
            case VectorPresetKind::ParabolicX: {
                const double s = y / c;
                return {a + b * 4.0 * s * (1.0 - s), 0.0};
            }
            case VectorPresetKind::ShearDecayX:
                return {a * std::sin(b * y) * std::exp(-c * t), 0.0};
        }
        return {0.0, 0.0};
    }

    Vec2 dt(double t, double /*x*/, double y) const {
        if (kind == VectorPresetKind::ShearDecayX)
            return {-c * a * std::sin(b * y) * std::exp(-c * t), 0.0};
        return {0.0, 0.0};
    }

    // Jacobian d u / d x (rows: component, cols: direction).
    Mat2 gradient(double t, double /*x*/, double y) const {
        switch (kind) {
            case VectorPresetKind::Uniform: return {};
            case VectorPresetKind::LinearX: return {(b - a) / c, 0.0, 0.0, 0.0};
            case VectorPresetKind::ParabolicX:
                return {0.0, b * 4.0 * (1.0 - 2.0 * y / c) / c, 0.0, 0.0};
            case VectorPresetKind::ShearDecayX:
                return {0.0, a * b * std::cos(b * y) * std::exp(-c * t), 0.0, 0.0};
        }
        return {};
    }

    bool is_static() const { return kind != VectorPresetKind::ShearDecayX; }
    bool is_zero() const { return kind == VectorPresetKind::Uniform && a == 0.0 && b == 0.0; }
};

// --- boundary data ----------------------------------------------------------

// Run modes keyed to the boundary hypotheses they must satisfy:
//   FlowThrough: net outflux through the boundary is strictly positive.
//   Impermeable: u_B . n = 0 on every face.
//   RigidEquilibrium: impermeable, rigid u_B, constant theta_B.
enum class Mode { FlowThrough, Impermeable, RigidEquilibrium };

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::FlowThrough: return "flow-through";
        case Mode::Impermeable: return "impermeable";
        case Mode::RigidEquilibrium: return "rigid-equilibrium";
    }
    return "?";
}

struct BoundaryData {
    Mode mode = Mode::Impermeable;
    ScalarPreset rho_B = ScalarPreset::constant(1.0);
    ScalarPreset theta_B = ScalarPreset::constant(1.0);
    VectorPreset u_B = VectorPreset::zero();

    double rho(double t, double x, double y) const { return rho_B.value(t, x, y); }
    double theta(double t, double x, double y) const { return theta_B.value(t, x, y); }
    double theta_dt(double t, double x, double y) const { return theta_B.dt(t, x, y); }
    Vec2 velocity(double t, double x, double y) const { return u_B.value(t, x, y); }
    Vec2 velocity_dt(double t, double x, double y) const { return u_B.dt(t, x, y); }
    Mat2 velocity_gradient(double t, double x, double y) const { return u_B.gradient(t, x, y); }
    bool is_static() const { return theta_B.is_static() && u_B.is_static(); }
};

// --- classification ---------------------------------------------------------

enum class FaceLabel : int { Inflow = -1, Wall = 0, Outflow = 1 };

struct BoundaryPartition {
    std::vector<BoundaryFace> faces;
    std::vector<FaceLabel> labels;
    double t = 0.0;
    double wall_tol = 0.0;

    int count(FaceLabel l) const {
        int n = 0;
        for (auto x : labels) n += (x == l);
        return n;
    }
};

// Label each face by the sign of u_B . n with a tie tolerance of
// 1e-12 x (velocity scale sampled on the boundary).
inline BoundaryPartition classify_boundary(const BoundaryData& bd, double t, const Grid& grid) {
    BoundaryPartition part;
    part.faces = boundary_faces(grid);
    part.t = t;
    double vscale = 0.0;
    std::vector<double> un(part.faces.size());
    for (std::size_t k = 0; k < part.faces.size(); ++k) {
        const auto& f = part.faces[k];
        const Vec2 u = bd.velocity(t, f.pos.x, f.pos.y);
        vscale = std::max(vscale, u.norm());
        un[k] = u.dot(f.normal);
    }
    part.wall_tol = 1e-12 * std::max(vscale, 1.0);
    part.labels.resize(part.faces.size());
    for (std::size_t k = 0; k < part.faces.size(); ++k) {
        if (un[k] < -part.wall_tol)
            part.labels[k] = FaceLabel::Inflow;
        else if (un[k] > part.wall_tol)
            part.labels[k] = FaceLabel::Outflow;
        else
            part.labels[k] = FaceLabel::Wall;
    }
    return part;
}

// --- validation --------------------------------------------------------------

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool pass = true;

    void add(const std::string& name, bool ok, double value, const std::string& detail = "") {
        checks.push_back({name, ok, value, detail});
        pass = pass && ok;
    }
    std::string to_text() const {
        std::ostringstream os;
        for (const auto& c : checks)
            os << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << c.value
               << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
        os << (pass ? "RESULT PASS" : "RESULT FAIL") << "\n";
        return os.str();
    }
};

// Check the boundary data against the hypotheses of the selected mode at the
// sampled times: positive bounded theta_B, admissible rho_B on inflow, net
// outflux (flow-through) or facewise impermeability, rigidity for the
// equilibrium mode. Report-valued; never throws.
inline ValidationReport validate_boundary_data(const BoundaryData& bd, const Grid& grid,
                                               const std::vector<double>& t_samples,
                                               double rho_bar = std::numeric_limits<double>::infinity()) {
    ValidationReport rep;
    double th_min = std::numeric_limits<double>::infinity();
    double th_max = -std::numeric_limits<double>::infinity();
    double net_flux_min = std::numeric_limits<double>::infinity();
    double max_abs_un = 0.0;
    double rho_in_min = std::numeric_limits<double>::infinity();
    double rho_in_max = -std::numeric_limits<double>::infinity();
    bool any_inflow_face = false;
    double theta_spread = 0.0;
    double max_sym_grad = 0.0;

    const auto faces = boundary_faces(grid);
    double th_ref = bd.theta(t_samples.empty() ? 0.0 : t_samples.front(), faces[0].pos.x,
                             faces[0].pos.y);
    for (double t : t_samples) {
        const auto part = classify_boundary(bd, t, grid);
        long double net = 0.0L;
        for (std::size_t k = 0; k < faces.size(); ++k) {
            const auto& f = faces[k];
            const double th = bd.theta(t, f.pos.x, f.pos.y);
            th_min = std::min(th_min, th);
            th_max = std::max(th_max, th);
            theta_spread = std::max(theta_spread, std::abs(th - th_ref));
            const Vec2 u = bd.velocity(t, f.pos.x, f.pos.y);
            const double un = u.dot(f.normal);
            net += (long double)(un * f.length);
            max_abs_un = std::max(max_abs_un, std::abs(un));
            if (part.labels[k] == FaceLabel::Inflow) {
                any_inflow_face = true;
                const double rb = bd.rho(t, f.pos.x, f.pos.y);
                rho_in_min = std::min(rho_in_min, rb);
                rho_in_max = std::max(rho_in_max, rb);
            }
            const Mat2 sg = bd.velocity_gradient(t, f.pos.x, f.pos.y).sym();
            max_sym_grad = std::max(
                max_sym_grad, std::max(std::max(std::abs(sg.xx), std::abs(sg.xy)),
                                       std::abs(sg.yy)));
        }
        net_flux_min = std::min(net_flux_min, (double)net);
    }

    rep.add("theta_B positive lower bound", th_min > 0.0, th_min);
    rep.add("theta_B finite upper bound", std::isfinite(th_max), th_max);

    switch (bd.mode) {
        case Mode::FlowThrough: {
            rep.add("net boundary outflux > 0", net_flux_min > 0.0, net_flux_min,
                    "min over sampled times of the boundary integral of u_B . n");
            if (any_inflow_face) {
                rep.add("rho_B > 0 on inflow", rho_in_min > 0.0, rho_in_min);
                rep.add("rho_B <= rho_bar on inflow", rho_in_max <= rho_bar, rho_in_max);
            } else {
                rep.add("inflow faces present", false, 0.0,
                        "flow-through mode without any inflow face");
            }
            break;
        }
        case Mode::Impermeable:
        case Mode::RigidEquilibrium: {
            const double tol = 1e-12 * std::max(1.0, max_abs_un);
            rep.add("u_B . n = 0 on every face", max_abs_un <= tol, max_abs_un);
            if (bd.mode == Mode::RigidEquilibrium) {
                rep.add("theta_B constant", theta_spread <= 1e-12 * std::max(1.0, std::abs(th_ref)),
                        theta_spread);
                rep.add("u_B rigid (symmetric gradient = 0)", max_sym_grad <= 1e-12, max_sym_grad);
            }
            break;
        }
    }
    return rep;
}

}  // namespace nsf::domain
