// Harmonic extension of boundary temperature data: matrix-free conjugate
// gradients on the 5-point Laplacian with mirror-ghost Dirichlet faces.
// The discrete solution obeys the same maximum principle as the continuous
// one, which the extension bounds check verifies.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "nsf/boundary.hpp"
#include "nsf/core.hpp"

namespace nsf::domain {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TemperatureExtension {
    Field theta_tilde;
    double t = 0.0;
    bool time_dependent = false;
    double data_min = 0.0;  // extrema of theta_B over the boundary faces
    double data_max = 0.0;
    double solve_tol = 0.0;
    int iterations = 0;

    // Fill the ghost ring so centered differences across boundary faces see
    // the Dirichlet value at the face: ghost = 2 theta_B - interior.
    void fill_ghosts(const Grid& g, const std::function<double(double, double)>& theta_b) {
        auto& f = theta_tilde;
        for (int j = 0; j < g.ny; ++j) {
            f(-1, j) = 2.0 * theta_b(g.origin.x, g.yc(j)) - f(0, j);
            f(g.nx, j) = 2.0 * theta_b(g.origin.x + g.lx(), g.yc(j)) - f(g.nx - 1, j);
        }
        for (int i = 0; i < g.nx; ++i) {
            f(i, -1) = 2.0 * theta_b(g.xc(i), g.origin.y) - f(i, 0);
            f(i, g.ny) = 2.0 * theta_b(g.xc(i), g.origin.y + g.ly()) - f(i, g.ny - 1);
        }
        f(-1, -1) = f(-1, 0) + f(0, -1) - f(0, 0);
        f(g.nx, -1) = f(g.nx, 0) + f(g.nx - 1, -1) - f(g.nx - 1, 0);
        f(-1, g.ny) = f(-1, g.ny - 1) + f(0, g.ny) - f(0, g.ny - 1);
        f(g.nx, g.ny) = f(g.nx, g.ny - 1) + f(g.nx - 1, g.ny) - f(g.nx - 1, g.ny - 1);
    }
};

namespace detail {

// A theta = -(discrete Laplacian with zero Dirichlet face data); SPD.
inline void apply_dirichlet_laplacian(const Grid& g, const Field& x, Field& ax) {
    const double wx = 1.0 / (g.dx * g.dx);
    const double wy = 1.0 / (g.dy * g.dy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double c = x(i, j);
            // mirror ghosts for zero boundary data: ghost = -interior
            const double xl = (i == 0) ? -c : x(i - 1, j);
            const double xr = (i == g.nx - 1) ? -c : x(i + 1, j);
            const double yb = (j == 0) ? -c : x(i, j - 1);
            const double yt = (j == g.ny - 1) ? -c : x(i, j + 1);
            ax(i, j) = wx * (2.0 * c - xl - xr) + wy * (2.0 * c - yb - yt);
        }
    }
}

inline double dot_interior(const Grid& g, const Field& a, const Field& b) {
    long double s = 0.0L;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) s += (long double)a(i, j) * b(i, j);
    return (double)s;
}

}  // namespace detail

// Solve the 5-point discrete Laplace equation with Dirichlet data theta_b on
// the boundary faces, to relative residual <= tol. theta_b is a callable
// (x, y) -> value evaluated at face midpoints.
inline TemperatureExtension harmonic_extension(const std::function<double(double, double)>& theta_b,
                                               double t, const Grid& g, double tol = 1e-12,
                                               int max_iter = 0) {
    if (tol <= 0.0) throw std::invalid_argument("harmonic_extension: tol must be > 0");
    if (max_iter <= 0) max_iter = 40 * (g.nx + g.ny) + 200;

    TemperatureExtension ext;
    ext.t = t;
    ext.solve_tol = tol;
    ext.theta_tilde = Field(g);

    // Right-hand side from the Dirichlet data: b = 2 theta_B / h^2 on cells
    // adjacent to the boundary. Track the data extrema on the way.
    Field b(g);
    const double wx = 1.0 / (g.dx * g.dx);
    const double wy = 1.0 / (g.dy * g.dy);
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = -std::numeric_limits<double>::infinity();
    auto tap = [&](double v) {
        dmin = std::min(dmin, v);
        dmax = std::max(dmax, v);
        return v;
    };
    for (int j = 0; j < g.ny; ++j) {
        b(0, j) += 2.0 * wx * tap(theta_b(g.origin.x, g.yc(j)));
        b(g.nx - 1, j) += 2.0 * wx * tap(theta_b(g.origin.x + g.lx(), g.yc(j)));
    }
    for (int i = 0; i < g.nx; ++i) {
        b(i, 0) += 2.0 * wy * tap(theta_b(g.xc(i), g.origin.y));
        b(i, g.ny - 1) += 2.0 * wy * tap(theta_b(g.xc(i), g.origin.y + g.ly()));
    }
    ext.data_min = dmin;
    ext.data_max = dmax;

    // CG with the mean of the data as initial guess.
    Field& x = ext.theta_tilde;
    x.fill(0.5 * (dmin + dmax));
    Field r(g), p(g), ap(g);
    detail::apply_dirichlet_laplacian(g, x, ap);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) r(i, j) = b(i, j) - ap(i, j);
    const double b_norm = std::sqrt(detail::dot_interior(g, b, b));
    const double stop = tol * std::max(b_norm, 1e-300);
    double rr = detail::dot_interior(g, r, r);
    p = r;
    int it = 0;
    while (std::sqrt(rr) > stop) {
        if (it >= max_iter)
            throw SolverError("harmonic_extension: CG did not converge within iteration cap");
        detail::apply_dirichlet_laplacian(g, p, ap);
        const double alpha = rr / detail::dot_interior(g, p, ap);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                x(i, j) += alpha * p(i, j);
                r(i, j) -= alpha * ap(i, j);
            }
        const double rr_new = detail::dot_interior(g, r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) p(i, j) = r(i, j) + beta * p(i, j);
        ++it;
    }
    ext.iterations = it;
    ext.fill_ghosts(g, theta_b);
    return ext;
}

inline TemperatureExtension harmonic_extension(const BoundaryData& bd, double t, const Grid& g,
                                               double tol = 1e-12) {
    auto ext = harmonic_extension(
        [&bd, t](double x, double y) { return bd.theta(t, x, y); }, t, g, tol);
    ext.time_dependent = !bd.theta_B.is_static();
    return ext;
}

struct ExtensionBounds {
    bool ok = false;
    double min = 0.0;
    double max = 0.0;
    double lower_allowed = 0.0;
    double upper_allowed = 0.0;
};

// Discrete maximum principle: interior extrema of theta_tilde must stay inside
// the boundary-data range, up to a margin reflecting the linear-solve residual.
inline ExtensionBounds extension_bounds_check(const TemperatureExtension& ext) {
    ExtensionBounds b;
    b.min = ext.theta_tilde.min_interior();
    b.max = ext.theta_tilde.max_interior();
    const double span = std::max(1.0, std::abs(ext.data_max) + std::abs(ext.data_min));
    const double margin = 1e3 * ext.solve_tol * span;
    b.lower_allowed = ext.data_min - margin;
    b.upper_allowed = ext.data_max + margin;
    b.ok = (b.min >= b.lower_allowed) && (b.max <= b.upper_allowed);
    return b;
}

}  // namespace nsf::domain
