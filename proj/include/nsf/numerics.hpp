// Small numerical kernels shared across modules: adaptive quadrature,
// safeguarded scalar root-finding, and a cumulative-integral cache built on
// cubic Hermite interpolation with exact endpoint derivatives.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nsf::num {

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // a tolerance below the rounding floor of the local magnitude cannot be
    // met; stop refining there
    const double tol_eff = std::max(tol, 4e-16 * std::abs(left + right));
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol_eff)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson with absolute tolerance (floored at the rounding level of
// the result). Handles a > b by sign flip.
template <typename F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-12, int max_depth = 30) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return sign * detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

// Root of a strictly monotone function on [lo, hi] by Newton iteration with a
// bisection safeguard. `fdf` returns {f(x), f'(x)}. Relative tolerance on x.
template <typename FDF>
double newton_bisect(const FDF& fdf, double lo, double hi, double x0, double rel_tol = 1e-12,
                     int max_iter = 200) {
    auto f_lo = fdf(lo).first;
    auto f_hi = fdf(hi).first;
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw std::domain_error("newton_bisect: root not bracketed");
    double x = std::min(std::max(x0, lo), hi);
    for (int it = 0; it < max_iter; ++it) {
        auto [fx, dfx] = fdf(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (f_hi > 0.0))
            hi = x;
        else
            lo = x;
        double step = dfx != 0.0 ? -fx / dfx : std::numeric_limits<double>::infinity();
        double xn = x + step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // safeguard
        const double dx = std::abs(xn - x);
        x = xn;
        if (dx <= rel_tol * std::max(1.0, std::abs(x)) && it > 0) return x;
        if (hi - lo <= rel_tol * std::max(1.0, std::abs(x))) return 0.5 * (lo + hi);
    }
    return x;
}

// Bisection-only variant for functions without a cheap derivative.
template <typename F>
double bisect(const F& f, double lo, double hi, double rel_tol = 1e-13, int max_iter = 200) {
    double f_lo = f(lo);
    if (f_lo == 0.0) return lo;
    double f_hi = f(hi);
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) throw std::domain_error("bisect: root not bracketed");
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (lo + hi);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (f_hi > 0.0)) {
            hi = m;
            f_hi = fm;
        } else {
            lo = m;
        }
        if (hi - lo <= rel_tol * std::max(1.0, std::abs(m))) break;
    }
    return 0.5 * (lo + hi);
}

// Cumulative integral cache: stores F(x) = integral of f from x_ref on a node
// grid, evaluated between nodes by cubic Hermite with the exact derivative
// f(x) at the nodes. Monotone when f has one sign.
class CumulativeIntegral {
  public:
    CumulativeIntegral() = default;

    // Nodes must be strictly increasing and contain x_ref.
    CumulativeIntegral(std::vector<double> nodes, const std::function<double(double)>& f,
                       double x_ref, double quad_tol = 1e-13)
        : x_(std::move(nodes)) {
        if (x_.size() < 2) throw std::invalid_argument("CumulativeIntegral: need >= 2 nodes");
        const std::size_t n = x_.size();
        val_.resize(n);
        der_.resize(n);
        for (std::size_t k = 0; k < n; ++k) der_[k] = f(x_[k]);
        // cumulative values via per-interval quadrature, then shift to x_ref
        val_[0] = 0.0;
        for (std::size_t k = 1; k < n; ++k)
            val_[k] = val_[k - 1] + integrate(f, x_[k - 1], x_[k], quad_tol);
        double at_ref = eval_raw(x_ref);
        for (auto& v : val_) v -= at_ref;
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    bool covers(double x) const { return x >= x_.front() && x <= x_.back(); }

    double operator()(double x) const { return eval_raw(x); }

  private:
    double eval_raw(double x) const {
        if (!covers(x)) throw std::domain_error("CumulativeIntegral: out of range");
        // binary search for interval
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (x_[mid] <= x)
                lo = mid;
            else
                hi = mid;
        }
        const double h = x_[hi] - x_[lo];
        const double t = (x - x_[lo]) / h;
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        const double h10 = t3 - 2.0 * t2 + t;
        const double h01 = -2.0 * t3 + 3.0 * t2;
        const double h11 = t3 - t2;
        return h00 * val_[lo] + h10 * h * der_[lo] + h01 * val_[hi] + h11 * h * der_[hi];
    }

    std::vector<double> x_;
    std::vector<double> val_;
    std::vector<double> der_;
};

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = a + (b - a) * k / (n - 1);
    v.front() = a;
    v.back() = b;
    return v;
}

}  // namespace nsf::num
