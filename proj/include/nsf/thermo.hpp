// Equation of state and transport coefficients.
//
// Pressure / internal energy / entropy follow the monatomic scaling structure
//   p~(rho,theta) = theta^{5/2} P(rho theta^{-3/2}) + (a/3) theta^4
//   e~(rho,theta) = (3/2)(theta^{5/2}/rho) P(Z) + (a/rho) theta^4
//   s (rho,theta) = S(Z) + (4a/3) theta^3 / rho,  S'(Z) = -(3/2)(5/3 P - P'Z)/Z^2
// plus an optional hard-sphere pressure component diverging at rho_bar. The
// whole triple satisfies the Gibbs relation theta ds = de + p d(1/rho); the
// finite-difference residual of that identity is exposed as a self-test.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nsf/numerics.hpp"

namespace nsf::thermo {

struct SingularStateError : std::domain_error {
    using std::domain_error::domain_error;
};
struct VacuumError : std::domain_error {
    using std::domain_error::domain_error;
};
struct RecoveryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class StructuralKind { Linear, LinearPolytropic, Tabulated };

// Sample table for a user-supplied structural function: strictly increasing
// Z nodes starting at Z=0 with P(0)=0, P'>0. Evaluated as the C1 piecewise
// cubic Hermite through (Z_i, P_i, P'_i); the derivative returned is the
// derivative of that cubic, so P and P' stay mutually consistent.
struct StructuralTable {
    std::vector<double> z;
    std::vector<double> p;
    std::vector<double> dp;
};

struct HardSphereSpec {
    bool enabled = false;
    double rho_bar = 1.0;  // critical density
    double beta = 4.0;     // blow-up exponent, > 3
    double c = 1.0;        // amplitude
};

struct EosSpec {
    StructuralKind kind = StructuralKind::Linear;
    double p_inf = 0.0;  // polytropic coefficient (LinearPolytropic)
    StructuralTable table;
    double a = 0.0;  // radiation constant
    HardSphereSpec hard_sphere;
    double entropy_const = 0.0;  // fixes s at the reference state (rho=1, theta=1)

    static EosSpec linear(double a_rad = 0.0) {
        EosSpec s;
        s.kind = StructuralKind::Linear;
        s.a = a_rad;
        return s;
    }
    static EosSpec linear_polytropic(double p_inf_, double a_rad = 0.0) {
        EosSpec s;
        s.kind = StructuralKind::LinearPolytropic;
        s.p_inf = p_inf_;
        s.a = a_rad;
        return s;
    }
    EosSpec& with_hard_sphere(double rho_bar = 1.0, double beta = 4.0, double c = 1.0) {
        hard_sphere = {true, rho_bar, beta, c};
        return *this;
    }
};

struct StructuralValue {
    double P;
    double dP;
};

class Eos {
  public:
    explicit Eos(EosSpec spec) : spec_(std::move(spec)) {
        validate_structural();
        if (spec_.hard_sphere.enabled) {
            const auto& hs = spec_.hard_sphere;
            if (hs.rho_bar <= 0.0) throw std::invalid_argument("hard sphere: rho_bar must be > 0");
            if (hs.beta <= 3.0) throw std::invalid_argument("hard sphere: beta must be > 3");
            if (hs.c <= 0.0) throw std::invalid_argument("hard sphere: amplitude must be > 0");
            build_hs_energy_cache();
        }
        if (spec_.kind == StructuralKind::Tabulated) build_entropy_cache();
    }

    const EosSpec& spec() const { return spec_; }
    bool hard_sphere_enabled() const { return spec_.hard_sphere.enabled; }
    double rho_bar() const { return spec_.hard_sphere.rho_bar; }
    // Largest admissible density (open upper bound).
    double rho_max() const {
        return spec_.hard_sphere.enabled ? spec_.hard_sphere.rho_bar
                                         : std::numeric_limits<double>::infinity();
    }
    // Empirical bound on (5/3 P - P'Z)/Z recorded during validation.
    double structural_bound() const { return h2_bound_; }

    StructuralValue structural(double Z) const {
        if (Z < 0.0) throw std::domain_error("structural: Z must be >= 0");
        switch (spec_.kind) {
            case StructuralKind::Linear:
                return {Z, 1.0};
            case StructuralKind::LinearPolytropic: {
                const double z23 = std::cbrt(Z * Z);  // Z^{2/3}
                return {Z + spec_.p_inf * Z * z23, 1.0 + (5.0 / 3.0) * spec_.p_inf * z23};
            }
            case StructuralKind::Tabulated:
                return eval_table(Z);
        }
        throw std::logic_error("structural: bad kind");
    }

    // Entropy structural part S(Z), normalized so s(1,1) = entropy_const + radiation.
    double entropy_structural(double Z) const {
        if (Z <= 0.0) throw std::domain_error("entropy_structural: Z must be > 0");
        if (spec_.kind == StructuralKind::Tabulated) {
            const double lz = std::log(Z);
            if (!s_cache_.covers(lz))
                throw std::domain_error("entropy_structural: Z outside tabulated range");
            return spec_.entropy_const + s_cache_(lz);
        }
        // For P(Z) = Z + p_inf Z^{5/3}: (5/3)P - P'Z = (2/3)Z, so S'(Z) = -1/Z
        // exactly and the polytropic part carries no entropy.
        return spec_.entropy_const - std::log(Z);
    }

    double hard_sphere_pressure(double rho) const {
        if (!spec_.hard_sphere.enabled) return 0.0;
        check_density(rho);
        const auto& hs = spec_.hard_sphere;
        const double u = rho / hs.rho_bar;
        const double rb = std::pow(hs.rho_bar, -hs.beta);
        if (u < 3e-3) return hs.c * rb * u * u * binom_tail(hs.beta, u, 2);
        return hs.c * (std::pow(hs.rho_bar - rho, -hs.beta) - rb - hs.beta * rb / hs.rho_bar * rho);
    }

    double hard_sphere_dpressure(double rho) const {
        if (!spec_.hard_sphere.enabled) return 0.0;
        check_density(rho);
        const auto& hs = spec_.hard_sphere;
        const double u = rho / hs.rho_bar;
        const double rb1 = std::pow(hs.rho_bar, -hs.beta - 1.0);
        if (u < 3e-3) return hs.c * hs.beta * rb1 * u * binom_tail(hs.beta + 1.0, u, 1);
        return hs.c * hs.beta * (std::pow(hs.rho_bar - rho, -hs.beta - 1.0) - rb1);
    }

    // Hard-sphere specific energy: integral of p_HS(z)/z^2 from rho_bar/2 to
    // rho. The 1/z^2 weight is what the Gibbs relation requires for a
    // temperature-independent pressure component.
    double hard_sphere_energy(double rho) const {
        if (!spec_.hard_sphere.enabled) return 0.0;
        check_density(rho);
        if (rho <= hs_cache_.x_max()) return hs_cache_(rho);
        // slow path close to the singularity
        return hs_cache_(hs_cache_.x_max()) +
               num::integrate([this](double z) { return hs_energy_integrand(z); },
                              hs_cache_.x_max(), rho, 1e-12);
    }

    double pressure(double rho, double theta) const {
        check_state(rho, theta);
        const double t32 = theta * std::sqrt(theta);
        const double Z = rho / t32;
        return theta * t32 * structural(Z).P + (spec_.a / 3.0) * theta * theta * theta * theta +
               hard_sphere_pressure(rho);
    }

    double dp_drho(double rho, double theta) const {
        check_state(rho, theta);
        const double Z = rho / (theta * std::sqrt(theta));
        return theta * structural(Z).dP + hard_sphere_dpressure(rho);
    }

    double sound_speed(double rho, double theta) const { return std::sqrt(dp_drho(rho, theta)); }

    // Specific internal energy; undefined at vacuum.
    double internal_energy(double rho, double theta) const {
        if (rho <= 0.0) throw VacuumError("internal_energy: rho must be > 0");
        check_state(rho, theta);
        const double t32 = theta * std::sqrt(theta);
        const double Z = rho / t32;
        return 1.5 * (theta * t32 / rho) * structural(Z).P +
               (spec_.a / rho) * theta * theta * theta * theta + hard_sphere_energy(rho);
    }

    // Specific entropy.
    double entropy(double rho, double theta) const {
        if (rho <= 0.0) throw std::domain_error("entropy: rho must be > 0");
        if (theta <= 0.0) throw std::domain_error("entropy: theta must be > 0");
        check_state(rho, theta);
        const double Z = rho / (theta * std::sqrt(theta));
        return entropy_structural(Z) + (4.0 * spec_.a / 3.0) * theta * theta * theta / rho;
    }

    // d e / d theta at fixed rho; equals (9/4)(5/3 P - P'Z)/Z + 4 a theta^3/rho,
    // strictly positive (thermodynamic stability).
    double de_dtheta(double rho, double theta) const {
        if (rho <= 0.0) throw VacuumError("de_dtheta: rho must be > 0");
        check_state(rho, theta);
        const double Z = rho / (theta * std::sqrt(theta));
        const auto sv = structural(Z);
        const double w_over_z = (5.0 / 3.0) * sv.P / Z - sv.dP;
        return 2.25 * w_over_z + 4.0 * spec_.a * theta * theta * theta / rho;
    }

    // Greatest lower bound of e(rho, .): the theta-independent elastic parts.
    double energy_floor(double rho) const {
        double floor = hard_sphere_energy(rho);
        // lim_{theta->0} e~ = (3/2) p_inf rho^{2/3}
        const double pinf = asymptotic_p_inf();
        floor += 1.5 * pinf * std::cbrt(rho * rho);
        return floor;
    }

    // Invert rho * e(rho, theta) = rho_e for theta: monotone safeguarded
    // Newton to 1e-12 relative, bracketing from a closed-form initial guess.
    double theta_from_internal_energy(double rho, double rho_e) const {
        if (rho <= 0.0) throw VacuumError("theta recovery: rho must be > 0");
        check_density(rho);
        const double e_target = rho_e / rho;
        const double floor = energy_floor(rho);
        if (!(e_target > floor))
            throw RecoveryError("theta recovery: internal energy below elastic floor");
        // thermal part is 1.5 theta + a theta^4 / rho for the closed presets;
        // good enough as a guess for the tabulated case too
        const double e_eff = e_target - floor;
        double guess = (2.0 / 3.0) * e_eff;
        if (spec_.a > 0.0)
            guess = std::min(guess, std::pow(e_eff * rho / spec_.a, 0.25));
        guess = std::max(guess, 1e-14);
        auto g = [&](double th) { return internal_energy(rho, th) - e_target; };
        double lo = guess, hi = guess;
        int guard = 0;
        while (g(hi) < 0.0) {
            hi *= 2.0;
            if (++guard > 2000) throw RecoveryError("theta recovery: could not bracket above");
        }
        guard = 0;
        while (g(lo) > 0.0) {
            lo *= 0.5;
            if (lo < 1e-300 || ++guard > 2000)
                throw RecoveryError("theta recovery: could not bracket below");
        }
        auto fdf = [&](double th) {
            return std::pair<double, double>(internal_energy(rho, th) - e_target,
                                             de_dtheta(rho, th));
        };
        return num::newton_bisect(fdf, lo, hi, std::clamp(guess, lo, hi), 1e-12);
    }

    // Centered-difference residuals of the Gibbs relation:
    //   r_theta = de/dtheta - theta ds/dtheta
    //   r_rho   = de/drho   - theta ds/drho - p/rho^2
    // Step per variable: h_rel * max(1, value).
    std::pair<double, double> gibbs_residual(double rho, double theta, double h_rel = 1e-5) const {
        const double h_t = h_rel * std::max(1.0, theta);
        const double h_r = h_rel * std::max(1.0, rho);
        if (theta - h_t <= 0.0 || rho - h_r <= 0.0 ||
            (spec_.hard_sphere.enabled && rho + h_r >= spec_.hard_sphere.rho_bar))
            throw std::domain_error("gibbs_residual: stencil leaves admissible domain");
        const double de_dt =
            (internal_energy(rho, theta + h_t) - internal_energy(rho, theta - h_t)) / (2.0 * h_t);
        const double ds_dt = (entropy(rho, theta + h_t) - entropy(rho, theta - h_t)) / (2.0 * h_t);
        const double de_dr =
            (internal_energy(rho + h_r, theta) - internal_energy(rho - h_r, theta)) / (2.0 * h_r);
        const double ds_dr = (entropy(rho + h_r, theta) - entropy(rho - h_r, theta)) / (2.0 * h_r);
        const double r_theta = de_dt - theta * ds_dt;
        const double r_rho = de_dr - theta * ds_dr - pressure(rho, theta) / (rho * rho);
        return {r_theta, r_rho};
    }

    void check_state(double rho, double theta) const {
        if (rho < 0.0) throw std::domain_error("eos: rho must be >= 0");
        if (theta <= 0.0) throw std::domain_error("eos: theta must be > 0");
        check_density(rho);
    }

  private:
    void check_density(double rho) const {
        if (spec_.hard_sphere.enabled && rho >= spec_.hard_sphere.rho_bar)
            throw SingularStateError("eos: density at or above hard-sphere bound rho_bar");
    }

    // Sum_{m>=k} binom(beta+m-1, m) u^{m-k} truncated at m = k+5; used where
    // the direct hard-sphere formula would cancel.
    static double binom_tail(double beta, double u, int k) {
        double coeff = 1.0;  // binom(beta+m-1,m) built incrementally
        for (int m = 1; m <= k; ++m) coeff *= (beta + m - 1.0) / m;
        double sum = 0.0, upow = 1.0;
        for (int m = k; m <= k + 5; ++m) {
            if (m > k) {
                coeff *= (beta + m - 1.0) / m;
                upow *= u;
            }
            sum += coeff * upow;
        }
        return sum;
    }

    double hs_energy_integrand(double z) const {
        const auto& hs = spec_.hard_sphere;
        if (z <= 0.0)  // limit c beta(beta+1)/2 rho_bar^{-beta-2}
            return hs.c * 0.5 * hs.beta * (hs.beta + 1.0) * std::pow(hs.rho_bar, -hs.beta - 2.0);
        return hard_sphere_pressure(z) / (z * z);
    }

    void build_hs_energy_cache() {
        const double rb = spec_.hard_sphere.rho_bar;
        const double tau_max = -std::log(1e-3);  // cache to (1 - 1e-3) rho_bar
        // node count keeps the interpolant's derivative error below the
        // centered-difference truncation the Gibbs self-test measures
        const int n = 16385;
        std::vector<double> nodes(n);
        for (int k = 0; k < n; ++k) {
            const double tau = tau_max * k / (n - 1);
            nodes[k] = rb * (1.0 - std::exp(-tau));
        }
        nodes[0] = 0.0;
        hs_cache_ = num::CumulativeIntegral(
            std::move(nodes), [this](double z) { return hs_energy_integrand(z); }, 0.5 * rb, 1e-14);
    }

    StructuralValue eval_table(double Z) const {
        const auto& t = spec_.table;
        const std::size_t n = t.z.size();
        if (Z >= t.z.back()) {  // linear extension
            const double dP = t.dp.back();
            return {t.p.back() + dP * (Z - t.z.back()), dP};
        }
        std::size_t lo = 0, hi = n - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (t.z[mid] <= Z)
                lo = mid;
            else
                hi = mid;
        }
        const double h = t.z[hi] - t.z[lo];
        const double x = (Z - t.z[lo]) / h;
        const double x2 = x * x, x3 = x2 * x;
        const double P = (2 * x3 - 3 * x2 + 1) * t.p[lo] + (x3 - 2 * x2 + x) * h * t.dp[lo] +
                         (-2 * x3 + 3 * x2) * t.p[hi] + (x3 - x2) * h * t.dp[hi];
        const double dP = ((6 * x2 - 6 * x) * t.p[lo] + (3 * x2 - 4 * x + 1) * h * t.dp[lo] +
                           (-6 * x2 + 6 * x) * t.p[hi] + (3 * x2 - 2 * x) * h * t.dp[hi]) /
                          h;
        return {P, dP};
    }

    double asymptotic_p_inf() const {
        switch (spec_.kind) {
            case StructuralKind::Linear: return 0.0;
            case StructuralKind::LinearPolytropic: return spec_.p_inf;
            case StructuralKind::Tabulated:
                // the linear extension beyond the table grows slower than
                // Z^{5/3}, so the theta->0 energy limit is zero
                return 0.0;
        }
        return 0.0;
    }

    void validate_structural() {
        if (spec_.kind == StructuralKind::LinearPolytropic && spec_.p_inf < 0.0)
            throw std::invalid_argument("structural: p_inf must be >= 0");
        if (spec_.a < 0.0) throw std::invalid_argument("eos: radiation constant a must be >= 0");
        double z_lo = 1e-6, z_hi = 1e6;
        if (spec_.kind == StructuralKind::Tabulated) {
            const auto& t = spec_.table;
            if (t.z.size() < 4 || t.z.size() != t.p.size() || t.z.size() != t.dp.size())
                throw std::invalid_argument("structural table: need >= 4 aligned samples");
            if (t.z.front() != 0.0 || t.p.front() != 0.0)
                throw std::invalid_argument("structural table: must start at (Z,P) = (0,0)");
            for (std::size_t k = 1; k < t.z.size(); ++k)
                if (t.z[k] <= t.z[k - 1])
                    throw std::invalid_argument("structural table: Z nodes must increase");
            z_lo = std::max(1e-12, t.z[1] * 0.5);
            z_hi = t.z.back();
        }
        // sampled checks of P(0)=0, P' > 0, 0 < (5/3 P - P'Z)/Z <= c,
        // P/Z^{5/3} non-increasing
        if (structural(0.0).P != 0.0) throw std::invalid_argument("structural: P(0) must be 0");
        const int samples = 400;
        double prev_ratio = std::numeric_limits<double>::infinity();
        h2_bound_ = 0.0;
        for (int k = 0; k <= samples; ++k) {
            const double Z = z_lo * std::pow(z_hi / z_lo, double(k) / samples);
            const auto sv = structural(Z);
            if (!(sv.dP > 0.0))
                throw std::invalid_argument("structural: P' must be > 0 (violated at Z=" +
                                            std::to_string(Z) + ")");
            const double w_over_z = (5.0 / 3.0) * sv.P / Z - sv.dP;
            if (!(w_over_z > 0.0))
                throw std::invalid_argument("structural: (5/3 P - P'Z)/Z must be > 0 (Z=" +
                                            std::to_string(Z) + ")");
            h2_bound_ = std::max(h2_bound_, w_over_z);
            const double ratio = sv.P / std::pow(Z, 5.0 / 3.0);
            if (ratio > prev_ratio * (1.0 + 1e-12))
                throw std::invalid_argument("structural: P/Z^{5/3} must be non-increasing");
            prev_ratio = ratio;
        }
    }

    void build_entropy_cache() {
        const auto& t = spec_.table;
        const double z0 = std::max(1e-12, t.z[1] * 1e-3);
        const double z1 = t.z.back();
        if (z0 >= 1.0 || z1 <= 1.0)
            throw std::invalid_argument("structural table: range must bracket Z = 1");
        // integrate dS/d(ln Z) = Z S'(Z) = -(3/2)(5/3 P - P'Z)/Z on a log grid
        auto dS_dlog = [this](double lz) {
            const double Z = std::exp(lz);
            const auto sv = structural(Z);
            return -1.5 * ((5.0 / 3.0) * sv.P / Z - sv.dP);
        };
        const int per_decade = 128;
        const int n = std::max(64, int(per_decade * std::log10(z1 / z0)) + 1);
        s_cache_ = num::CumulativeIntegral(num::linspace(std::log(z0), std::log(z1), n), dS_dlog,
                                           0.0, 1e-14);
    }

    EosSpec spec_;
    num::CumulativeIntegral hs_cache_;
    num::CumulativeIntegral s_cache_;
    double h2_bound_ = 0.0;
};

// Transport coefficients mu(theta) = mu0 (1 + theta^Lambda), eta likewise,
// kappa(theta) = kappa0 (1 + theta^beta_kappa).
struct TransportSpec {
    double mu0 = 0.1;
    double Lambda = 1.0;  // in [1/2, 1]
    double eta0 = 0.0;
    double kappa0 = 0.1;
    double beta_kappa = 3.0;

    void validate() const {
        if (mu0 <= 0.0) throw std::invalid_argument("transport: mu0 must be > 0");
        if (Lambda < 0.5 || Lambda > 1.0)
            throw std::invalid_argument("transport: Lambda must lie in [1/2, 1]");
        if (eta0 < 0.0) throw std::invalid_argument("transport: eta0 must be >= 0");
        if (kappa0 <= 0.0) throw std::invalid_argument("transport: kappa0 must be > 0");
        if (beta_kappa < 0.0) throw std::invalid_argument("transport: beta_kappa must be >= 0");
    }

    double mu(double theta) const { return mu0 * (1.0 + std::pow(theta, Lambda)); }
    double eta(double theta) const { return eta0 * (1.0 + std::pow(theta, Lambda)); }
    double kappa(double theta) const { return kappa0 * (1.0 + std::pow(theta, beta_kappa)); }

    // Primitive K with K'(theta) = kappa(theta)/theta, normalized K(1) = 0.
    // For beta_kappa = 0 the coefficient is constant 2 kappa0, so K = 2 kappa0 ln(theta).
    double kappa_primitive(double theta) const {
        if (theta <= 0.0) throw std::domain_error("kappa_primitive: theta must be > 0");
        if (beta_kappa == 0.0) return 2.0 * kappa0 * std::log(theta);
        return kappa0 *
               (std::log(theta) + (std::pow(theta, beta_kappa) - 1.0) / beta_kappa);
    }
};

enum class ThirdLawVerdict { Compatible, Divergent, Inconclusive };

inline const char* to_string(ThirdLawVerdict v) {
    switch (v) {
        case ThirdLawVerdict::Compatible: return "compatible";
        case ThirdLawVerdict::Divergent: return "divergent";
        case ThirdLawVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct ThirdLawReport {
    ThirdLawVerdict verdict = ThirdLawVerdict::Inconclusive;
    std::vector<double> s_values;
};

// Evaluate s(rho, theta_k) along a decreasing temperature sequence and grade
// the tail: |s| settling below `tol` is compatible with the Third law,
// monotone growth beyond `divergence_threshold` is not.
inline ThirdLawReport third_law_probe(double rho, const Eos& eos,
                                      const std::vector<double>& theta_seq, double tol = 0.05,
                                      double divergence_threshold = 1.0) {
    if (rho <= 0.0) throw std::domain_error("third_law_probe: rho must be > 0");
    for (std::size_t k = 1; k < theta_seq.size(); ++k)
        if (!(theta_seq[k] < theta_seq[k - 1]) || theta_seq[k] <= 0.0)
            throw std::domain_error("third_law_probe: theta_seq must decrease and stay positive");
    ThirdLawReport rep;
    for (double th : theta_seq) rep.s_values.push_back(eos.entropy(rho, th));
    const std::size_t n = rep.s_values.size();
    if (n < 4) return rep;
    const std::size_t half = n / 2;
    bool tail_decreasing = true, tail_increasing = true;
    for (std::size_t k = half; k + 1 < n; ++k) {
        const double a = std::abs(rep.s_values[k]);
        const double b = std::abs(rep.s_values[k + 1]);
        if (b > a + 1e-14) tail_decreasing = false;
        if (b < a - 1e-14) tail_increasing = false;
    }
    const double last = std::abs(rep.s_values.back());
    if (tail_decreasing && last < tol)
        rep.verdict = ThirdLawVerdict::Compatible;
    else if (tail_increasing && last > divergence_threshold)
        rep.verdict = ThirdLawVerdict::Divergent;
    return rep;
}

}  // namespace nsf::thermo
