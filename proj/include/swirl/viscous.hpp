#pragma once

// Viscous similarity profiles. The reduced system is
//
//   theta^2/2 - nu [ (1+xi^2) theta' + xi theta ] = G(xi) + E0 phi(xi)          (theta equation)
//   nu V'' + (3 nu xi - theta) / (1+xi^2) V' = 0                                (swirl equation)
//
//   G(xi) = xi sqrt(1+xi^2) int_xi^inf [ 1/(z^2 (1+z^2)^{3/2}) int_0^z s V(s)^2 ds ] dz
//
// with theta(0) = 0, V(0) = 0 (no slip) and V -> V_inf. It is solved by a damped
// fixed-point iteration: G from the current V, theta from a first-order
// integration, V from a double quadrature of the swirl equation.
//
// Grid: nodes are equally spaced in psi = asinh(xi) = atanh(x) on
// [0, atanh(x_max)], where x = xi/sqrt(1+xi^2) is the compact coordinate.
// theta decays like log(xi)/xi, so quantities that are logarithmically
// singular at x = 1 are smooth in psi. Interpolation and quadrature run in
// psi; the theta equation is integrated in x.

#include "swirl/core.hpp"
#include "swirl/dopri5.hpp"
#include "swirl/errors.hpp"
#include "swirl/interpolation.hpp"
#include "swirl/profile_io.hpp"
#include "swirl/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace swirl {

struct SolverConfig {
    double x_max = 0.999;
    std::size_t n_grid = 2048;
    double picard_tol = 1e-10;
    int max_iters = 200;
    double damping = 0.5;
    double min_damping = 1.0 / 16.0;
    double ode_tol = 1e-10;
    double blowup_bound = 1e8;
    std::size_t max_ode_steps = 200000;
    double quad_tol = 1e-13;
    double v_origin = 0.0;  ///< V(0); 0 is the no-slip condition

    void validate() const {
        if (!(x_max > 0.0 && x_max < 1.0)) throw DomainError("x_max must lie in (0, 1)");
        if (n_grid < 8) throw DomainError("n_grid must be at least 8");
        if (!(picard_tol > 0.0) || !(ode_tol > 0.0) || !(quad_tol > 0.0)) {
            throw DomainError("tolerances must be positive");
        }
        if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("damping must lie in (0, 1]");
        if (!(min_damping > 0.0 && min_damping <= damping)) throw DomainError("min_damping must lie in (0, damping]");
        if (max_iters < 1) throw DomainError("max_iters must be >= 1");
        if (!(blowup_bound > 0.0)) throw DomainError("blowup_bound must be positive");
        if (!std::isfinite(v_origin)) throw DomainError("v_origin must be finite");
    }
};

/// Nodes equally spaced in psi = atanh(x) on [0, atanh(x_max)].
struct ViscousGrid {
    std::vector<double> psi;
    std::vector<double> x;
    std::vector<double> xi;
    std::vector<double> s;  ///< sqrt(1+xi^2) = cosh(psi)

    std::size_t size() const noexcept { return psi.size(); }

    static ViscousGrid make(double x_max, std::size_t n) {
        if (!(x_max > 0.0 && x_max < 1.0)) throw DomainError("x_max must lie in (0, 1)");
        if (n < 2) throw DomainError("grid needs at least two nodes");
        ViscousGrid g;
        const double psi_max = std::atanh(x_max);
        g.psi.resize(n);
        g.x.resize(n);
        g.xi.resize(n);
        g.s.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = psi_max * static_cast<double>(i) / static_cast<double>(n - 1);
            g.psi[i] = t;
            g.x[i] = std::tanh(t);
            g.xi[i] = std::sinh(t);
            g.s[i] = std::cosh(t);
        }
        g.x.back() = x_max;
        return g;
    }

    static ViscousGrid from_xi(std::span<const double> xi) {
        ViscousGrid g;
        const std::size_t n = xi.size();
        g.psi.resize(n);
        g.x.resize(n);
        g.xi.assign(xi.begin(), xi.end());
        g.s.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            g.psi[i] = std::asinh(xi[i]);
            g.s[i] = std::hypot(1.0, xi[i]);
            g.x[i] = xi[i] / g.s[i];
        }
        return g;
    }
};

/// Builds the cubic Hermite interpolant in psi of a sampled function of xi
/// with known xi-derivative.
inline CubicHermite hermite_in_psi(const ViscousGrid& g, std::span<const double> f, std::span<const double> df_dxi) {
    std::vector<double> slope(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) slope[i] = df_dxi[i] * g.s[i];
    return CubicHermite(g.psi, std::vector<double>(f.begin(), f.end()), std::move(slope));
}

// ---------------------------------------------------------------------------
// Swirl forcing G

/// Nested swirl integrals for a given V profile:
///   I(xi) = int_0^xi s V^2 ds,
///   K(xi) = int_xi^inf I(z) / (z^2 (1+z^2)^{3/2}) dz,
///   G(xi) = xi sqrt(1+xi^2) K(xi).
/// Beyond the last node V is held at `v_far`, which makes the tail of K
/// explicitly integrable.
class SwirlForcing {
public:
    SwirlForcing(ViscousGrid grid, CubicHermite v_of_psi, double v_far, double tol = 1e-13)
        : g_(std::move(grid)), v_(std::move(v_of_psi)), v_far_(v_far), tol_(tol) {
        const std::size_t n = g_.size();
        if (n < 2) throw DomainError("swirl forcing needs at least two nodes");
        if (g_.xi.front() != 0.0) throw DomainError("swirl forcing grid must start at xi = 0");
        if (!std::isfinite(v_far_)) throw DomainError("far-field swirl must be finite");
        I_.assign(n, 0.0);
        K_.assign(n, 0.0);
        const quad::SimpsonOptions opt{1e-300, tol_, 40};
        for (std::size_t i = 0; i + 1 < n; ++i) {
            I_[i + 1] = I_[i] + quad::adaptive_simpson([&](double t) { return inner_integrand(t); }, g_.psi[i],
                                                       g_.psi[i + 1], opt);
        }
        K_[n - 1] = tail_K(g_.xi[n - 1], I_[n - 1]);
        for (std::size_t i = n - 1; i-- > 0;) {
            K_[i] = K_[i + 1] + quad::adaptive_simpson([&](double t) { return outer_integrand(t, i); },
                                                       g_.psi[i], g_.psi[i + 1], opt);
        }
    }

    const ViscousGrid& grid() const noexcept { return g_; }
    double v_far() const noexcept { return v_far_; }
    const std::vector<double>& I_nodes() const noexcept { return I_; }
    const std::vector<double>& K_nodes() const noexcept { return K_; }

    std::vector<double> G_nodes() const {
        std::vector<double> out(g_.size());
        for (std::size_t i = 0; i < g_.size(); ++i) out[i] = g_.xi[i] * g_.s[i] * K_[i];
        return out;
    }

    /// dG/dxi at the nodes: ((1+2 xi^2)/s) K - I/(xi s^2), equal to K(0) at xi = 0.
    std::vector<double> dG_nodes() const {
        std::vector<double> out(g_.size());
        for (std::size_t i = 0; i < g_.size(); ++i) {
            const double xi = g_.xi[i];
            const double s = g_.s[i];
            out[i] = xi == 0.0 ? K_[i] : (1.0 + 2.0 * xi * xi) / s * K_[i] - I_[i] / (xi * s * s);
        }
        return out;
    }

    double I(double xi) const {
        if (!(xi >= 0.0)) throw DomainError("swirl integrals are defined for xi >= 0");
        const double psi = std::asinh(xi);
        if (psi >= g_.psi.back()) {
            const double xm = g_.xi.back();
            return I_.back() + 0.5 * v_far_ * v_far_ * (xi * xi - xm * xm);
        }
        const std::size_t i = v_.locate(psi);
        return I_[i] + partial_inner(g_.psi[i], psi);
    }

    double K(double xi) const {
        if (!(xi >= 0.0)) throw DomainError("swirl integrals are defined for xi >= 0");
        const double psi = std::asinh(xi);
        if (psi >= g_.psi.back()) return tail_K(xi, I(xi));
        const std::size_t i = v_.locate(psi);
        const quad::SimpsonOptions opt{1e-300, tol_, 40};
        return K_[i + 1] + quad::adaptive_simpson([&](double t) { return outer_integrand(t, i); }, psi, g_.psi[i + 1], opt);
    }

    double G(double xi) const {
        if (xi == 0.0) return 0.0;
        return xi * std::hypot(1.0, xi) * K(xi);
    }

private:
    // d I / d psi = sinh(psi) cosh(psi) V^2
    double inner_integrand(double t) const {
        const double vv = v_(t);
        return std::sinh(t) * std::cosh(t) * vv * vv;
    }

    double partial_inner(double a, double b) const {
        if (b == a) return 0.0;
        const quad::SimpsonOptions opt{1e-300, tol_, 40};
        return quad::adaptive_simpson([&](double t) { return inner_integrand(t); }, a, b, opt);
    }

    // d K / d psi = -I / (sinh^2 cosh^2); I on [psi_i, t] from the node value plus a partial integral.
    double outer_integrand(double t, std::size_t i) const {
        if (t == 0.0) {
            const double v0 = v_(0.0);
            return 0.5 * v0 * v0;
        }
        const double sh = std::sinh(t);
        const double ch = std::cosh(t);
        const double It = I_[i] + partial_inner(g_.psi[i], t);
        return It / (sh * sh * ch * ch);
    }

    // K(a) for V = v_far beyond a, with I(z) = I(a) + v_far^2 (z^2 - a^2)/2:
    //   int_a^inf dz/(z^2 s^3) = 1/(a s (s+a)^2),  int_a^inf dz/s^3 = 1/(s (s+a)).
    double tail_K(double a, double Ia) const {
        const double s = std::hypot(1.0, a);
        const double w = v_far_ * v_far_;
        const double t1 = 1.0 / (a * s * (s + a) * (s + a));
        const double t2 = 1.0 / (s * (s + a));
        return (Ia - 0.5 * w * a * a) * t1 + 0.5 * w * t2;
    }

    ViscousGrid g_;
    CubicHermite v_;
    double v_far_;
    double tol_;
    std::vector<double> I_;
    std::vector<double> K_;
};

/// G at a single point from V samples on a grid starting at xi = 0; V between
/// samples is the monotone cubic in asinh(xi), and V = v_far beyond the last
/// sample (defaults to the last sample).
inline double compute_G(std::span<const double> xi_grid, std::span<const double> v, double xi,
                        std::optional<double> v_far = std::nullopt) {
    for (double vv : v) {
        if (!std::isfinite(vv)) throw DomainError("V samples must be finite");
    }
    auto g = ViscousGrid::from_xi(xi_grid);
    auto interp = CubicHermite::monotone(g.psi, v);
    const double far = v_far.value_or(v.back());
    return SwirlForcing(std::move(g), std::move(interp), far).G(xi);
}

// ---------------------------------------------------------------------------
// Swirl equation

struct SwirlSolution {
    std::vector<double> v;
    std::vector<double> dv;  ///< dV/dxi at the nodes
};

/// V from the swirl equation for a given theta: with the integrating factor
///   V'(xi) = C (1+xi^2)^{-3/2} exp( int_0^xi theta / (nu (1+s^2)) ds ),
/// V(0) = v_origin and C fixed by V(inf) = v_inf. Beyond the last node theta
/// is taken as 0 in the exponent, which gives the normalising tail
/// exp(E_max)(1 - x_max).
inline SwirlSolution solve_V_given_theta(const ViscousGrid& g, std::span<const double> theta,
                                         std::span<const double> theta_prime, double nu, double v_inf,
                                         double v_origin = 0.0, double tol = 1e-13) {
    if (!(nu > 0.0)) throw DomainError("the swirl equation needs nu > 0");
    const std::size_t n = g.size();
    if (theta.size() != n || theta_prime.size() != n) throw DomainError("theta samples do not match the grid");
    SwirlSolution out;
    if (v_inf == v_origin) {
        out.v.assign(n, v_inf);
        out.dv.assign(n, 0.0);
        return out;
    }
    const auto th = hermite_in_psi(g, theta, theta_prime);
    const quad::SimpsonOptions opt{1e-300, tol, 40};

    // E(psi) = (1/nu) int theta / cosh(psi) dpsi
    std::vector<double> E(n, 0.0), dE(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        E[i + 1] = E[i] + quad::adaptive_simpson([&](double t) { return th(t) / std::cosh(t); }, g.psi[i],
                                                 g.psi[i + 1], opt) /
                              nu;
    }
    for (std::size_t i = 0; i < n; ++i) dE[i] = theta[i] / (nu * g.s[i]);
    const double e_ref = *std::max_element(E.begin(), E.end());
    for (double& e : E) e -= e_ref;
    const CubicHermite e_interp(g.psi, E, dE);

    // W(psi) = int exp(E) / cosh^2(psi) dpsi
    std::vector<double> W(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        W[i + 1] = W[i] + quad::adaptive_simpson(
                              [&](double t) {
                                  const double c = std::cosh(t);
                                  return std::exp(e_interp(t)) / (c * c);
                              },
                              g.psi[i], g.psi[i + 1], opt);
    }
    const double xm = g.xi.back();
    const double sm = g.s.back();
    const double one_minus_x = 1.0 / (sm * (sm + xm));
    const double W_inf = W.back() + std::exp(E.back()) * one_minus_x;
    if (!(W_inf > 0.0) || !std::isfinite(W_inf)) {
        throw DomainError("swirl normalisation failed: integrating factor under/overflows (theta too large for nu)");
    }
    const double scale = (v_inf - v_origin) / W_inf;
    out.v.resize(n);
    out.dv.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.v[i] = v_origin + scale * W[i];
        out.dv[i] = scale * std::exp(E[i]) / (g.s[i] * g.s[i] * g.s[i]);
    }
    out.v.front() = v_origin;
    return out;
}

/// Overload taking a profile-like xi grid; the grid must start at 0.
inline SwirlSolution solve_V_given_theta(std::span<const double> xi_grid, std::span<const double> theta,
                                         std::span<const double> theta_prime, double nu, double v_inf,
                                         double v_origin = 0.0) {
    if (xi_grid.empty() || xi_grid.front() != 0.0) throw DomainError("swirl solve grid must start at xi = 0");
    return solve_V_given_theta(ViscousGrid::from_xi(xi_grid), theta, theta_prime, nu, v_inf, v_origin);
}

// ---------------------------------------------------------------------------
// Theta equation

struct ThetaSolution {
    std::vector<double> theta;
    std::vector<double> theta_prime;
    std::vector<double> theta_bar;  ///< -sqrt(1+xi^2) theta
    std::size_t steps = 0;
};

/// Integrates the theta equation from theta(0) = 0 in the compact coordinate:
///   nu dTheta/dx = (G + E0 phi) / (1 - x^2) - Theta^2/2,   Theta = -sqrt(1+xi^2) theta,
/// with phi = x/(1+x). Throws BlowUpError when |Theta| passes the bound and
/// StiffnessError when the explicit integrator gives up.
inline ThetaSolution solve_theta_given_V(const ViscousGrid& g, const SwirlForcing& forcing, const FlowParameters& params,
                                         const SolverConfig& cfg) {
    const double nu = params.nu;
    if (!(nu > 0.0)) throw DomainError("the theta equation needs nu > 0");
    const auto G = forcing.G_nodes();
    const auto dG = forcing.dG_nodes();
    const auto g_interp = hermite_in_psi(g, G, dG);
    const double e0 = params.e0;

    auto forcing_at = [&](double x) {
        const double psi = std::atanh(x);
        return g_interp(std::min(psi, g_interp.back())) + e0 * phi_compact(x);
    };
    auto rhs = [&](double x, const std::array<double, 1>& y) {
        const double one_minus_x2 = (1.0 - x) * (1.0 + x);
        return std::array<double, 1>{(forcing_at(x) / one_minus_x2 - 0.5 * y[0] * y[0]) / nu};
    };

    const std::size_t n = g.size();
    ThetaSolution out;
    out.theta.resize(n);
    out.theta_prime.resize(n);
    out.theta_bar.resize(n);

    auto emit = [&](std::size_t i, double x, const std::array<double, 1>& y) {
        const double tb = y[0];
        const double tb_x = rhs(x, y)[0];
        const double s = g.s[i];
        const double xi = g.xi[i];
        const double th = -tb / s + 0.0;  // no negative zero at the origin
        out.theta_bar[i] = tb;
        out.theta[i] = th;
        // Theta_x = -s^2 (xi theta + s^2 theta')
        out.theta_prime[i] = (-tb_x / (s * s) - xi * th) / (s * s);
    };
    const double bound = cfg.blowup_bound;
    auto escaped = [&](const std::array<double, 1>& y) { return !(std::fabs(y[0]) <= bound); };

    ode::Dopri5Options opt;
    opt.rtol = cfg.ode_tol;
    opt.atol = cfg.ode_tol * 1e-2;
    opt.max_steps = cfg.max_ode_steps;
    const auto res = ode::dopri5<1>(rhs, 0.0, std::array<double, 1>{0.0}, g.x, emit, escaped, opt);
    out.steps = res.accepted + res.rejected;

    std::ostringstream where;
    where << "(nu=" << params.nu << ", v_inf=" << params.v_swirl << ", e0=" << params.e0 << ")";
    switch (res.status) {
        case ode::Status::Ok:
            break;
        case ode::Status::Escaped:
        case ode::Status::StepUnderflow:
            throw BlowUpError("theta blow-up: |Theta| exceeded " + std::to_string(bound) + " near x = " +
                                  std::to_string(res.x_stop) + " " + where.str(),
                              res.x_stop);
        case ode::Status::Stiff:
        case ode::Status::StepLimit:
            throw StiffnessError(std::string("theta integration ") + ode::to_string(res.status) + " at x = " +
                                     std::to_string(res.x_stop) + " " + where.str(),
                                 res.x_stop);
    }
    return out;
}

/// The same theta equation integrated directly in xi on [0, xi_grid.back()]:
///   theta' = [theta^2/2 - nu xi theta - G - E0 phi] / (nu (1+xi^2)).
/// Used to cross-check the compact-coordinate formulation.
inline std::vector<double> solve_theta_direct(std::span<const double> xi_out, const SwirlForcing& forcing,
                                              const FlowParameters& params, double tol = 1e-11) {
    const double nu = params.nu;
    if (!(nu > 0.0)) throw DomainError("the theta equation needs nu > 0");
    const auto& g = forcing.grid();
    const auto g_interp = hermite_in_psi(g, forcing.G_nodes(), forcing.dG_nodes());
    auto rhs = [&](double xi, const std::array<double, 1>& y) {
        const double Gv = g_interp(std::min(std::asinh(xi), g_interp.back()));
        const double th = y[0];
        return std::array<double, 1>{(0.5 * th * th - nu * xi * th - Gv - params.e0 * phi(xi)) /
                                     (nu * (1.0 + xi * xi))};
    };
    std::vector<double> out(xi_out.size());
    auto emit = [&](std::size_t i, double, const std::array<double, 1>& y) { out[i] = y[0]; };
    ode::Dopri5Options opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-2;
    const auto res = ode::dopri5<1>(rhs, 0.0, std::array<double, 1>{0.0}, xi_out, emit,
                                    [](const std::array<double, 1>& y) { return !(std::fabs(y[0]) < 1e8); }, opt);
    if (res.status != ode::Status::Ok) {
        throw BlowUpError(std::string("direct theta integration failed: ") + ode::to_string(res.status), res.x_stop);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fixed-point solve

struct Convergence {
    int iterations = 0;
    double residual_a = 0.0;  ///< sup-norm residual of the theta equation
    double residual_b = 0.0;  ///< sup-norm residual of the swirl equation
    double theta_prime_origin = 0.0;
    double far_field_flux = 0.0;  ///< |theta'(xi_max)| (1 + xi_max^2)
    double final_damping = 0.0;
    std::vector<double> history;  ///< sup |theta_new - theta_old| per sweep
};

struct ViscousResult {
    SimilarityProfile profile;
    Convergence convergence;
    ViscousGrid grid;
};

namespace detail {

// Fourth-order first and second derivatives on a uniform grid (spacing h),
// one-sided near the ends.
inline void fd4(std::span<const double> f, double h, std::vector<double>& d1, std::vector<double>& d2) {
    const std::size_t n = f.size();
    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
    if (n < 6) throw DomainError("fourth-order differences need at least 6 nodes");
    for (std::size_t i = 2; i + 2 < n; ++i) {
        d1[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
        d2[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
    }
    // boundary node 0 and 1
    d1[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d2[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]) / (12.0 * h * h);
    d1[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    d2[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) / (12.0 * h * h);
    const std::size_t m = n - 1;
    d1[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) / (12.0 * h);
    d2[m] = (45.0 * f[m] - 154.0 * f[m - 1] + 214.0 * f[m - 2] - 156.0 * f[m - 3] + 61.0 * f[m - 4] -
             10.0 * f[m - 5]) /
            (12.0 * h * h);
    d1[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) / (12.0 * h);
    d2[m - 1] = (10.0 * f[m] - 15.0 * f[m - 1] - 4.0 * f[m - 2] + 14.0 * f[m - 3] - 6.0 * f[m - 4] + f[m - 5]) /
                (12.0 * h * h);
}

} // namespace detail

/// Residual of the theta equation at the nodes, with theta' as stored and G
/// recomputed from the given V.
inline double theta_equation_residual(const ViscousGrid& g, std::span<const double> theta,
                                      std::span<const double> theta_prime, const SwirlForcing& forcing, double nu,
                                      double e0) {
    const auto G = forcing.G_nodes();
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double xi = g.xi[i];
        const double lhs = 0.5 * theta[i] * theta[i] - nu * ((1.0 + xi * xi) * theta_prime[i] + xi * theta[i]);
        r = std::max(r, std::fabs(lhs - G[i] - e0 * phi(xi)));
    }
    return r;
}

/// Residual of the swirl equation with V', V'' from fourth-order differences of
/// the stored V samples in psi (the grid must be uniform in psi).
inline double swirl_equation_residual(const ViscousGrid& g, std::span<const double> theta, std::span<const double> v,
                                      double nu) {
    const double h = g.psi[1] - g.psi[0];
    std::vector<double> d1, d2;
    detail::fd4(v, h, d1, d2);
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double c = g.s[i];
        const double t = g.xi[i] / c;  // tanh(psi)
        const double vp = d1[i] / c;
        const double vpp = (d2[i] - t * d1[i]) / (c * c);
        const double xi = g.xi[i];
        r = std::max(r, std::fabs(nu * vpp + (3.0 * nu * xi - theta[i]) / (1.0 + xi * xi) * vp));
    }
    return r;
}

/// Pressure from [theta^2/2 + (1+xi^2) P]' = nu [xi theta - (1+xi^2) theta']' - xi V^2 with P(0) = E0:
///   P = (E0 + nu (xi theta - (1+xi^2) theta') - theta^2/2 - int_0^xi s V^2) / (1+xi^2).
inline std::vector<double> recover_pressure_viscous(const ViscousGrid& g, std::span<const double> theta,
                                                    std::span<const double> theta_prime,
                                                    const std::vector<double>& swirl_integral, double nu, double e0) {
    std::vector<double> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double xi = g.xi[i];
        const double s2 = 1.0 + xi * xi;
        p[i] = (e0 + nu * (xi * theta[i] - s2 * theta_prime[i]) - 0.5 * theta[i] * theta[i] - swirl_integral[i]) / s2;
    }
    p.front() = e0 + nu * (0.0 - theta_prime.front()) - 0.5 * theta.front() * theta.front();
    return p;
}

inline ViscousResult picard_solve(const FlowParameters& params_in, const SolverConfig& cfg = {}) {
    FlowParameters params = params_in;
    params.validate();
    cfg.validate();
    params.xi0 = 0.0;
    if (!(params.nu > 0.0)) throw DomainError("picard_solve needs nu > 0 (use the inviscid families for nu = 0)");

    const auto g = ViscousGrid::make(cfg.x_max, cfg.n_grid);
    const std::size_t n = g.size();
    const double v_inf = params.v_swirl;
    const double v0 = cfg.v_origin;

    // Initial swirl: the theta = 0 solution V0 + (V_inf - V0) xi / sqrt(1+xi^2).
    SwirlSolution sw;
    sw.v.resize(n);
    sw.dv.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sw.v[i] = v0 + (v_inf - v0) * g.x[i];
        sw.dv[i] = (v_inf - v0) / (g.s[i] * g.s[i] * g.s[i]);
    }

    Convergence conv;
    double damping = cfg.damping;
    std::vector<double> theta(n, 0.0), theta_prime(n, 0.0);
    double prev_change = std::numeric_limits<double>::infinity();
    bool converged = false;

    for (int k = 1; k <= cfg.max_iters; ++k) {
        const SwirlForcing forcing(g, hermite_in_psi(g, sw.v, sw.dv), v_inf, cfg.quad_tol);
        const ThetaSolution ts = solve_theta_given_V(g, forcing, params, cfg);

        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::fabs(ts.theta[i] - theta[i]));
        conv.history.push_back(change);
        conv.iterations = k;

        if (change < cfg.picard_tol || k == 1) {
            theta = ts.theta;
            theta_prime = ts.theta_prime;
        } else {
            if (change > prev_change) damping = std::max(0.5 * damping, cfg.min_damping);
            for (std::size_t i = 0; i < n; ++i) {
                theta[i] += damping * (ts.theta[i] - theta[i]);
                theta_prime[i] += damping * (ts.theta_prime[i] - theta_prime[i]);
            }
        }
        prev_change = change;
        sw = solve_V_given_theta(g, theta, theta_prime, params.nu, v_inf, v0, cfg.quad_tol);
        if (change < cfg.picard_tol) {
            converged = true;
            break;
        }
    }
    conv.final_damping = damping;

    if (!converged) {
        std::ostringstream os;
        os << "fixed-point iteration did not converge in " << cfg.max_iters << " sweeps (nu=" << params.nu
           << ", v_inf=" << v_inf << ", e0=" << params.e0 << "); last change " << conv.history.back();
        throw MaxItersError(os.str(), conv.history);
    }

    const SwirlForcing final_forcing(g, hermite_in_psi(g, sw.v, sw.dv), v_inf, cfg.quad_tol);
    conv.residual_a = theta_equation_residual(g, theta, theta_prime, final_forcing, params.nu, params.e0);
    conv.residual_b = swirl_equation_residual(g, theta, sw.v, params.nu);
    conv.theta_prime_origin = theta_prime.front() + 0.0;
    conv.far_field_flux = std::fabs(theta_prime.back()) * (1.0 + g.xi.back() * g.xi.back());

    auto p = recover_pressure_viscous(g, theta, theta_prime, final_forcing.I_nodes(), params.nu, params.e0);
    params.branch = 1;
    SimilarityProfile prof(g.xi, theta, theta_prime, sw.v, std::move(p), params);
    return ViscousResult{std::move(prof), std::move(conv), g};
}

inline nlohmann::json to_json(const Convergence& c) {
    return nlohmann::json{{"iterations", c.iterations},
                          {"residual_2_5a", c.residual_a},
                          {"residual_2_5b", c.residual_b},
                          {"theta_prime_origin", c.theta_prime_origin},
                          {"far_field_flux", c.far_field_flux},
                          {"final_damping", c.final_damping},
                          {"blowup", nullptr}};
}

// ---------------------------------------------------------------------------
// Regimes and sweeps

enum class Regime { OutwardDownward, InwardUpward, InwardDownward, OutwardUpward, Indeterminate };

inline const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::OutwardDownward: return "OutwardDownward";
        case Regime::InwardUpward: return "InwardUpward";
        case Regime::InwardDownward: return "InwardDownward";
        case Regime::OutwardUpward: return "OutwardUpward";
        case Regime::Indeterminate: return "Indeterminate";
    }
    return "?";
}

struct RegimeSigns {
    double mean_u_inner = 0.0;  ///< radial similarity velocity near the plane
    double mean_w_outer = 0.0;  ///< axial similarity velocity near the axis
    Regime regime = Regime::Indeterminate;
};

/// Sign of U averaged over the first 5% of the grid after its first node and
/// sign of W averaged over the last 5%.
inline RegimeSigns regime_signs(const SimilarityProfile& prof, double noise = 1e-8) {
    const std::size_t n = prof.size();
    const std::size_t m = std::max<std::size_t>(1, n / 20);
    RegimeSigns out;
    std::size_t cnt = 0;
    for (std::size_t i = 1; i < std::min(n, 1 + m); ++i, ++cnt) out.mean_u_inner += prof.U(i);
    out.mean_u_inner /= static_cast<double>(std::max<std::size_t>(cnt, 1));
    cnt = 0;
    for (std::size_t i = n - std::min(n, m); i < n; ++i, ++cnt) out.mean_w_outer += prof.W(i);
    out.mean_w_outer /= static_cast<double>(std::max<std::size_t>(cnt, 1));

    if (std::fabs(out.mean_u_inner) <= noise || std::fabs(out.mean_w_outer) <= noise) {
        out.regime = Regime::Indeterminate;
    } else if (out.mean_u_inner > 0.0) {
        out.regime = out.mean_w_outer < 0.0 ? Regime::OutwardDownward : Regime::OutwardUpward;
    } else {
        out.regime = out.mean_w_outer > 0.0 ? Regime::InwardUpward : Regime::InwardDownward;
    }
    return out;
}

inline Regime classify_regime(const SimilarityProfile& prof) { return regime_signs(prof).regime; }

struct SweepRecord {
    FlowParameters params;
    bool converged = false;
    Regime regime = Regime::Indeterminate;
    int iterations = 0;
    double residual_a = std::numeric_limits<double>::quiet_NaN();
    double residual_b = std::numeric_limits<double>::quiet_NaN();
    std::string failure;  ///< empty on success
};

/// Solves every (nu, v_inf, e0) combination (nu outermost, e0 innermost).
/// Failures are recorded per point. Up to `jobs` points run concurrently; the
/// table order does not depend on completion order.
inline std::vector<SweepRecord> parameter_sweep(const std::vector<double>& nus, const std::vector<double>& v_infs,
                                                const std::vector<double>& e0s, const SolverConfig& cfg = {},
                                                unsigned jobs = 1) {
    std::vector<SweepRecord> table;
    for (double nu : nus) {
        for (double vi : v_infs) {
            for (double e : e0s) {
                SweepRecord r;
                r.params.nu = nu;
                r.params.v_swirl = vi;
                r.params.e0 = e;
                table.push_back(r);
            }
        }
    }
    auto run = [&](SweepRecord& r) {
        try {
            const auto res = picard_solve(r.params, cfg);
            r.converged = true;
            r.iterations = res.convergence.iterations;
            r.residual_a = res.convergence.residual_a;
            r.residual_b = res.convergence.residual_b;
            r.regime = classify_regime(res.profile);
        } catch (const MaxItersError& e) {
            r.failure = std::string("max-iters: ") + e.what();
            r.iterations = static_cast<int>(e.history().size());
        } catch (const BlowUpError& e) {
            r.failure = std::string("blow-up: ") + e.what();
        } catch (const StiffnessError& e) {
            r.failure = std::string("stiff: ") + e.what();
        } catch (const std::exception& e) {
            r.failure = std::string("error: ") + e.what();
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(table.size())));
    if (jobs == 1) {
        for (auto& r : table) run(r);
        return table;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < table.size(); i = next++) run(table[i]);
        });
    }
    pool.clear();
    return table;
}

/// Leading tag of a failure message ("blow-up", "stiff", "max-iters", "error").
inline std::string failure_mode(const SweepRecord& r) {
    return r.failure.substr(0, r.failure.find(':'));
}

/// Failed rows carry their failure mode in the regime column.
inline std::string sweep_csv(const std::vector<SweepRecord>& table) {
    std::ostringstream os;
    os.precision(17);
    os << "nu,v_inf,e0,converged,regime,iters,res_a,res_b\n";
    for (const auto& r : table) {
        os << r.params.nu << ',' << r.params.v_swirl << ',' << r.params.e0 << ',' << (r.converged ? "true" : "false")
           << ',' << (r.converged ? to_string(r.regime) : failure_mode(r)) << ',' << r.iterations << ',';
        if (r.converged) {
            os << r.residual_a << ',' << r.residual_b;
        } else {
            os << "nan,nan";
        }
        os << '\n';
    }
    return os.str();
}

} // namespace swirl
