#pragma once

// Closed-form inviscid (nu = 0) families on the half-space xi >= 0 and on
// conical domains xi >= xi0:
//
//     theta^2 / 2 = k0 (phi(xi) - phi(xi0)),   V = V0,
//     k0 = (V0^2/2 + E0) / (1 - 2 phi(xi0))     (xi0 = 0: k0 = E0 + V0^2/2)
//
// The pressure is not taken from a closed form: it is recovered by
// integrating the radial balance
//     [theta^2/2 + (1+xi^2) P]' = -xi V^2
// from the inner boundary.

#include "swirl/core.hpp"
#include "swirl/errors.hpp"
#include "swirl/interpolation.hpp"
#include "swirl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace swirl {

/// Grid of n points equally spaced in asinh(xi) on [lo, hi].
inline std::vector<double> asinh_grid(double lo, double hi, std::size_t n) {
    if (n < 2) throw DomainError("grid needs at least two points");
    if (!(hi > lo)) throw DomainError("grid requires hi > lo");
    const double a = std::asinh(lo);
    const double b = std::asinh(hi);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = std::sinh(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    if (n < 2) throw DomainError("grid needs at least two points");
    if (!(hi > lo)) throw DomainError("grid requires hi > lo");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    g.back() = hi;
    return g;
}

/// Amplitude k0 of the inviscid family; throws unless k0 > 0.
inline double euler_k0(const FlowParameters& p) {
    const double denom = 1.0 - 2.0 * phi(p.xi0);
    if (denom == 0.0) {
        throw DomainError("1 - 2 phi(xi0) vanishes; k0 is undefined");
    }
    const double k0 = (0.5 * p.v_swirl * p.v_swirl + p.e0) / denom;
    if (!(k0 > 0.0)) {
        throw DomainError("k0 must be positive (k0 = " + std::to_string(k0) +
                          "); theta^2 = 2 k0 (phi(xi) - phi(xi0)) would be negative");
    }
    return k0;
}

/// Pointwise evaluator of the inviscid family.
class EulerSolution {
public:
    explicit EulerSolution(const FlowParameters& params) : params_(params), k0_(0.0) {
        params_.validate();
        k0_ = euler_k0(params_);
        phi0_ = phi(params_.xi0);
    }

    const FlowParameters& params() const noexcept { return params_; }
    double k0() const noexcept { return k0_; }

    double theta_sq(double xi) const {
        check(xi);
        return 2.0 * k0_ * (phi(xi) - phi0_);
    }

    double theta(double xi) const { return params_.branch * std::sqrt(std::max(0.0, theta_sq(xi))); }

    /// Diverges like (xi - xi0)^(-1/2) at the inner boundary, where it throws.
    double theta_prime(double xi) const {
        const double t = theta(xi);
        if (t == 0.0) {
            throw DomainError("theta' is singular at the inner boundary xi0 = " + std::to_string(params_.xi0));
        }
        return k0_ * phi_prime(xi) / t;
    }

    double v(double) const noexcept { return params_.v_swirl; }

    /// Pressure at the inner boundary, from E0 + (V0^2/2 + E0) xi0 / sqrt(1+xi0^2).
    double p_boundary() const noexcept {
        const double xi0 = params_.xi0;
        const double v0 = params_.v_swirl;
        return params_.e0 + (0.5 * v0 * v0 + params_.e0) * xi0 / std::hypot(1.0, xi0);
    }

    /// Value of theta^2/2 + (1+xi^2) P at the inner boundary (theta vanishes there).
    double radial_constant() const noexcept {
        return (1.0 + params_.xi0 * params_.xi0) * p_boundary();
    }

private:
    void check(double xi) const {
        if (!(xi >= params_.xi0)) {
            throw DomainError("xi = " + std::to_string(xi) + " lies below the domain start " +
                              std::to_string(params_.xi0));
        }
    }

    FlowParameters params_;
    double k0_;
    double phi0_ = 0.0;
};

/// Integrates [theta^2/2 + (1+xi^2) P]' = -xi V^2 from `anchor` (where the
/// bracket equals `radial_constant`) across `grid` with adaptive Simpson.
inline std::vector<double> recover_pressure_inviscid(std::span<const double> grid,
                                                     const std::function<double(double)>& half_theta_sq,
                                                     const std::function<double(double)>& v, double anchor,
                                                     double radial_constant, double tol = 1e-10) {
    std::vector<double> p(grid.size());
    const quad::SimpsonOptions opt{tol * 1e-2, tol * 1e-2, 50};
    auto integrand = [&](double t) {
        const double vv = v(t);
        return t * vv * vv;
    };
    double swirl_integral = 0.0;
    double from = anchor;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        swirl_integral += quad::adaptive_simpson(integrand, from, grid[i], opt);
        from = grid[i];
        const double xi = grid[i];
        p[i] = (radial_constant - half_theta_sq(xi) - swirl_integral) / (1.0 + xi * xi);
    }
    return p;
}

namespace detail {

inline SimilarityProfile build_euler_profile(const FlowParameters& params, std::span<const double> grid) {
    const EulerSolution sol(params);
    if (grid.empty()) throw DomainError("empty grid");
    if (!(grid.front() > params.xi0)) {
        throw DomainError("grid must start strictly above xi0 = " + std::to_string(params.xi0) +
                          " (theta' is singular there); use a positive offset such as 1e-4");
    }
    std::vector<double> g(grid.begin(), grid.end());
    std::vector<double> th(g.size()), thp(g.size()), v(g.size(), params.v_swirl);
    for (std::size_t i = 0; i < g.size(); ++i) {
        th[i] = sol.theta(g[i]);
        thp[i] = sol.theta_prime(g[i]);
    }
    auto half_sq = [&](double xi) { return 0.5 * sol.theta_sq(xi); };
    auto vf = [&](double xi) { return sol.v(xi); };
    auto p = recover_pressure_inviscid(g, half_sq, vf, params.xi0, sol.radial_constant());
    FlowParameters stored = params;
    stored.nu = 0.0;
    return SimilarityProfile(std::move(g), std::move(th), std::move(thp), std::move(v), std::move(p), stored);
}

} // namespace detail

/// Half-space family theta^2 = 2 k0 phi(xi), V = V0, P(0) = E0.
inline SimilarityProfile euler_continuous(FlowParameters params, std::span<const double> grid) {
    if (params.xi0 != 0.0) {
        throw DomainError("euler_continuous is the half-space family; xi0 must be 0 (use euler_conical)");
    }
    params.nu = 0.0;
    return detail::build_euler_profile(params, grid);
}

/// Conical family on [xi0, inf).
inline SimilarityProfile euler_conical(FlowParameters params, std::span<const double> grid) {
    params.nu = 0.0;
    return detail::build_euler_profile(params, grid);
}

struct InviscidResiduals {
    double radial = 0.0;   ///< [theta^2/2 + (1+xi^2)P]' + xi V^2, integrated form
    double swirl = 0.0;    ///< V' theta
    double axial = 0.0;    ///< [theta^2 - xi (theta^2/2)' + P]', integrated form
};

/// Residuals of the nu = 0 system evaluated on stored profile data only
/// (theta, theta', V, P samples). Differential equations are checked in
/// integrated form relative to the first sample; V between samples is the
/// monotone cubic through the V samples.
inline InviscidResiduals inviscid_residuals(const SimilarityProfile& prof) {
    const auto g = prof.grid();
    const auto th = prof.theta();
    const auto thp = prof.theta_prime();
    const auto v = prof.v();
    const auto p = prof.p();
    const auto vi = CubicHermite::monotone(g, v);
    auto radial_q = [&](std::size_t i) { return 0.5 * th[i] * th[i] + (1.0 + g[i] * g[i]) * p[i]; };
    auto axial_q = [&](std::size_t i) { return th[i] * th[i] - g[i] * th[i] * thp[i] + p[i]; };

    InviscidResiduals r;
    double swirl_integral = 0.0;
    const double qa0 = radial_q(0);
    const double qc0 = axial_q(0);
    const quad::SimpsonOptions opt{1e-14, 1e-13, 40};
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i > 0) {
            swirl_integral += quad::adaptive_simpson(
                [&](double t) {
                    const double vv = vi(t);
                    return t * vv * vv;
                },
                g[i - 1], g[i], opt);
        }
        r.radial = std::max(r.radial, std::fabs(radial_q(i) - qa0 + swirl_integral));
        r.axial = std::max(r.axial, std::fabs(axial_q(i) - qc0));
        r.swirl = std::max(r.swirl, std::fabs(vi.derivative(g[i]) * th[i]));
    }
    return r;
}

/// Discrete stand-ins for the weak-solution classes theta in W^{1,1},
/// V, P in BV and L^inf, evaluated on the sampled window.
struct RegularitySummary {
    double theta_l1 = 0.0;
    double theta_prime_l1 = 0.0;
    double v_total_variation = 0.0;
    double p_total_variation = 0.0;
    double v_sup = 0.0;
    double p_sup = 0.0;

    bool finite() const noexcept {
        return std::isfinite(theta_l1) && std::isfinite(theta_prime_l1) && std::isfinite(v_total_variation) &&
               std::isfinite(p_total_variation) && std::isfinite(v_sup) && std::isfinite(p_sup);
    }
};

inline RegularitySummary regularity_summary(const SimilarityProfile& prof) {
    RegularitySummary s;
    const auto g = prof.grid();
    for (std::size_t i = 0; i < prof.size(); ++i) {
        s.v_sup = std::max(s.v_sup, std::fabs(prof.v()[i]));
        s.p_sup = std::max(s.p_sup, std::fabs(prof.p()[i]));
        if (i == 0) continue;
        const double h = g[i] - g[i - 1];
        s.theta_l1 += 0.5 * h * (std::fabs(prof.theta()[i]) + std::fabs(prof.theta()[i - 1]));
        s.theta_prime_l1 += std::fabs(prof.theta()[i] - prof.theta()[i - 1]);
        s.v_total_variation += std::fabs(prof.v()[i] - prof.v()[i - 1]);
        s.p_total_variation += std::fabs(prof.p()[i] - prof.p()[i - 1]);
    }
    return s;
}

} // namespace swirl
