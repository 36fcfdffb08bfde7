#pragma once

// Similarity coordinates, the shape function phi, the compact coordinate and
// the profile data model shared by every other part of the library.
//
// A stationary axisymmetric flow of the form
//     u = U(xi)/r,  v = V(xi)/r,  w = W(xi)/r,  p = P(xi)/r^2,   xi = z/r
// is described by theta = W - xi*U (the similarity stream function), V and P.
// U and W are recovered pointwise from theta and theta'.

#include "swirl/errors.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace swirl {

/// Shape function phi(xi) = xi*sqrt(1+xi^2) - xi^2.
///
/// For xi >= 0 the two terms nearly cancel, so the equivalent form
/// xi / (sqrt(1+xi^2) + xi) is used there. For xi < 0 both terms have the
/// same sign and the direct form is exact.
inline double phi(double xi) noexcept {
    const double s = std::hypot(1.0, xi);
    if (xi >= 0.0) {
        return xi / (s + xi);
    }
    return xi * (s - xi);
}

/// d(phi)/d(xi) = (1 + 2 xi^2)/sqrt(1+xi^2) - 2 xi, written as
/// 1/(s (s+xi)^2) for xi >= 0 and (s-xi)^2/s otherwise (s = sqrt(1+xi^2)).
inline double phi_prime(double xi) noexcept {
    const double s = std::hypot(1.0, xi);
    if (xi >= 0.0) {
        const double t = s + xi;
        return 1.0 / (s * t * t);
    }
    const double t = s - xi;
    return t * t / s;
}

/// Point of the compactified coordinate x = xi/sqrt(1+xi^2) in (-1, 1).
///
/// The distance 1 - |x| is carried alongside x so that points close to the
/// ends keep their full relative precision (x itself rounds to 1 long before
/// xi overflows).
class CompactCoordinate {
public:
    static CompactCoordinate from_xi(double xi) noexcept {
        const double s = std::hypot(1.0, xi);
        const double a = std::fabs(xi);
        // 1 - |xi|/s = 1/(s (s + |xi|))
        return CompactCoordinate(xi / s, 1.0 / (s * (s + a)));
    }

    /// Accepts a raw x; the gap is formed as 1 - |x| (exact for |x| >= 1/2).
    static CompactCoordinate from_x(double x) {
        if (!(std::fabs(x) < 1.0)) {
            throw DomainError("compact coordinate requires |x| < 1, got " + std::to_string(x));
        }
        return CompactCoordinate(x, 1.0 - std::fabs(x));
    }

    double x() const noexcept { return x_; }
    double gap() const noexcept { return gap_; }

    /// Inverse map xi = x / sqrt(1 - x^2) with 1 - x^2 = gap (2 - gap).
    double xi() const noexcept { return x_ / std::sqrt(gap_ * (2.0 - gap_)); }

private:
    CompactCoordinate(double x, double gap) : x_(x), gap_(gap) {}

    double x_;
    double gap_;
};

inline CompactCoordinate xi_to_x(double xi) noexcept { return CompactCoordinate::from_xi(xi); }

inline double x_to_xi(const CompactCoordinate& c) noexcept { return c.xi(); }

inline double x_to_xi(double x) { return CompactCoordinate::from_x(x).xi(); }

struct SimilarityVelocities {
    double U;
    double W;
};

/// U = -theta', W = theta - xi*theta'.
inline SimilarityVelocities velocities_from_theta(double theta, double theta_prime, double xi) noexcept {
    return {-theta_prime, theta - xi * theta_prime};
}

struct FlowParameters {
    double nu = 0.0;       ///< kinematic viscosity (0 for the inviscid families)
    double v_swirl = 0.0;  ///< V_inf for viscous problems, V0 for inviscid ones
    double e0 = 0.0;       ///< pressure parameter E0
    double xi0 = 0.0;      ///< lower end of the domain (0 = half-space)
    int branch = 1;        ///< sign of theta when recovered from theta^2

    void validate() const {
        if (!(nu >= 0.0) || !std::isfinite(nu)) {
            throw DomainError("nu must be finite and >= 0");
        }
        if (branch != 1 && branch != -1) {
            throw DomainError("branch must be +1 or -1");
        }
        if (!std::isfinite(v_swirl) || !std::isfinite(e0) || !std::isfinite(xi0)) {
            throw DomainError("flow parameters must be finite");
        }
    }

    bool operator==(const FlowParameters&) const = default;
};

/// Immutable sampled similarity profile (theta, theta', V, P) on a strictly
/// increasing xi grid. U and W are derived on demand.
class SimilarityProfile {
public:
    SimilarityProfile(std::vector<double> grid, std::vector<double> theta,
                      std::vector<double> theta_prime, std::vector<double> v,
                      std::vector<double> p, FlowParameters params)
        : grid_(std::move(grid)),
          theta_(std::move(theta)),
          theta_prime_(std::move(theta_prime)),
          v_(std::move(v)),
          p_(std::move(p)),
          params_(params) {
        const std::size_t n = grid_.size();
        if (n < 2) {
            throw DomainError("profile needs at least two samples");
        }
        if (theta_.size() != n || theta_prime_.size() != n || v_.size() != n || p_.size() != n) {
            throw DomainError("profile arrays must have equal length");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(grid_[i]) || !std::isfinite(theta_[i]) ||
                !std::isfinite(theta_prime_[i]) || !std::isfinite(v_[i]) || !std::isfinite(p_[i])) {
                throw DomainError("profile contains non-finite samples at index " + std::to_string(i));
            }
            if (i > 0 && !(grid_[i] > grid_[i - 1])) {
                throw DomainError("profile grid must be strictly increasing");
            }
        }
        params_.validate();
    }

    std::size_t size() const noexcept { return grid_.size(); }

    std::span<const double> grid() const noexcept { return grid_; }
    std::span<const double> theta() const noexcept { return theta_; }
    std::span<const double> theta_prime() const noexcept { return theta_prime_; }
    std::span<const double> v() const noexcept { return v_; }
    std::span<const double> p() const noexcept { return p_; }
    const FlowParameters& params() const noexcept { return params_; }

    double U(std::size_t i) const noexcept { return -theta_prime_[i]; }
    double W(std::size_t i) const noexcept { return theta_[i] - grid_[i] * theta_prime_[i]; }

    std::vector<double> U() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < size(); ++i) out[i] = U(i);
        return out;
    }

    std::vector<double> W() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < size(); ++i) out[i] = W(i);
        return out;
    }

    bool operator==(const SimilarityProfile&) const = default;

private:
    std::vector<double> grid_;
    std::vector<double> theta_;
    std::vector<double> theta_prime_;
    std::vector<double> v_;
    std::vector<double> p_;
    FlowParameters params_;
};

struct CompactProfile {
    std::vector<double> x;
    std::vector<double> theta_bar;  ///< -sqrt(1+xi^2) * theta
    std::vector<double> v_bar;      ///< V, unchanged
};

/// Goldshtik-Serrin variables: x = xi/sqrt(1+xi^2), Theta = -sqrt(1+xi^2) theta, V unchanged.
/// Under this map phi(xi) = x/(1+x).
inline CompactProfile serrin_transform(const SimilarityProfile& profile) {
    CompactProfile out;
    const std::size_t n = profile.size();
    out.x.resize(n);
    out.theta_bar.resize(n);
    out.v_bar.assign(profile.v().begin(), profile.v().end());
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = profile.grid()[i];
        out.x[i] = xi_to_x(xi).x();
        out.theta_bar[i] = -std::hypot(1.0, xi) * profile.theta()[i];
    }
    return out;
}

/// phi expressed in the compact coordinate.
inline double phi_compact(double x) noexcept { return x / (1.0 + x); }

} // namespace swirl
