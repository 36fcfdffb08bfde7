#pragma once

// Slip discontinuities of the inviscid system at xi = sigma.
//
// A two-piece candidate has theta(sigma-) = theta(sigma+) = 0 and
//     theta^2/2 = k_- [ (phi - phi(sigma)) - c (xi^2 - sigma^2) ]   on (xi0, sigma)
//     theta^2/2 = k_+ [  phi - phi(sigma) ]                          on (sigma, inf)
// with c = (phi(xi0) - phi(sigma)) / (xi0^2 - sigma^2) (c = phi(sigma)/sigma^2 on the half-space).
// The Rankine-Hugoniot brackets [P], [theta V], [theta^2 - xi theta theta'], [theta]
// must vanish. With theta(sigma) = 0 the third bracket reduces to
// -sigma [ (theta^2/2)' ], which pins k_+/k_- to a single value. The
// certification below shows that value always has the sign opposite to the
// one theta^2 >= 0 forces on the inner piece.

#include "swirl/core.hpp"
#include "swirl/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace swirl {

struct JumpRatio {
    double value;
    bool negative;
};

/// k_+/k_- = 1 - 2 phi(sigma) / (sigma phi'(sigma)) on the half-space.
inline JumpRatio jump_ratio_half_space(double sigma) {
    if (!(sigma > 0.0)) throw DomainError("half-space discontinuity requires sigma > 0");
    const double r = 1.0 - 2.0 * phi(sigma) / (sigma * phi_prime(sigma));
    return {r, r < 0.0};
}

/// Quadratic coefficient of the inner conical piece, (phi(xi0) - phi(sigma)) / (xi0^2 - sigma^2).
inline double inner_coefficient(double sigma, double xi0) {
    if (!(sigma > xi0)) throw DomainError("discontinuity requires sigma > xi0");
    const double den = xi0 * xi0 - sigma * sigma;
    if (den == 0.0) throw DomainError("xi0^2 = sigma^2: the conical inner piece is undefined");
    return (phi(xi0) - phi(sigma)) / den;
}

/// k_+/k_- = 1 - 2 (phi(xi0) - phi(sigma)) / (xi0^2 - sigma^2) * sigma / phi'(sigma).
inline JumpRatio jump_ratio_conical(double sigma, double xi0) {
    const double c = inner_coefficient(sigma, xi0);
    const double r = 1.0 - 2.0 * c * sigma / phi_prime(sigma);
    return {r, r < 0.0};
}

/// J(xi) = phi(xi) - phi(sigma) - phi(sigma)/sigma^2 (xi^2 - sigma^2).
inline double sign_function_J(double xi, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("J requires sigma > 0");
    const double ps = phi(sigma);
    return phi(xi) - ps - ps / (sigma * sigma) * (xi * xi - sigma * sigma);
}

/// Conical analogue J_con(xi) = phi(xi) - phi(sigma) - c (xi^2 - sigma^2).
inline double sign_function_J_con(double xi, double sigma, double xi0) {
    const double c = inner_coefficient(sigma, xi0);
    return phi(xi) - phi(sigma) - c * (xi * xi - sigma * sigma);
}

/// F(xi) = (phi(xi) - phi(sigma)) / (xi^2 - sigma^2); at xi = sigma the
/// removable singularity is filled with phi'(sigma)/(2 sigma). xi = -sigma is
/// a genuine pole unless phi(-sigma) = phi(sigma) and is rejected.
inline double sign_function_F(double xi, double sigma) {
    if (xi == sigma) {
        if (sigma == 0.0) throw DomainError("F is unbounded at xi = sigma = 0");
        return phi_prime(sigma) / (2.0 * sigma);
    }
    if (xi == -sigma) throw DomainError("F has a pole at xi = -sigma");
    return (phi(xi) - phi(sigma)) / (xi * xi - sigma * sigma);
}

/// One-sided limits at the discontinuity. `flux_slope` is the limit of
/// theta*theta' = (theta^2/2)', which stays finite where theta' itself diverges.
struct OneSidedState {
    double theta = 0.0;
    double theta_prime = 0.0;
    double v = 0.0;
    double p = 0.0;
    double flux_slope = 0.0;

    static OneSidedState from_values(double theta, double theta_prime, double v, double p) {
        return {theta, theta_prime, v, p, theta * theta_prime};
    }
};

struct JumpBrackets {
    double pressure = 0.0;   ///< [P]
    double theta_v = 0.0;    ///< [theta V]
    double flux = 0.0;       ///< [theta^2 - xi theta theta']
    double theta = 0.0;      ///< [theta]

    double max_abs() const noexcept {
        return std::max({std::fabs(pressure), std::fabs(theta_v), std::fabs(flux), std::fabs(theta)});
    }

    std::array<double, 4> as_array() const noexcept { return {pressure, theta_v, flux, theta}; }
};

/// Right-minus-left brackets at xi = sigma.
inline JumpBrackets jump_brackets(const OneSidedState& left, const OneSidedState& right, double sigma) noexcept {
    JumpBrackets b;
    b.pressure = right.p - left.p;
    b.theta_v = right.theta * right.v - left.theta * left.v;
    b.flux = (right.theta * right.theta - sigma * right.flux_slope) -
             (left.theta * left.theta - sigma * left.flux_slope);
    b.theta = right.theta - left.theta;
    return b;
}

/// Two-piece inviscid candidate with a zero of theta at sigma.
class PiecewiseEulerSolution {
public:
    PiecewiseEulerSolution(double sigma, double k_minus, double k_plus, double v_minus, double v_plus,
                           double xi0 = 0.0, int inner_sign = 1, int outer_sign = -1)
        : sigma_(sigma), k_minus_(k_minus), k_plus_(k_plus), v_minus_(v_minus), v_plus_(v_plus), xi0_(xi0),
          inner_sign_(inner_sign), outer_sign_(outer_sign) {
        if (!(sigma > xi0)) throw DomainError("discontinuity requires sigma > xi0");
        if (std::abs(inner_sign) != 1 || std::abs(outer_sign) != 1) {
            throw DomainError("piece signs must be +1 or -1");
        }
        coef_ = inner_coefficient(sigma, xi0);
        phi_sigma_ = phi(sigma);
    }

    double sigma() const noexcept { return sigma_; }
    double k_minus() const noexcept { return k_minus_; }
    double k_plus() const noexcept { return k_plus_; }
    double v_minus() const noexcept { return v_minus_; }
    double v_plus() const noexcept { return v_plus_; }
    double xi0() const noexcept { return xi0_; }
    double inner_coef() const noexcept { return coef_; }

    bool inner(double xi) const noexcept { return xi < sigma_; }

    /// theta^2/2 on the piece containing xi (inner piece for xi < sigma).
    double half_theta_sq(double xi) const {
        if (xi < xi0_) throw DomainError("xi below the domain start");
        if (inner(xi)) {
            return k_minus_ * ((phi(xi) - phi_sigma_) - coef_ * (xi * xi - sigma_ * sigma_));
        }
        return k_plus_ * (phi(xi) - phi_sigma_);
    }

    /// theta on a piece; throws where the piece formula gives theta^2 < 0.
    double theta(double xi) const {
        const double h = half_theta_sq(xi);
        if (h < 0.0) {
            throw DomainError("theta^2 < 0 at xi = " + std::to_string(xi) + ": constants violate the sign constraint");
        }
        return (inner(xi) ? inner_sign_ : outer_sign_) * std::sqrt(2.0 * h);
    }

    double v(double xi) const noexcept { return inner(xi) ? v_minus_ : v_plus_; }

    /// One-sided limit of (theta^2/2)' at sigma.
    double flux_slope(bool left) const noexcept {
        const double dp = phi_prime(sigma_);
        return left ? k_minus_ * (dp - 2.0 * coef_ * sigma_) : k_plus_ * dp;
    }

    /// Integration constant A of theta^2/2 + (1+xi^2) P = A - V^2 xi^2/2 on a
    /// piece. Writing theta^2/2 = k (phi + a xi^2 + b), the axial balance forces
    /// A = k (1 - a + b) - V^2/2.
    double radial_constant(bool left) const noexcept {
        if (left) {
            const double a = -coef_;
            const double b = -phi_sigma_ + coef_ * sigma_ * sigma_;
            return k_minus_ * (1.0 - a + b) - 0.5 * v_minus_ * v_minus_;
        }
        return k_plus_ * (1.0 - phi_sigma_) - 0.5 * v_plus_ * v_plus_;
    }

    double p(double xi) const {
        const bool left = inner(xi);
        const double vv = left ? v_minus_ : v_plus_;
        return (radial_constant(left) - half_theta_sq(xi) - 0.5 * vv * vv * xi * xi) / (1.0 + xi * xi);
    }

    OneSidedState limit(bool left) const noexcept {
        OneSidedState s;
        s.theta = 0.0;
        const int sgn = left ? inner_sign_ : outer_sign_;
        // theta ~ sqrt(|xi - sigma|): theta' diverges with sign set by the
        // piece's orientation and the sign of theta.
        const double slope = flux_slope(left);
        s.theta_prime = slope == 0.0 ? 0.0 : sgn * std::copysign(std::numeric_limits<double>::infinity(), slope);
        s.v = left ? v_minus_ : v_plus_;
        const double vv = s.v;
        s.p = (radial_constant(left) - 0.5 * vv * vv * sigma_ * sigma_) / (1.0 + sigma_ * sigma_);
        s.flux_slope = slope;
        return s;
    }

    JumpBrackets brackets() const noexcept { return jump_brackets(limit(true), limit(false), sigma_); }

private:
    double sigma_, k_minus_, k_plus_, v_minus_, v_plus_, xi0_;
    int inner_sign_, outer_sign_;
    double coef_ = 0.0;
    double phi_sigma_ = 0.0;
};

inline PiecewiseEulerSolution piecewise_ansatz(double sigma, double k_minus, double k_plus, double v_minus,
                                               double v_plus, double xi0 = 0.0) {
    return PiecewiseEulerSolution(sigma, k_minus, k_plus, v_minus, v_plus, xi0);
}

// ---------------------------------------------------------------------------
// Scan-based certification

struct Domain {
    bool conical = false;
    double xi0 = 0.0;

    static Domain half_space() { return {false, 0.0}; }
    static Domain cone(double xi0) { return {true, xi0}; }
};

enum class Verdict { Contradiction, Admissible, Inconclusive };

inline const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Contradiction: return "contradiction";
        case Verdict::Admissible: return "admissible";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct JumpReport {
    double sigma = 0.0;
    JumpBrackets brackets;            ///< for the candidate k_+ = ratio * k_- with k_- of the forced sign
    double ratio_required = 0.0;
    int ratio_sign = 0;
    int k_minus_forced_sign = 0;      ///< 0 when the inner sign function changes sign (inconclusive)
    bool k_plus_positive = false;
    bool admissible = false;
    Verdict verdict = Verdict::Inconclusive;
    std::string contradiction_type;   ///< "ratio_negative_k_minus_positive", "ratio_positive_k_minus_negative", ...
};

struct CertifyOptions {
    std::size_t inner_samples = 512;
    std::size_t outer_samples = 64;
    double bracket_tol = 1e-9;
};

struct CertificationReport {
    Domain domain;
    std::vector<JumpReport> records;
    std::size_t n_tested = 0;
    std::size_t n_admissible = 0;
    std::size_t n_inconclusive = 0;

    std::size_t count_type(const std::string& t) const {
        std::size_t n = 0;
        for (const auto& r : records) n += r.contradiction_type == t ? 1 : 0;
        return n;
    }
};

namespace detail {

inline int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

} // namespace detail

/// Tests one candidate location sigma.
inline JumpReport test_discontinuity(const Domain& dom, double sigma, const CertifyOptions& opt = {}) {
    JumpReport rep;
    rep.sigma = sigma;
    const double xi0 = dom.conical ? dom.xi0 : 0.0;
    if (!(sigma > xi0)) throw DomainError("sigma must exceed xi0");

    const JumpRatio ratio = dom.conical ? jump_ratio_conical(sigma, xi0) : jump_ratio_half_space(sigma);
    rep.ratio_required = ratio.value;
    rep.ratio_sign = detail::sign_of(ratio.value);

    // Sign forced on k_- by theta^2 >= 0 on (xi0, sigma).
    int seen = 0;
    bool mixed = false;
    const double n = static_cast<double>(opt.inner_samples);
    for (std::size_t j = 0; j < opt.inner_samples; ++j) {
        const double xi = xi0 + (sigma - xi0) * (static_cast<double>(j) + 0.5) / n;
        const double val = dom.conical ? sign_function_J_con(xi, sigma, xi0) : sign_function_J(xi, sigma);
        const int s = detail::sign_of(val);
        if (s == 0 || (seen != 0 && s != seen)) {
            mixed = true;
            break;
        }
        seen = s;
    }
    rep.k_minus_forced_sign = mixed ? 0 : seen;

    // k_+ > 0 from phi(xi) - phi(sigma) > 0 on (sigma, inf): geometric ladder of offsets.
    rep.k_plus_positive = true;
    const double ps = phi(sigma);
    for (std::size_t j = 0; j < opt.outer_samples; ++j) {
        const double off = std::ldexp(1e-6 * (1.0 + std::fabs(sigma)), static_cast<int>(j));
        if (!(phi(sigma + off) - ps > 0.0)) {
            rep.k_plus_positive = false;
            break;
        }
        if (off > 1e8) break;
    }

    if (rep.k_minus_forced_sign == 0 || rep.ratio_sign == 0 || !rep.k_plus_positive) {
        rep.verdict = Verdict::Inconclusive;
        rep.contradiction_type = "inconclusive";
        return rep;
    }

    // The only constants meeting the jump conditions: k_+ = ratio * k_-, with
    // |k_-| scaled so max(|k_-|, |k_+|) = 1.
    const double k_minus = rep.k_minus_forced_sign / std::max(1.0, std::fabs(ratio.value));
    const double k_plus = ratio.value * k_minus;
    // Swirl values chosen so that [P] = 0 (one of the two is always real).
    PiecewiseEulerSolution probe(sigma, k_minus, k_plus, 0.0, 0.0, xi0);
    const double d = probe.radial_constant(false) - probe.radial_constant(true);
    const double scale = 2.0 / (1.0 + sigma * sigma);
    double v_minus = 0.0, v_plus = 0.0;
    if (d >= 0.0) {
        v_plus = std::sqrt(scale * d);
    } else {
        v_minus = std::sqrt(-scale * d);
    }
    PiecewiseEulerSolution candidate(sigma, k_minus, k_plus, v_minus, v_plus, xi0);
    rep.brackets = candidate.brackets();

    const bool brackets_vanish = rep.brackets.max_abs() <= opt.bracket_tol;
    const bool outer_sign_ok = k_plus > 0.0;
    rep.admissible = brackets_vanish && outer_sign_ok;
    if (rep.admissible) {
        rep.verdict = Verdict::Admissible;
        rep.contradiction_type = "none";
    } else if (!brackets_vanish) {
        rep.verdict = Verdict::Inconclusive;
        rep.contradiction_type = "brackets_not_closed";
    } else {
        rep.verdict = Verdict::Contradiction;
        rep.contradiction_type =
            rep.ratio_sign < 0 ? "ratio_negative_k_minus_positive" : "ratio_positive_k_minus_negative";
    }
    return rep;
}

/// Runs test_discontinuity over a sigma grid; records are sorted by sigma.
inline CertificationReport certify_nonexistence(const Domain& dom, std::vector<double> sigma_grid,
                                                const CertifyOptions& opt = {}) {
    std::sort(sigma_grid.begin(), sigma_grid.end());
    CertificationReport out;
    out.domain = dom;
    out.records.reserve(sigma_grid.size());
    for (double s : sigma_grid) {
        out.records.push_back(test_discontinuity(dom, s, opt));
        const auto& r = out.records.back();
        ++out.n_tested;
        out.n_admissible += r.admissible ? 1 : 0;
        out.n_inconclusive += r.verdict == Verdict::Inconclusive ? 1 : 0;
    }
    return out;
}

/// Evenly spaced sigma values in [lo, hi] with points where xi0^2 = sigma^2 removed.
inline std::vector<double> sigma_grid(const Domain& dom, double lo, double hi, std::size_t n) {
    std::vector<double> g;
    g.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        if (dom.conical && s * s == dom.xi0 * dom.xi0) continue;
        g.push_back(s);
    }
    return g;
}

inline nlohmann::json to_json(const CertificationReport& rep) {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : rep.records) {
        recs.push_back({{"sigma", r.sigma},
                        {"ratio", r.ratio_required},
                        {"ratio_sign", r.ratio_sign},
                        {"k_minus_forced_sign", r.k_minus_forced_sign},
                        {"k_plus_positive", r.k_plus_positive},
                        {"brackets", r.brackets.as_array()},
                        {"verdict", to_string(r.verdict)},
                        {"contradiction_type", r.contradiction_type}});
    }
    return nlohmann::json{
        {"domain", {{"kind", rep.domain.conical ? "cone" : "half"}, {"xi0", rep.domain.xi0}}},
        {"records", recs},
        {"summary",
         {{"n_tested", rep.n_tested}, {"n_admissible", rep.n_admissible}, {"n_inconclusive", rep.n_inconclusive}}}};
}

} // namespace swirl
