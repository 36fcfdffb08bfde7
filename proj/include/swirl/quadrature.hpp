#pragma once

#include <cmath>
#include <cstddef>

namespace swirl::quad {

namespace detail {

template <typename F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth, std::size_t& evals) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    evals += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // A non-finite estimate cannot improve by bisection; hand it back to the caller.
    if (depth <= 0 || !std::isfinite(delta) || std::fabs(delta) <= 15.0 * tol || m <= a || b <= m) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, evals) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, evals);
}

} // namespace detail

struct SimpsonOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_depth = 40;
};

/// Adaptive Simpson quadrature of f over [a, b] with Richardson correction.
/// The tolerance is max(abs_tol, rel_tol * |coarse estimate|), split over bisections.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, const SimpsonOptions& opt = {}) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = std::fmax(opt.abs_tol, opt.rel_tol * std::fabs(whole));
    std::size_t evals = 3;
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, opt.max_depth, evals);
}

} // namespace swirl::quad
