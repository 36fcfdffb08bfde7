#pragma once

#include "swirl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace swirl {

/// Piecewise cubic Hermite interpolant on a strictly increasing abscissa.
/// Nodal slopes are either supplied or estimated with the Fritsch-Carlson
/// (shape-preserving) rule. Evaluation outside [front, back] throws.
class CubicHermite {
public:
    CubicHermite() = default;

    CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
        : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
        check();
    }

    /// Monotone (PCHIP) slopes.
    static CubicHermite monotone(std::span<const double> x, std::span<const double> y) {
        std::vector<double> xs(x.begin(), x.end());
        std::vector<double> ys(y.begin(), y.end());
        auto d = pchip_slopes(xs, ys);
        return CubicHermite(std::move(xs), std::move(ys), std::move(d));
    }

    double front() const noexcept { return x_.front(); }
    double back() const noexcept { return x_.back(); }
    std::size_t size() const noexcept { return x_.size(); }

    bool contains(double t) const noexcept { return t >= x_.front() && t <= x_.back(); }

    double operator()(double t) const { return eval(t, locate(t)); }

    double derivative(double t) const {
        const std::size_t i = locate(t);
        const double h = x_[i + 1] - x_[i];
        const double s = (t - x_[i]) / h;
        const double d00 = 6.0 * s * s - 6.0 * s;
        const double d10 = 3.0 * s * s - 4.0 * s + 1.0;
        const double d01 = -d00;
        const double d11 = 3.0 * s * s - 2.0 * s;
        return (d00 * y_[i] + d01 * y_[i + 1]) / h + d10 * dy_[i] + d11 * dy_[i + 1];
    }

    /// Index i of the interval [x_i, x_{i+1}] containing t.
    std::size_t locate(double t) const {
        if (!(t >= x_.front() && t <= x_.back())) {
            throw DomainError("interpolation abscissa " + std::to_string(t) + " outside [" +
                              std::to_string(x_.front()) + ", " + std::to_string(x_.back()) + "]");
        }
        auto it = std::upper_bound(x_.begin(), x_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - x_.begin());
        if (i == 0) i = 1;
        if (i >= x_.size()) i = x_.size() - 1;
        return i - 1;
    }

    double eval(double t, std::size_t i) const {
        const double h = x_[i + 1] - x_[i];
        const double s = (t - x_[i]) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = s3 - 2.0 * s2 + s;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = s3 - s2;
        return h00 * y_[i] + h10 * h * dy_[i] + h01 * y_[i + 1] + h11 * h * dy_[i + 1];
    }

    /// Exact integral of the cubic over interval i.
    double interval_integral(std::size_t i) const {
        const double h = x_[i + 1] - x_[i];
        return h * (y_[i] + y_[i + 1]) / 2.0 + h * h * (dy_[i] - dy_[i + 1]) / 12.0;
    }

    static std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y) {
        const std::size_t n = x.size();
        std::vector<double> d(n, 0.0);
        if (n == 2) {
            d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
            return d;
        }
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x[i + 1] - x[i];
            delta[i] = (y[i + 1] - y[i]) / h[i];
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                d[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        return d;
    }

private:
    // Non-centred three-point end slope, limited to keep monotonicity.
    static double end_slope(double h0, double h1, double del0, double del1) {
        double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d * del0 <= 0.0) {
            d = 0.0;
        } else if (del0 * del1 <= 0.0 && std::fabs(d) > std::fabs(3.0 * del0)) {
            d = 3.0 * del0;
        }
        return d;
    }

    void check() const {
        if (x_.size() < 2 || y_.size() != x_.size() || dy_.size() != x_.size()) {
            throw DomainError("CubicHermite needs >= 2 nodes and matching value/slope arrays");
        }
        for (std::size_t i = 1; i < x_.size(); ++i) {
            if (!(x_[i] > x_[i - 1])) throw DomainError("CubicHermite abscissae must increase strictly");
        }
    }

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> dy_;
};

} // namespace swirl
