#pragma once

// Dormand-Prince 5(4) with PI step-size control, Hairer's stiffness test and
// continuous (4th order) output at caller-requested abscissae.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <utility>

namespace swirl::ode {

enum class Status { Ok, Escaped, Stiff, StepLimit, StepUnderflow };

inline const char* to_string(Status s) noexcept {
    switch (s) {
        case Status::Ok: return "ok";
        case Status::Escaped: return "escaped";
        case Status::Stiff: return "stiff";
        case Status::StepLimit: return "step-limit";
        case Status::StepUnderflow: return "step-underflow";
    }
    return "?";
}

struct Dopri5Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  ///< 0 selects an initial step automatically
    double h_max = 0.0;   ///< 0 means the whole interval
    std::size_t max_steps = 500000;
    int stiffness_checks = 15;  ///< consecutive stiff indications before giving up; 0 disables
};

struct Dopri5Result {
    Status status = Status::Ok;
    double x_stop = 0.0;  ///< last accepted abscissa
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

namespace tableau {
inline constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
inline constexpr double a21 = 0.2;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
} // namespace tableau

/// Integrates y' = rhs(x, y) from x0 over the sorted abscissae `outputs`
/// (all >= x0), calling emit(index, x, y) at each one. `escaped(y)` is checked
/// after every accepted step; once it reports true the run stops with
/// Status::Escaped.
template <std::size_t N, typename Rhs, typename Emit, typename Escaped>
Dopri5Result dopri5(Rhs&& rhs, double x0, std::array<double, N> y, std::span<const double> outputs,
                    Emit&& emit, Escaped&& escaped, const Dopri5Options& opt = {}) {
    using namespace tableau;
    using State = std::array<double, N>;

    Dopri5Result res;
    res.x_stop = x0;
    if (outputs.empty()) return res;

    const double x_end = outputs.back();
    std::size_t next = 0;
    while (next < outputs.size() && outputs[next] <= x0) {
        emit(next, outputs[next], y);
        ++next;
    }
    if (next == outputs.size()) return res;

    auto axpy = [](const State& base, double h, std::initializer_list<std::pair<double, const State*>> terms) {
        State out = base;
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            for (const auto& [c, k] : terms) acc += c * (*k)[i];
            out[i] += h * acc;
        }
        return out;
    };

    auto norm_scaled = [&](const State& v, const State& a, const State& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = opt.atol + opt.rtol * std::max(std::fabs(a[i]), std::fabs(b[i]));
            s += (v[i] / sk) * (v[i] / sk);
        }
        return std::sqrt(s / static_cast<double>(N));
    };

    const double span = x_end - x0;
    const double h_max = opt.h_max > 0.0 ? opt.h_max : span;

    double x = x0;
    State k1 = rhs(x, y);

    double h = opt.h_init;
    if (h <= 0.0) {
        // Hairer's starting-step heuristic.
        const double dnf = norm_scaled(k1, y, y);
        const double dny = norm_scaled(y, y, y);
        h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
        h = std::min(h, h_max);
        State y1 = axpy(y, h, {{1.0, &k1}});
        State f1 = rhs(x + h, y1);
        State diff{};
        for (std::size_t i = 0; i < N; ++i) diff[i] = f1[i] - k1[i];
        const double der2 = norm_scaled(diff, y, y) / h;
        const double der12 = std::max(std::fabs(der2), std::sqrt(dnf));
        const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::fabs(h) * 1e-3)
                                         : std::pow(0.01 / der12, 0.2);
        h = std::min({100.0 * std::fabs(h), h1, h_max});
    }

    constexpr double safe = 0.9, facl = 0.2, facr = 10.0, beta = 0.04;
    const double expo1 = 0.2 - beta * 0.75;
    double facold = 1e-4;
    bool last_rejected = false;
    int stiff_count = 0;
    int nonstiff_count = 0;
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x_end));

    while (next < outputs.size()) {
        if (res.accepted + res.rejected >= opt.max_steps) {
            res.status = Status::StepLimit;
            res.x_stop = x;
            return res;
        }
        if (h < h_min) {
            res.status = Status::StepUnderflow;
            res.x_stop = x;
            return res;
        }
        bool last = false;
        if (x + 1.01 * h >= x_end) {
            h = x_end - x;
            last = true;
        }

        const State y2 = axpy(y, h, {{a21, &k1}});
        const State k2 = rhs(x + c2 * h, y2);
        const State y3 = axpy(y, h, {{a31, &k1}, {a32, &k2}});
        const State k3 = rhs(x + c3 * h, y3);
        const State y4 = axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        const State k4 = rhs(x + c4 * h, y4);
        const State y5 = axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        const State k5 = rhs(x + c5 * h, y5);
        const State ysti = axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        const State k6 = rhs(x + h, ysti);
        const State ynew = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const State k7 = rhs(x + h, ynew);

        State errv{};
        for (std::size_t i = 0; i < N; ++i) {
            errv[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
        double err = norm_scaled(errv, y, ynew);
        if (!std::isfinite(err)) {
            ++res.rejected;
            h *= 0.1;
            last_rejected = true;
            continue;
        }

        const double fac11 = std::pow(err, expo1);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(1.0 / facr, std::min(1.0 / facl, fac / safe));
            double h_new = std::min(h / fac, h_max);
            facold = std::max(err, 1e-4);
            ++res.accepted;

            if (opt.stiffness_checks > 0 && (res.accepted % 10 == 0 || stiff_count > 0)) {
                double stnum = 0.0, stden = 0.0;
                for (std::size_t i = 0; i < N; ++i) {
                    stnum += (k7[i] - k6[i]) * (k7[i] - k6[i]);
                    stden += (ynew[i] - ysti[i]) * (ynew[i] - ysti[i]);
                }
                if (stden > 0.0 && h * std::sqrt(stnum / stden) > 3.25) {
                    nonstiff_count = 0;
                    if (++stiff_count >= opt.stiffness_checks) {
                        res.status = Status::Stiff;
                        res.x_stop = x;
                        return res;
                    }
                } else if (++nonstiff_count >= 6) {
                    stiff_count = 0;
                }
            }

            // Continuous output coefficients for outputs falling in (x, x+h].
            const double x_right = last ? x_end : x + h;
            if (next < outputs.size() && outputs[next] <= x_right) {
                std::array<State, 5> rc;
                for (std::size_t i = 0; i < N; ++i) {
                    const double ydiff = ynew[i] - y[i];
                    const double bspl = h * k1[i] - ydiff;
                    rc[0][i] = y[i];
                    rc[1][i] = ydiff;
                    rc[2][i] = bspl;
                    rc[3][i] = ydiff - h * k7[i] - bspl;
                    rc[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                    d7 * k7[i]);
                }
                while (next < outputs.size() && outputs[next] <= x_right) {
                    const double xo = outputs[next];
                    State yo;
                    if (xo == x_right) {
                        yo = ynew;
                    } else {
                        const double th = (xo - x) / h;
                        const double th1 = 1.0 - th;
                        for (std::size_t i = 0; i < N; ++i) {
                            yo[i] = rc[0][i] +
                                    th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
                        }
                    }
                    emit(next, xo, yo);
                    ++next;
                }
            }

            x = last ? x_end : x + h;
            y = ynew;
            k1 = k7;
            res.x_stop = x;
            if (escaped(y)) {
                res.status = Status::Escaped;
                return res;
            }
            if (last_rejected) h_new = std::min(h_new, h);
            last_rejected = false;
            h = h_new;
        } else {
            const double h_new = h / std::min(1.0 / facl, fac11 / safe);
            ++res.rejected;
            last_rejected = true;
            h = h_new;
        }
    }
    return res;
}

} // namespace swirl::ode
