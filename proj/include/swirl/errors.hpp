#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace swirl {

/// Parameter or domain violation (k0 <= 0, sigma outside the domain, |x| >= 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The theta integrator left the configured bound before reaching x_max.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double x_escape)
        : std::runtime_error(what), x_escape_(x_escape) {}

    double x_escape() const noexcept { return x_escape_; }

private:
    double x_escape_;
};

/// The theta integrator exhausted its step budget (the problem is too stiff
/// for the explicit scheme at this viscosity).
class StiffnessError : public std::runtime_error {
public:
    StiffnessError(const std::string& what, double x_stop)
        : std::runtime_error(what), x_stop_(x_stop) {}

    double x_stop() const noexcept { return x_stop_; }

private:
    double x_stop_;
};

class MaxItersError : public std::runtime_error {
public:
    MaxItersError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), history_(std::move(history)) {}

    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

/// Requested (r, z) samples whose similarity coordinate lies outside the profile.
class OutOfDomainError : public std::out_of_range {
public:
    OutOfDomainError(const std::string& what, std::vector<std::pair<double, double>> points)
        : std::out_of_range(what), points_(std::move(points)) {}

    const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }

private:
    std::vector<std::pair<double, double>> points_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace swirl
