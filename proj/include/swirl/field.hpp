#pragma once

// Physical fields on an (r, z) rectangle from a similarity profile:
//   u = U(z/r)/r,  v = V(z/r)/r,  w = W(z/r)/r,  p = P(z/r)/r^2.
// Layouts of the CSV and VTK outputs are described in docs/FORMATS.md.

#include "swirl/core.hpp"
#include "swirl/errors.hpp"
#include "swirl/interpolation.hpp"
#include "swirl/profile_io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace swirl {

struct PhysicalField {
    std::vector<double> r_grid;
    std::vector<double> z_grid;
    // Samples at (r_grid[i], z_grid[j]) stored at i * nz + j (z fastest).
    std::vector<double> u, v, w, p;

    std::size_t nr() const noexcept { return r_grid.size(); }
    std::size_t nz() const noexcept { return z_grid.size(); }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * nz() + j; }

    void validate() const {
        if (r_grid.empty() || z_grid.empty()) throw DomainError("field grids must be non-empty");
        for (std::size_t i = 0; i < r_grid.size(); ++i) {
            if (!(r_grid[i] > 0.0)) throw DomainError("r samples must be positive (the axis r = 0 is singular)");
            if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw DomainError("r samples must be strictly increasing");
        }
        for (std::size_t j = 1; j < z_grid.size(); ++j) {
            if (!(z_grid[j] > z_grid[j - 1])) throw DomainError("z samples must be strictly increasing");
        }
        const std::size_t n = nr() * nz();
        if (u.size() != n || v.size() != n || w.size() != n || p.size() != n) {
            throw DomainError("field component sizes do not match the grid");
        }
    }
};

/// Samples of a profile as functions of xi, by monotone cubic interpolation
/// of U, V, W, P. Never extrapolates.
class ProfileInterpolant {
public:
    explicit ProfileInterpolant(const SimilarityProfile& prof)
        : lo_(prof.grid().front()), hi_(prof.grid().back()),
          U_(CubicHermite::monotone(prof.grid(), prof.U())),
          V_(CubicHermite::monotone(prof.grid(), prof.v())),
          W_(CubicHermite::monotone(prof.grid(), prof.W())),
          P_(CubicHermite::monotone(prof.grid(), prof.p())) {}

    bool contains(double xi) const noexcept { return xi >= lo_ && xi <= hi_; }
    double U(double xi) const { return U_(xi); }
    double V(double xi) const { return V_(xi); }
    double W(double xi) const { return W_(xi); }
    double P(double xi) const { return P_(xi); }

private:
    double lo_, hi_;
    CubicHermite U_, V_, W_, P_;
};

inline PhysicalField reconstruct(const SimilarityProfile& prof, std::vector<double> r_grid, std::vector<double> z_grid) {
    PhysicalField f;
    f.r_grid = std::move(r_grid);
    f.z_grid = std::move(z_grid);
    const std::size_t n = f.nr() * f.nz();
    f.u.assign(n, 0.0);
    f.v.assign(n, 0.0);
    f.w.assign(n, 0.0);
    f.p.assign(n, 0.0);
    f.validate();

    const ProfileInterpolant pi(prof);
    std::vector<std::pair<double, double>> bad;
    for (std::size_t i = 0; i < f.nr(); ++i) {
        for (std::size_t j = 0; j < f.nz(); ++j) {
            if (!pi.contains(f.z_grid[j] / f.r_grid[i])) bad.emplace_back(f.r_grid[i], f.z_grid[j]);
        }
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << bad.size() << " grid point(s) map outside the profile range [" << prof.grid().front() << ", "
           << prof.grid().back() << "] in xi = z/r; first (r, z) = (" << bad.front().first << ", "
           << bad.front().second << ")";
        throw OutOfDomainError(os.str(), std::move(bad));
    }
    for (std::size_t i = 0; i < f.nr(); ++i) {
        const double r = f.r_grid[i];
        for (std::size_t j = 0; j < f.nz(); ++j) {
            const double xi = f.z_grid[j] / r;
            const std::size_t k = f.index(i, j);
            f.u[k] = pi.U(xi) / r;
            f.v[k] = pi.V(xi) / r;
            f.w[k] = pi.W(xi) / r;
            f.p[k] = pi.P(xi) / (r * r);
        }
    }
    return f;
}

/// n cell centres of [a, b]: a + (k + 1/2)(b - a)/n. Keeps samples off the
/// window edges, in particular off z = 0 where the inviscid U is singular.
inline std::vector<double> cell_centres(double a, double b, std::size_t n) {
    if (n == 0) throw DomainError("need at least one sample");
    if (!(b > a)) throw DomainError("window requires upper bound > lower bound");
    std::vector<double> out(n);
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a + (static_cast<double>(k) + 0.5) * h;
    return out;
}

namespace detail {
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
} // namespace detail

inline std::string field_csv(const PhysicalField& f) {
    f.validate();
    std::string out = "r,z,u,v,w,p\n";
    using detail::fmt17;
    for (std::size_t i = 0; i < f.nr(); ++i) {
        for (std::size_t j = 0; j < f.nz(); ++j) {
            const std::size_t k = f.index(i, j);
            out += fmt17(f.r_grid[i]) + ',' + fmt17(f.z_grid[j]) + ',' + fmt17(f.u[k]) + ',' + fmt17(f.v[k]) + ',' +
                   fmt17(f.w[k]) + ',' + fmt17(f.p[k]) + '\n';
        }
    }
    return out;
}

/// VTK legacy ASCII structured grid. Points are (r, 0, z) with r varying
/// fastest, as VTK requires; point data: vectors `velocity` (u, v, w),
/// vectors `meridional` (u, 0, w), scalars `pressure`.
inline std::string field_vtk(const PhysicalField& f, const std::string& title = "swirl similarity field") {
    f.validate();
    using detail::fmt17;
    std::string out;
    out += "# vtk DataFile Version 3.0\n";
    out += title.substr(0, 255) + "\n";
    out += "ASCII\nDATASET STRUCTURED_GRID\n";
    out += "DIMENSIONS " + std::to_string(f.nr()) + " " + std::to_string(f.nz()) + " 1\n";
    const std::size_t n = f.nr() * f.nz();
    out += "POINTS " + std::to_string(n) + " double\n";
    for (std::size_t j = 0; j < f.nz(); ++j) {
        for (std::size_t i = 0; i < f.nr(); ++i) out += fmt17(f.r_grid[i]) + " 0 " + fmt17(f.z_grid[j]) + "\n";
    }
    out += "POINT_DATA " + std::to_string(n) + "\n";
    out += "VECTORS velocity double\n";
    for (std::size_t j = 0; j < f.nz(); ++j) {
        for (std::size_t i = 0; i < f.nr(); ++i) {
            const std::size_t k = f.index(i, j);
            out += fmt17(f.u[k]) + " " + fmt17(f.v[k]) + " " + fmt17(f.w[k]) + "\n";
        }
    }
    out += "VECTORS meridional double\n";
    for (std::size_t j = 0; j < f.nz(); ++j) {
        for (std::size_t i = 0; i < f.nr(); ++i) {
            const std::size_t k = f.index(i, j);
            out += fmt17(f.u[k]) + " 0 " + fmt17(f.w[k]) + "\n";
        }
    }
    out += "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (std::size_t j = 0; j < f.nz(); ++j) {
        for (std::size_t i = 0; i < f.nr(); ++i) out += fmt17(f.p[f.index(i, j)]) + "\n";
    }
    return out;
}

inline void export_csv(const PhysicalField& f, const std::filesystem::path& path) {
    write_file_atomic(path, field_csv(f));
}

inline void export_vtk(const PhysicalField& f, const std::filesystem::path& path) {
    write_file_atomic(path, field_vtk(f));
}

/// Parses a CSV written by field_csv.
inline PhysicalField parse_field_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "r,z,u,v,w,p") throw DomainError("field CSV: unexpected header");
    std::vector<std::array<double, 6>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::array<double, 6> row{};
        std::istringstream ls(line);
        std::string cell;
        for (int c = 0; c < 6; ++c) {
            if (!std::getline(ls, cell, ',')) throw DomainError("field CSV: short row");
            row[c] = std::stod(cell);
        }
        rows.push_back(row);
    }
    PhysicalField f;
    for (const auto& row : rows) {
        if (f.r_grid.empty() || row[0] != f.r_grid.back()) f.r_grid.push_back(row[0]);
        if (f.r_grid.size() == 1) f.z_grid.push_back(row[1]);
        f.u.push_back(row[2]);
        f.v.push_back(row[3]);
        f.w.push_back(row[4]);
        f.p.push_back(row[5]);
    }
    f.validate();
    return f;
}

} // namespace swirl
