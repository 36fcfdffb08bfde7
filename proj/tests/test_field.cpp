#include "swirl/euler.hpp"
#include "swirl/field.hpp"
#include "swirl/viscous.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

using namespace swirl;

namespace {

FlowParameters fig_params(int branch) {
    FlowParameters p;
    p.v_swirl = 1.0;
    p.e0 = 1.0;
    p.branch = branch;
    return p;
}

SimilarityProfile trivial_profile() {
    return SimilarityProfile({0.0, 10.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, FlowParameters{});
}

TEST(Reconstruct, TrivialProfileGivesZeroField) {
    const auto f = reconstruct(trivial_profile(), {0.5, 1.0}, {0.0, 1.0});
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(f.u[k], 0.0);
        EXPECT_EQ(f.v[k], 0.0);
        EXPECT_EQ(f.w[k], 0.0);
        EXPECT_EQ(f.p[k], 0.0);
    }
}

TEST(Reconstruct, SwirlAtUnitPoint) {
    const auto prof = euler_continuous(fig_params(1), asinh_grid(1e-4, 100.0, 400));
    const auto f = reconstruct(prof, {1.0}, {1.0});
    EXPECT_NEAR(f.v[0], 1.0, 1e-15);
}

TEST(Reconstruct, Homogeneity) {
    const auto prof = euler_continuous(fig_params(1), asinh_grid(1e-4, 100.0, 2000));
    const std::vector<double> r{0.3, 0.7, 1.1};
    const std::vector<double> z{0.05, 0.4, 1.3};
    const auto a = reconstruct(prof, r, z);
    const auto b = reconstruct(prof, {0.6, 1.4, 2.2}, {0.1, 0.8, 2.6});
    for (std::size_t k = 0; k < a.u.size(); ++k) {
        EXPECT_NEAR(b.u[k] * 2.0, a.u[k], 1e-8 * (1.0 + std::fabs(a.u[k])));
        EXPECT_NEAR(b.v[k] * 2.0, a.v[k], 1e-8);
        EXPECT_NEAR(b.w[k] * 2.0, a.w[k], 1e-8 * (1.0 + std::fabs(a.w[k])));
        EXPECT_NEAR(b.p[k] * 4.0, a.p[k], 1e-8 * (1.0 + std::fabs(a.p[k])));
    }
}

TEST(Reconstruct, OutOfDomainListsPoints) {
    const auto prof = euler_continuous(fig_params(1), asinh_grid(0.1, 10.0, 50));
    try {
        reconstruct(prof, {1.0, 2.0}, {0.0, 1.0, 30.0});
        FAIL();
    } catch (const OutOfDomainError& e) {
        // xi = 0 (both r), xi = 30 and 15 are outside [0.1, 10].
        EXPECT_EQ(e.points().size(), 4u);
        EXPECT_EQ(e.points().front(), std::make_pair(1.0, 0.0));
    }
    EXPECT_THROW(reconstruct(prof, {0.0, 1.0}, {1.0}), DomainError);
    EXPECT_THROW(reconstruct(prof, {1.0, 0.5}, {1.0}), DomainError);
}

TEST(Reconstruct, IncompressibilitySpotCheck) {
    SolverConfig cfg;
    cfg.n_grid = 2048;
    const auto prof = picard_solve(FlowParameters{1.0, 1.0, 1.0, 0.0, 1}, cfg).profile;
    auto divergence = [&](double h) {
        double worst = 0.0;
        for (double r0 : {0.5, 1.0, 1.5}) {
            for (double z0 : {0.3, 1.0, 1.7}) {
                const auto f = reconstruct(prof, {r0 - h, r0, r0 + h}, {z0 - h, z0, z0 + h});
                const double dru = ((r0 + h) * f.u[f.index(2, 1)] - (r0 - h) * f.u[f.index(0, 1)]) / (2.0 * h);
                const double dwz = (f.w[f.index(1, 2)] - f.w[f.index(1, 0)]) / (2.0 * h);
                worst = std::max(worst, std::fabs(dru / r0 + dwz));
            }
        }
        return worst;
    };
    const double d1 = divergence(2.5e-3);
    const double d2 = divergence(1.25e-3);
    EXPECT_LT(d1, 1e-4);
    EXPECT_LT(d2, 0.35 * d1);  // second order: ratio ~ 1/4
}

TEST(Export, CsvShapeAndRoundTrip) {
    const auto f0 = reconstruct(trivial_profile(), {0.5, 1.0}, {0.0, 1.0});
    const auto csv = field_csv(f0);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);

    const auto prof = euler_continuous(fig_params(-1), asinh_grid(1e-4, 100.0, 300));
    const auto f = reconstruct(prof, cell_centres(0.1, 2.0, 7), cell_centres(0.0, 2.0, 5));
    const auto back = parse_field_csv(field_csv(f));
    EXPECT_EQ(back.r_grid, f.r_grid);
    EXPECT_EQ(back.z_grid, f.z_grid);
    EXPECT_EQ(back.u, f.u);
    EXPECT_EQ(back.w, f.w);
    EXPECT_EQ(back.p, f.p);
}

TEST(Export, VtkLayout) {
    const auto f = reconstruct(trivial_profile(), {0.5, 1.0, 2.0}, {0.0, 1.0});
    const auto vtk = field_vtk(f);
    EXPECT_EQ(vtk.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
    EXPECT_NE(vtk.find("DIMENSIONS 3 2 1\n"), std::string::npos);
    EXPECT_NE(vtk.find("POINTS 6 double\n"), std::string::npos);
    EXPECT_NE(vtk.find("VECTORS velocity double\n"), std::string::npos);
    EXPECT_NE(vtk.find("VECTORS meridional double\n"), std::string::npos);
    EXPECT_NE(vtk.find("SCALARS pressure double 1\nLOOKUP_TABLE default\n"), std::string::npos);
    // r varies fastest in the point list.
    EXPECT_NE(vtk.find("0.5 0 0\n1 0 0\n2 0 0\n0.5 0 1\n"), std::string::npos);
}

TEST(Export, IoErrorsCarryPath) {
    const auto f = reconstruct(trivial_profile(), {1.0}, {1.0});
    try {
        export_csv(f, "/nonexistent-dir/x.csv");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
    }
}

TEST(Figure, SignPatternBothBranches) {
    const auto r = cell_centres(0.1, 2.0, 20);
    const auto z = cell_centres(0.0, 2.0, 20);
    for (int branch : {1, -1}) {
        const auto prof = euler_continuous(fig_params(branch), asinh_grid(1e-4, 100.0, 600));
        const auto f = reconstruct(prof, r, z);
        for (std::size_t k = 0; k < f.u.size(); ++k) {
            ASSERT_EQ(f.u[k] < 0.0, branch > 0);
            ASSERT_EQ(f.w[k] > 0.0, branch > 0);
        }
    }
}

TEST(CellCentres, Values) {
    const auto c = cell_centres(0.0, 2.0, 4);
    EXPECT_DOUBLE_EQ(c[0], 0.25);
    EXPECT_DOUBLE_EQ(c[3], 1.75);
    EXPECT_THROW(cell_centres(1.0, 0.0, 3), DomainError);
}

} // namespace
