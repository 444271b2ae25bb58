#include <bcp/kernels.hpp>
#include <bcp/pipeline.hpp>
#include <bcp/zoo.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace bcp;

namespace {

std::shared_ptr<const KernelTable> cup_table()
{
    static auto t = std::make_shared<const KernelTable>(build_kernel_table(cup_orientation(), KernelOptions{}));
    return t;
}

std::shared_ptr<const KernelTable> smooth_table()
{
    static auto t = [] {
        KernelOptions o;
        o.n_sharp = o.n_check = 24;
        o.m = 128;
        return std::make_shared<const KernelTable>(build_kernel_table(coboundary_crossratio(profile_by_id("cos2")), o));
    }();
    return t;
}

}

TEST(Kernels, ExactCheckAgreesWithFineMidpoint)
{
    Cochain c = cup_orientation();
    QuadratureGrid g(96);
    for (auto [a, b] : {std::pair{0.0, 1.0}, {0.5, 3.0}, {2.0, 5.5}}) {
        Pt two[2] = {Pt(a), Pt(b)};
        double exact = check_value(c, g, two, KernelMethod::exact);
        double mid = check_value(c, g, two, KernelMethod::midpoint);
        EXPECT_NEAR(exact, mid, 5e-3) << a << " " << b;
    }
}

TEST(Kernels, CheckIsRotationInvariant)
{
    Cochain ch = c_check(cup_orientation(), QuadratureGrid(8), KernelMethod::exact);
    for (double a : {0.3, 1.9, 4.2})
        EXPECT_NEAR(ch({a, a + 2.0}), ch({0.0, 2.0}), 1e-13);
}

TEST(Kernels, CheckVanishesAtAntipode)
{
    // alternating c: the reflection theta -> pi - theta fixes (0, pi) and flips the sign
    Pt two[2] = {Pt(0.0), Pt(pi)};
    EXPECT_NEAR(check_value(cup_orientation(), QuadratureGrid(8), two, KernelMethod::exact), 0, 1e-14);
    EXPECT_NEAR(check_value(coboundary_crossratio(profile_by_id("cos2")), QuadratureGrid(24), two), 0, 1e-12);
    EXPECT_NEAR(cup_table()->check_at(pi), 0, 1e-12);
}

TEST(Kernels, RVanishesAtPi)
{
    EXPECT_NEAR(std::abs(cup_table()->r(pi)), 0, 1e-12);
    EXPECT_NEAR(std::abs(smooth_table()->r(pi)), 0, 1e-10);
}

TEST(Kernels, RSolvesItsOde)
{
    for (double phi : {0.2, 1.0, 2.5, 3.8, 5.9}) {
        EXPECT_LT(std::abs(cup_table()->ode_residual(phi)), 1e-6) << phi;
        EXPECT_LT(std::abs(smooth_table()->ode_residual(phi)), 1e-6) << phi;
    }
}

TEST(Kernels, RIsBoundedBySupOfC)
{
    for (int i = 1; i < 400; ++i) {
        double phi = two_pi * i / 400;
        EXPECT_LE(std::abs(cup_table()->r(phi)), 1.0 / 3.0 + 1e-6);
        EXPECT_LE(std::abs(smooth_table()->r(phi)), 1.0 + 1e-6);
    }
}

TEST(Kernels, VSymmetries)
{
    ComplexCochain2 v = build_v(cup_table());
    for (auto [a, b] : {std::pair{0.4, 2.0}, {1.0, 5.0}, {3.5, 0.2}}) {
        EXPECT_NEAR(std::abs(v(a, b) + v(b, a)), 0, 1e-10) << a << " " << b;
        EXPECT_NEAR(std::abs(v(-b, -a) + std::conj(v(a, b))), 0, 1e-10) << a << " " << b;
    }
    EXPECT_THROW(v(1.0, 1.0), domain_error);
}

TEST(Kernels, ZeroCocycleGivesZeroTable)
{
    KernelTable t = build_kernel_table(constant_cochain(5, 0.0), KernelOptions{});
    for (double phi : {1e-3, 1.0, pi, 6.0}) EXPECT_EQ(std::abs(t.r(phi)), 0.0);
}

TEST(Kernels, CsvRoundTrip)
{
    std::stringstream ss;
    cup_table()->write_csv(ss);
    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line.rfind("# M=512 N=0 cocycle=cup_orientation", 0), 0u);
    std::getline(ss, line);
    EXPECT_EQ(line, "zeta,check,re_r,im_r");
    std::vector<double> prof;
    while (std::getline(ss, line)) {
        std::stringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        std::getline(row, cell, ',');
        prof.push_back(std::stod(cell));
    }
    ASSERT_EQ(prof.size(), 513u);
    KernelTable back = solve_r(prof, 0, "reloaded");
    for (double phi : {0.1, 1.5, 3.0, 4.7, 6.1})
        EXPECT_NEAR(std::abs(back.r(phi) - cup_table()->r(phi)), 0, 1e-14);
}

TEST(Kernels, TableRejectsBadProfiles)
{
    EXPECT_THROW(solve_r(std::vector<double>(8, 0.0)), invalid_argument);
    std::vector<double> bad(9, 0.0);
    bad[3] = NAN;
    EXPECT_THROW(solve_r(bad), invalid_argument);
}
