#include <bcp/zoo.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace bcp;

TEST(Zoo, CupMatchesAlternatingSum)
{
    Cochain fast = cup_orientation(), ref = cup_orientation_reference();
    auto xs = random_tuples(CounterRng(3, "cup"), 100, 5);
    for (const auto& x : xs) {
        EXPECT_NEAR(fast(x), ref(x), 1e-14);
        EXPECT_NEAR(std::fabs(fast(x)), 1.0 / 3.0, 1e-15);
    }
}

TEST(Zoo, CupIsACocycle)
{
    auto xs = random_tuples(CounterRng(4, "cup-d"), 200, 6);
    EXPECT_LE(cocycle_residual(cup_orientation(), xs).max, 1e-15);
}

TEST(Zoo, EveryBuiltInCocycleValidates)
{
    for (auto k : {CocycleKind::zero, CocycleKind::cup_orientation, CocycleKind::coboundary_crossratio,
                   CocycleKind::mollified_cup}) {
        CocycleSpec s;
        s.kind = k;
        EXPECT_NO_THROW(build_cocycle(s)) << kind_name(k);
    }
}

TEST(Zoo, CrossRatioCoboundaryIsInvariant)
{
    Cochain c = coboundary_crossratio(profile_by_id("cos2"));
    auto rep = validate_cocycle(c, {true, true, true}, 1e-10, 40);
    EXPECT_TRUE(rep.ok) << rep.message;
    EXPECT_LE(rep.bound_excess, 0);
}

TEST(Zoo, MollifierExamples)
{
    auto xs = random_tuples(CounterRng(8, "moll"), 40, 5, 0.1);
    Cochain z = mollify(constant_cochain(5, 0.0), 0.05);
    Cochain narrow = mollify(cup_orientation(), 1e-6);
    Cochain wide = mollify(cup_orientation(), 0.2, 2);
    for (const auto& x : xs) {
        EXPECT_EQ(z(x), 0.0);
        // gaps >= 0.1 so a tiny width cannot change the order pattern
        EXPECT_NEAR(narrow(x), cup_orientation()(x), 1e-15);
        EXPECT_LE(std::fabs(wide(x)), 1.0 / 3.0 + 1e-15);
    }
    EXPECT_THROW(mollify(cup_orientation(), 0.0), invalid_argument);
}

TEST(Zoo, MollifiedCupIsACocycle)
{
    auto xs = random_tuples(CounterRng(9, "moll-d"), 20, 6);
    EXPECT_LE(cocycle_residual(mollify(cup_orientation(), 0.05), xs).max, 1e-13);
}

TEST(Zoo, TabulatedRoundTrip)
{
    // tabulate a smooth function that is defined on the diagonal too
    Cochain s(5, [](const Pt* p) { return std::sin(p[0].th - p[3].th) * std::cos(p[1].th + p[2].th - p[4].th); });
    std::stringstream ss;
    save_tabulated(ss, s, 6);
    auto tab = std::make_shared<Tabulated>(load_tabulated(ss));
    ASSERT_EQ(tab->n, 6);
    ASSERT_EQ(tab->values.size(), 7776u);
    Cochain t = tabulated_cochain(tab);
    const double h = two_pi / 6;
    for (int k : {0, 17, 333, 4000, 7775}) {
        Tuple x(5);
        for (int i = 4, r = k; i >= 0; --i, r /= 6) x[i] = h * (r % 6);
        EXPECT_NEAR(t(x), s(x), 1e-15);
    }
}

TEST(Zoo, TabulatedRejectsBadInput)
{
    std::stringstream bad("m 4 1 2 3");
    EXPECT_THROW(load_tabulated(bad), invalid_argument);
    std::stringstream trunc("n 2 1 2 3");
    EXPECT_THROW(load_tabulated(trunc), invalid_argument);
    CocycleSpec s;
    s.kind = CocycleKind::external;
    EXPECT_THROW(build_cocycle(s), invalid_argument);
    EXPECT_THROW(kind_from_name("cup"), invalid_argument);
}

TEST(Zoo, ValidationCatchesFalseClaims)
{
    Cochain bogus(5, [](const Pt* p) { return std::sin(p[0].th); }, 1.0, "bogus");
    EXPECT_FALSE(validate_cocycle(bogus, {true, true, true}).ok);
}
