#include <bcp/suite.hpp>
#include <bcp/zoo.hpp>

#include <gtest/gtest.h>

using namespace bcp;

namespace {

Pipeline make(CocycleKind k)
{
    CocycleSpec s;
    s.kind = k;
    Cochain c = build_cocycle(s);
    return build_pipeline(c, default_pipeline_options(c));
}

const Pipeline& zero_pipeline()
{
    static Pipeline p = make(CocycleKind::zero);
    return p;
}

const Pipeline& cup_pipeline()
{
    static Pipeline p = make(CocycleKind::cup_orientation);
    return p;
}

CheckReport run(const char* id, const Pipeline& p, bool plant)
{
    CheckOptions base;
    base.plant = plant;
    return run_check(id, p, plan_options(base, check_plan(id)));
}

}

TEST(Verify, ZeroSuitePasses)
{
    SuiteOptions s;
    for (const auto& r : run_suite(zero_pipeline(), s)) {
        EXPECT_TRUE(r.passed) << r.check_id << " " << r.max_residual << " > " << r.tolerance;
        if (r.check_id != "brackets" && r.check_id != "boundedness_scan") {
            EXPECT_LE(r.max_residual, 1e-12) << r.check_id;
        }
    }
}

TEST(Verify, PlantsFailOnZero)
{
    for (const auto& plan : check_plans) {
        if (!applies(plan.id, zero_pipeline(), SuiteOptions{})) continue;
        EXPECT_FALSE(run(plan.id, zero_pipeline(), true).passed) << plan.id;
    }
}

class CupCheck : public ::testing::TestWithParam<const char*> {};

TEST_P(CupCheck, PassesAndFailsItsPlant)
{
    EXPECT_TRUE(run(GetParam(), cup_pipeline(), false).passed);
    EXPECT_FALSE(run(GetParam(), cup_pipeline(), true).passed);
}

INSTANTIATE_TEST_SUITE_P(Cup, CupCheck,
                         ::testing::Values("cocycle", "conjugation_symmetry", "kernel_rotation", "I_flow",
                                           "dcheck_identity", "frobenius", "ode_residual", "r_bound",
                                           "fsharp_antidiagonal", "inhomogeneity_reflection", "f0_antidiagonal"),
                         [](const auto& info) { return std::string(info.param); });

TEST(Verify, ToleranceOverrideWins)
{
    CheckOptions o = plan_options(CheckOptions{}, check_plan("r_bound"));
    o.tolerance_overrides["r_bound"] = -1.0;
    EXPECT_FALSE(run_check("r_bound", cup_pipeline(), o).passed);
}

TEST(Verify, ScanScheduleShrinks)
{
    for (int k = 1; k < 4; ++k) EXPECT_DOUBLE_EQ(scan_delta(k), scan_delta(k - 1) / 4);
}

TEST(Verify, UnknownCheckIsRejected)
{
    EXPECT_THROW(check_plan("nope"), invalid_argument);
    EXPECT_THROW(run_check("nope", zero_pipeline(), CheckOptions{}), invalid_argument);
}
