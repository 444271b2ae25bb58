#pragma once

// The full battery for one pipeline, with per-check sample counts and FD steps.

#include <bcp/verify.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace bcp {

struct CheckPlan {
    const char* id;
    std::size_t samples;
    /// FD step; 0 when the check has none
    double h;
    /// tolerance comes from the fitted model
    bool fitted;
};

// f0 is cheap per point only after its memo warms up, hence the smaller f0 counts
inline constexpr CheckPlan check_plans[] = {
    {"brackets", 100, 1e-3, false},
    {"cocycle", 100, 0, false},
    {"conjugation_symmetry", 100, 0, false},
    {"kernel_rotation", 100, 1e-4, true},
    {"I_flow", 100, 1e-4, true},
    {"dcheck_identity", 100, 1e-4, true},
    {"frobenius", 100, 1e-4, true},
    {"ode_residual", 100, 0, true},
    {"r_bound", 1000, 0, false},
    {"pde_residual", 20, 1e-3, true},
    {"fsharp_antidiagonal", 100, 0, true},
    {"inhomogeneity_reflection", 100, 0, true},
    {"f0_alternation", 30, 0, true},
    {"f0_antidiagonal", 100, 0, true},
    {"oracle_equivalence", 50, 0, false},
    {"primitive_residual", 200, 0, false},
    {"g_invariance", 50, 0, false},
    {"boundedness_scan", 0, 0, false},
    {"quadrature_order", 400, 0, false},
};

inline const CheckPlan& check_plan(std::string_view id)
{
    for (const auto& c : check_plans)
        if (id == c.id) return c;
    throw invalid_argument("unknown check: " + std::string(id));
}

struct SuiteOptions {
    CheckOptions base{};
    /// I grid for the invariance check; the midpoint error of I(c) dominates there
    int g_invariance_n = 512;
    /// run conjugation_symmetry (needs an alternating cocycle)
    bool alternating = true;
    /// FD step for every FD check; 0 keeps the plan's step
    double fd_step = 0;
    /// restrict to these ids when non-empty
    std::vector<std::string> only;
};

/// Options for one check: the plan's sample count and FD step unless overridden.
inline CheckOptions plan_options(const CheckOptions& base, const CheckPlan& plan, double fd_step = 0, std::size_t samples = 0)
{
    CheckOptions o = base;
    o.samples = samples ? samples : plan.samples;
    if (plan.h > 0) o.h = fd_step > 0 ? fd_step : plan.h;
    return o;
}

inline CheckReport run_check(std::string_view id, const Pipeline& p, const CheckOptions& o, int g_invariance_n = 512)
{
    if (id == "brackets") return check_brackets(o);
    if (id == "cocycle") return check_cocycle(p.c, o);
    if (id == "conjugation_symmetry") return check_conjugation_symmetry(p.c, o);
    if (id == "kernel_rotation") return check_kernel_rotation(p, o);
    if (id == "I_flow") return check_I_flow(p, o);
    if (id == "dcheck_identity") return check_dcheck_identity(p, o);
    if (id == "frobenius") return check_frobenius(p, o);
    if (id == "ode_residual") return check_ode_residual(p, o);
    if (id == "r_bound") return check_r_bound(p, o, o.samples);
    if (id == "pde_residual") return check_pde(p, o);
    if (id == "fsharp_antidiagonal") return check_fsharp_antidiagonal(p, o);
    if (id == "inhomogeneity_reflection") return check_inhomogeneity_reflection(p, o);
    if (id == "f0_alternation") return check_f0_alternation(p, o);
    if (id == "f0_antidiagonal") return check_f0_antidiagonal(p, o);
    if (id == "oracle_equivalence") return check_oracle(p, o);
    if (id == "primitive_residual") return check_primitive(p, o);
    if (id == "g_invariance") {
        if (g_invariance_n == p.options.n_integrate) return check_g_invariance(p, o);
        return check_g_invariance(with_integration_grid(p, g_invariance_n), o);
    }
    if (id == "boundedness_scan") return boundedness_scan(p, o);
    if (id == "quadrature_order") return check_quadrature_order(p.c, o, p.options.n_integrate / 4);
    throw invalid_argument("unknown check: " + std::string(id));
}

/// Whether `id` applies to the pipeline's cocycle.
inline bool applies(std::string_view id, const Pipeline& p, const SuiteOptions& s)
{
    if (id == "conjugation_symmetry") return s.alternating;
    if (id == "quadrature_order") return p.c.order_type && family_of(p.c) != Family::zero;
    return true;
}

/// Checks run in plan order; each owns its report.
inline std::vector<CheckReport> run_suite(const Pipeline& p, const SuiteOptions& s)
{
    std::vector<CheckReport> out;
    for (const auto& plan : check_plans) {
        if (!applies(plan.id, p, s)) continue;
        if (!s.only.empty() && std::find(s.only.begin(), s.only.end(), plan.id) == s.only.end()) continue;
        out.push_back(run_check(plan.id, p, plan_options(s.base, plan, s.fd_step), s.g_invariance_n));
    }
    return out;
}

}
