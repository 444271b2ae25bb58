#pragma once

// c -> (c-check, r) table -> (F#, Fb) -> f0 -> f -> P_c(f), wired once.

#include <bcp/arrangement.hpp>
#include <bcp/characteristics.hpp>
#include <bcp/cochain.hpp>
#include <bcp/kernels.hpp>

#include <chrono>
#include <memory>

namespace bcp {

struct PipelineOptions {
    KernelOptions kernel{};
    /// midpoint nodes of the I grid in P = I(c) + df
    int n_integrate = 128;
    SolverOptions solver{};
};

/// 128 I-grid nodes for smooth cocycles, 512 for piecewise constant ones.
inline PipelineOptions default_pipeline_options(const Cochain& c)
{
    PipelineOptions o;
    o.n_integrate = c.order_type ? 512 : 128;
    return o;
}

struct Pipeline {
    Cochain c;
    PipelineOptions options;
    std::shared_ptr<const KernelTable> table;
    std::shared_ptr<const InhomogeneityPair> inhom;
    std::shared_ptr<const F0Solver> solver;
    Cochain i_of_c;
    Cochain f;
    Cochain P;
    double table_ms = 0;

    double f0(double p1, double p2) const { return (*solver)(p1, p2); }
};

inline Pipeline build_pipeline(const Cochain& c, const PipelineOptions& o)
{
    if (c.arity != 5) throw invalid_argument("pipeline needs a 5-cochain");
    Pipeline p;
    p.c = c;
    p.options = o;
    auto t0 = std::chrono::steady_clock::now();
    p.table = std::make_shared<const KernelTable>(build_kernel_table(c, o.kernel));
    p.table_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    p.inhom = std::make_shared<const InhomogeneityPair>(c, p.table, o.kernel.n_sharp, o.kernel.method);
    p.solver = std::make_shared<const F0Solver>(p.inhom, o.solver);
    p.i_of_c = integrate_first(c, QuadratureGrid(o.n_integrate));
    p.f = lift_f(p.solver);
    p.P = primitive(p.i_of_c, p.f);
    return p;
}

/// Same pipeline with a different I grid; kernels and f0 memo are shared.
inline Pipeline with_integration_grid(const Pipeline& p, int n)
{
    Pipeline q = p;
    q.options.n_integrate = n;
    q.i_of_c = integrate_first(p.c, QuadratureGrid(n));
    q.P = primitive(q.i_of_c, q.f);
    return q;
}

}
