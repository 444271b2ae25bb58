// Smallest end-to-end run: cup cocycle -> kernels -> f0 -> primitive, then a few spot values.

#include <bcp/bcp.hpp>

#include <cstdio>

using namespace bcp;

int main()
{
    CocycleSpec spec;
    spec.kind = CocycleKind::cup_orientation;
    const Cochain c = build_cocycle(spec);
    const Pipeline p = build_pipeline(c, default_pipeline_options(c));
    std::printf("table: M=%d, built in %.0f ms\n", p.table->m, p.table_ms);

    for (auto [a, b] : {std::pair{pi / 2, pi}, {1.0, 5.0}, {4.0, 2.0}}) {
        const F0Result r = p.solver->eval(OmegaPoint(a, b));
        std::printf("f0(%.4f, %.4f) = % .12f  (abserr %.1e, %zu evals)\n", a, b, r.value, r.abserr, r.evals);
    }

    // dP = c at a random 5-tuple
    const Tuple x = random_tuple(CounterRng(1, "demo"), 0, 5);
    std::printf("c(x) = % .6f, dP(x) = % .6f\n", c(x), differential(p.P)(x));
    return 0;
}
