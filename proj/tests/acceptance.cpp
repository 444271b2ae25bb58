// One PASS/FAIL line per acceptance criterion; exit status 1 if any line fails.

#include <bcp/bcp.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

using namespace bcp;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Line {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const Line& l)
{
    std::printf("C%-2d %s  %s\n", id, l.pass ? "PASS" : "FAIL", l.detail.c_str());
    std::fflush(stdout);
    if (!l.pass) ++failures;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

CheckReport run(const char* id, const Pipeline& p, bool plant = false, std::size_t samples = 0)
{
    CheckOptions base;
    base.plant = plant;
    return run_check(id, p, plan_options(base, check_plan(id), 0, samples));
}

Cochain spec_cocycle(CocycleKind k, const std::string& path = {})
{
    CocycleSpec s;
    s.kind = k;
    s.path = path;
    return build_cocycle(s);
}

Pipeline make(const Cochain& c, int kernel_nodes = 64, int m = 512)
{
    PipelineOptions o = default_pipeline_options(c);
    o.kernel.n_sharp = o.kernel.n_check = kernel_nodes;
    o.kernel.m = m;
    return build_pipeline(c, o);
}

}

int main()
{
    const auto t_all = std::chrono::steady_clock::now();

    // C10 first, so that its timing is not helped by warm caches
    {
        const auto t0 = std::chrono::steady_clock::now();
        Pipeline z = make(spec_cocycle(CocycleKind::zero));
        double worst = 0;
        std::string worst_id;
        bool all_pass = true;
        for (const auto& r : run_suite(z, SuiteOptions{})) {
            all_pass = all_pass && r.passed;
            // the bracket relations do not involve c
            if (r.check_id == "brackets" || r.check_id == "boundedness_scan") continue;
            if (!(r.max_residual <= worst)) { worst = r.max_residual; worst_id = r.check_id; }
        }
        const double sec = seconds_since(t0);
        report(10, {all_pass && worst <= 1e-12 && sec < 5,
                    fmt("zero cocycle: max residual %.3g (%s), %.2f s", worst, worst_id.c_str(), sec)});
    }

    const Cochain smooth_c = spec_cocycle(CocycleKind::coboundary_crossratio);
    const Cochain cup_c = spec_cocycle(CocycleKind::cup_orientation);

    const auto t_smooth = std::chrono::steady_clock::now();
    const Pipeline smooth = make(smooth_c);
    const double smooth_build = seconds_since(t_smooth);
    const Pipeline cup = make(cup_c);

    {
        const auto t0 = std::chrono::steady_clock::now();
        CheckReport r = run("primitive_residual", smooth, false, 200);
        const double sec = smooth_build + seconds_since(t0);
        report(1, {r.max_residual <= 1e-3 && r.sample_count == 200 && sec <= 600,
                   fmt("smooth N=%d: max |dP - c| %.3g over %zu tuples, %.1f s", smooth.options.n_integrate,
                       r.max_residual, r.sample_count, sec)});
    }

    {
        CheckReport r = run("primitive_residual", cup);
        CheckReport q = run("quadrature_order", cup);
        std::string order, se;
        for (const auto& [k, v] : q.metadata) {
            if (k == "order") order = v;
            if (k == "order_se") se = v;
        }
        report(2, {r.max_residual <= 5e-2 && q.passed,
                   fmt("cup N=%d: max |dP - c| %.3g; order %s (se %s) over N=128,256,512", cup.options.n_integrate,
                       r.max_residual, order.c_str(), se.c_str())});
    }

    {
        CheckReport r = run_check("g_invariance", smooth, plan_options(CheckOptions{}, check_plan("g_invariance")), 512);
        report(3, {r.max_residual <= 1e-3 && r.sample_count == 50,
                   fmt("smooth, I grid N=512: max |P(gx) - P(x)| %.3g over %zu pairs", r.max_residual, r.sample_count)});
    }

    const Pipeline mollified = make(spec_cocycle(CocycleKind::mollified_cup), 24, 128);
    {
        auto dir = std::filesystem::temp_directory_path() / "bcp_acceptance";
        std::filesystem::create_directories(dir);
        const auto path = (dir / "external.txt").string();
        {
            std::ofstream out(path);
            save_tabulated(out, smooth_c, 8);
        }
        const Pipeline external = make(spec_cocycle(CocycleKind::external, path), 24, 128);
        bool ok = true;
        std::string d;
        for (const Pipeline* p : {&cup, &smooth, &mollified, &external}) {
            CheckReport r = run("r_bound", *p);
            ok = ok && r.passed && r.sample_count == 1000;
            d += fmt("%s %.4g/%.4g; ", p->c.name.c_str(), r.max_residual, p->c.sup_bound.value_or(NAN));
        }
        Pipeline z = make(spec_cocycle(CocycleKind::zero));
        CheckReport r = run("r_bound", z);
        ok = ok && r.passed;
        d += fmt("zero %.3g", r.max_residual);
        report(4, {ok, "sup|r| / sup|c|: " + d});
    }

    {
        CheckReport r = run("brackets", smooth);
        std::string q1, q2;
        for (const auto& [k, v] : r.metadata) {
            if (k == "order_ratio_1") q1 = v;
            if (k == "order_ratio_2") q2 = v;
        }
        report(5, {r.passed && r.max_residual <= 1e-5,
                   fmt("h=1e-3 Richardson: %.3g; plain-FD error ratios %s, %s", r.max_residual, q1.c_str(), q2.c_str())});
    }

    {
        bool ok = true;
        std::string d;
        for (const Pipeline* p : {&smooth, &cup})
            for (const char* id : {"frobenius", "kernel_rotation", "I_flow", "dcheck_identity"}) {
                CheckReport r = run(id, *p);
                CheckReport planted = run(id, *p, true);
                ok = ok && r.passed && !planted.passed;
                d += fmt("%s/%s %.2g<=%.2g%s; ", p->c.name.c_str(), id, r.max_residual, r.tolerance,
                         planted.passed ? " PLANT PASSED" : "");
            }
        report(6, {ok, d});
    }

    {
        bool ok = true;
        double conj = 0;
        std::string d;
        const Pipeline z = make(spec_cocycle(CocycleKind::zero));
        for (const Pipeline* p : {&z, &cup, &smooth, &mollified}) {
            for (const char* id : {"fsharp_antidiagonal", "inhomogeneity_reflection", "f0_alternation", "conjugation_symmetry"}) {
                // f0 of the mollified cup costs seconds per point; its F-level symmetries are checked instead
                if (p == &mollified && std::string(id) == "f0_alternation") continue;
                CheckReport r = run(id, *p);
                ok = ok && r.passed;
                if (!r.passed) d += fmt("%s/%s failed %.3g > %.3g; ", p->c.name.c_str(), id, r.max_residual, r.tolerance);
                if (std::string(id) == "conjugation_symmetry") conj = std::max(conj, r.max_residual);
            }
        }
        ok = ok && conj <= 1e-12;
        report(7, {ok, fmt("F# antidiagonal, reflection, f0 alternation on zero, cup, smooth (F-level only on mollified); conjugation %.3g; ", conj) + d});
    }

    {
        bool ok = true;
        std::string d;
        for (const Pipeline* p : {&cup, &smooth}) {
            CheckReport r = run("oracle_equivalence", *p);
            ok = ok && r.passed && r.max_residual <= 1e-6 && r.sample_count == 50;
            d += fmt("%s %.3g; ", p->c.name.c_str(), r.max_residual);
        }
        report(8, {ok, "closed form vs ODE shooting at 50 points: " + d});
    }

    {
        CheckReport s = run("boundedness_scan", cup);
        CheckReport a = run("f0_antidiagonal", cup);
        std::string sups;
        for (const auto& [k, v] : s.metadata)
            if (k.rfind("sup_", 0) == 0) sups += v.substr(0, 6) + " ";
        report(9, {s.passed && s.max_residual < 0.1 && a.passed,
                   fmt("cup sups %slast change %.1f%%; f0 on antidiagonal %.3g", sups.c_str(), 100 * s.max_residual,
                       a.max_residual)});
    }

    std::printf("acceptance: %d failing, %.1f s\n", failures, seconds_since(t_all));
    return failures ? 1 : 0;
}
