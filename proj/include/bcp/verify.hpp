#pragma once

// One check per identity of the construction. Each returns a CheckReport; `plant` adds a
// known violation of size `planted` so that a passing check is never vacuous.

#include <bcp/arrangement.hpp>
#include <bcp/characteristics.hpp>
#include <bcp/cochain.hpp>
#include <bcp/kernels.hpp>
#include <bcp/parallel.hpp>
#include <bcp/pipeline.hpp>
#include <bcp/rng.hpp>
#include <bcp/tolerance.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bcp {

struct CheckReport {
    std::string check_id;
    double max_residual = 0;
    double tolerance = 0;
    std::size_t sample_count = 0;
    bool passed = false;
    std::uint64_t seed = 0;
    double runtime_ms = 0;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
    void add(std::string key, double value)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        add(std::move(key), std::string(buf));
    }
    /// NaN residuals fail.
    void settle() { passed = max_residual <= tolerance; }
};

struct CheckOptions {
    std::uint64_t seed = 42;
    std::size_t samples = 100;
    double h = 1e-4;
    bool richardson = true;
    /// diagonal margin for random tuples
    double eps = 1e-3;
    bool plant = false;
    double planted = 0.1;
    std::map<std::string, double> tolerance_overrides;
};

inline Family family_of(const Cochain& c)
{
    if (c.name == "zero") return Family::zero;
    return c.order_type ? Family::piecewise : Family::smooth;
}

namespace detail {

class Timer {
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
public:
    double ms() const { return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count(); }
};

// NaN sticks
inline void fold_max(double& acc, double v)
{
    if (std::isnan(v) || v > acc) acc = v;
}

inline double max_of(const std::vector<double>& v)
{
    double m = 0;
    for (double x : v) fold_max(m, x);
    return m;
}

inline double planted2(double a, double b) { return std::sin(a + 2 * b); }
inline double planted3(double a, double b, double c) { return std::sin(a + 2 * b - c); }

template <std::size_t K, class G>
std::array<double, K> flow_derivative(Field field, const Pt* p, int n, double h, bool richardson, G&& g)
{
    auto central = [&](double step) {
        std::array<Pt, max_arity> fp, bp;
        for (int i = 0; i < n; ++i) {
            fp[i] = Pt(flow(field, step, p[i].th));
            bp[i] = Pt(flow(field, -step, p[i].th));
        }
        std::array<double, K> a = g(fp.data()), b = g(bp.data()), d;
        for (std::size_t k = 0; k < K; ++k) d[k] = (a[k] - b[k]) / (2 * step);
        return d;
    };
    auto d1 = central(h);
    if (!richardson) return d1;
    auto d2 = central(0.5 * h);
    for (std::size_t k = 0; k < K; ++k) d1[k] = (4 * d2[k] - d1[k]) / 3;
    return d1;
}

inline std::array<Pt, max_arity> to_pts(const Tuple& x)
{
    std::array<Pt, max_arity> p;
    for (std::size_t i = 0; i < x.size(); ++i) p[i] = Pt(x[i]);
    return p;
}

}

inline double resolve_tolerance(const CheckOptions& o, const std::string& id, double model_value)
{
    auto it = o.tolerance_overrides.find(id);
    return it == o.tolerance_overrides.end() ? model_value : it->second;
}

/// Kernels of c with the quadrature rule frozen at the base point for finite differences,
/// so that a change of the graded node allocation between stencil points cannot pose as a
/// derivative. Exact (order-type) kernels need no freezing.
struct KernelProbe {
    Cochain c;
    int n_sharp = 64;
    int n_check = 64;
    int n_integral = 128;
    KernelMethod method = KernelMethod::automatic;

    bool exact() const { return use_exact(c, method); }

    NodeSet nodes(std::span<const double> fixed, int n) const
    {
        return method == KernelMethod::midpoint ? midpoint_nodes(QuadratureGrid(n)) : graded_nodes(fixed, n);
    }

    SharpFlat sharp_flat_at(const Pt* three) const { return sharp_flat(c, QuadratureGrid(n_sharp), three, method); }

    std::array<double, 2> sharp_flat_lie(Field f, const Pt* three, double h, bool rich) const
    {
        if (exact())
            return detail::flow_derivative<2>(f, three, 3, h, rich, [&](const Pt* q) {
                auto v = sharp_flat_at(q);
                return std::array<double, 2>{v.sharp, v.flat};
            });
        double fx[3] = {three[0].th, three[1].th, three[2].th};
        const NodeSet ns = nodes(fx, n_sharp);
        return detail::flow_derivative<2>(f, three, 3, h, rich, [&](const Pt* q) {
            auto v = sharp_flat_on(c, ns, q);
            return std::array<double, 2>{v.sharp, v.flat};
        });
    }

    double check_at(const Pt* two) const { return check_value(c, QuadratureGrid(n_check), two, method); }

    double integral_on(const NodeSet& ns, const Pt* four) const
    {
        std::array<Pt, max_arity> buf;
        std::copy(four, four + 4, buf.begin() + 1);
        double acc = 0;
        for (std::size_t j = 0; j < ns.size(); ++j) {
            buf[0] = ns.x[j];
            acc += ns.w[j] * c.fn(buf.data());
        }
        return acc;
    }

    double integral_exact(const Pt* four) const
    {
        double fx[4] = {four[0].th, four[1].th, four[2].th, four[3].th};
        static const WeightTerm one{};
        return arrangement_average(c, 1, fx, std::span(&one, 1));
    }

    /// L_field I(c) at a 4-tuple
    double integral_lie(Field f, const Pt* four, double h, bool rich) const
    {
        if (exact())
            return detail::flow_derivative<1>(f, four, 4, h, rich, [&](const Pt* q) {
                return std::array<double, 1>{integral_exact(q)};
            })[0];
        double fx[4] = {four[0].th, four[1].th, four[2].th, four[3].th};
        const NodeSet ns = nodes(fx, n_integral);
        return detail::flow_derivative<1>(f, four, 4, h, rich, [&](const Pt* q) {
            return std::array<double, 1>{integral_on(ns, q)};
        })[0];
    }
};

inline KernelProbe probe_for(const Pipeline& p)
{
    // one free variable makes I(c) cheap; near-coincident tuples need the extra nodes
    return {p.c, p.options.kernel.n_sharp, p.options.kernel.n_check, 4 * p.options.kernel.n_sharp, p.options.kernel.method};
}

/// Tolerance for a fitted check of this pipeline; the model goes into the report metadata.
inline double pipeline_tolerance(const Pipeline& p, const CheckOptions& o, CheckReport& rep)
{
    const Family fam = family_of(p.c);
    const auto model = fitted_tolerance(rep.check_id, fam);
    rep.add("tol_family", family_name(fam));
    rep.add("tol_floor", model.floor);
    rep.add("tol_a", model.a);
    rep.add("tol_b", model.b);
    rep.add("tol_c", model.c);
    rep.add("tol_safety", model.safety);
    rep.add("n_kernel", static_cast<double>(p.options.kernel.n_sharp));
    rep.add("M_kernel", static_cast<double>(p.options.kernel.m));
    return resolve_tolerance(o, rep.check_id, model(p.options.kernel.n_sharp, o.h, p.options.kernel.m));
}

// ---------------------------------------------------------------------------------------------
// Relations between the fundamental vector fields

struct BracketRelation {
    Field x, y;
    // y_minus_k: the second field is L_N - L_K
    bool y_minus_k;
    // coefficient of the right-hand side field
    double (*lambda)(double);
    const char* name;
};

inline const std::array<BracketRelation, 3>& bracket_relations()
{
    static const std::array<BracketRelation, 3> rel{{
        {Field::K, Field::A, false, [](double t) { return std::cos(t); }, "[K,A]=K-N"},
        {Field::K, Field::N, true, [](double t) { return std::sin(t); }, "[K,N-K]=A"},
        {Field::A, Field::N, true, [](double) { return 1.0; }, "[A,N-K]=K"},
    }};
    return rel;
}

namespace detail {

// q = sin(t0) cos(t2) and its gradient
inline double bracket_probe(const Pt* p) { return std::sin(p[0].th) * std::cos(p[2].th); }

inline double bracket_residual(const BracketRelation& r, const Pt* p, double h, bool rich, double plant)
{
    auto lie = [&](Field f, auto&& g, const Pt* q) {
        return flow_derivative<1>(f, q, 3, h, rich, [&](const Pt* s) { return std::array<double, 1>{g(s)}; })[0];
    };
    auto y_of = [&](auto&& g) {
        return [&, g](const Pt* s) {
            double v = lie(r.y, g, s);
            return r.y_minus_k ? v - lie(Field::K, g, s) : v;
        };
    };
    auto x_of = [&](auto&& g) { return [&, g](const Pt* s) { return lie(r.x, g, s); }; };
    auto probe = [](const Pt* s) { return bracket_probe(s); };
    const double xy = lie(r.x, y_of(probe), p);
    // Y(X q) with Y possibly N - K
    double yx = lie(r.y, x_of(probe), p);
    if (r.y_minus_k) yx -= lie(Field::K, x_of(probe), p);
    const double t0 = p[0].th, t2 = p[2].th;
    const double rhs = r.lambda(t0) * std::cos(t0) * std::cos(t2) - r.lambda(t2) * std::sin(t0) * std::sin(t2);
    return std::fabs(xy - yx - rhs - plant);
}

}

/// Commutators of the K, A, N fields on a smooth probe against the symbolic right-hand side,
/// plus an O(h^2) order check of the plain central differences.
inline CheckReport check_brackets(const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "brackets";
    rep.seed = o.seed;
    const CounterRng rng(o.seed, rep.check_id);
    const auto xs = random_tuples(rng, o.samples, 3, o.eps);
    const double plant = o.plant ? o.planted : 0.0;
    auto res = parallel_map(xs.size(), [&](std::size_t i) {
        auto p = detail::to_pts(xs[i]);
        double m = 0;
        for (const auto& r : bracket_relations()) detail::fold_max(m, detail::bracket_residual(r, p.data(), o.h, o.richardson, plant));
        return m;
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = xs.size();
    rep.tolerance = resolve_tolerance(o, rep.check_id, 1e-5);

    // order: plain differences at h0, h0/2, h0/4 on a subset
    const double h0 = 2e-2;
    const std::size_t sub = std::min<std::size_t>(xs.size(), 20);
    std::array<double, 3> e{};
    for (int k = 0; k < 3; ++k) {
        auto r = parallel_map(sub, [&](std::size_t i) {
            auto p = detail::to_pts(xs[i]);
            double m = 0;
            for (const auto& rel : bracket_relations()) detail::fold_max(m, detail::bracket_residual(rel, p.data(), h0 / (1 << k), false, 0.0));
            return m;
        });
        e[k] = detail::max_of(r);
    }
    const double q1 = e[0] / e[1], q2 = e[1] / e[2];
    const bool order_ok = q1 >= 4 / 1.5 && q1 <= 4 * 1.5 && q2 >= 4 / 1.5 && q2 <= 4 * 1.5;
    rep.add("h", o.h);
    rep.add("richardson", o.richardson ? "true" : "false");
    rep.add("order_ratio_1", q1);
    rep.add("order_ratio_2", q2);
    rep.add("order_ok", order_ok ? "true" : "false");
    rep.settle();
    rep.passed = rep.passed && order_ok;
    rep.runtime_ms = tm.ms();
    return rep;
}

/// max |c(x) - c(-x)|; only meaningful for alternating invariant cocycles.
inline CheckReport check_conjugation_symmetry(const Cochain& c, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "conjugation_symmetry";
    rep.seed = o.seed;
    const CounterRng rng(o.seed, rep.check_id);
    const auto xs = random_tuples(rng, o.samples, c.arity, o.eps);
    const double plant = o.plant ? o.planted : 0.0;
    auto value = [&](const Tuple& x) { return c(x) + plant * std::sin(x[0] + 2 * x[1]); };
    auto res = parallel_map(xs.size(), [&](std::size_t i) {
        Tuple y = xs[i];
        for (auto& t : y) t = wrap(-t);
        return std::fabs(value(xs[i]) - value(y));
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = xs.size();
    rep.tolerance = resolve_tolerance(o, rep.check_id, 1e-12);
    rep.add("cocycle", c.name);
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// L_K c# + cb and L_K cb - c# at random triples.
inline CheckReport check_kernel_rotation(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "kernel_rotation";
    rep.seed = o.seed;
    const KernelProbe kp = probe_for(p);
    const CounterRng rng(o.seed, rep.check_id);
    const auto xs = random_tuples(rng, o.samples, 3, o.eps);
    const double plant = o.plant ? o.planted : 0.0;
    auto res = parallel_map(xs.size(), [&](std::size_t i) {
        auto q = detail::to_pts(xs[i]);
        auto lk = kp.sharp_flat_lie(Field::K, q.data(), o.h, o.richardson);
        auto v = kp.sharp_flat_at(q.data());
        const double flat = v.flat + plant * detail::planted3(xs[i][0], xs[i][1], xs[i][2]);
        return std::max(std::fabs(lk[0] + flat), std::fabs(lk[1] - v.sharp));
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = xs.size();
    rep.tolerance = pipeline_tolerance(p, o, rep);
    rep.add("h", o.h);
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// L_A I(c) + d c# and L_N I(c) + d cb at random 4-tuples.
inline CheckReport check_I_flow(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "I_flow";
    rep.seed = o.seed;
    const KernelProbe kp = probe_for(p);
    const CounterRng rng(o.seed, rep.check_id);
    const auto xs = random_tuples(rng, o.samples, 4, o.eps);
    const double plant = o.plant ? o.planted : 0.0;
    auto res = parallel_map(xs.size(), [&](std::size_t i) {
        auto q = detail::to_pts(xs[i]);
        double ds = 0, df = 0;
        for (int j = 0; j < 4; ++j) {
            Pt three[3];
            for (int a = 0, k = 0; a < 4; ++a)
                if (a != j) three[k++] = q[a];
            auto v = kp.sharp_flat_at(three);
            const double sgn = j % 2 ? -1.0 : 1.0;
            ds += sgn * (v.sharp + plant * detail::planted3(three[0].th, three[1].th, three[2].th));
            df += sgn * v.flat;
        }
        const double la = kp.integral_lie(Field::A, q.data(), o.h, o.richardson);
        const double ln = kp.integral_lie(Field::N, q.data(), o.h, o.richardson);
        return std::max(std::fabs(la + ds), std::fabs(ln + df));
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = xs.size();
    rep.tolerance = pipeline_tolerance(p, o, rep);
    rep.add("h", o.h);
    rep.add("n_integral", static_cast<double>(kp.n_integral));
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// L_K c# - L_N c# + L_A cb + d c-check at random triples, c-check by direct quadrature.
inline CheckReport check_dcheck_identity(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "dcheck_identity";
    rep.seed = o.seed;
    const KernelProbe kp = probe_for(p);
    const CounterRng rng(o.seed, rep.check_id);
    const auto xs = random_tuples(rng, o.samples, 3, o.eps);
    const double plant = o.plant ? o.planted : 0.0;
    auto res = parallel_map(xs.size(), [&](std::size_t i) {
        auto q = detail::to_pts(xs[i]);
        auto lk = kp.sharp_flat_lie(Field::K, q.data(), o.h, o.richardson);
        auto ln = kp.sharp_flat_lie(Field::N, q.data(), o.h, o.richardson);
        auto la = kp.sharp_flat_lie(Field::A, q.data(), o.h, o.richardson);
        auto chk = [&](int a, int b) {
            Pt two[2] = {q[a], q[b]};
            return kp.check_at(two) + plant * detail::planted2(q[a].th, q[b].th);
        };
        const double dchk = chk(1, 2) - chk(0, 2) + chk(0, 1);
        return std::fabs(lk[0] - ln[0] + la[1] + dchk);
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = xs.size();
    rep.tolerance = pipeline_tolerance(p, o, rep);
    rep.add("h", o.h);
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// d(L_K v# + vb), d(L_K vb - v#), d(L_K v# - L_N v# + L_A vb - c-check) with v and c-check
/// from the kernel table.
inline CheckReport check_frobenius(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "frobenius";
    rep.seed = o.seed;
    const ComplexCochain2 v = build_v(p.table);
    const auto& table = *p.table;
    const CounterRng rng(o.seed, rep.check_id);
    const auto xs = random_tuples(rng, o.samples, 3, o.eps);
    const double plant = o.plant ? o.planted : 0.0;
    auto vparts = [&](const Pt* s) {
        cplx z = v(s[0].th, s[1].th);
        return std::array<double, 2>{z.real(), z.imag() + plant * detail::planted2(s[0].th, s[1].th)};
    };
    // the three 2-cochains of the system at a pair
    auto system = [&](const Pt* s) {
        auto lk = detail::flow_derivative<2>(Field::K, s, 2, o.h, o.richardson, vparts);
        auto ln = detail::flow_derivative<2>(Field::N, s, 2, o.h, o.richardson, vparts);
        auto la = detail::flow_derivative<2>(Field::A, s, 2, o.h, o.richardson, vparts);
        auto v0 = vparts(s);
        const double chk = table.check_at(wrap(s[1].th - s[0].th));
        return std::array<double, 3>{lk[0] + v0[1], lk[1] - v0[0], lk[0] - ln[0] + la[1] - chk};
    };
    std::vector<double> parts(3 * xs.size());
    auto res = parallel_map(xs.size(), [&](std::size_t i) {
        auto q = detail::to_pts(xs[i]);
        Pt s12[2] = {q[1], q[2]}, s02[2] = {q[0], q[2]}, s01[2] = {q[0], q[1]};
        auto a = system(s12), b = system(s02), c = system(s01);
        double m = 0;
        for (int k = 0; k < 3; ++k) {
            double d = std::fabs(a[k] - b[k] + c[k]);
            parts[3 * i + k] = d;
            detail::fold_max(m, d);
        }
        return m;
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = xs.size();
    rep.tolerance = pipeline_tolerance(p, o, rep);
    for (int k = 0; k < 3; ++k) {
        double m = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) detail::fold_max(m, parts[3 * i + k]);
        rep.add("relation_" + std::to_string(k + 1), m);
    }
    rep.add("h", o.h);
    rep.add("M", static_cast<double>(table.m));
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// (1 - e^{-i phi}) r' - i r + c-check(0, phi) on interior points.
inline CheckReport check_ode_residual(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "ode_residual";
    rep.seed = o.seed;
    const auto& t = *p.table;
    const std::size_t n = std::max<std::size_t>(o.samples, 2);
    auto res = parallel_map(n, [&](std::size_t i) {
        const double phi = 0.05 + (two_pi - 0.1) * (i + 0.5) / n;
        return std::abs(t.ode_residual(phi) + (o.plant ? o.planted : 0.0));
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = n;
    rep.tolerance = pipeline_tolerance(p, o, rep);
    rep.add("M", static_cast<double>(t.m));
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// sup |r| over the uniform 1000-point grid against the sup norm of c.
inline CheckReport check_r_bound(const Pipeline& p, const CheckOptions& o, std::size_t points = 1000)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "r_bound";
    rep.seed = o.seed;
    double sup = 0;
    for (std::size_t i = 0; i < points; ++i) sup = std::max(sup, std::abs(p.table->r(two_pi * (i + 0.5) / points)));
    const double bound = p.c.sup_bound.value_or(INFINITY);
    // planted: r shifted by a constant of size |c| + planted
    if (o.plant) sup += p.c.sup_bound.value_or(0.0) + o.planted;
    rep.max_residual = sup;
    rep.tolerance = resolve_tolerance(o, rep.check_id, bound + 1e-6);
    rep.sample_count = points;
    rep.add("sup_c", bound);
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

// ---------------------------------------------------------------------------------------------
// f0 and the primitive

/// L_A f - (c# + dv#), L_N f - (cb + dvb), L_K f at random triples.
inline CheckReport check_pde(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "pde_residual";
    rep.seed = o.seed;
    const KernelProbe kp = probe_for(p);
    const ComplexCochain2 v = build_v(p.table);
    const CounterRng rng(o.seed, rep.check_id);
    // away from the fat diagonal: f0 is only bounded, not uniformly smooth, near it
    const auto xs = random_tuples(rng, o.samples, 3, std::max(o.eps, 0.05));
    const double plant = o.plant ? o.planted : 0.0;
    auto fval = [&](const Pt* s) { return std::array<double, 1>{p.f.eval(s)}; };
    auto res = parallel_map(xs.size(), [&](std::size_t i) {
        auto q = detail::to_pts(xs[i]);
        const double la = detail::flow_derivative<1>(Field::A, q.data(), 3, o.h, o.richardson, fval)[0];
        const double ln = detail::flow_derivative<1>(Field::N, q.data(), 3, o.h, o.richardson, fval)[0];
        const double lk = detail::flow_derivative<1>(Field::K, q.data(), 3, o.h, o.richardson, fval)[0];
        auto k = kp.sharp_flat_at(q.data());
        cplx dv = v(q[1].th, q[2].th) - v(q[0].th, q[2].th) + v(q[0].th, q[1].th);
        return std::max({std::fabs(la - k.sharp - dv.real() + plant), std::fabs(ln - k.flat - dv.imag()), std::fabs(lk)});
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = xs.size();
    rep.tolerance = pipeline_tolerance(p, o, rep);
    rep.add("h", o.h);
    rep.add("margin", std::max(o.eps, 0.05));
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// F# on the antidiagonal.
inline CheckReport check_fsharp_antidiagonal(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "fsharp_antidiagonal";
    rep.seed = o.seed;
    const std::size_t n = std::max<std::size_t>(o.samples, 2);
    const double plant = o.plant ? o.planted : 0.0;
    auto res = parallel_map(n, [&](std::size_t i) {
        // skip phi = pi, which lies on the diagonal
        double phi = 0.02 + (pi - 0.04) * (i + 0.5) / n;
        if (i % 2) phi = two_pi - phi;
        return std::fabs(p.inhom->f_sharp(phi, two_pi - phi) + plant);
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = n;
    rep.tolerance = pipeline_tolerance(p, o, rep);
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// Fb symmetric and F# antisymmetric under (phi1, phi2) -> (-phi2, -phi1).
inline CheckReport check_inhomogeneity_reflection(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "inhomogeneity_reflection";
    rep.seed = o.seed;
    const CounterRng rng(o.seed, rep.check_id);
    const auto xs = random_tuples(rng, o.samples, 3, o.eps);
    const double plant = o.plant ? o.planted : 0.0;
    auto res = parallel_map(xs.size(), [&](std::size_t i) {
        const double p1 = wrap(xs[i][1] - xs[i][0]), p2 = wrap(xs[i][2] - xs[i][0]);
        auto a = p.inhom->eval(p1, p2);
        auto b = p.inhom->eval(wrap(-p2), wrap(-p1));
        return std::max(std::fabs(a.flat + plant - b.flat), std::fabs(a.sharp + b.sharp));
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = xs.size();
    rep.tolerance = pipeline_tolerance(p, o, rep);
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// f0(s.p) = sgn(s) f0(p) for the two generators of S3, for the alternating init.
inline CheckReport check_f0_alternation(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "f0_alternation";
    rep.seed = o.seed;
    const CounterRng rng(o.seed, rep.check_id);
    const auto xs = random_tuples(rng, o.samples, 3, std::max(o.eps, 0.02));
    const double plant = o.plant ? o.planted : 0.0;
    auto res = parallel_map(xs.size(), [&](std::size_t i) {
        const OmegaPoint q(wrap(xs[i][1] - xs[i][0]), wrap(xs[i][2] - xs[i][0]));
        const OmegaPoint a = s3_s1(q), b = s3_s2(q);
        const double v = p.f0(q.phi1, q.phi2) + plant;
        return std::max(std::fabs(p.f0(a.phi1, a.phi2) + v), std::fabs(p.f0(b.phi1, b.phi2) + v));
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = xs.size();
    rep.tolerance = pipeline_tolerance(p, o, rep);
    rep.add("init", "(" + std::to_string(p.options.solver.init.first) + "," + std::to_string(p.options.solver.init.second) + ")");
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// Closed-form f0 against integration of the characteristic ODEs at interior points.
inline CheckReport check_oracle(const Pipeline& p, const CheckOptions& o, double margin = 0.05)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "oracle_equivalence";
    rep.seed = o.seed;
    const CounterRng rng(o.seed, rep.check_id);
    std::vector<OmegaPoint> pts;
    for (std::uint64_t i = 0; pts.size() < o.samples; ++i) {
        const double a = rng.uniform(i, 0, 0, two_pi), b = rng.uniform(i, 1, 0, two_pi);
        if (std::min({a, two_pi - a, b, two_pi - b, std::fabs(a - b)}) < margin) continue;
        pts.emplace_back(a, b);
    }
    const auto init = p.options.solver.init;
    auto res = parallel_map(pts.size(), [&](std::size_t i) {
        const double closed = p.solver->eval(pts[i]).value;
        const double brute = f0_eval_bruteforce(pts[i], *p.inhom, init).value;
        return std::fabs(closed - brute + (o.plant ? o.planted : 0.0));
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = pts.size();
    rep.tolerance = resolve_tolerance(o, rep.check_id, 1e-6);
    rep.add("margin", margin);
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// max |d(P) - c| at random 5-tuples.
inline CheckReport check_primitive(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "primitive_residual";
    rep.seed = o.seed;
    const CounterRng rng(o.seed, rep.check_id);
    const auto xs = random_tuples(rng, o.samples, 5, o.eps);
    const Cochain dP = differential(p.P);
    const double plant = o.plant ? o.planted : 0.0;
    auto res = parallel_map(xs.size(), [&](std::size_t i) { return std::fabs(dP(xs[i]) - p.c(xs[i]) + plant); });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = xs.size();
    rep.tolerance = resolve_tolerance(o, rep.check_id, p.c.order_type ? 5e-2 : 1e-3);
    rep.add("N", static_cast<double>(p.options.n_integrate));
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// max |P(g.x) - P(x)| over seeded pairs, g = k_xi a_s n_t with |xi|, |s|, |t| <= 2.
inline CheckReport check_g_invariance(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "g_invariance";
    rep.seed = o.seed;
    const CounterRng rng(o.seed, rep.check_id);
    struct Pair { Tuple x, y; };
    std::vector<Pair> pairs;
    for (std::uint64_t i = 0; pairs.size() < o.samples; ++i) {
        Tuple x = random_tuple(rng, i, 4, o.eps);
        const GroupElement g = make_kan(rng.uniform(i, 100, -2, 2), rng.uniform(i, 101, -2, 2), rng.uniform(i, 102, -2, 2));
        Tuple y = act_tuple(g, x);
        if (!admissible(y, o.eps)) continue;
        pairs.push_back({std::move(x), std::move(y)});
    }
    const double plant = o.plant ? o.planted : 0.0;
    auto res = parallel_map(pairs.size(), [&](std::size_t i) {
        return std::fabs(p.P(pairs[i].y) + plant * std::sin(pairs[i].y[0]) - p.P(pairs[i].x) - plant * std::sin(pairs[i].x[0]));
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = pairs.size();
    // the midpoint error of I(c) is O(1/N) for a step integrand
    rep.tolerance = resolve_tolerance(o, rep.check_id, p.c.order_type ? 5e-2 : 1e-3);
    rep.add("N", static_cast<double>(p.options.n_integrate));
    if (p.c.order_type && family_of(p.c) != Family::zero) {
        // same pairs with I(c) exact, which isolates the error of f
        const Cochain Pe = primitive(integrate_first_exact(p.c), p.f);
        auto ex = parallel_map(pairs.size(), [&](std::size_t i) { return std::fabs(Pe(pairs[i].y) - Pe(pairs[i].x)); });
        rep.add("residual_exact_I", detail::max_of(ex));
    }
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

struct ScanResult {
    std::vector<double> delta;
    std::vector<double> sup;
    std::vector<std::size_t> count;
    bool growth = false;
    double last_change = 0;
};

/// Distance of refinement level k to the singular set.
inline double scan_delta(int k) { return 0.05 * std::pow(4.0, -k); }

/// Sample sets approaching the singular set {0, 2pi} x (0, 2pi) and the diagonal, nested by
/// level: level k keeps every pool point at distance >= scan_delta(k).
inline std::vector<std::pair<double, double>> scan_pool(int levels, int line_points = 24, int probe_points = 48)
{
    std::vector<std::pair<double, double>> pool;
    auto push = [&](double a, double b) {
        a = wrap(a); b = wrap(b);
        if (a == 0.0 || b == 0.0 || a == b) return;
        pool.emplace_back(a, b);
    };
    // probe segments xi -> (2pi/3, xi), (4pi/3, xi)
    for (double x0 : {2 * pi / 3, 4 * pi / 3}) {
        for (int j = 0; j < probe_points; ++j) push(x0, two_pi * (j + 0.5) / probe_points);
        for (int k = 0; k < levels; ++k) {
            const double d = scan_delta(k);
            for (double s : {d, two_pi - d, x0 - d, x0 + d}) push(x0, s);
        }
    }
    for (int k = 0; k < levels; ++k) {
        const double d = scan_delta(k);
        for (int j = 0; j < line_points; ++j) {
            const double t = d + (two_pi - 2 * d) * (j + 0.5) / line_points;
            push(d, t); push(two_pi - d, t); push(t, d); push(t, two_pi - d);
            push(t, t + d); push(t, t - d);
        }
    }
    return pool;
}

inline double scan_distance(double a, double b)
{
    return std::min({a, two_pi - a, b, two_pi - b, circ_dist(a, b)});
}

inline ScanResult scan_sups(const std::function<double(double, double)>& f0, int levels)
{
    ScanResult out;
    const auto pool = scan_pool(levels);
    auto vals = parallel_map(pool.size(), [&](std::size_t i) { return std::fabs(f0(pool[i].first, pool[i].second)); });
    for (int k = 0; k < levels; ++k) {
        const double d = scan_delta(k);
        double sup = 0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (scan_distance(pool[i].first, pool[i].second) >= d * (1 - 1e-12)) { detail::fold_max(sup, vals[i]); ++cnt; }
        out.delta.push_back(d);
        out.sup.push_back(sup);
        out.count.push_back(cnt);
    }
    const std::size_t L = out.sup.size();
    if (L >= 2) {
        const double a = out.sup[L - 2], b = out.sup[L - 1];
        out.last_change = a > 0 ? std::fabs(b - a) / a : (b > 0 ? INFINITY : 0.0);
    }
    if (L >= 3) out.growth = out.sup[L - 2] >= 2 * out.sup[L - 3] && out.sup[L - 1] >= 2 * out.sup[L - 2] && out.sup[L - 3] > 0;
    return out;
}

/// sup |f0| per refinement level; passes when the last two levels differ by < 10% and the
/// last three do not double level over level.
inline CheckReport boundedness_scan(const Pipeline& p, const CheckOptions& o, int levels = 4)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "boundedness_scan";
    rep.seed = o.seed;
    std::function<double(double, double)> f0 = [&](double a, double b) { return p.f0(a, b); };
    if (o.plant) f0 = [&](double a, double b) { return p.f0(a, b) + o.planted / scan_distance(a, b); };
    const ScanResult s = scan_sups(f0, levels);
    rep.max_residual = s.last_change;
    rep.tolerance = resolve_tolerance(o, rep.check_id, 0.1);
    for (std::size_t k = 0; k < s.sup.size(); ++k) {
        rep.add("delta_" + std::to_string(k), s.delta[k]);
        rep.add("sup_" + std::to_string(k), s.sup[k]);
        rep.sample_count = s.count[k];
    }
    rep.add("growth", s.growth ? "true" : "false");
    rep.settle();
    rep.passed = rep.passed && !s.growth;
    rep.runtime_ms = tm.ms();
    return rep;
}

/// f0 on the antidiagonal (zero for the alternating init).
inline CheckReport check_f0_antidiagonal(const Pipeline& p, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "f0_antidiagonal";
    rep.seed = o.seed;
    const std::size_t n = std::max<std::size_t>(o.samples, 2);
    auto res = parallel_map(n, [&](std::size_t i) {
        double phi = 0.05 + (pi - 0.1) * (i + 0.5) / n;
        if (i % 2) phi = two_pi - phi;
        return std::fabs(p.f0(phi, two_pi - phi) + (o.plant ? o.planted : 0.0));
    });
    rep.max_residual = detail::max_of(res);
    rep.sample_count = n;
    rep.tolerance = pipeline_tolerance(p, o, rep);
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// d c = 0 at random 6-tuples.
inline CheckReport check_cocycle(const Cochain& c, const CheckOptions& o)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "cocycle";
    rep.seed = o.seed;
    auto xs = random_tuples(CounterRng(o.seed, rep.check_id), o.samples, c.arity + 1, o.eps);
    Cochain cc = c;
    if (o.plant) cc = c + o.planted * Cochain(c.arity, [](const Pt* q) { return std::sin(q[0].th + 2 * q[1].th); });
    auto r = cocycle_residual(cc, xs, o.eps);
    rep.max_residual = r.max;
    rep.sample_count = r.used;
    rep.tolerance = resolve_tolerance(o, rep.check_id, 1e-10);
    rep.add("skipped", static_cast<double>(r.skipped));
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

/// Mean |I_N(c) - I(c)| at random 4-tuples for N = n0, 2 n0, 4 n0 against the exact average;
/// passes when the fitted log-log slope is >= 1 within two standard errors.
inline CheckReport check_quadrature_order(const Cochain& c, const CheckOptions& o, int n0 = 128, int levels = 3)
{
    detail::Timer tm;
    CheckReport rep;
    rep.check_id = "quadrature_order";
    rep.seed = o.seed;
    if (!c.order_type) throw invalid_argument("quadrature_order needs an order-type cochain");
    // a step integrand makes per-tuple midpoint errors erratic, so the order needs many tuples
    const std::size_t samples = std::max<std::size_t>(o.samples, 400);
    const auto xs = random_tuples(CounterRng(o.seed, rep.check_id), samples, 4, o.eps);
    const KernelProbe kp{c};
    auto exact = parallel_map(xs.size(), [&](std::size_t i) { return kp.integral_exact(detail::to_pts(xs[i]).data()); });
    std::vector<double> lx, ly, lv;
    for (int k = 0; k < levels; ++k) {
        const int n = n0 << k;
        const Cochain In = integrate_first(c, QuadratureGrid(n));
        auto err = parallel_map(xs.size(), [&](std::size_t i) { return std::fabs(In(xs[i]) - exact[i]); });
        double mean = 0, sq = 0;
        for (double e : err) { mean += e; sq += e * e; }
        const double m = static_cast<double>(err.size());
        mean /= m;
        const double var = std::max(0.0, sq / m - mean * mean) / (m - 1);
        if (o.plant) mean = o.planted;
        rep.add("mean_error_N" + std::to_string(n), mean);
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(std::max(mean, 1e-300)));
        // delta method: var(log mean) ~ var(mean) / mean^2
        lv.push_back(o.plant ? 0.0 : var / (mean * mean));
    }
    // least squares slope of log error against log N; its se treats levels as independent
    const double k = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
    mx /= k; my /= k;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) { sxx += (lx[i] - mx) * (lx[i] - mx); sxy += (lx[i] - mx) * (ly[i] - my); }
    const double slope = sxy / sxx;
    double vs = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) vs += (lx[i] - mx) * (lx[i] - mx) * lv[i];
    const double se = std::sqrt(vs) / sxx;
    const double order = -slope;
    rep.add("order", order);
    rep.add("order_se", se);
    // residual: shortfall of the order below 1, passes at <= 2 se
    rep.max_residual = std::max(0.0, 1.0 - order);
    rep.tolerance = resolve_tolerance(o, rep.check_id, 2 * se);
    rep.sample_count = xs.size();
    rep.settle();
    rep.runtime_ms = tm.ms();
    return rep;
}

}
