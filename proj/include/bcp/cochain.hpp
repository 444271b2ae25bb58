#pragma once

#include <bcp/angle.hpp>
#include <bcp/errors.hpp>
#include <bcp/moebius.hpp>
#include <bcp/rng.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bcp {

inline constexpr int max_arity = 8;

/// Real function on n-tuples of circle points, evaluated on Pt so that chord-based
/// cochains skip the trigonometry.
struct Cochain {
    using Fn = std::function<double(const Pt*)>;

    int arity = 0;
    Fn fn;
    std::optional<double> sup_bound;
    /// Value depends only on the cyclic order pattern of the arguments (ties included).
    bool order_type = false;
    std::string name;

    Cochain() = default;
    Cochain(int n, Fn f, std::optional<double> bound = std::nullopt, std::string nm = {})
        : arity(n), fn(std::move(f)), sup_bound(bound), name(std::move(nm))
    {
        if (n < 1 || n > max_arity) throw invalid_argument("cochain arity out of range");
    }

    double eval(const Pt* p) const { return fn(p); }

    double operator()(std::span<const double> th) const
    {
        if (static_cast<int>(th.size()) != arity) throw invalid_argument("cochain: wrong number of arguments");
        std::array<Pt, max_arity> p;
        for (int i = 0; i < arity; ++i) p[i] = Pt(th[i]);
        return fn(p.data());
    }

    double operator()(std::initializer_list<double> th) const
    { return (*this)(std::span<const double>(th.begin(), th.size())); }
};

inline Cochain constant_cochain(int n, double value)
{
    Cochain c(n, [value](const Pt*) { return value; }, std::fabs(value), "constant");
    c.order_type = true;
    return c;
}

/// Midpoint rule on the uniform periodic grid; realizes the normalized measure.
struct QuadratureGrid {
    int n = 0;
    std::vector<Pt> nodes;
    std::vector<double> weights;

    QuadratureGrid() = default;
    explicit QuadratureGrid(int count) : n(count)
    {
        if (count < 1) throw invalid_argument("quadrature grid needs at least one node");
        nodes.reserve(count);
        for (int j = 0; j < count; ++j) nodes.emplace_back(two_pi * (j + 0.5) / count);
        weights.assign(count, 1.0 / count);
    }

    double node(int j) const { return nodes[j].th; }
};

inline Cochain differential(const Cochain& q)
{
    const int n = q.arity;
    if (n + 1 > max_arity) throw invalid_argument("differential: arity too large");
    std::optional<double> bound;
    if (q.sup_bound) bound = (n + 1) * *q.sup_bound;
    Cochain d(n + 1, [q, n](const Pt* p) {
        std::array<Pt, max_arity> buf;
        double acc = 0;
        for (int j = 0; j <= n; ++j) {
            for (int i = 0, k = 0; i <= n; ++i)
                if (i != j) buf[k++] = p[i];
            double v = q.fn(buf.data());
            acc += (j % 2 == 0) ? v : -v;
        }
        return acc;
    }, bound, "d(" + q.name + ")");
    d.order_type = q.order_type;
    return d;
}

/// I(c)(x_1..x_n) = sum_j w_j c(node_j, x_1..x_n)
inline Cochain integrate_first(const Cochain& c, const QuadratureGrid& grid)
{
    const int n = c.arity - 1;
    if (n < 1) throw invalid_argument("integrate_first: arity must be at least 2");
    Cochain out(n, [c, grid, n](const Pt* p) {
        std::array<Pt, max_arity> buf;
        std::copy(p, p + n, buf.begin() + 1);
        double acc = 0;
        for (int j = 0; j < grid.n; ++j) {
            buf[0] = grid.nodes[j];
            acc += grid.weights[j] * c.fn(buf.data());
        }
        return acc;
    }, c.sup_bound, "I(" + c.name + ")");
    return out;
}

namespace detail {

struct PermTable {
    std::vector<std::array<int, max_arity>> perms;
    std::vector<int> signs;
};

inline int perm_sign(const int* p, int n)
{
    int s = 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

inline PermTable make_perm_table(int n)
{
    PermTable t;
    std::array<int, max_arity> p{};
    std::iota(p.begin(), p.begin() + n, 0);
    do {
        t.perms.push_back(p);
        t.signs.push_back(perm_sign(p.data(), n));
    } while (std::next_permutation(p.begin(), p.begin() + n));
    return t;
}

}

/// (1/n!) sum_sigma sgn(sigma) q(x_sigma(0), ..)
inline Cochain alternate(const Cochain& q)
{
    const int n = q.arity;
    if (n < 2) throw invalid_argument("alternate: arity must be at least 2");
    auto table = std::make_shared<detail::PermTable>(detail::make_perm_table(n));
    const double inv = 1.0 / static_cast<double>(table->perms.size());
    Cochain out(n, [q, table, n, inv](const Pt* p) {
        std::array<Pt, max_arity> buf;
        double acc = 0;
        for (std::size_t k = 0; k < table->perms.size(); ++k) {
            const auto& s = table->perms[k];
            for (int i = 0; i < n; ++i) buf[i] = p[s[i]];
            acc += table->signs[k] * q.fn(buf.data());
        }
        return acc * inv;
    }, q.sup_bound, "alt(" + q.name + ")");
    out.order_type = q.order_type;
    return out;
}

enum class Field { K, A, N };

inline const char* field_name(Field f) { return f == Field::K ? "K" : f == Field::A ? "A" : "N"; }

inline double flow(Field f, double u, double theta)
{
    switch (f) {
    case Field::K: return wrap(theta + u);
    case Field::A: return flow_a(u, theta);
    case Field::N: return flow_n(u, theta);
    }
    return theta;
}

/// Coefficient lambda of the fundamental vector field: 1, sin, 1 - cos.
inline double field_coefficient(Field f, double theta)
{
    switch (f) {
    case Field::K: return 1.0;
    case Field::A: return std::sin(theta);
    case Field::N: return 1.0 - std::cos(theta);
    }
    return 0.0;
}

/// Central difference of q along the diagonal flow. Non-smooth points give garbage.
inline Cochain lie_derivative(Field field, const Cochain& q, double h = 1e-4, bool richardson = false)
{
    if (!(h > 0)) throw invalid_argument("lie_derivative: step must be positive");
    const int n = q.arity;
    auto central = [q, n, field](const Pt* p, double step) {
        std::array<Pt, max_arity> fp, bp;
        for (int i = 0; i < n; ++i) {
            fp[i] = Pt(flow(field, step, p[i].th));
            bp[i] = Pt(flow(field, -step, p[i].th));
        }
        return (q.fn(fp.data()) - q.fn(bp.data())) / (2 * step);
    };
    Cochain out(n, [central, h, richardson](const Pt* p) {
        double d1 = central(p, h);
        if (!richardson) return d1;
        double d2 = central(p, 0.5 * h);
        return (4 * d2 - d1) / 3;
    }, std::nullopt, std::string("L_") + field_name(field) + "(" + q.name + ")");
    return out;
}

inline Cochain operator+(const Cochain& a, const Cochain& b)
{
    if (a.arity != b.arity) throw invalid_argument("cochain sum: arity mismatch");
    std::optional<double> bound;
    if (a.sup_bound && b.sup_bound) bound = *a.sup_bound + *b.sup_bound;
    return Cochain(a.arity, [a, b](const Pt* p) { return a.fn(p) + b.fn(p); }, bound, a.name + "+" + b.name);
}

inline Cochain operator*(double k, const Cochain& a)
{
    std::optional<double> bound;
    if (a.sup_bound) bound = std::fabs(k) * *a.sup_bound;
    Cochain out(a.arity, [k, a](const Pt* p) { return k * a.fn(p); }, bound, a.name);
    out.order_type = a.order_type;
    return out;
}

inline Cochain operator-(const Cochain& a, const Cochain& b) { return a + (-1.0) * b; }

using Tuple = std::vector<double>;

inline double min_gap(std::span<const double> x)
{
    double g = two_pi;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) g = std::min(g, circ_dist(x[i], x[j]));
    return g;
}

inline bool admissible(std::span<const double> x, double eps) { return min_gap(x) >= eps; }

/// Uniform n-tuple with pairwise gaps >= eps, by deterministic rejection.
inline Tuple random_tuple(const CounterRng& rng, std::uint64_t index, int n, double eps = 1e-3)
{
    Tuple x(n);
    for (std::uint64_t attempt = 0;; ++attempt) {
        for (int k = 0; k < n; ++k) x[k] = rng.uniform(index, attempt * 16 + k, 0.0, two_pi);
        if (admissible(x, eps)) return x;
        if (attempt > 10000) throw domain_error("random_tuple: cannot satisfy gap constraint");
    }
}

inline std::vector<Tuple> random_tuples(const CounterRng& rng, std::size_t count, int n, double eps = 1e-3)
{
    std::vector<Tuple> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_tuple(rng, i, n, eps));
    return out;
}

inline Tuple act_tuple(const GroupElement& g, std::span<const double> x)
{
    Tuple y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = g.act(x[i]);
    return y;
}

struct Residual {
    double max = 0;
    std::size_t used = 0;
    std::size_t skipped = 0;
};

inline Residual cocycle_residual(const Cochain& c, const std::vector<Tuple>& samples, double eps = 1e-3)
{
    Cochain dc = differential(c);
    Residual r;
    for (const auto& x : samples) {
        if (static_cast<int>(x.size()) != c.arity + 1) throw invalid_argument("cocycle_residual: tuple size");
        if (!admissible(x, eps)) { ++r.skipped; continue; }
        r.max = std::max(r.max, std::fabs(dc(x)));
        ++r.used;
    }
    return r;
}

inline Residual invariance_residual(const Cochain& q, const std::vector<GroupElement>& elements,
                                    const std::vector<Tuple>& samples, double eps = 1e-3)
{
    Residual r;
    for (const auto& g : elements) {
        for (const auto& x : samples) {
            Tuple y = act_tuple(g, x);
            if (!admissible(x, eps) || !admissible(y, eps)) { ++r.skipped; continue; }
            r.max = std::max(r.max, std::fabs(q(y) - q(x)));
            ++r.used;
        }
    }
    return r;
}

}
