#pragma once

// Exact circle averages of order-type cochains. The integrand is constant on each
// cell of the arc arrangement cut out by the fixed arguments, so the average reduces
// to a finite sum of (value on a cell) x (weight integral over the cell).

#include <bcp/angle.hpp>
#include <bcp/cochain.hpp>
#include <bcp/quadrature.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace bcp {

enum class Wf { one, cos, sin };

inline double wf_eval(Wf w, double x)
{
    switch (w) {
    case Wf::one: return 1.0;
    case Wf::cos: return std::cos(x);
    case Wf::sin: return std::sin(x);
    }
    return 0.0;
}

/// coef * prod_j w_j(x_j)
struct WeightTerm {
    double coef = 1;
    std::array<Wf, 3> w{Wf::one, Wf::one, Wf::one};
};

namespace detail {

// Integral over s <= x_0 <= x_1 <= .. <= e of prod g_k(x_k), lower limit lo.
inline double ordered_integral(const Wf* g, int count, double lo, double e)
{
    if (count == 0) return 1.0;
    if (e <= lo) return 0.0;
    if (count == 1) {
        switch (g[0]) {
        case Wf::one: return e - lo;
        case Wf::cos: return std::sin(e) - std::sin(lo);
        case Wf::sin: return std::cos(lo) - std::cos(e);
        }
    }
    return gauss_legendre<20>([&](double x) {
        return wf_eval(g[0], x) * ordered_integral(g + 1, count - 1, x, e);
    }, lo, e);
}

}

/// (2pi)^{-m} * integral over the m leading slots of c(x_1..x_m, fixed..) * weight.
/// Requires c.order_type; m <= 3.
inline double arrangement_average(const Cochain& c, int m, std::span<const double> fixed,
                                  std::span<const WeightTerm> terms)
{
    if (!c.order_type) throw invalid_argument("arrangement_average: cochain is not order-type");
    if (m < 1 || m > 3 || m + static_cast<int>(fixed.size()) != c.arity)
        throw invalid_argument("arrangement_average: slot count mismatch");

    std::vector<double> u(fixed.begin(), fixed.end());
    for (auto& x : u) x = wrap(x);
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    const int k = static_cast<int>(u.size());
    std::vector<double> start(k), len(k);
    for (int i = 0; i < k; ++i) {
        start[i] = u[i];
        len[i] = (i + 1 < k ? u[i + 1] : u[0] + two_pi) - u[i];
    }

    std::array<Pt, max_arity> args;
    for (std::size_t i = 0; i < fixed.size(); ++i) args[m + i] = Pt(fixed[i]);

    double total = 0;
    std::array<int, 3> arc{};
    const int combos = static_cast<int>(std::pow(k, m));
    for (int code = 0; code < combos; ++code) {
        for (int j = 0, t = code; j < m; ++j, t /= k) arc[j] = t % k;
        // slots grouped by arc, each group sorted so next_permutation walks every order
        std::vector<std::vector<int>> groups(k);
        for (int s = 0; s < m; ++s) groups[arc[s]].push_back(s);

        for (;;) {
            for (int ai = 0; ai < k; ++ai) {
                const auto& gr = groups[ai];
                const int cn = static_cast<int>(gr.size());
                for (int r = 0; r < cn; ++r) args[gr[r]] = Pt(start[ai] + len[ai] * (r + 1) / (cn + 1));
            }
            double val = c.eval(args.data());
            if (val != 0.0) {
                double weight = 0;
                for (const auto& term : terms) {
                    double prod = term.coef;
                    for (int ai = 0; ai < k && prod != 0.0; ++ai) {
                        const auto& gr = groups[ai];
                        if (gr.empty()) continue;
                        std::array<Wf, 3> g{};
                        for (std::size_t r = 0; r < gr.size(); ++r) g[r] = term.w[gr[r]];
                        prod *= detail::ordered_integral(g.data(), static_cast<int>(gr.size()), start[ai], start[ai] + len[ai]);
                    }
                    weight += prod;
                }
                total += val * weight;
            }
            // odometer over the per-arc permutations
            int ai = 0;
            for (; ai < k; ++ai)
                if (std::next_permutation(groups[ai].begin(), groups[ai].end())) break;
            if (ai == k) break;
        }
    }
    return total / std::pow(two_pi, m);
}

/// Exact I(c) for order-type c.
inline Cochain integrate_first_exact(const Cochain& c)
{
    const int n = c.arity - 1;
    if (n < 1) throw invalid_argument("integrate_first_exact: arity must be at least 2");
    Cochain out(n, [c, n](const Pt* p) {
        std::array<double, max_arity> fx;
        for (int i = 0; i < n; ++i) fx[i] = p[i].th;
        static const WeightTerm one{};
        return arrangement_average(c, 1, std::span<const double>(fx.data(), n), std::span(&one, 1));
    }, c.sup_bound, "I(" + c.name + ")");
    return out;
}

}
