#pragma once

#include <bcp/angle.hpp>
#include <bcp/cochain.hpp>
#include <bcp/errors.hpp>
#include <bcp/moebius.hpp>
#include <bcp/quadrature.hpp>
#include <bcp/rng.hpp>

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace bcp {

/// +1 for counterclockwise triples, -1 for clockwise, 0 on ties.
inline int orientation(double t0, double t1, double t2)
{
    double a = wrap(t1 - t0), b = wrap(t2 - t0);
    if (a == 0.0 || b == 0.0 || a == b) return 0;
    return a < b ? 1 : -1;
}

inline Cochain orientation_cochain()
{
    Cochain c(3, [](const Pt* p) { return static_cast<double>(orientation(p[0].th, p[1].th, p[2].th)); }, 1.0, "orientation");
    c.order_type = true;
    return c;
}

/// Sign of the permutation sorting the values; 0 on ties.
inline int sort_sign(const double* x, int n)
{
    int s = 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (x[i] == x[j]) return 0;
            if (x[i] > x[j]) s = -s;
        }
    return s;
}

/// Alternation of (x0..x4) -> or(x0,x1,x2) or(x2,x3,x4), written out directly:
/// one third of the sign of the cyclic order.
inline Cochain cup_orientation()
{
    Cochain c(5, [](const Pt* p) {
        double x[5] = {p[0].th, p[1].th, p[2].th, p[3].th, p[4].th};
        return sort_sign(x, 5) / 3.0;
    }, 1.0 / 3.0, "cup_orientation");
    c.order_type = true;
    return c;
}

/// The same cochain through the 120-term alternating sum.
inline Cochain cup_orientation_reference()
{
    Cochain prod(5, [](const Pt* p) {
        return static_cast<double>(orientation(p[0].th, p[1].th, p[2].th) * orientation(p[2].th, p[3].th, p[4].th));
    }, 1.0, "or*or");
    prod.order_type = true;
    Cochain c = alternate(prod);
    c.name = "cup_orientation_reference";
    return c;
}

struct Profile {
    std::string id;
    std::function<double(double)> h;
    double bound = 1;
};

/// cos(2y) is pi-periodic, so the composite with arctan of the cross-ratio is smooth.
inline Profile profile_by_id(const std::string& id)
{
    if (id == "cos2") return {id, [](double y) { return std::cos(2 * y); }, 1.0};
    if (id == "sin2") return {id, [](double y) { return std::sin(2 * y); }, 1.0};
    if (id == "zero") return {id, [](double) { return 0.0; }, 0.0};
    if (id == "tanh") return {id, [](double y) { return std::tanh(y); }, 1.0};
    throw invalid_argument("unknown cross-ratio profile: " + id);
}

namespace detail {

// Real cross-ratio of four circle points as (num, den): lambda = num / den.
inline std::pair<double, double> cross_ratio_parts(const Pt& w0, const Pt& w1, const Pt& w2, const Pt& w3)
{
    auto e = [](const Pt& p) { return std::complex<double>(std::cos(p.th), std::sin(p.th)); };
    auto z0 = e(w0), z1 = e(w1), z2 = e(w2), z3 = e(w3);
    auto n = (z0 - z2) * (z1 - z3);
    auto d = (z1 - z2) * (z0 - z3);
    return {(n * std::conj(d)).real(), std::norm(d)};
}

inline double arctan_ratio(double n, double d)
{
    double y = std::atan2(n, d);
    if (y > 0.5 * pi) y -= pi;
    else if (y <= -0.5 * pi) y += pi;
    return y;
}

}

/// Alternation of q = h(arctan(cross_ratio)) over S4, via the six anharmonic values.
inline Cochain alt_crossratio_q(const Profile& prof)
{
    if (prof.id == "cos2") {
        Cochain q(4, [](const Pt* p) {
            auto sq = [](double x) { return x * x; };
            double c02 = sq(half_chord(p[0], p[2])), c13 = sq(half_chord(p[1], p[3]));
            double c12 = sq(half_chord(p[1], p[2])), c03 = sq(half_chord(p[0], p[3]));
            double c01 = sq(half_chord(p[0], p[1])), c23 = sq(half_chord(p[2], p[3]));
            double a = c02 * c13, b = c12 * c03, e = c01 * c23;
            auto frac = [](double x, double y) { return x + y > 0 ? (x - y) / (x + y) : 0.0; };
            return (frac(b, a) + frac(e, b) + frac(a, e)) / 3.0;
        }, 1.0, "alt_q[cos2]");
        return q;
    }
    auto h = prof.h;
    Cochain q(4, [h](const Pt* p) {
        auto [n, d] = detail::cross_ratio_parts(p[0], p[1], p[2], p[3]);
        if (n == 0.0 && d == 0.0) return 0.0;
        auto val = [&h](double num, double den) {
            if (num == 0.0 && den == 0.0) return 0.0;
            return h(detail::arctan_ratio(num, den));
        };
        double even = val(n, d) + val(d, d - n) + val(n - d, n);
        double odd = val(d, n) + val(d - n, d) + val(n, n - d);
        return (even - odd) / 6.0;
    }, prof.bound, "alt_q[" + prof.id + "]");
    return q;
}

inline Cochain coboundary_crossratio(const Profile& prof)
{
    Cochain c = differential(alt_crossratio_q(prof));
    c.name = "coboundary_crossratio[" + prof.id + "]";
    return c;
}

/// Tensor Gauss-Legendre discretization of coordinatewise convolution with a bump of
/// half-width `width`. Exactly a cocycle and alternating when c is; invariance is only approximate.
inline Cochain mollify(const Cochain& c, double width, int nodes = 3)
{
    if (!(width > 0)) throw invalid_argument("mollify: width must be positive");
    if (nodes < 1 || nodes > 8) throw invalid_argument("mollify: node count out of range");
    std::vector<double> off, wt;
    {
        std::vector<double> x, w;
        auto push = [&](auto tag) {
            using G = decltype(tag);
            for (std::size_t i = 0; i < G::abscissa().size(); ++i) {
                double xi = G::abscissa()[i], wi = G::weights()[i];
                x.push_back(xi); w.push_back(wi);
                if (xi != 0.0) { x.push_back(-xi); w.push_back(wi); }
            }
        };
        using boost::math::quadrature::gauss;
        switch (nodes) {
        case 1: x = {0.0}; w = {2.0}; break;
        case 2: push(gauss<double, 2>{}); break;
        case 3: push(gauss<double, 3>{}); break;
        case 4: push(gauss<double, 4>{}); break;
        case 5: push(gauss<double, 5>{}); break;
        case 6: push(gauss<double, 6>{}); break;
        case 7: push(gauss<double, 7>{}); break;
        default: push(gauss<double, 8>{}); break;
        }
        double total = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double b = std::exp(-1.0 / (1.0 - x[i] * x[i]));
            off.push_back(width * x[i]);
            wt.push_back(w[i] * b);
            total += w[i] * b;
        }
        for (auto& v : wt) v /= total;
    }
    const int n = c.arity;
    const int m = static_cast<int>(off.size());
    int total = 1;
    for (int i = 0; i < n; ++i) total *= m;
    Cochain out(n, [c, off, wt, n, m, total](const Pt* p) {
        std::array<Pt, max_arity> buf;
        double acc = 0;
        for (int code = 0; code < total; ++code) {
            double w = 1;
            for (int i = 0, t = code; i < n; ++i, t /= m) {
                int k = t % m;
                w *= wt[k];
                buf[i] = Pt(p[i].th + off[k]);
            }
            acc += w * c.fn(buf.data());
        }
        return acc;
    }, c.sup_bound, "mollify(" + c.name + ")");
    return out;
}

/// Tabulated cochain on the uniform periodic grid x_k = 2 pi k / n, multilinear in between.
struct Tabulated {
    int arity = 5;
    int n = 0;
    std::vector<double> values;
};

/// Format: "n <count>" then count^arity whitespace separated values, last index fastest.
inline Tabulated load_tabulated(std::istream& in, int arity = 5)
{
    std::string tag;
    Tabulated t;
    t.arity = arity;
    if (!(in >> tag >> t.n) || tag != "n" || t.n < 2) throw invalid_argument("tabulated cochain: bad header");
    std::size_t count = 1;
    for (int i = 0; i < arity; ++i) count *= static_cast<std::size_t>(t.n);
    t.values.resize(count);
    for (auto& v : t.values)
        if (!(in >> v) || !std::isfinite(v)) throw invalid_argument("tabulated cochain: truncated or non-finite data");
    return t;
}

inline Tabulated load_tabulated(const std::string& path, int arity = 5)
{
    std::ifstream in(path);
    if (!in) throw invalid_argument("cannot open tabulated cochain: " + path);
    return load_tabulated(in, arity);
}

inline void save_tabulated(std::ostream& out, const Cochain& c, int n)
{
    out << "n " << n << '\n';
    out.precision(17);
    const int a = c.arity;
    std::size_t count = 1;
    for (int i = 0; i < a; ++i) count *= static_cast<std::size_t>(n);
    std::array<Pt, max_arity> buf;
    for (std::size_t code = 0; code < count; ++code) {
        std::size_t t = code;
        for (int i = a - 1; i >= 0; --i, t /= n) buf[i] = Pt(two_pi * static_cast<double>(t % n) / n);
        out << c.fn(buf.data()) << ((code + 1) % n ? ' ' : '\n');
    }
}

inline Cochain tabulated_cochain(std::shared_ptr<const Tabulated> tab)
{
    double bound = 0;
    for (double v : tab->values) bound = std::max(bound, std::fabs(v));
    const int a = tab->arity;
    Cochain c(a, [tab, a](const Pt* p) {
        const int n = tab->n;
        std::array<int, max_arity> lo{};
        std::array<double, max_arity> fr{};
        for (int i = 0; i < a; ++i) {
            double u = p[i].th / two_pi * n;
            int k = static_cast<int>(std::floor(u));
            fr[i] = u - k;
            lo[i] = ((k % n) + n) % n;
        }
        double acc = 0;
        for (int corner = 0; corner < (1 << a); ++corner) {
            double w = 1;
            std::size_t idx = 0;
            for (int i = 0; i < a; ++i) {
                int bit = (corner >> i) & 1;
                w *= bit ? fr[i] : 1.0 - fr[i];
                idx = idx * n + static_cast<std::size_t>((lo[i] + bit) % n);
            }
            if (w != 0.0) acc += w * tab->values[idx];
        }
        return acc;
    }, bound, "external");
    return c;
}

enum class CocycleKind { zero, cup_orientation, coboundary_crossratio, mollified_cup, external };

inline const char* kind_name(CocycleKind k)
{
    switch (k) {
    case CocycleKind::zero: return "zero";
    case CocycleKind::cup_orientation: return "cup_orientation";
    case CocycleKind::coboundary_crossratio: return "coboundary_crossratio";
    case CocycleKind::mollified_cup: return "mollified_cup";
    case CocycleKind::external: return "external";
    }
    return "?";
}

inline CocycleKind kind_from_name(const std::string& s)
{
    for (auto k : {CocycleKind::zero, CocycleKind::cup_orientation, CocycleKind::coboundary_crossratio,
                   CocycleKind::mollified_cup, CocycleKind::external})
        if (s == kind_name(k)) return k;
    throw invalid_argument("unknown cocycle kind: " + s);
}

struct Claims {
    bool alternating = true;
    bool invariant = true;
    bool cocycle = true;
};

struct CocycleSpec {
    CocycleKind kind = CocycleKind::cup_orientation;
    std::string profile = "cos2";
    double width = 0.05;
    int mollifier_nodes = 2;
    std::string path;
    /// "alternating" / "invariant" / "cocycle" claims; filled in by default_claims
    Claims claimed{};
};

inline Claims default_claims(CocycleKind k)
{
    switch (k) {
    case CocycleKind::mollified_cup: return {true, false, true};
    case CocycleKind::external: return {false, false, false};
    default: return {true, true, true};
    }
}

struct ValidationReport {
    double cocycle = 0, invariance = 0, alternation = 0, bound_excess = 0;
    bool ok = true;
    std::string message;
};

/// Spot checks of the claimed properties at seeded random admissible tuples.
inline ValidationReport validate_cocycle(const Cochain& c, const Claims& claims, double tol = 1e-10,
                                         std::size_t samples = 20, std::uint64_t seed = 7)
{
    ValidationReport rep;
    CounterRng rng(seed, "zoo-validation");
    if (claims.cocycle) {
        auto xs = random_tuples(CounterRng(seed, "zoo-cocycle"), samples, c.arity + 1);
        rep.cocycle = cocycle_residual(c, xs).max;
    }
    auto ys = random_tuples(CounterRng(seed, "zoo-points"), samples, c.arity);
    if (claims.invariant) {
        std::vector<GroupElement> gs;
        for (std::size_t i = 0; i < 5; ++i)
            gs.push_back(make_kan(rng.uniform(i, 0, -2, 2), rng.uniform(i, 1, -2, 2), rng.uniform(i, 2, -2, 2)));
        rep.invariance = invariance_residual(c, gs, ys).max;
    }
    if (claims.alternating && c.arity >= 2) {
        for (const auto& y : ys) {
            Tuple z = y;
            std::swap(z[0], z[1]);
            rep.alternation = std::max(rep.alternation, std::fabs(c(y) + c(z)));
            z = y;
            std::rotate(z.begin(), z.begin() + 1, z.end());
            double sgn = (c.arity % 2 == 1) ? 1.0 : -1.0;
            rep.alternation = std::max(rep.alternation, std::fabs(c(z) - sgn * c(y)));
        }
    }
    if (c.sup_bound)
        for (const auto& y : ys) rep.bound_excess = std::max(rep.bound_excess, std::fabs(c(y)) - *c.sup_bound);
    auto fail = [&](const char* what, double v) {
        rep.ok = false;
        std::ostringstream os;
        os << what << " residual " << v << " exceeds " << tol << "; ";
        rep.message += os.str();
    };
    if (rep.cocycle > tol) fail("cocycle", rep.cocycle);
    if (rep.invariance > tol) fail("invariance", rep.invariance);
    if (rep.alternation > tol) fail("alternation", rep.alternation);
    if (rep.bound_excess > tol) fail("sup bound", rep.bound_excess);
    return rep;
}

/// Build a zoo cocycle and fail fast if it does not satisfy what it claims.
inline Cochain build_cocycle(CocycleSpec& spec, bool validate = true)
{
    Cochain c;
    switch (spec.kind) {
    case CocycleKind::zero: c = constant_cochain(5, 0.0); c.name = "zero"; break;
    case CocycleKind::cup_orientation: c = cup_orientation(); break;
    case CocycleKind::coboundary_crossratio: c = coboundary_crossratio(profile_by_id(spec.profile)); break;
    case CocycleKind::mollified_cup: c = mollify(cup_orientation(), spec.width, spec.mollifier_nodes); break;
    case CocycleKind::external:
        if (spec.path.empty()) throw invalid_argument("external cocycle needs a path");
        c = tabulated_cochain(std::make_shared<Tabulated>(load_tabulated(spec.path)));
        break;
    }
    spec.claimed = default_claims(spec.kind);
    if (validate) {
        auto rep = validate_cocycle(c, spec.claimed);
        if (!rep.ok) throw domain_error("cocycle " + c.name + " failed self-validation: " + rep.message);
    }
    return c;
}

}
