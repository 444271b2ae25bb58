#pragma once

#include <bcp/angle.hpp>
#include <bcp/arrangement.hpp>
#include <bcp/cochain.hpp>
#include <bcp/errors.hpp>
#include <bcp/parallel.hpp>
#include <bcp/quadrature.hpp>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace bcp {

using cplx = std::complex<double>;

/// exact: arc-arrangement sums (order-type cochains only); midpoint: tensor midpoint rule;
/// graded: per-arc rule clustered at the fixed arguments. automatic picks exact, else graded.
enum class KernelMethod { automatic, midpoint, graded, exact };

inline bool use_exact(const Cochain& c, KernelMethod m)
{
    if (m == KernelMethod::exact && !c.order_type) throw invalid_argument("exact kernels need an order-type cochain");
    return m == KernelMethod::exact || (m == KernelMethod::automatic && c.order_type);
}

/// Nodes and weights (summing to 1) for one free circle variable.
struct NodeSet {
    std::vector<Pt> x;
    std::vector<double> w, cs, sn;
    std::size_t size() const { return x.size(); }
};

inline NodeSet midpoint_nodes(const QuadratureGrid& g)
{
    NodeSet ns;
    ns.x = g.nodes;
    ns.w = g.weights;
    for (const auto& p : g.nodes) { ns.cs.push_back(std::cos(p.th)); ns.sn.push_back(std::sin(p.th)); }
    return ns;
}

/// Midpoint rule in u on each arc between fixed points after the sin^2 map
/// x = s + L (u - sin(2 pi u) / 2 pi) (order 1) or the sin^4 map (order 2). Nodes cluster at
/// the arc ends, where the integrand varies on the scale of the neighbouring gaps.
/// Arc i gets max(n / 4, n L_i / 2pi) nodes.
inline NodeSet graded_nodes(std::span<const double> fixed, int n, int order = 1)
{
    std::vector<double> u(fixed.begin(), fixed.end());
    for (auto& v : u) v = wrap(v);
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    NodeSet ns;
    const int k = static_cast<int>(u.size());
    for (int i = 0; i < k; ++i) {
        const double s = u[i];
        const double len = (i + 1 < k ? u[i + 1] : u[0] + two_pi) - s;
        const int m = std::max(std::max(4, n / 4), static_cast<int>(std::lround(n * len / two_pi)));
        for (int j = 0; j < m; ++j) {
            const double t = (j + 0.5) / m;
            const double a = two_pi * t;
            const double x = order == 1 ? s + len * (t - std::sin(a) / two_pi)
                                        : s + len * (t - 2 * std::sin(a) / (3 * pi) + std::sin(2 * a) / (12 * pi));
            const double dx = order == 1 ? len * (1 - std::cos(a)) : len * (1 - 4 * std::cos(a) / 3 + std::cos(2 * a) / 3);
            ns.x.emplace_back(x);
            ns.w.push_back(dx / m / two_pi);
            ns.cs.push_back(std::cos(x));
            ns.sn.push_back(std::sin(x));
        }
    }
    return ns;
}

struct SharpFlat {
    double sharp = 0;
    double flat = 0;
};

/// c#(x) and cb(x) on a given tensor rule for (eta, phi).
inline SharpFlat sharp_flat_on(const Cochain& c, const NodeSet& ns, const Pt* three)
{
    const std::size_t n = ns.size();
    std::array<Pt, max_arity> buf;
    buf[2] = three[0]; buf[3] = three[1]; buf[4] = three[2];
    double s = 0, f = 0;
    for (std::size_t i = 0; i < n; ++i) {
        buf[0] = ns.x[i];
        double si = 0, fi = 0;
        for (std::size_t j = 0; j < n; ++j) {
            buf[1] = ns.x[j];
            double v = ns.w[j] * c.fn(buf.data());
            si += ns.cs[j] * v;
            fi += ns.sn[j] * v;
        }
        s += ns.w[i] * si;
        f += ns.w[i] * fi;
    }
    return {s, f};
}

/// c#(x) and cb(x) in one pass over the (eta, phi) grid.
inline SharpFlat sharp_flat(const Cochain& c, const QuadratureGrid& grid, const Pt* three,
                            KernelMethod method = KernelMethod::automatic)
{
    if (c.arity != 5) throw invalid_argument("c_sharp/c_flat need a 5-cochain");
    if (use_exact(c, method)) {
        double fx[3] = {three[0].th, three[1].th, three[2].th};
        static const WeightTerm wc{1.0, {Wf::one, Wf::cos, Wf::one}};
        static const WeightTerm ws{1.0, {Wf::one, Wf::sin, Wf::one}};
        return {arrangement_average(c, 2, fx, std::span(&wc, 1)), arrangement_average(c, 2, fx, std::span(&ws, 1))};
    }
    double fx[3] = {three[0].th, three[1].th, three[2].th};
    return sharp_flat_on(c, method == KernelMethod::midpoint ? midpoint_nodes(grid) : graded_nodes(fx, grid.n), three);
}

inline Cochain c_sharp(const Cochain& c, const QuadratureGrid& grid, KernelMethod method = KernelMethod::automatic)
{
    use_exact(c, method);
    return Cochain(3, [c, grid, method](const Pt* p) { return sharp_flat(c, grid, p, method).sharp; },
                   c.sup_bound, "c_sharp(" + c.name + ")");
}

inline Cochain c_flat(const Cochain& c, const QuadratureGrid& grid, KernelMethod method = KernelMethod::automatic)
{
    use_exact(c, method);
    return Cochain(3, [c, grid, method](const Pt* p) { return sharp_flat(c, grid, p, method).flat; },
                   c.sup_bound, "c_flat(" + c.name + ")");
}

/// Triple average of sin(eta - phi) c(eta, phi, psi, x1, x2).
inline double check_value(const Cochain& c, const QuadratureGrid& grid, const Pt* two,
                          KernelMethod method = KernelMethod::automatic)
{
    if (c.arity != 5) throw invalid_argument("c_check needs a 5-cochain");
    if (use_exact(c, method)) {
        double fx[2] = {two[0].th, two[1].th};
        static const WeightTerm terms[2] = {{1.0, {Wf::sin, Wf::cos, Wf::one}}, {-1.0, {Wf::cos, Wf::sin, Wf::one}}};
        return arrangement_average(c, 3, fx, terms);
    }
    double fx[2] = {two[0].th, two[1].th};
    const NodeSet ns = method == KernelMethod::midpoint ? midpoint_nodes(grid) : graded_nodes(fx, grid.n);
    const std::size_t n = ns.size();
    std::array<Pt, max_arity> buf;
    buf[3] = two[0]; buf[4] = two[1];
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        buf[0] = ns.x[i];
        for (std::size_t j = 0; j < n; ++j) {
            buf[1] = ns.x[j];
            // sin(eta_i - phi_j)
            double w = ns.w[i] * ns.w[j] * (ns.sn[i] * ns.cs[j] - ns.cs[i] * ns.sn[j]);
            double inner = 0;
            for (std::size_t k = 0; k < n; ++k) {
                buf[2] = ns.x[k];
                inner += ns.w[k] * c.fn(buf.data());
            }
            acc += w * inner;
        }
    }
    return acc;
}

inline Cochain c_check(const Cochain& c, const QuadratureGrid& grid, KernelMethod method = KernelMethod::automatic)
{
    use_exact(c, method);
    return Cochain(2, [c, grid, method](const Pt* p) { return check_value(c, grid, p, method); },
                   c.sup_bound, "c_check(" + c.name + ")");
}

/// Knot parameter map zeta = Z(t) = 2 pi t - sin(2 pi t) on [0, 1]. Uniform t gives knots that
/// cluster cubically at 0 and 2 pi, where the profile varies on the scale of small gaps.
inline double knot_map(double t) { return two_pi * t - std::sin(two_pi * t); }
inline double knot_map_prime(double t) { return two_pi * (1 - std::cos(two_pi * t)); }

/// Distance d = Z(u) from the nearer end for u in [0, 1/2], accurate for small u.
inline double knot_end_distance(double u)
{
    double x = two_pi * u;
    if (x < 1e-2) {
        double x2 = x * x;
        return x * x2 / 6 * (1 - x2 / 20 * (1 - x2 / 42));
    }
    return x - std::sin(x);
}

/// t with Z(t) = zeta.
inline double knot_inverse(double zeta)
{
    const bool upper = zeta > pi;
    const double d = upper ? two_pi - zeta : zeta;
    if (d <= 0) return upper ? 1.0 : 0.0;
    // solve Z(u) = d on [0, 1/2]
    double lo = 0, hi = 0.5;
    double u = std::min(0.5, std::cbrt(6 * d) / two_pi);
    for (int it = 0; it < 100; ++it) {
        double f = knot_end_distance(u) - d;
        if (f > 0) hi = u; else lo = u;
        double fp = knot_map_prime(u);
        double next = fp > 0 ? u - f / fp : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - u) <= 1e-16 * std::max(1e-300, u)) { u = next; break; }
        u = next;
    }
    return upper ? 1.0 - u : u;
}

/// Profile knots zeta_i = Z(i / M), i = 0..M; the end knots hold one-sided limits.
inline std::vector<double> profile_knots(int m, double end_offset = 1e-9)
{
    std::vector<double> z(m + 1);
    for (int i = 0; i <= m; ++i) {
        const double t = static_cast<double>(i) / m;
        z[i] = 2 * i <= m ? knot_end_distance(t) : two_pi - knot_end_distance(1.0 - t);
    }
    z[0] = end_offset;
    z[m] = two_pi - end_offset;
    return z;
}

inline std::vector<double> c_check_profile(const Cochain& c, const QuadratureGrid& grid, int m,
                                           KernelMethod method = KernelMethod::automatic)
{
    if (m < 8 || m % 2) throw invalid_argument("check profile size must be even and at least 8");
    auto z = profile_knots(m);
    return parallel_map(z.size(), [&](std::size_t i) {
        Pt two[2] = {Pt(0.0), Pt(z[i])};
        return check_value(c, grid, two, method);
    });
}

/// c-check profile plus the bounded solution r of (1 - e^{-i phi}) r' = i r - c-check(0, phi), r(pi) = 0.
///
/// With J(phi) = int_pi^phi c-check(0, z) / (1 - cos z) dz we have r = -(1 - e^{i phi}) J / 2. On each half
/// the profile minus l(z) = a + b sin z is O(z^2) at the end, so the remainder integrates by Gauss-Legendre
/// and l is integrated in closed form: int a / (1 - cos) = -a cot(z/2), int b sin / (1 - cos) = 2 b log sin(z/2).
/// The a-term of r simplifies to -i a cos(phi/2) e^{i phi/2}, which stays finite at the ends.
class KernelTable {
public:
    int m = 0;
    int n = 0;
    std::string cocycle_id;
    double guard = 1e-6;

    KernelTable() = default;

    KernelTable(std::vector<double> profile, int quad_nodes, std::string id, double guard_band = 1e-6)
        : m(static_cast<int>(profile.size()) - 1), n(quad_nodes), cocycle_id(std::move(id)), guard(guard_band),
          check_(std::move(profile))
    {
        if (m < 8 || m % 2) throw invalid_argument("KernelTable: profile must have an even number of cells");
        for (double v : check_)
            if (!std::isfinite(v)) throw invalid_argument("KernelTable: non-finite profile value");
        knots_ = profile_knots(m);
        const auto& f = check_;
        const auto& z = knots_;
        spline_ = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
            f.data(), f.size(), 0.0, 1.0 / m);
        al_ = f[0];
        bl_ = one_sided_slope(z[0], z[2], z[4], f[0], f[2], f[4]);
        ar_ = f[m];
        br_ = one_sided_slope(z[m], z[m - 2], z[m - 4], f[m], f[m - 2], f[m - 4]);
        build_cumulative();
    }

    const std::vector<double>& check_profile() const { return check_; }
    const std::vector<double>& knots() const { return knots_; }
    /// (a, b) of the end expansions a + b sin z at 0 and at 2 pi
    std::array<double, 4> end_expansion() const { return {al_, bl_, ar_, br_}; }

    /// Interpolated c-check(0, zeta) for zeta in [0, 2pi].
    double check_at(double zeta) const { return (*spline_)(knot_inverse(std::clamp(zeta, 0.0, two_pi))); }

    cplx r(double phi) const
    {
        phi = wrap(phi);
        if (phi < guard || phi > two_pi - guard) {
            ++clamped_;
            phi = std::clamp(phi, guard, two_pi - guard);
        }
        return r_unclamped(phi);
    }

    /// Valid on all of (0, 2pi); no clamping.
    cplx r_unclamped(double phi) const
    {
        const bool left = phi <= pi;
        const double a = left ? al_ : ar_, b = left ? bl_ : br_;
        const double t = knot_inverse(phi);
        int i = std::clamp(static_cast<int>(std::floor(t * m)), 0, m - 1);
        if (left && i >= m / 2) i = m / 2 - 1;
        if (!left && i < m / 2) i = m / 2;
        // nearest knot on the side of pi
        const int k = left ? i + 1 : i;
        double jreg = cum_[k] + gauss_legendre<8>([&](double s) { return integrand(s); }, static_cast<double>(k) / m, t);
        jreg += 2 * b * std::log(std::sin(0.5 * phi));
        const cplx one_minus = 1.0 - std::polar(1.0, phi);
        return -0.5 * one_minus * jreg - cplx(0, 1) * a * std::cos(0.5 * phi) * std::polar(1.0, 0.5 * phi);
    }

    std::vector<cplx> r_profile() const
    {
        std::vector<cplx> out(m + 1);
        for (int i = 0; i <= m; ++i) out[i] = r_unclamped(knots_[i]);
        return out;
    }

    /// (1 - e^{-i phi}) r'(phi) - i r(phi) + c-check(0, phi), by central difference.
    cplx ode_residual(double phi, double step = 1e-5) const
    {
        step = std::min(step, 0.25 * std::min(phi, two_pi - phi));
        cplx dr = (r_unclamped(phi + step) - r_unclamped(phi - step)) / (2 * step);
        return (1.0 - std::polar(1.0, -phi)) * dr - cplx(0, 1) * r_unclamped(phi) + check_at(phi);
    }

    std::size_t clamped_count() const { return clamped_.load(); }

    /// Header "# M=.. N=.. cocycle=..", column header, then rows zeta, check, Re r, Im r.
    void write_csv(std::ostream& out) const
    {
        out << "# M=" << m << " N=" << n << " cocycle=" << cocycle_id << '\n';
        out << "zeta,check,re_r,im_r\n";
        auto rs = r_profile();
        out << std::scientific << std::setprecision(16);
        for (int i = 0; i <= m; ++i)
            out << knots_[i] << ',' << check_[i] << ',' << rs[i].real() << ',' << rs[i].imag() << '\n';
    }

    static KernelTable read_csv(std::istream& in, double guard_band = 1e-6)
    {
        std::string header, cols;
        if (!std::getline(in, header) || header.rfind("# M=", 0) != 0) throw invalid_argument("kernel csv: bad header");
        int mm = 0, nn = 0;
        std::string id;
        {
            std::istringstream hs(header.substr(2));
            std::string tok;
            while (hs >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "M") mm = std::stoi(val);
                else if (key == "N") nn = std::stoi(val);
                else if (key == "cocycle") id = val;
            }
        }
        std::getline(in, cols);
        std::vector<double> prof;
        std::string row;
        auto z = profile_knots(mm);
        while (std::getline(in, row)) {
            if (row.empty()) continue;
            std::istringstream rs(row);
            std::string zs, cs;
            std::getline(rs, zs, ',');
            std::getline(rs, cs, ',');
            const std::size_t i = prof.size();
            if (i >= z.size() || std::fabs(std::stod(zs) - z[i]) > 1e-12) throw invalid_argument("kernel csv: knot mismatch");
            prof.push_back(std::stod(cs));
        }
        if (static_cast<int>(prof.size()) != mm + 1) throw invalid_argument("kernel csv: row count does not match M");
        return KernelTable(std::move(prof), nn, id, guard_band);
    }

    KernelTable(const KernelTable& o)
        : m(o.m), n(o.n), cocycle_id(o.cocycle_id), guard(o.guard), check_(o.check_), knots_(o.knots_), cum_(o.cum_),
          al_(o.al_), bl_(o.bl_), ar_(o.ar_), br_(o.br_), spline_(o.spline_), clamped_(o.clamped_.load()) {}

    KernelTable& operator=(const KernelTable& o)
    {
        m = o.m; n = o.n; cocycle_id = o.cocycle_id; guard = o.guard; check_ = o.check_; knots_ = o.knots_;
        cum_ = o.cum_; al_ = o.al_; bl_ = o.bl_; ar_ = o.ar_; br_ = o.br_; spline_ = o.spline_;
        clamped_ = o.clamped_.load();
        return *this;
    }

private:
    std::vector<double> check_;
    std::vector<double> knots_;
    std::vector<double> cum_;
    double al_ = 0, bl_ = 0, ar_ = 0, br_ = 0;
    std::shared_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
    mutable std::atomic<std::size_t> clamped_{0};

    // derivative at x0 of the parabola through three points
    static double one_sided_slope(double x0, double x1, double x2, double f0, double f1, double f2)
    {
        const double h1 = x1 - x0, h2 = x2 - x0;
        return (f1 * h2 * h2 - f2 * h1 * h1 - f0 * (h2 * h2 - h1 * h1)) / (h1 * h2 * (h2 - h1));
    }

    // (c-check - a - b sin z) / (1 - cos z) * dz/dt, written through the distance to the nearer end
    double integrand(double t) const
    {
        const bool left = t <= 0.5;
        const double u = left ? t : 1.0 - t;
        const double d = knot_end_distance(u);
        const double sd = std::sin(0.5 * d);
        const double a = left ? al_ : ar_, b = left ? bl_ : br_;
        const double sinz = left ? std::sin(d) : -std::sin(d);
        return ((*spline_)(t) - a - b * sinz) / (2 * sd * sd) * knot_map_prime(u);
    }

    void build_cumulative()
    {
        cum_.assign(m + 1, 0.0);
        const int mid = m / 2;
        auto cell = [&](int i, int j) {
            return gauss_legendre<8>([&](double s) { return integrand(s); }, static_cast<double>(i) / m, static_cast<double>(j) / m);
        };
        for (int i = mid; i > 0; --i) cum_[i - 1] = cum_[i] + cell(i, i - 1);
        for (int i = mid; i < m; ++i) cum_[i + 1] = cum_[i] + cell(i, i + 1);
    }
};

struct KernelOptions {
    int n_sharp = 64;
    int n_check = 64;
    int m = 512;
    double guard = 1e-6;
    KernelMethod method = KernelMethod::automatic;
};

inline KernelTable solve_r(std::vector<double> profile, int quad_nodes = 0, std::string id = {}, double guard = 1e-6)
{
    return KernelTable(std::move(profile), quad_nodes, std::move(id), guard);
}

inline KernelTable build_kernel_table(const Cochain& c, const KernelOptions& o)
{
    QuadratureGrid g(o.n_check);
    return solve_r(c_check_profile(c, g, o.m, o.method), use_exact(c, o.method) ? 0 : o.n_check, c.name, o.guard);
}

/// Complex 2-cochain v(x1, x2) = e^{i x1} r(x2 - x1).
struct ComplexCochain2 {
    std::shared_ptr<const KernelTable> table;

    cplx operator()(double x1, double x2) const
    {
        double d = wrap(x2 - x1);
        if (d == 0.0) throw domain_error("v: coincident arguments");
        return std::polar(1.0, x1) * table->r(d);
    }
};

inline ComplexCochain2 build_v(std::shared_ptr<const KernelTable> table) { return {std::move(table)}; }

inline std::pair<Cochain, Cochain> v_parts(const ComplexCochain2& v)
{
    Cochain re(2, [v](const Pt* p) { return v(p[0].th, p[1].th).real(); }, std::nullopt, "v_sharp");
    Cochain im(2, [v](const Pt* p) { return v(p[0].th, p[1].th).imag(); }, std::nullopt, "v_flat");
    return {re, im};
}

/// c-check through the table: K-invariant extension of the profile.
inline Cochain check_from_table(std::shared_ptr<const KernelTable> table)
{
    return Cochain(2, [table](const Pt* p) { return table->check_at(wrap(p[1].th - p[0].th)); }, std::nullopt, "c_check");
}

/// F# = c#(0, .) + Re (dv)_0 and Fb = cb(0, .) + Im (dv)_0 on Omega, with a memo of the
/// kernel pair keyed by coordinates rounded to 1e-9 (values are computed at the rounded point).
class InhomogeneityPair {
public:
    InhomogeneityPair(Cochain c, std::shared_ptr<const KernelTable> table, int n_sharp = 64,
                      KernelMethod method = KernelMethod::automatic)
        : c_(std::move(c)), table_(std::move(table)), grid_(n_sharp), method_(method),
          memo_(std::make_shared<Memo>())
    {
        use_exact(c_, method_);
    }

    const Cochain& cocycle() const { return c_; }
    const KernelTable& table() const { return *table_; }
    std::shared_ptr<const KernelTable> table_ptr() const { return table_; }
    int n_sharp() const { return grid_.n; }

    SharpFlat kernels0(double p1, double p2) const
    {
        const std::int64_t k1 = std::llround(p1 * 1e9), k2 = std::llround(p2 * 1e9);
        {
            std::lock_guard<std::mutex> lock(memo_->mu);
            auto it = memo_->map.find({k1, k2});
            if (it != memo_->map.end()) return it->second;
        }
        Pt three[3] = {Pt(0.0), Pt(k1 * 1e-9), Pt(k2 * 1e-9)};
        SharpFlat v = sharp_flat(c_, grid_, three, method_);
        std::lock_guard<std::mutex> lock(memo_->mu);
        if (memo_->map.size() > 4'000'000) memo_->map.clear();
        memo_->map.emplace(std::make_pair(k1, k2), v);
        return v;
    }

    /// (dv)_0(p1, p2) = v(p1, p2) - v(0, p2) + v(0, p1)
    cplx dv0(double p1, double p2) const
    {
        check_domain(p1, p2);
        const auto& t = *table_;
        return std::polar(1.0, p1) * t.r(wrap(p2 - p1)) - t.r(p2) + t.r(p1);
    }

    SharpFlat eval(double p1, double p2) const
    {
        p1 = wrap(p1); p2 = wrap(p2);
        cplx dv = dv0(p1, p2);
        SharpFlat k = kernels0(p1, p2);
        return {k.sharp + dv.real(), k.flat + dv.imag()};
    }

    double f_sharp(double p1, double p2) const
    {
        p1 = wrap(p1); p2 = wrap(p2);
        return kernels0(p1, p2).sharp + dv0(p1, p2).real();
    }

    double f_flat(double p1, double p2) const
    {
        p1 = wrap(p1); p2 = wrap(p2);
        return kernels0(p1, p2).flat + dv0(p1, p2).imag();
    }

    std::size_t memo_size() const
    {
        std::lock_guard<std::mutex> lock(memo_->mu);
        return memo_->map.size();
    }

private:
    struct Memo {
        std::mutex mu;
        std::map<std::pair<std::int64_t, std::int64_t>, SharpFlat> map;
    };
    Cochain c_;
    std::shared_ptr<const KernelTable> table_;
    QuadratureGrid grid_;
    KernelMethod method_;
    std::shared_ptr<Memo> memo_;

    static void check_domain(double p1, double p2)
    {
        if (p1 == 0.0 || p2 == 0.0 || p1 == p2) throw domain_error("point outside Omega");
    }
};

}
