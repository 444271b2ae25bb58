#pragma once

#include <bcp/angle.hpp>
#include <bcp/cochain.hpp>
#include <bcp/errors.hpp>
#include <bcp/kernels.hpp>
#include <bcp/moebius.hpp>
#include <bcp/quadrature.hpp>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>

namespace bcp {

enum class Component { plus, minus };

inline const char* component_name(Component c) { return c == Component::plus ? "plus" : "minus"; }

inline constexpr std::array<double, 2> omega_plus{2 * pi / 3, 4 * pi / 3};
inline constexpr std::array<double, 2> omega_minus{4 * pi / 3, 2 * pi / 3};

inline std::array<double, 2> base_point(Component c) { return c == Component::plus ? omega_plus : omega_minus; }

struct OmegaPoint {
    double phi1 = 0;
    double phi2 = 0;

    OmegaPoint() = default;
    OmegaPoint(double p1, double p2) : phi1(wrap(p1)), phi2(wrap(p2))
    {
        if (!std::isfinite(p1) || !std::isfinite(p2)) throw invalid_argument("OmegaPoint: non-finite coordinate");
        if (phi1 == 0.0 || phi2 == 0.0) throw domain_error("OmegaPoint: coordinate on the boundary of Omega");
        if (phi1 == phi2) throw domain_error("OmegaPoint: point on the diagonal");
    }

    Component component() const { return phi1 < phi2 ? Component::plus : Component::minus; }
    /// distance to the singular set {0, 2pi} x ... union diagonal
    double singular_distance() const
    {
        return std::min({phi1, two_pi - phi1, phi2, two_pi - phi2, std::fabs(phi2 - phi1)});
    }
};

inline bool on_antidiagonal(const OmegaPoint& p, double tol = 1e-12) { return std::fabs(p.phi1 + p.phi2 - two_pi) <= tol; }

struct CharCoords {
    double Phi = 0;
    double T = 0;
    double S = 0;
    Component comp = Component::plus;
};

/// T = -(cot(phi1/2) + cot(phi2/2)) / 2
inline double t_of(const OmegaPoint& p)
{
    double s1 = std::sin(0.5 * p.phi1), s2 = std::sin(0.5 * p.phi2);
    return -0.5 * std::sin(0.5 * (p.phi1 + p.phi2)) / (s1 * s2);
}

/// cot(Phi/2) = (cot(phi1/2) - cot(phi2/2)) / 2; lands in (0, pi) on Omega+ and (pi, 2pi) on Omega-.
inline double phi_of(const OmegaPoint& p)
{
    double s1 = std::sin(0.5 * p.phi1), s2 = std::sin(0.5 * p.phi2);
    return 2 * std::atan2(2 * s1 * s2, std::sin(0.5 * (p.phi2 - p.phi1)));
}

inline double s_of(double phi, Component c)
{
    if (c == Component::plus) {
        if (!(phi > 0 && phi < pi)) throw invalid_argument("s_of: plus component needs phi in (0, pi)");
        return std::log(std::tan(0.5 * phi) / std::sqrt(3.0));
    }
    if (!(phi > pi && phi < two_pi)) throw invalid_argument("s_of: minus component needs phi in (pi, 2pi)");
    return std::log(std::tan(0.5 * (two_pi - phi)) / std::sqrt(3.0));
}

inline CharCoords char_coords(const OmegaPoint& p)
{
    CharCoords cc;
    cc.comp = p.component();
    cc.Phi = phi_of(p);
    cc.T = t_of(p);
    cc.S = s_of(cc.Phi, cc.comp);
    return cc;
}

inline std::pair<double, double> flow_pair(Field f, double u, double x1, double x2)
{
    return {wrap(flow(f, u, x1)), wrap(flow(f, u, x2))};
}

/// Alternating choices are exactly (a, -a).
inline std::pair<double, double> enforce_alternating_init(std::pair<double, double> init)
{
    double a = 0.5 * (init.first - init.second);
    return {a, -a};
}

inline OmegaPoint s3_s1(const OmegaPoint& p) { return {wrap(-p.phi1), wrap(p.phi2 - p.phi1)}; }
inline OmegaPoint s3_s2(const OmegaPoint& p) { return {p.phi2, p.phi1}; }

struct F0Result {
    double value = 0;
    double abserr = 0;
    std::size_t evals = 0;
    bool near_singular = false;
    bool substituted = false;
    int status = 0;
};

struct SolverOptions {
    QuadOptions quad{};
    std::pair<double, double> init{0.0, 0.0};
    /// distance to the singular set below which results are flagged
    double guard = 1e-3;
    bool memo = true;
};

/// f0 through closed-form characteristic coordinates and adaptive quadrature.
class F0Solver {
public:
    F0Solver(std::shared_ptr<const InhomogeneityPair> inhom, SolverOptions o = {})
        : inhom_(std::move(inhom)), opt_(o), memo_(std::make_shared<Memo>()) {}

    const InhomogeneityPair& inhomogeneity() const { return *inhom_; }
    const SolverOptions& options() const { return opt_; }

    F0Result eval(const OmegaPoint& p) const
    {
        F0Result res;
        res.near_singular = p.singular_distance() < opt_.guard;
        const CharCoords cc = char_coords(p);
        const auto w = base_point(cc.comp);
        res.value = cc.comp == Component::plus ? opt_.init.first : opt_.init.second;
        const auto& F = *inhom_;
        auto fa = [&](double s) {
            auto [x1, x2] = flow_pair(Field::A, s, w[0], w[1]);
            return F.f_sharp(x1, x2);
        };
        auto fn = [&](double t) {
            auto [x1, x2] = flow_pair(Field::N, t, cc.Phi, two_pi - cc.Phi);
            return F.f_flat(x1, x2);
        };
        QuadResult qa = integrate_from_zero(fa, cc.S, opt_.quad);
        QuadResult qn = integrate_from_zero(fn, cc.T, opt_.quad);
        res.value += qa.value + qn.value;
        res.abserr = qa.abserr + qn.abserr;
        res.evals = qa.evals + qn.evals;
        res.substituted = qa.substituted || qn.substituted;
        res.status = qa.status ? qa.status : qn.status;
        return res;
    }

    double operator()(double p1, double p2) const
    {
        OmegaPoint p(p1, p2);
        if (!opt_.memo) return eval(p).value;
        const auto key = std::make_pair(std::bit_cast<std::uint64_t>(p.phi1), std::bit_cast<std::uint64_t>(p.phi2));
        {
            std::lock_guard<std::mutex> lock(memo_->mu);
            auto it = memo_->map.find(key);
            if (it != memo_->map.end()) return it->second;
        }
        double v = eval(p).value;
        std::lock_guard<std::mutex> lock(memo_->mu);
        if (memo_->map.size() > 2'000'000) memo_->map.clear();
        memo_->map.emplace(key, v);
        return v;
    }

private:
    struct KeyHash {
        std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const
        {
            return static_cast<std::size_t>(splitmix64(k.first ^ splitmix64(k.second)));
        }
    };
    struct Memo {
        std::mutex mu;
        std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, double, KeyHash> map;
    };
    std::shared_ptr<const InhomogeneityPair> inhom_;
    SolverOptions opt_;
    std::shared_ptr<Memo> memo_;
};

inline F0Result f0_eval(const OmegaPoint& p, std::shared_ptr<const InhomogeneityPair> inhom,
                        std::pair<double, double> init, const QuadOptions& q = {})
{
    SolverOptions o;
    o.init = init;
    o.quad = q;
    o.memo = false;
    return F0Solver(std::move(inhom), o).eval(p);
}

/// f0 without closed forms: flows, foot point and flow times all come from integrating
/// the characteristic ODEs and shooting.
struct BruteForceOptions {
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    double root_tol_bits = 50;
};

namespace detail {

using state2 = std::array<double, 2>;
using state3 = std::array<double, 3>;

inline double field_rhs(Field f, double x) { return field_coefficient(f, x); }

inline state2 ode_flow(Field f, state2 x, double time, const BruteForceOptions& o)
{
    using namespace boost::numeric::odeint;
    if (time == 0.0) return x;
    auto rhs = [f](const state2& y, state2& dy, double) {
        dy[0] = field_rhs(f, y[0]);
        dy[1] = field_rhs(f, y[1]);
    };
    auto stepper = make_controlled(o.abs_tol, o.rel_tol, runge_kutta_dopri5<state2>());
    integrate_adaptive(stepper, rhs, x, 0.0, time, time / 64);
    return x;
}

template <class Root>
double bracket_root(Root&& g, const BruteForceOptions& o)
{
    double lo = -1, hi = 1;
    double glo = g(lo), ghi = g(hi);
    for (int k = 0; k < 60 && glo * ghi > 0; ++k) {
        // g is increasing in both uses
        if (glo > 0) { hi = lo; ghi = glo; lo *= 2; glo = g(lo); }
        else { lo = hi; glo = ghi; hi *= 2; ghi = g(hi); }
    }
    if (glo * ghi > 0) throw domain_error("brute-force shooting: no bracket");
    if (glo == 0) return lo;
    if (ghi == 0) return hi;
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                               boost::math::tools::eps_tolerance<double>(static_cast<int>(o.root_tol_bits)), iters);
    return 0.5 * (r.first + r.second);
}

}

struct BruteForceResult {
    double value = 0;
    double Phi = 0, T = 0, S = 0;
};

inline BruteForceResult f0_eval_bruteforce(const OmegaPoint& p, const InhomogeneityPair& F,
                                           std::pair<double, double> init, const BruteForceOptions& o = {})
{
    using namespace boost::numeric::odeint;
    BruteForceResult out;
    const detail::state2 x{p.phi1, p.phi2};
    // foot point: flow p along N until it meets the antidiagonal
    double tau = detail::bracket_root([&](double t) {
        auto y = detail::ode_flow(Field::N, x, t, o);
        return y[0] + y[1] - two_pi;
    }, o);
    auto foot = detail::ode_flow(Field::N, x, tau, o);
    out.T = -tau;
    out.Phi = foot[0];
    const Component comp = p.component();
    const auto w = base_point(comp);
    out.S = detail::bracket_root([&](double s) {
        auto y = detail::ode_flow(Field::A, {w[0], w[1]}, s, o);
        // the A-flow pushes the first base coordinate towards pi from either side
        return comp == Component::plus ? y[0] - out.Phi : out.Phi - y[0];
    }, o);

    auto stepper = [&] { return make_controlled(o.abs_tol, o.rel_tol, runge_kutta_dopri5<detail::state3>()); };
    detail::state3 ya{w[0], w[1], 0.0};
    if (out.S != 0.0) {
        auto rhs = [&F](const detail::state3& y, detail::state3& dy, double) {
            dy[0] = std::sin(y[0]);
            dy[1] = std::sin(y[1]);
            dy[2] = F.f_sharp(y[0], y[1]);
        };
        integrate_adaptive(stepper(), rhs, ya, 0.0, out.S, out.S / 64);
    }
    detail::state3 yn{out.Phi, two_pi - out.Phi, 0.0};
    if (out.T != 0.0) {
        auto rhs = [&F](const detail::state3& y, detail::state3& dy, double) {
            dy[0] = 1 - std::cos(y[0]);
            dy[1] = 1 - std::cos(y[1]);
            dy[2] = F.f_flat(y[0], y[1]);
        };
        integrate_adaptive(stepper(), rhs, yn, 0.0, out.T, out.T / 64);
    }
    out.value = (comp == Component::plus ? init.first : init.second) + ya[2] + yn[2];
    return out;
}

/// f(x0, x1, x2) = f0(x1 - x0, x2 - x0)
inline Cochain lift_f(std::shared_ptr<const F0Solver> solver)
{
    return Cochain(3, [solver](const Pt* p) {
        return (*solver)(wrap(p[1].th - p[0].th), wrap(p[2].th - p[0].th));
    }, std::nullopt, "f");
}

/// P_c(f) = I(c) + df
inline Cochain primitive(const Cochain& i_of_c, const Cochain& f)
{
    if (i_of_c.arity != 4 || f.arity != 3) throw invalid_argument("primitive: arity mismatch");
    Cochain p = i_of_c + differential(f);
    p.name = "P";
    return p;
}

inline Cochain primitive(const Cochain& c, const QuadratureGrid& grid, const Cochain& f)
{
    return primitive(integrate_first(c, grid), f);
}

}
