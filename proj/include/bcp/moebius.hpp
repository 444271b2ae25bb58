#pragma once

#include <bcp/angle.hpp>
#include <bcp/errors.hpp>

#include <array>
#include <complex>
#include <ostream>

namespace bcp {

/// [g_{a,b}] in PU(1,1) = SU(1,1)/{+-1}, acting by z -> (a z + b)/(conj(b) z + conj(a)).
template<typename T>
struct basic_group_element {
    using complex = std::complex<T>;

    complex a{1}, b{0};

    basic_group_element() = default;
    basic_group_element(complex a_, complex b_) : a(a_), b(b_) { normalize(); }

    static basic_group_element identity() { return {}; }

    T det() const { return std::norm(a) - std::norm(b); }

    void normalize()
    {
        T d = det();
        if (!(d > 0) || !std::isfinite(d)) throw invalid_argument("group element: |a|^2 - |b|^2 must be positive");
        T k = 1 / std::sqrt(d);
        a *= k;
        b *= k;
        const std::array<T, 4> comp{a.real(), a.imag(), b.real(), b.imag()};
        for (T x : comp) {
            if (std::fabs(x) > T(1e-12)) {
                if (x < 0) { a = -a; b = -b; }
                break;
            }
        }
    }

    complex apply(complex z) const { return (a * z + b) / (std::conj(b) * z + std::conj(a)); }

    T act(T theta) const { return wrap(std::arg(apply(std::polar(T(1), theta)))); }

    bool approx_equal(const basic_group_element& o, T tol = T(1e-10)) const
    {
        auto close = [&](const basic_group_element& h) {
            return std::abs(a - h.a) <= tol && std::abs(b - h.b) <= tol;
        };
        return close(o) || close(basic_group_element(-o.a, -o.b));
    }

    friend std::ostream& operator<<(std::ostream& os, const basic_group_element& g)
    { return os << "g(" << g.a << ", " << g.b << ")"; }
};

using GroupElement = basic_group_element<double>;

namespace detail {
inline void require_finite(double x, const char* what)
{
    if (!std::isfinite(x)) throw invalid_argument(std::string(what) + ": parameter must be finite");
}
}

inline GroupElement make_k(double xi)
{
    detail::require_finite(xi, "make_k");
    return {std::polar(1.0, 0.5 * xi), 0.0};
}

inline GroupElement make_a(double s)
{
    detail::require_finite(s, "make_a");
    return {std::cosh(-0.5 * s), std::sinh(-0.5 * s)};
}

inline GroupElement make_n(double t)
{
    detail::require_finite(t, "make_n");
    return {{1.0, 0.5 * t}, {0.0, -0.5 * t}};
}

inline GroupElement compose(const GroupElement& g, const GroupElement& h)
{
    // [[a,b],[b*,a*]] [[c,d],[d*,c*]] keeps the SU(1,1) shape
    return {g.a * h.a + g.b * std::conj(h.b), g.a * h.b + g.b * std::conj(h.a)};
}

inline GroupElement inverse(const GroupElement& g) { return {std::conj(g.a), -g.b}; }

inline GroupElement operator*(const GroupElement& g, const GroupElement& h) { return compose(g, h); }

inline double act_angle(const GroupElement& g, double theta) { return g.act(theta); }

/// k_xi a_s n_t
inline GroupElement make_kan(double xi, double s, double t) { return make_k(xi) * make_a(s) * make_n(t); }

/// a_s.theta via tan(theta'/2) = e^s tan(theta/2).
inline double flow_a(double s, double theta)
{
    double h = 0.5 * wrap(theta);
    return wrap(2.0 * std::atan2(std::exp(s) * std::sin(h), std::cos(h)));
}

/// n_t.theta via cot(theta'/2) = cot(theta/2) - t.
inline double flow_n(double t, double theta)
{
    double h = 0.5 * wrap(theta);
    double sh = std::sin(h);
    return wrap(2.0 * std::atan2(sh, std::cos(h) - t * sh));
}

/// (w0,w1;w2,w3), real for concyclic points.
inline std::complex<double> cross_ratio_complex(std::complex<double> w0, std::complex<double> w1,
                                                std::complex<double> w2, std::complex<double> w3)
{
    auto den = (w1 - w2) * (w0 - w3);
    if (std::abs(den) <= 1e-300) throw degenerate_configuration("cross_ratio: coincident points");
    return (w0 - w2) * (w1 - w3) / den;
}

inline double cross_ratio(std::complex<double> w0, std::complex<double> w1,
                          std::complex<double> w2, std::complex<double> w3)
{
    return cross_ratio_complex(w0, w1, w2, w3).real();
}

inline std::complex<double> cayley(double x)
{
    const std::complex<double> i(0, 1);
    return (x - i) / (x + i);
}

inline std::complex<double> on_circle(double theta) { return std::polar(1.0, theta); }

}
