#pragma once

// Curve data for the orbit, path and fundamental-domain pictures, and a cached f0 grid for plots.

#include <bcp/characteristics.hpp>
#include <bcp/parallel.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace bcp {

struct CurvePoint {
    int id;
    double u;
    double phi1, phi2;
};

/// log|tan(phi1/2)| - log|tan(phi2/2)|, conserved along A-orbits in Omega
inline double a_invariant(double p1, double p2)
{
    return std::log(std::fabs(std::tan(0.5 * p1))) - std::log(std::fabs(std::tan(0.5 * p2)));
}

/// cot(phi1/2) - cot(phi2/2), conserved along N-orbits in Omega
inline double n_invariant(double p1, double p2) { return 1 / std::tan(0.5 * p1) - 1 / std::tan(0.5 * p2); }

/// Orbits of the diagonal flow `f` through `starts`, for u in [-u_max, u_max].
inline std::vector<CurvePoint> orbit_curves(Field f, const std::vector<std::array<double, 2>>& starts, double u_max, int points)
{
    std::vector<CurvePoint> out;
    for (std::size_t k = 0; k < starts.size(); ++k)
        for (int i = 0; i < points; ++i) {
            const double u = -u_max + 2 * u_max * i / (points - 1);
            auto [a, b] = flow_pair(f, u, starts[k][0], starts[k][1]);
            out.push_back({static_cast<int>(k), u, a, b});
        }
    return out;
}

/// A-orbits through points of the probe segment phi1 = 2pi/3, both components.
inline std::vector<CurvePoint> a_orbits(int count = 8, int points = 201, double s_max = 6)
{
    std::vector<std::array<double, 2>> starts;
    for (int k = 0; k < count; ++k) starts.push_back({2 * pi / 3, two_pi * (k + 0.5) / count});
    return orbit_curves(Field::A, starts, s_max, points);
}

/// N-orbits through antidiagonal points, both components.
inline std::vector<CurvePoint> n_orbits(int count = 8, int points = 201, double t_max = 20)
{
    std::vector<std::array<double, 2>> starts;
    for (int k = 0; k < count; ++k) {
        const double phi = two_pi * (k + 0.5) / count;
        if (std::fabs(phi - pi) < 1e-9) continue;
        starts.push_back({phi, two_pi - phi});
    }
    return orbit_curves(Field::N, starts, t_max, points);
}

/// Path from the base point along the A-orbit to (Phi, 2pi - Phi), then along the N-orbit to p.
/// Segment id 0 is the A leg, 1 the N leg; u is the flow time.
inline std::vector<CurvePoint> characteristic_path(const OmegaPoint& p, int points = 101)
{
    const CharCoords cc = char_coords(p);
    const auto w = base_point(cc.comp);
    std::vector<CurvePoint> out;
    for (int i = 0; i < points; ++i) {
        const double s = cc.S * i / (points - 1);
        auto [a, b] = flow_pair(Field::A, s, w[0], w[1]);
        out.push_back({0, s, a, b});
    }
    for (int i = 0; i < points; ++i) {
        const double t = cc.T * i / (points - 1);
        auto [a, b] = flow_pair(Field::N, t, cc.Phi, two_pi - cc.Phi);
        out.push_back({1, t, a, b});
    }
    // land exactly on the requested point
    out.back().phi1 = p.phi1;
    out.back().phi2 = p.phi2;
    return out;
}

/// The six elements of S3 acting on Omega, built from s1 and s2.
inline std::array<std::function<OmegaPoint(const OmegaPoint&)>, 6> s3_elements()
{
    return {
        [](const OmegaPoint& q) { return q; },
        [](const OmegaPoint& q) { return s3_s1(q); },
        [](const OmegaPoint& q) { return s3_s2(q); },
        [](const OmegaPoint& q) { return s3_s1(s3_s2(q)); },
        [](const OmegaPoint& q) { return s3_s2(s3_s1(q)); },
        [](const OmegaPoint& q) { return s3_s1(s3_s2(s3_s1(q))); },
    };
}

/// Triangle (0,0), (2pi,2pi), omega+ of Omega+: the cyclic rotation permutes the three
/// sub-triangles at omega+ and the transpositions swap the components, so one sub-triangle
/// is a fundamental domain of the whole S3.
inline std::array<std::array<double, 2>, 3> fundamental_domain()
{
    return {{{0.0, 0.0}, {two_pi, two_pi}, {omega_plus[0], omega_plus[1]}}};
}

inline bool in_fundamental_domain(const OmegaPoint& q)
{
    const auto v = fundamental_domain();
    auto cross = [](const std::array<double, 2>& a, const std::array<double, 2>& b, double x, double y) {
        return (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
    };
    const double d0 = cross(v[0], v[1], q.phi1, q.phi2), d1 = cross(v[1], v[2], q.phi1, q.phi2), d2 = cross(v[2], v[0], q.phi1, q.phi2);
    return (d0 >= 0 && d1 >= 0 && d2 >= 0) || (d0 <= 0 && d1 <= 0 && d2 <= 0);
}

/// Boundary of the fundamental domain (id -1) and the S3-images of the probe segments
/// xi -> (2pi/3, xi) (id 0) and xi -> (4pi/3, xi) (id 1) that fall inside it; u is xi.
inline std::vector<CurvePoint> fundamental_domain_curves(int points = 400)
{
    std::vector<CurvePoint> out;
    const auto v = fundamental_domain();
    for (int e = 0; e < 3; ++e)
        for (int i = 0; i <= points / 4; ++i) {
            const double u = static_cast<double>(i) / (points / 4);
            const auto& a = v[e];
            const auto& b = v[(e + 1) % 3];
            out.push_back({-1, e + u, a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])});
        }
    const auto g = s3_elements();
    for (int seg = 0; seg < 2; ++seg) {
        const double x0 = seg == 0 ? 2 * pi / 3 : 4 * pi / 3;
        for (int i = 0; i < points; ++i) {
            const double xi = two_pi * (i + 0.5) / points;
            if (std::fabs(xi - x0) < 1e-12) continue;
            const OmegaPoint q(x0, xi);
            for (const auto& s : g) {
                const OmegaPoint r = s(q);
                if (in_fundamental_domain(r)) out.push_back({seg, xi, r.phi1, r.phi2});
            }
        }
    }
    return out;
}

/// f0 tabulated at the cell centres of a g x g grid on (0, 2pi)^2 and interpolated
/// barycentrically on the two triangles of each cell. Plotting only; checks use exact f0.
class F0GridCache {
public:
    F0GridCache(const std::function<double(double, double)>& f0, int g) : g_(g), v_(static_cast<std::size_t>(g) * g)
    {
        if (g < 2) throw invalid_argument("F0GridCache: grid too small");
        auto vals = parallel_map(v_.size(), [&](std::size_t k) {
            const double a = centre(static_cast<int>(k / g_)), b = centre(static_cast<int>(k % g_));
            return a == b ? NAN : f0(a, b);
        });
        v_ = std::move(vals);
    }

    int size() const { return g_; }

    /// NaN outside the hull of the centres or where a vertex sits on the diagonal
    double operator()(double p1, double p2) const
    {
        const double h = two_pi / g_;
        const double x = p1 / h - 0.5, y = p2 / h - 0.5;
        const int i = static_cast<int>(std::floor(x)), j = static_cast<int>(std::floor(y));
        if (i < 0 || j < 0 || i >= g_ - 1 || j >= g_ - 1) return NAN;
        const double fx = x - i, fy = y - j;
        const double v00 = at(i, j), v10 = at(i + 1, j), v01 = at(i, j + 1), v11 = at(i + 1, j + 1);
        if (fx >= fy) return v00 + fx * (v10 - v00) + fy * (v11 - v10);
        return v00 + fy * (v01 - v00) + fx * (v11 - v01);
    }

private:
    double centre(int k) const { return two_pi * (k + 0.5) / g_; }
    double at(int i, int j) const { return v_[static_cast<std::size_t>(i) * g_ + j]; }
    int g_;
    std::vector<double> v_;
};

}
