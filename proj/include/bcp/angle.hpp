#pragma once

#include <cmath>
#include <numbers>

namespace bcp {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduce into [0, 2pi); values within 1e-14 of 2pi snap to 0.
inline double wrap(double x)
{
    double r = x - two_pi * std::floor(x / two_pi);
    if (r >= two_pi - 1e-14 || r < 0.0) r = 0.0;
    return r;
}

/// Shortest arc length between two angles.
inline double circ_dist(double a, double b)
{
    double d = std::fabs(wrap(a - b));
    return std::fmin(d, two_pi - d);
}

/// An angle together with sin/cos of its half, so chord lengths cost a few flops.
struct Pt {
    double th = 0, s = 0, c = 1;

    Pt() = default;
    explicit Pt(double x) : th(wrap(x)) { s = std::sin(0.5 * th); c = std::cos(0.5 * th); }
};

/// |e^{ia} - e^{ib}| / 2
inline double half_chord(const Pt& a, const Pt& b) { return std::fabs(a.s * b.c - a.c * b.s); }

}
