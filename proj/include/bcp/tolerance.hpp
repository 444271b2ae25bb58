#pragma once

// Combined tolerance model tol = safety * (floor + a / N^2 + b h^2 + c / M^2).
// The constants are produced by `bcp convergence` on a study seed that no check uses
// and are pasted into fitted_tolerances.hpp.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>

namespace bcp {

enum class Family { zero, piecewise, smooth };

inline const char* family_name(Family f)
{
    switch (f) {
    case Family::zero: return "zero";
    case Family::piecewise: return "piecewise";
    case Family::smooth: return "smooth";
    }
    return "?";
}

struct ToleranceModel {
    double floor = 1e-12;
    double a = 0;
    double b = 0;
    double c = 0;
    double safety = 3;

    double operator()(int n, double h, int m) const
    {
        const double nn = static_cast<double>(n), mm = static_cast<double>(m);
        return safety * (floor + a / (nn * nn) + b * h * h + c / (mm * mm));
    }
};

struct FittedEntry {
    const char* check_id;
    Family family;
    ToleranceModel model;
};

}

#include <bcp/fitted_tolerances.hpp>

namespace bcp {

/// Frozen model for (check, family); the zero family is held to roundoff.
inline ToleranceModel fitted_tolerance(std::string_view id, Family fam)
{
    if (fam == Family::zero) return {1e-12, 0, 0, 0, 1};
    for (const auto& e : fitted_tolerances)
        if (e.family == fam && id == e.check_id) return e.model;
    return {};
}

}
