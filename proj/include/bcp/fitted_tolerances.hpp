#pragma once

// Generated by `bcp convergence`; see tolerance.hpp.
// study seed 20261018; n in {32, 48, 64}, h in {4, 2, 1} x plan step, M in {128, 256, 512}

#include <array>

namespace bcp {

inline constexpr std::array<FittedEntry, 20> fitted_tolerances{{
    {"kernel_rotation", Family::piecewise, {1.000e-12, 1.658e-14, 0.000e+00, 2.075e-13, 3}},
    {"I_flow", Family::piecewise, {1.693e-12, 3.242e-09, 0.000e+00, 4.058e-08, 3}},
    {"dcheck_identity", Family::piecewise, {1.554e-12, 1.948e-09, 0.000e+00, 2.439e-08, 3}},
    {"frobenius", Family::piecewise, {1.973e-12, 1.898e-09, 0.000e+00, 2.011e-08, 3}},
    {"ode_residual", Family::piecewise, {2.068e-11, 6.757e-11, 0.000e+00, 0.000e+00, 3}},
    {"pde_residual", Family::piecewise, {6.509e-08, 2.604e-05, 0.000e+00, 5.017e-04, 3}},
    {"fsharp_antidiagonal", Family::piecewise, {8.378e-11, 2.019e-15, 0.000e+00, 1.361e-14, 3}},
    {"inhomogeneity_reflection", Family::piecewise, {1.006e-10, 0.000e+00, 0.000e+00, 4.235e-22, 3}},
    {"f0_alternation", Family::piecewise, {1.381e-11, 0.000e+00, 0.000e+00, 4.661e-04, 3}},
    {"f0_antidiagonal", Family::piecewise, {2.127e-11, 0.000e+00, 0.000e+00, 7.998e-14, 3}},
    {"kernel_rotation", Family::smooth, {5.711e-12, 3.188e+00, 0.000e+00, 0.000e+00, 3}},
    {"I_flow", Family::smooth, {4.158e-11, 9.957e-02, 0.000e+00, 0.000e+00, 3}},
    {"dcheck_identity", Family::smooth, {2.360e-12, 2.970e+00, 1.727e+02, 4.526e-01, 3}},
    {"frobenius", Family::smooth, {1.000e-12, 0.000e+00, 0.000e+00, 0.000e+00, 3}},
    {"ode_residual", Family::smooth, {1.084e-11, 0.000e+00, 0.000e+00, 3.249e-10, 3}},
    {"pde_residual", Family::smooth, {4.322e-11, 1.455e-01, 0.000e+00, 6.409e-01, 3}},
    {"fsharp_antidiagonal", Family::smooth, {1.061e-10, 2.248e-11, 0.000e+00, 2.975e-11, 3}},
    {"inhomogeneity_reflection", Family::smooth, {1.649e-10, 0.000e+00, 0.000e+00, 4.780e-10, 3}},
    {"f0_alternation", Family::smooth, {3.273e-11, 1.778e-01, 0.000e+00, 0.000e+00, 3}},
    {"f0_antidiagonal", Family::smooth, {2.846e-11, 2.429e-12, 0.000e+00, 1.523e-12, 3}},
}};

}
