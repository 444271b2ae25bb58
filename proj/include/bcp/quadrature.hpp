#pragma once

#include <bcp/errors.hpp>

#include <boost/math/quadrature/gauss.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>

namespace bcp {

template <int Points = 16, class F>
double gauss_legendre(F&& f, double a, double b)
{
    return boost::math::quadrature::gauss<double, Points>::integrate(f, a, b);
}

struct QuadResult {
    double value = 0;
    double abserr = 0;
    int status = 0;
    std::size_t evals = 0;
    bool substituted = false;
};

struct QuadOptions {
    double epsabs = 1e-7;
    std::size_t limit = 200;
    /// |upper| beyond which t = tan(u) compactifies the interval
    double tan_threshold = 50.0;
};

namespace detail {

inline void quiet_gsl()
{
    static const bool once = [] { gsl_set_error_handler_off(); return true; }();
    (void)once;
}

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

template <class F>
struct Thunk {
    F* f;
    std::size_t evals = 0;
    static double call(double x, void* p)
    {
        auto* t = static_cast<Thunk*>(p);
        ++t->evals;
        return (*t->f)(x);
    }
};

template <class F>
QuadResult qag_raw(F& f, double a, double b, const QuadOptions& o)
{
    quiet_gsl();
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(gsl_integration_workspace_alloc(o.limit));
    Thunk<F> th{&f};
    gsl_function gf{&Thunk<F>::call, &th};
    QuadResult r;
    r.status = gsl_integration_qag(&gf, a, b, o.epsabs, 0.0, o.limit, GSL_INTEG_GAUSS21, ws.get(), &r.value, &r.abserr);
    r.evals = th.evals;
    return r;
}

}

/// Adaptive Gauss-Kronrod (21 point) on [0, upper] with absolute tolerance.
template <class F>
QuadResult integrate_from_zero(F&& f, double upper, const QuadOptions& o = {})
{
    if (upper == 0.0) return {};
    if (!std::isfinite(upper)) throw invalid_argument("integrate_from_zero: non-finite bound");
    if (std::fabs(upper) <= o.tan_threshold) return detail::qag_raw(f, 0.0, upper, o);
    auto g = [&f](double u) {
        double t = std::tan(u);
        return f(t) * (1.0 + t * t);
    };
    QuadResult r = detail::qag_raw(g, 0.0, std::atan(upper), o);
    r.substituted = true;
    return r;
}

}
