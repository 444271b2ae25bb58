#include <bcp/moebius.hpp>

#include <boost/numeric/odeint.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace bcp;

namespace {

// independent: integrate d theta/du = lambda(theta) with RK-Dopri
double ode_flow(double (*lam)(double), double u, double theta)
{
    namespace ode = boost::numeric::odeint;
    double x = theta;
    auto rhs = [lam](const double& y, double& dy, double) { dy = lam(y); };
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<double>>(1e-13, 1e-13), rhs, x, 0.0, u, u / 100);
    return wrap(x);
}

double lam_a(double t) { return std::sin(t); }
double lam_n(double t) { return 1 - std::cos(t); }

}

TEST(Moebius, FlowNExample) { EXPECT_NEAR(flow_n(1.0, pi / 2), pi, 1e-14); }

TEST(Moebius, FlowsMatchOdeIntegration)
{
    for (double th : {0.3, 1.7, 2.9, 4.0, 5.5})
        for (double u : {-1.3, 0.4, 2.0}) {
            EXPECT_NEAR(flow_a(u, th), ode_flow(lam_a, u, th), 1e-9) << th << " " << u;
            EXPECT_NEAR(flow_n(u, th), ode_flow(lam_n, u, th), 1e-9) << th << " " << u;
        }
}

TEST(Moebius, GroupActionMatchesFlows)
{
    for (double th : {0.1, 1.0, 3.0, 6.0}) {
        EXPECT_NEAR(act_angle(make_k(0.7), th), wrap(th + 0.7), 1e-13);
        EXPECT_NEAR(circ_dist(act_angle(make_a(1.2), th), flow_a(1.2, th)), 0, 1e-12);
        EXPECT_NEAR(circ_dist(act_angle(make_n(-0.8), th), flow_n(-0.8, th)), 0, 1e-12);
    }
}

TEST(Moebius, ActionIsHomomorphism)
{
    GroupElement g = make_kan(0.4, -1.1, 1.7), h = make_kan(-2.0, 0.6, -0.3);
    for (double th : {0.2, 2.2, 4.4}) {
        EXPECT_NEAR(circ_dist((g * h).act(th), g.act(h.act(th))), 0, 1e-12);
        EXPECT_NEAR(circ_dist(inverse(g).act(g.act(th)), th), 0, 1e-12);
    }
    EXPECT_TRUE((g * inverse(g)).approx_equal(GroupElement::identity()));
}

TEST(Moebius, NormalizationAndSign)
{
    GroupElement g({2.0, 0.0}, {1.0, 0.0});
    EXPECT_NEAR(g.det(), 1.0, 1e-14);
    GroupElement m({-2.0, 0.0}, {-1.0, 0.0});
    EXPECT_TRUE(g.approx_equal(m));
    EXPECT_GT(m.a.real(), 0);
    EXPECT_THROW(GroupElement({1.0, 0.0}, {1.0, 0.0}), invalid_argument);
    EXPECT_THROW(make_a(NAN), invalid_argument);
}

TEST(Moebius, CayleyCarriesRealCrossRatio)
{
    const double x0 = -1.5, x1 = 0.25, x2 = 2.0, x3 = 7.0;
    const double real_cr = (x0 - x2) * (x1 - x3) / ((x1 - x2) * (x0 - x3));
    EXPECT_NEAR(cross_ratio(cayley(x0), cayley(x1), cayley(x2), cayley(x3)), real_cr, 1e-12);
    EXPECT_NEAR(std::abs(cayley(3.0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(cayley(0.0) - std::complex<double>(-1, 0)), 0, 1e-15);
}

TEST(Moebius, CrossRatioIsInvariant)
{
    GroupElement g = make_kan(1.0, 0.5, -1.5);
    const double t[4] = {0.3, 1.9, 3.3, 5.0};
    double a = cross_ratio(on_circle(t[0]), on_circle(t[1]), on_circle(t[2]), on_circle(t[3]));
    double b = cross_ratio(on_circle(g.act(t[0])), on_circle(g.act(t[1])), on_circle(g.act(t[2])), on_circle(g.act(t[3])));
    EXPECT_NEAR(a, b, 1e-11);
    EXPECT_THROW(cross_ratio(on_circle(1), on_circle(1), on_circle(1), on_circle(1)), degenerate_configuration);
}
