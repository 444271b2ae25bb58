#include <bcp/characteristics.hpp>
#include <bcp/figures.hpp>
#include <bcp/pipeline.hpp>
#include <bcp/zoo.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace bcp;

namespace {

const Pipeline& cup_pipeline()
{
    static Pipeline p = [] {
        Cochain c = cup_orientation();
        PipelineOptions o = default_pipeline_options(c);
        o.solver.init = {0.25, -0.25};
        return build_pipeline(c, o);
    }();
    return p;
}

}

TEST(Characteristics, CoordinateExamples)
{
    OmegaPoint p(pi / 2, pi);
    EXPECT_NEAR(phi_of(p), 2 * std::atan(2.0), 1e-14);
    EXPECT_NEAR(t_of(p), -0.5, 1e-15);
    EXPECT_NEAR(s_of(pi / 2, Component::plus), -0.5493061443340549, 1e-14);
    EXPECT_NEAR(s_of(3 * pi / 2, Component::minus), -0.5493061443340549, 1e-14);
    EXPECT_NEAR(s_of(2 * pi / 3, Component::plus), 0.0, 1e-14);
    EXPECT_THROW(s_of(4.0, Component::plus), invalid_argument);
}

TEST(Characteristics, AlternatingInit)
{
    auto [a, b] = enforce_alternating_init({2.0, 0.0});
    EXPECT_EQ(a, 1.0);
    EXPECT_EQ(b, -1.0);
}

TEST(Characteristics, CoordinatesReachThePoint)
{
    for (auto [x, y] : {std::pair{0.5, 1.0}, {1.0, 5.0}, {4.0, 2.0}, {6.0, 0.3}, {3.0, 3.3}}) {
        OmegaPoint p(x, y);
        CharCoords cc = char_coords(p);
        auto w = base_point(cc.comp);
        auto [a1, a2] = flow_pair(Field::A, cc.S, w[0], w[1]);
        EXPECT_NEAR(a1, cc.Phi, 1e-10);
        EXPECT_NEAR(a2, two_pi - cc.Phi, 1e-10);
        auto [n1, n2] = flow_pair(Field::N, cc.T, a1, a2);
        EXPECT_NEAR(n1, x, 1e-9);
        EXPECT_NEAR(n2, y, 1e-9);
    }
}

TEST(Characteristics, OmegaRejectsSingularPoints)
{
    EXPECT_THROW(OmegaPoint(1.0, 1.0), domain_error);
    EXPECT_THROW(OmegaPoint(0.0, 1.0), domain_error);
    EXPECT_THROW(OmegaPoint(two_pi, 1.0), domain_error);
    EXPECT_THROW(OmegaPoint(NAN, 1.0), invalid_argument);
}

TEST(Characteristics, SolverMatchesBruteForce)
{
    const auto& p = cup_pipeline();
    for (auto [x, y] : {std::pair{1.0, 2.5}, {4.5, 1.5}, {0.7, 5.2}}) {
        OmegaPoint q(x, y);
        double closed = p.solver->eval(q).value;
        double brute = f0_eval_bruteforce(q, *p.inhom, p.options.solver.init).value;
        EXPECT_NEAR(closed, brute, 1e-6) << x << " " << y;
    }
}

TEST(Characteristics, F0IsAntisymmetricAboutTheAntidiagonal)
{
    // up to the initial value, which the reflection keeps
    const auto& p = cup_pipeline();
    for (auto [x, y] : {std::pair{1.0, 2.5}, {4.5, 1.5}, {0.7, 5.2}, {2.0, 3.0}}) {
        const double a = x < y ? 0.25 : -0.25;
        EXPECT_NEAR(p.f0(x, y) - a, -(p.f0(two_pi - y, two_pi - x) - a), 1e-8) << x << " " << y;
    }
    EXPECT_NEAR(p.f0(1.0, two_pi - 1.0), 0.25, 1e-8);
}

TEST(Characteristics, PrimitiveHitsTheCocycle)
{
    const auto& p = cup_pipeline();
    Cochain dP = differential(p.P);
    auto xs = random_tuples(CounterRng(11, "prim"), 10, 5, 0.05);
    for (const auto& x : xs) EXPECT_NEAR(dP(x), p.c(x), 5e-2);
}

TEST(Figures, OrbitInvariants)
{
    for (const auto& q : a_orbits(6, 101, 4)) {
        if (std::min({q.phi1, q.phi2, two_pi - q.phi1, two_pi - q.phi2}) < 1e-3) continue;
        const auto& s = a_orbits(6, 101, 4)[q.id * 101 + 50];
        EXPECT_NEAR(a_invariant(q.phi1, q.phi2), a_invariant(s.phi1, s.phi2), 1e-8);
    }
    for (const auto& q : n_orbits(6, 101, 10)) {
        if (std::min({q.phi1, q.phi2, two_pi - q.phi1, two_pi - q.phi2}) < 1e-3) continue;
        const auto& s = n_orbits(6, 101, 10)[q.id * 101 + 50];
        EXPECT_NEAR(n_invariant(q.phi1, q.phi2), n_invariant(s.phi1, s.phi2), 1e-8);
    }
}

TEST(Figures, PathEndpoints)
{
    OmegaPoint p(pi / 2, pi);
    auto path = characteristic_path(p, 51);
    ASSERT_EQ(path.size(), 102u);
    EXPECT_NEAR(path.front().phi1, omega_plus[0], 1e-14);
    EXPECT_NEAR(path.front().phi2, omega_plus[1], 1e-14);
    // the A leg ends on the antidiagonal at Phi
    EXPECT_NEAR(path[50].phi1, 2 * std::atan(2.0), 1e-10);
    EXPECT_NEAR(path[50].phi1 + path[50].phi2, two_pi, 1e-10);
    EXPECT_EQ(path[51].id, 1);
    EXPECT_NEAR(path[100].phi1, flow_n(-0.5 * 49 / 50, path[50].phi1), 1e-10);
    EXPECT_NEAR(path.back().phi1, pi / 2, 1e-10);
    EXPECT_NEAR(path.back().phi2, pi, 1e-10);
}

TEST(Figures, FundamentalDomainMeetsEveryOrbit)
{
    CounterRng rng(3, "fd");
    const auto g = s3_elements();
    for (int i = 0; i < 200; ++i) {
        double a = rng.uniform(i, 0, 0.01, two_pi - 0.01), b = rng.uniform(i, 1, 0.01, two_pi - 0.01);
        if (std::fabs(a - b) < 0.01) continue;
        OmegaPoint q(a, b);
        int hits = 0;
        for (const auto& s : g) hits += in_fundamental_domain(s(q));
        EXPECT_GE(hits, 1) << a << " " << b;
    }
}
