#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hypermin/barrier.hpp"
#include "support/oracles.hpp"

using namespace hypermin;

TEST_CASE("ruled mean curvature formula") {
    // the sine profile solves the untilted equation
    for (double v = 0.3; v < M_PI; v += 0.4) {
        const double T = 4.0;
        const double H =
            ruled_mean_curvature(T * std::sin(v), T * std::cos(v), -T * std::sin(v), 0.0);
        CHECK(std::abs(H) < 1e-14);
    }
    // constant profile: H = -1/2
    CHECK(ruled_mean_curvature(0.7, 0.0, 0.0, 0.0) == Catch::Approx(-0.5).margin(1e-14));
    // a point on the T=2, lambda=1 solution at the profile maximum
    CHECK(std::abs(ruled_mean_curvature(1.0, 0.0, -0.5, 1.0)) < 1e-14);
    CHECK_THROWS_AS(ruled_mean_curvature(0.0, 1.0, 0.0, 0.5), std::domain_error);
}

TEST_CASE("integrate_alpha: analytic branch at lambda = 0") {
    const BarrierCurve c = integrate_alpha({0.0, 5.0, 0.0}, 1e-3);
    CHECK(c.v0 == Catch::Approx(M_PI).margin(1e-12));
    for (const auto& s : c.samples) {
        CHECK(s.alpha == Catch::Approx(5.0 * std::sin(s.v)).margin(1e-12));
    }
    // the numeric route through the same ODE reproduces it
    const auto ode = oracles::integrate_sine_ode(5.0, 1e-3);
    CHECK(ode.v0 == Catch::Approx(M_PI).margin(1e-8));
    for (std::size_t i = 0; i < ode.samples.size(); i += 50) {
        CHECK(ode.samples[i][1] ==
              Catch::Approx(5.0 * std::sin(ode.samples[i][0])).margin(1e-6));
    }
}

TEST_CASE("integrate_alpha: tilted branch") {
    SECTION("maximum value") {
        const BarrierCurve c = integrate_alpha({2.0, 5.0, 0.0}, 1e-3);
        CHECK(c.max_alpha() == Catch::Approx(1.0).margin(1e-8));  // sqrt(T-1)/lambda
    }
    SECTION("first integral conservation") {
        const BarrierCurve c = integrate_alpha({1.0, 10.0, 0.0}, 1e-3);
        CHECK(c.max_first_integral_residual() <= 1e-8);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(integrate_alpha({1.0, 0.5, 0.0}, 1e-3), std::domain_error);
        CHECK_THROWS_AS(integrate_alpha({1.0, 2.0, 0.0}, -1.0), std::domain_error);
    }
}

TEST_CASE("integrator order: halving the step cuts the residual by >= 4x") {
    const double r1 = integrate_alpha({1.0, 10.0, 0.0}, 0.02).max_first_integral_residual();
    const double r2 = integrate_alpha({1.0, 10.0, 0.0}, 0.01).max_first_integral_residual();
    CHECK(r1 / r2 >= 4.0);
}

TEST_CASE("curve invariants: concavity, symmetry, pointwise minimality") {
    const BarrierCurve c = integrate_alpha({1.0, 10.0, 0.0}, 1e-3);
    for (const auto& s : c.samples) {
        if (s.alpha > 0.0) CHECK(alpha_pp_ode(s.alpha, s.alpha_prime, 1.0) < 0.0);
    }
    for (double v = 0.05; v < 0.5 * c.v0; v += 0.07) {
        CHECK(c.alpha_at(v) == Catch::Approx(c.alpha_at(c.v0 - v)).margin(1e-7));
    }
    CHECK(c.max_mean_curvature_residual() <= 1e-8);
}

TEST_CASE("v0_of_T: quadrature vs ODE endpoint") {
    const std::pair<double, double> cases[] = {{0.5, 2.0}, {1.0, 10.0}, {2.0, 100.0}};
    for (auto [lambda, T] : cases) {
        const double vq = v0_of_T(lambda, T);
        const double vi = integrate_alpha({lambda, T, 0.0}, 5e-4).v0;
        CHECK(vq == Catch::Approx(vi).margin(1e-6));
    }
}

TEST_CASE("v0_of_T against the unsubstituted improper integral") {
    CHECK(v0_of_T(0.5, 2.0) == Catch::Approx(oracles::v0_quadrature_raw(0.5, 2.0)).margin(1e-4));
    CHECK(v0_of_T(1.0, 10.0) == Catch::Approx(oracles::v0_quadrature_raw(1.0, 10.0)).margin(1e-4));
}

TEST_CASE("v0_of_T behavior in T and lambda") {
    // v0 depends on T alone and grows with it; as T -> 1+ it tends to pi.
    double prev = 0.0;
    for (double T : {1.5, 2.0, 4.0, 10.0, 50.0}) {
        const double v = v0_of_T(1.0, T);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(v0_of_T(0.5, 7.0) == Catch::Approx(v0_of_T(2.0, 7.0)).margin(1e-12));
    CHECK(v0_of_T(0.7, 1.0 + 1e-9) == Catch::Approx(M_PI).margin(1e-6));
    CHECK_THROWS_AS(v0_of_T(1.0, 0.9), std::domain_error);
}

TEST_CASE("compact convergence gap") {
    SECTION("bound at T = 100") {
        const double gap = compact_convergence_gap(1.0, 100.0, 1.0);
        CHECK(gap <= convergence_gap_bound(1.0, 100.0, 1.0) + 1e-12);
        CHECK(convergence_gap_bound(1.0, 100.0, 1.0) == Catch::Approx(1.0 / 7.0).margin(1e-12));
        CHECK(gap > 0.0);
    }
    SECTION("ladder decreases toward zero") {
        double prev = 1e9;
        for (double T : {1e2, 1e3, 1e4}) {
            const double g = compact_convergence_gap(1.0, T, 1.0);
            CHECK(g < prev);
            CHECK(g <= convergence_gap_bound(1.0, T, 1.0) + 1e-12);
            prev = g;
        }
    }
    SECTION("lambda = 0 closed form") {
        CHECK(compact_convergence_gap(0.0, 4.0, 2.0) == Catch::Approx(std::asin(0.5)).margin(1e-12));
        double prev = 10.0;
        for (double T : {4.0, 16.0, 64.0}) {
            const double g = compact_convergence_gap(0.0, T, 2.0);
            CHECK(g < prev);
            prev = g;
        }
    }
    SECTION("precondition") {
        CHECK_THROWS_AS(compact_convergence_gap(1.0, 1.5, 1.0), std::domain_error);
    }
}

TEST_CASE("barrier_mesh parametrization") {
    SECTION("untilted ranges") {
        const RuledPatch p = barrier_mesh({0.0, 1.0, 0.0}, 0.0, 1.0, 8, 40);
        for (const auto& v : p.mesh.vertices) {
            CHECK(v.y >= 0.0);
            CHECK(v.y <= 1.0 + 1e-12);
            CHECK(v.t >= -1e-12);
            CHECK(v.t <= M_PI + 1e-12);
        }
    }
    SECTION("tilted parametrization identity") {
        const RuledPatch p = barrier_mesh({1.0, 2.0, 0.0}, -1.0, 1.0, 9, 60);
        for (const auto& vert : p.mesh.vertices) {
            const double v = vert.t - vert.x;  // lambda = 1, offset 0
            // v must be one of the profile sample parameters; y = alpha there
            double best = 1e9;
            for (const auto& s : p.curve.samples)
                best = std::min(best, std::abs(s.v - v));
            CHECK(best < 1e-10);
            CHECK(std::abs(vert.y - std::max(p.curve.alpha_at(v), 1e-12)) < 1e-10);
        }
    }
    SECTION("translated family shifts t exactly") {
        const RuledPatch a = barrier_mesh({0.0, 3.0, 0.0}, 0.0, 1.0, 5, 20);
        const RuledPatch b = barrier_mesh({0.0, 3.0, 2.5}, 0.0, 1.0, 5, 20);
        REQUIRE(a.mesh.vertices.size() == b.mesh.vertices.size());
        for (std::size_t i = 0; i < a.mesh.vertices.size(); ++i) {
            CHECK(b.mesh.vertices[i].t - a.mesh.vertices[i].t == Catch::Approx(2.5).margin(0.0));
            CHECK(b.mesh.vertices[i].y == a.mesh.vertices[i].y);
        }
    }
    SECTION("mean curvature residual on the sampled profile") {
        const RuledPatch p = barrier_mesh({1.0, 4.0, 0.0}, 0.0, 1.0, 4, 50);
        CHECK(p.curve.max_mean_curvature_residual() <= 1e-8);
    }
}
