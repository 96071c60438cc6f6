#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hypermin/domains.hpp"
#include "hypermin/graph_solver.hpp"

using namespace hypermin;

TEST_CASE("constant data reproduces the constant exactly") {
    DomainMesh dm = rectangle_problem(0, 1, 1, 2, 12, 12, [](Complex) { return 0.7; });
    const GraphSolution sol = solve_graph(dm, Chart::HalfPlane);
    for (double u : sol.u) CHECK(u == Catch::Approx(0.7).margin(1e-13));
    CHECK(sol.residual <= 1e-10);
    CHECK(sol.energy == Catch::Approx(domain_area(dm.mesh, Chart::HalfPlane)).margin(1e-12));
}

TEST_CASE("tilted-plane data is an exact discrete minimizer on symmetric meshes") {
    for (double lambda : {0.5, 1.0, 2.0}) {
        DomainMesh dm = rectangle_problem(-1, 1, 1, 2, 48, 24,
                                          [&](Complex z) { return lambda * z.real(); });
        const GraphSolution sol = solve_graph(dm, Chart::HalfPlane);
        double worst = 0.0;
        for (std::size_t i = 0; i < sol.u.size(); ++i)
            worst = std::max(worst,
                             std::abs(sol.u[i] - lambda * sol.mesh.vertices[i].x));
        CHECK(worst < 1e-6);
        CHECK(sol.newton_iters <= 2);
    }
}

TEST_CASE("discrete area: constants, separable reduction, refinement scaling") {
    DomainMesh dm = rectangle_problem(0, 1, 1, 2, 64, 64, [](Complex) { return 0.0; });
    SECTION("constant graph area is the hyperbolic domain area") {
        std::vector<double> u(dm.mesh.vertices.size(), 3.0);
        const double A = graph_area(dm.mesh, u, Chart::HalfPlane);
        // domain area of [0,1]x[1,2] is 1/2; centroid quadrature converges O(h^2)
        CHECK(A == Catch::Approx(0.5).margin(2e-4));
        CHECK(A == Catch::Approx(domain_area(dm.mesh, Chart::HalfPlane)).margin(1e-13));
        // graph area dominates the domain area, equality only for constants
        std::vector<double> w(dm.mesh.vertices.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.3 * dm.mesh.vertices[i].x;
        CHECK(graph_area(dm.mesh, w, Chart::HalfPlane) > A);
    }
    SECTION("tilted plane: separable row reduction agrees to rounding") {
        const double lambda = 1.5;
        std::vector<double> u(dm.mesh.vertices.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = lambda * dm.mesh.vertices[i].x;
        const double A = graph_area(dm.mesh, u, Chart::HalfPlane);
        // independent 1D reduction over one cell column (integrand x-independent)
        const int n = 64;
        const double dx = 1.0 / n, dy = 1.0 / n;
        double col = 0.0;
        for (int j = 0; j < n; ++j) {
            const double yb = 1.0 + j * dy, yt = yb + dy, ym = yb + 0.5 * dy;
            const double yc_b = (2 * yb + ym) / 3.0, yc_t = (2 * yt + ym) / 3.0;
            const double yc_l = (yb + yt + ym) / 3.0;
            auto f = [&](double y) { return std::sqrt(1.0 + y * y * lambda * lambda) / (y * y); };
            const double cell_area = dx * dy / 4.0;
            col += cell_area * (f(yc_b) + f(yc_t) + 2.0 * f(yc_l));
        }
        CHECK(A == Catch::Approx(n * col).margin(1e-10 * A));
        // and the true separable integral is approached at second order
        double exact = 0.0;
        const int q = 20000;
        for (int j = 0; j < q; ++j) {
            const double y = 1.0 + (j + 0.5) / q;
            exact += std::sqrt(1.0 + y * y * lambda * lambda) / (y * y) / q;
        }
        CHECK(A == Catch::Approx(exact).margin(5e-4));
        DomainMesh fine = rectangle_problem(0, 1, 1, 2, 128, 128, [](Complex) { return 0.0; });
        std::vector<double> uf(fine.mesh.vertices.size());
        for (std::size_t i = 0; i < uf.size(); ++i) uf[i] = lambda * fine.mesh.vertices[i].x;
        const double Af = graph_area(fine.mesh, uf, Chart::HalfPlane);
        CHECK(std::abs(Af - exact) < 0.3 * std::abs(A - exact));  // >= first order gain
    }
}

TEST_CASE("comparison principle on a shared mesh") {
    DomainMesh lo = rectangle_problem(-1, 1, 1, 3, 24, 24, [](Complex z) {
        return 0.2 * std::sin(2 * z.real()) + 0.1 * z.imag();
    });
    DomainMesh hi = lo;
    for (int v : hi.boundary) hi.bc_value[v] += 0.35;
    const GraphSolution a = solve_graph(lo, Chart::HalfPlane);
    const GraphSolution b = solve_graph(hi, Chart::HalfPlane);
    for (std::size_t i = 0; i < a.u.size(); ++i) CHECK(a.u[i] <= b.u[i] + 1e-10);
    // max principle bookkeeping
    CHECK(a.min_u >= -0.2 + 0.1 - 1e-9);
    CHECK(a.max_u <= 0.2 + 0.3 + 1e-9);
}

TEST_CASE("ideal-triangle problem: bounded solution, interior residual") {
    // sides: a = vertical {x=0} (value h), b = semicircle (-1,0) (value 0),
    // c = vertical {x=-1} (value 0); ideal vertices at inf, 0, -1.
    const double h = 1.0;
    std::vector<DomainNode> nodes = {ideal_node(std::numeric_limits<double>::infinity()),
                                     ideal_node(0.0), ideal_node(-1.0)};
    // side 0: inf -> 0 is the vertical {x=0}; side 1: 0 -> -1 the semicircle;
    // side 2: -1 -> inf the vertical {x=-1}
    std::vector<double> values = {h, 0.0, 0.0};
    CuspedDomainOptions opt;
    opt.depth = 8.0;
    opt.ell = 0.16;
    opt.columns = 6;
    const CuspedDomain dom = build_cusped_domain(nodes, values, opt);
    const GraphSolution sol = solve_graph(dom.dm, Chart::HalfPlane);
    CHECK(sol.residual <= 1e-8);
    CHECK(sol.min_u >= -1e-9);
    CHECK(sol.max_u <= h + 1e-9);
    // the solution is h on the x=0 wall, 0 on the others
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        const int arc = sol.mesh.arc_of(static_cast<int>(i));
        if (arc == 0) CHECK(sol.u[i] == h);
        if (arc == 1 || arc == 2) CHECK(sol.u[i] == 0.0);
    }
}

TEST_CASE("wall-graph ladder: monotone decay") {
    LensOptions opt;
    opt.ell = 0.35;
    opt.rho_cap = 3.5;
    opt.lambda_cap = 2.0;
    const LadderResult res = wall_graph_ladder({2, 3, 4}, 1.0, opt);
    REQUIRE(res.entries.size() == 3);
    CHECK(res.entries[0].sup_u > 0.0);
    CHECK(res.entries[1].sup_u < res.entries[0].sup_u);
    CHECK(res.entries[2].sup_u < res.entries[1].sup_u);
    // pointwise: bigger-domain solution sits below on shared vertices
    CHECK(max_excess_on_shared_vertices(res.solutions[0], res.solutions[1]) < 1e-6);
    CHECK(max_excess_on_shared_vertices(res.solutions[1], res.solutions[2]) < 1e-6);
}

TEST_CASE("truncation ladder in Lambda is monotone and Cauchy") {
    LensOptions base;
    base.ell = 0.35;
    base.rho_cap = 3.5;
    std::vector<double> sups;
    for (double L : {2.0, 4.0, 8.0}) {
        LensOptions opt = base;
        opt.lambda_cap = L;
        DomainMesh dm = lens_domain(3, opt);
        sups.push_back(sup_on_diameter(solve_graph(dm, Chart::Disk), 1.0));
    }
    CHECK(sups[1] >= sups[0] - 1e-10);
    CHECK(sups[2] >= sups[1] - 1e-10);
    CHECK(sups[2] - sups[1] < sups[1] - sups[0]);  // Cauchy-style gap decay
}

TEST_CASE("chart invariance on a mapped mesh") {
    const double lambda = 1.0;
    DomainMesh half = rectangle_problem(-0.3, 0.3, 0.9, 1.5, 96, 96,
                                        [&](Complex z) { return lambda * z.real(); });
    const GraphSolution sol_half = solve_graph(half, Chart::HalfPlane);

    DomainMesh disk = half;
    for (auto& v : disk.mesh.vertices) {
        const Complex w = halfplane_to_disk(v.xy());
        v.x = w.real();
        v.y = w.imag();
    }
    const GraphSolution sol_disk = solve_graph(disk, Chart::Disk);
    double worst = 0.0;
    for (std::size_t i = 0; i < sol_half.u.size(); ++i)
        worst = std::max(worst, std::abs(sol_half.u[i] - sol_disk.u[i]));
    CHECK(worst < 1e-5);
}

TEST_CASE("solver error paths") {
    DomainMesh dm = rectangle_problem(0, 1, 1, 2, 4, 4, [](Complex) { return 0.0; });
    DomainMesh all_fixed = dm;
    for (auto& v : all_fixed.bc_value) v = 0.0;
    CHECK_THROWS_AS(solve_graph(all_fixed, Chart::HalfPlane), std::invalid_argument);
}
