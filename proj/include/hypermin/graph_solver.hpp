#pragma once

// Discrete minimizer of the vertical-graph area functional over hyperbolic
// domains.  In a conformal chart with factor sigma (half-plane 1/y, disk
// 2/(1-|w|^2)) the graph t = u has
//     A(u) = Int sigma^2 sqrt(1 + |Du|^2 / sigma^2) dx dy,
// discretized with P1 elements and centroid quadrature.  Damped Newton on the
// interior values; +/-infinity data realized by a truncation ladder Lambda.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hypermin/ends.hpp"
#include "hypermin/geometry.hpp"
#include "hypermin/mesh.hpp"

namespace hypermin {

enum class Chart { HalfPlane, Disk };

inline double conformal_factor(Chart chart, Complex z) {
    if (chart == Chart::HalfPlane) {
        if (!(z.imag() > 0)) throw std::domain_error("conformal_factor: require Im z > 0");
        return 1.0 / z.imag();
    }
    const double r2 = std::norm(z);
    if (!(r2 < 1.0)) throw std::domain_error("conformal_factor: require |w| < 1");
    return 2.0 / (1.0 - r2);
}

struct GraphSolution {
    TriMesh mesh;  // vertex t filled with u
    std::vector<double> u;
    Chart chart = Chart::HalfPlane;
    double residual = 0.0;  // max-norm discrete Euler-Lagrange residual
    double energy = 0.0;    // discrete area
    int newton_iters = 0;
    double lambda_cap = std::numeric_limits<double>::quiet_NaN();
    double y_cap = std::numeric_limits<double>::quiet_NaN();
    double min_u = 0.0, max_u = 0.0;
};

namespace fem {

struct Element {
    std::array<int, 3> v;
    double area;                     // chart-euclidean
    double sigma;                    // conformal factor at the centroid
    std::array<Complex, 3> grad;     // P1 basis gradients (constant per element)
};

inline std::vector<Element> build_elements(const TriMesh& m, Chart chart) {
    std::vector<Element> els;
    els.reserve(m.tris.size());
    for (const auto& t : m.tris) {
        const Complex a = m.vertices[t[0]].xy(), b = m.vertices[t[1]].xy(),
                      c = m.vertices[t[2]].xy();
        const double a2 = chart_area2(a, b, c);
        if (!(a2 > 0))
            throw NumericError("graph solver: degenerate triangle (id " +
                               std::to_string(&t - m.tris.data()) + ")");
        Element e;
        e.v = t;
        e.area = 0.5 * a2;
        e.sigma = conformal_factor(chart, (a + b + c) / 3.0);
        // grad phi_i = rot90(opposite edge)/ (2A)
        auto rot = [&](Complex u) { return Complex(-u.imag(), u.real()); };
        e.grad = {rot(c - b) / a2, rot(a - c) / a2, rot(b - a) / a2};
        els.push_back(e);
    }
    return els;
}

inline Complex element_gradient(const Element& e, const std::vector<double>& u) {
    return u[e.v[0]] * e.grad[0] + u[e.v[1]] * e.grad[1] + u[e.v[2]] * e.grad[2];
}

}  // namespace fem

// Discrete graph area for given vertex values.
inline double graph_area(const TriMesh& m, const std::vector<double>& u, Chart chart) {
    if (u.size() != m.vertices.size()) throw std::invalid_argument("graph_area: size mismatch");
    double total = 0.0;
    for (const auto& e : fem::build_elements(m, chart)) {
        const Complex g = fem::element_gradient(e, u);
        const double s2 = e.sigma * e.sigma;
        total += e.area * s2 * std::sqrt(1.0 + std::norm(g) / s2);
    }
    return total;
}

// Hyperbolic area of the meshed domain (the u = const value of the functional).
inline double domain_area(const TriMesh& m, Chart chart) {
    double total = 0.0;
    for (const auto& e : fem::build_elements(m, chart)) total += e.area * e.sigma * e.sigma;
    return total;
}

struct SolverOptions {
    double tol = 1e-10;    // max-norm gradient target
    int max_newton = 80;
    int max_halvings = 40;
    bool check_max_principle = true;
};

// Dirichlet solve: dm.bc_value finite entries are fixed, NaN entries are free.
inline GraphSolution solve_graph(const DomainMesh& dm, Chart chart,
                                 const SolverOptions& opt = {}) {
    const TriMesh& m = dm.mesh;
    const int n = static_cast<int>(m.vertices.size());
    if (static_cast<int>(dm.bc_value.size()) != n)
        throw std::invalid_argument("solve_graph: bc size mismatch");

    std::vector<int> dof(n, -1);
    std::vector<int> free_list;
    double bc_min = 1e300, bc_max = -1e300;
    for (int i = 0; i < n; ++i) {
        if (std::isnan(dm.bc_value[i])) {
            dof[i] = static_cast<int>(free_list.size());
            free_list.push_back(i);
        } else {
            bc_min = std::min(bc_min, dm.bc_value[i]);
            bc_max = std::max(bc_max, dm.bc_value[i]);
        }
    }
    if (free_list.empty()) throw std::invalid_argument("solve_graph: no interior dofs");
    if (bc_min > bc_max) throw std::invalid_argument("solve_graph: no boundary data");
    const int nf = static_cast<int>(free_list.size());

    const auto els = fem::build_elements(m, chart);

    std::vector<double> u(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (!std::isnan(dm.bc_value[i])) u[i] = dm.bc_value[i];

    using SpMat = Eigen::SparseMatrix<double>;
    using Triplet = Eigen::Triplet<double>;

    auto energy = [&](const std::vector<double>& uu) {
        double total = 0.0;
        for (const auto& e : els) {
            const Complex g = fem::element_gradient(e, uu);
            const double s2 = e.sigma * e.sigma;
            total += e.area * s2 * std::sqrt(1.0 + std::norm(g) / s2);
        }
        return total;
    };

    // harmonic initialization: chart-euclidean Laplace with the same data
    {
        std::vector<Triplet> trips;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
        for (const auto& e : els) {
            for (int i = 0; i < 3; ++i) {
                const int gi = e.v[i];
                if (dof[gi] < 0) continue;
                for (int j = 0; j < 3; ++j) {
                    const int gj = e.v[j];
                    const double kij =
                        e.area * (e.grad[i].real() * e.grad[j].real() +
                                  e.grad[i].imag() * e.grad[j].imag());
                    if (dof[gj] >= 0)
                        trips.emplace_back(dof[gi], dof[gj], kij);
                    else
                        rhs[dof[gi]] -= kij * u[gj];
                }
            }
        }
        SpMat K(nf, nf);
        K.setFromTriplets(trips.begin(), trips.end());
        Eigen::SimplicialLLT<SpMat> llt(K);
        if (llt.info() != Eigen::Success) throw NumericError("solve_graph: harmonic init failed");
        const Eigen::VectorXd x = llt.solve(rhs);
        for (int k = 0; k < nf; ++k) u[free_list[k]] = x[k];
    }

    GraphSolution sol;
    sol.chart = chart;
    double E = energy(u);
    int iters = 0;
    double resid = 0.0;
    std::vector<double> grad(nf, 0.0);

    for (; iters < opt.max_newton; ++iters) {
        // assemble gradient and Hessian
        std::fill(grad.begin(), grad.end(), 0.0);
        std::vector<Triplet> trips;
        trips.reserve(els.size() * 9);
        for (const auto& e : els) {
            const Complex g = fem::element_gradient(e, u);
            const double s2 = e.sigma * e.sigma;
            const double W = std::sqrt(1.0 + std::norm(g) / s2);
            for (int i = 0; i < 3; ++i) {
                const int gi = e.v[i];
                const double gbi = g.real() * e.grad[i].real() + g.imag() * e.grad[i].imag();
                if (dof[gi] >= 0) grad[dof[gi]] += e.area * gbi / W;
                for (int j = 0; j < 3; ++j) {
                    const int gj = e.v[j];
                    if (dof[gi] < 0 || dof[gj] < 0) continue;
                    const double gbj = g.real() * e.grad[j].real() + g.imag() * e.grad[j].imag();
                    const double bij = e.grad[i].real() * e.grad[j].real() +
                                       e.grad[i].imag() * e.grad[j].imag();
                    trips.emplace_back(dof[gi], dof[gj],
                                       e.area * (bij / W - gbi * gbj / (s2 * W * W * W)));
                }
            }
        }
        resid = 0.0;
        for (double gv : grad) resid = std::max(resid, std::abs(gv));
        if (resid <= opt.tol) break;

        SpMat H(nf, nf);
        H.setFromTriplets(trips.begin(), trips.end());
        Eigen::SimplicialLLT<SpMat> llt(H);
        if (llt.info() != Eigen::Success) throw NumericError("solve_graph: Hessian factorization failed");
        Eigen::VectorXd gv(nf);
        for (int k = 0; k < nf; ++k) gv[k] = grad[k];
        const Eigen::VectorXd d = llt.solve(-gv);

        // damped step: halve until the energy decreases
        double s = 1.0;
        bool accepted = false;
        for (int halve = 0; halve <= opt.max_halvings; ++halve) {
            std::vector<double> trial = u;
            for (int k = 0; k < nf; ++k) trial[free_list[k]] += s * d[k];
            const double Et = energy(trial);
            if (Et < E) {
                u = std::move(trial);
                E = Et;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            if (resid <= 1e-8) break;  // at the rounding floor of the energy
            throw NumericError("solve_graph: Newton stagnation (energy " + std::to_string(E) +
                               ", residual " + std::to_string(resid) + ")");
        }
    }
    if (resid > 1e-8)
        throw NumericError("solve_graph: residual " + std::to_string(resid) +
                           " above 1e-8 after " + std::to_string(iters) + " iterations");

    sol.u = u;
    sol.mesh = m;
    for (int i = 0; i < n; ++i) sol.mesh.vertices[i].t = u[i];
    sol.residual = resid;
    sol.energy = E;
    sol.newton_iters = iters;
    sol.min_u = *std::min_element(u.begin(), u.end());
    sol.max_u = *std::max_element(u.begin(), u.end());
    if (opt.check_max_principle) {
        const double slack = 1e-9 * std::max(1.0, bc_max - bc_min);
        if (sol.min_u < bc_min - slack || sol.max_u > bc_max + slack)
            throw NumericError("solve_graph: discrete maximum principle violated");
    }
    return sol;
}

// Piecewise-linear interpolation of the solution at a chart point (brute-force
// point location; fine at desk scale).
inline double interpolate(const GraphSolution& sol, Complex p,
                          double* bary_tol = nullptr) {
    const TriMesh& m = sol.mesh;
    double best_neg = -1e300;
    double best_val = std::numeric_limits<double>::quiet_NaN();
    for (const auto& t : m.tris) {
        const Complex a = m.vertices[t[0]].xy(), b = m.vertices[t[1]].xy(),
                      c = m.vertices[t[2]].xy();
        const double A = chart_area2(a, b, c);
        if (A == 0) continue;
        const double w0 = chart_area2(p, b, c) / A;
        const double w1 = chart_area2(a, p, c) / A;
        const double w2 = chart_area2(a, b, p) / A;
        const double neg = std::min({w0, w1, w2});
        if (neg > best_neg) {
            best_neg = neg;
            best_val = w0 * sol.u[t[0]] + w1 * sol.u[t[1]] + w2 * sol.u[t[2]];
            if (neg >= 0) break;
        }
    }
    if (bary_tol) *bary_tol = best_neg;
    return best_val;
}

}  // namespace hypermin
