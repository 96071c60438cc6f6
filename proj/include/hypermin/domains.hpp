#pragma once

// Domain builders for the graph solver.
//
//  * lens domains bounded by two geodesics orthogonal to a diameter, capped by
//    a common collar circle (the setting of the wall-graph convergence ladder)
//  * cusped geodesic polygons in the half-plane chart, with structured strip
//    grids in each ideal-vertex cusp chart (walls normalized to {0 <= x <= 1})
//
// All truncation data (collar, depth, caps) is recorded for later end
// development and reporting.

#include <algorithm>
#include <cmath>
#include <vector>

#include "hypermin/graph_solver.hpp"

namespace hypermin {

// ---------------------------------------------------------------------------
// shared interior candidate families (deterministic)

// Disk chart: rings at hyperbolic radius (k+1/2)*ell with ~circumference/ell
// points; the family is global, so nested domains share vertex positions.
inline std::vector<Complex> disk_rings(double rho_max, double ell) {
    std::vector<Complex> pts;
    pts.emplace_back(0.0, 0.0);
    int k = 0;
    for (double rho = 0.5 * ell; rho <= rho_max; rho += ell, ++k) {
        const double r = std::tanh(0.5 * rho);
        const double circ = 2.0 * M_PI * std::sinh(rho);
        const int n = std::max(6, static_cast<int>(std::ceil(circ / ell)));
        const double offset = 0.5 * (k % 2);
        for (int j = 0; j < n; ++j) {
            const double th = 2.0 * M_PI * (j + offset) / n;
            pts.emplace_back(r * std::cos(th), r * std::sin(th));
        }
    }
    return pts;
}

// ---------------------------------------------------------------------------
// lens domain: between the geodesics through (+/-d, 0) orthogonal to the
// horizontal diameter (disk chart), capped at |w| = tanh(rho_cap/2)

struct LensOptions {
    double lambda_cap = 4.0;  // wall truncation value
    double rho_cap = 5.0;     // collar radius of the common cap circle
    double ell = 0.22;        // hyperbolic mesh edge target
};

// circle orthogonal to the unit circle crossing the x-axis at (d, 0)
inline void wall_circle(double d, double& cx, double& r) {
    cx = (1.0 + d * d) / (2.0 * d);
    r = (1.0 - d * d) / (2.0 * d);
}

inline DomainMesh lens_domain(int n, const LensOptions& opt) {
    if (n < 2) throw std::invalid_argument("lens_domain: n >= 2");
    const double d = 1.0 - 1.0 / n;
    const double rcap = std::tanh(0.5 * opt.rho_cap);
    double cx, r;
    wall_circle(d, cx, r);
    if (d >= rcap) throw std::invalid_argument("lens_domain: wall outside the cap");

    // intersections of the wall circle (center (cx,0), radius r) with |w| = rcap
    const double xi = (rcap * rcap + cx * cx - r * r) / (2.0 * cx);
    const double yi2 = rcap * rcap - xi * xi;
    if (!(yi2 > 0)) throw NumericError("lens_domain: wall does not reach the cap");
    const double yi = std::sqrt(yi2);

    auto maxlen = [&](Complex z) { return 0.75 * opt.ell / conformal_factor(Chart::Disk, z); };

    // right wall from (xi, -yi) up to (xi, +yi): arc of the wall circle
    const double phi0 = std::atan2(-yi, xi - cx), phi1 = std::atan2(yi, xi - cx);
    auto right_wall = sample_curve_adaptive(
        [&](double s) {
            const double phi = phi0 + s * (phi1 - phi0);
            return Complex(cx + r * std::cos(phi), r * std::sin(phi));
        },
        0.0, 1.0, maxlen);
    // top cap arc from (xi, yi) ccw to (-xi, yi)
    const double th0 = std::atan2(yi, xi), th1 = M_PI - th0;
    auto top_cap = sample_curve_adaptive(
        [&](double s) {
            const double th = th0 + s * (th1 - th0);
            return Complex(rcap * std::cos(th), rcap * std::sin(th));
        },
        0.0, 1.0, maxlen);

    std::vector<BoundaryPoint> bd;
    auto push = [&](Complex p, int arc, double val) {
        if (!bd.empty() && std::abs(bd.front().pos - p) < 1e-14) return;
        if (!bd.empty() && std::abs(bd.back().pos - p) < 1e-14) return;
        bd.push_back(BoundaryPoint{p, arc, val, -1});
    };
    // arcs: 0 right wall (Lambda), 1 top cap (0), 2 left wall (Lambda), 3 bottom cap (0)
    for (auto& p : right_wall) push(p, 0, opt.lambda_cap);
    for (auto& p : top_cap) push(p, 1, 0.0);
    for (auto it = right_wall.rbegin(); it != right_wall.rend(); ++it)
        push(Complex(-it->real(), it->imag()), 2, opt.lambda_cap);
    for (auto it = top_cap.rbegin(); it != top_cap.rend(); ++it)
        push(Complex(it->real(), -it->imag()), 3, 0.0);

    return mesh_polygon(bd, disk_rings(opt.rho_cap, opt.ell), 0.45);
}

// ---------------------------------------------------------------------------
// cusped geodesic polygons (half-plane chart)

struct DomainNode {
    bool ideal = false;
    Complex pos;      // finite node position (ideal: unused)
    double x_ideal;   // ideal node: real-axis coordinate, +inf allowed once
};

inline DomainNode finite_node(Complex p) { return DomainNode{false, p, 0.0}; }
inline DomainNode ideal_node(double x) { return DomainNode{true, {0, 0}, x}; }

struct CuspStripInfo {
    int node = -1;
    Mobius to_chart;    // ambient half-plane -> cusp chart; walls at x = 0 and 1
    double collar;      // strip start height in the chart
    double depth;       // truncation height (the cut arc)
    double value_at_0;  // Dirichlet values carried by the walls x = 0 / x = 1
    double value_at_1;
    double wall_of_next;  // chart x (0 or 1) of the side leaving the node
    double wall_of_prev;  // chart x of the side arriving at the node
};

struct CuspedDomain {
    DomainMesh dm;
    std::vector<CuspStripInfo> strips;  // index = cusp id used in vertex tags
};

struct CuspedDomainOptions {
    double collar = 1.2;
    double depth = 48.0;
    int columns = 8;
    double ell = 0.105;     // bulk target; harmonious with collar ~ 1/(columns*ell)
    double jitter = 0.0;
    std::uint64_t seed = 0;
};

// geodesic between two boundary/ideal anchors of the half-plane
inline Geodesic side_geodesic(const DomainNode& a, const DomainNode& b) {
    auto foot = [](const DomainNode& n) {
        return n.ideal ? n.x_ideal : std::numeric_limits<double>::quiet_NaN();
    };
    if (a.ideal && b.ideal) {
        const double xa = foot(a), xb = foot(b);
        if (std::isinf(xa) || std::isinf(xb)) {
            const double x = std::isinf(xa) ? xb : xa;
            return Geodesic::vertical_line(x);
        }
        return Geodesic::semicircle(std::min(xa, xb), std::max(xa, xb));
    }
    if (a.ideal || b.ideal) {
        const DomainNode& fin = a.ideal ? b : a;
        const DomainNode& idl = a.ideal ? a : b;
        if (std::isinf(idl.x_ideal)) return Geodesic::vertical_line(fin.pos.real());
        // semicircle through fin.pos with one foot at x_ideal
        const double x0 = idl.x_ideal;
        const Complex p = fin.pos;
        // |p - c| = |x0 - c| with c on the real axis
        const double c = (std::norm(p) - x0 * x0) / (2.0 * (p.real() - x0));
        const double r = std::abs(x0 - c);
        return Geodesic::semicircle(c - r, c + r);
    }
    return geodesic_through(a.pos, b.pos);
}

// signed arc parameter of a point on a geodesic (for ordered sampling)
inline double geodesic_param(const Geodesic& g, Complex p) {
    if (g.vertical) return std::log(p.imag());
    // inverse of geodesic_point: s = atanh((x - c)/r)
    return std::atanh(std::clamp((p.real() - g.center()) / g.radius(), -1.0 + 1e-15, 1.0 - 1e-15));
}

// Build the cusped polygon domain.  sides[i] joins nodes[i] -> nodes[i+1 mod n]
// and carries side_value[i].  Strips are erected at every ideal node.
inline CuspedDomain build_cusped_domain(const std::vector<DomainNode>& nodes,
                                        const std::vector<double>& side_value,
                                        const CuspedDomainOptions& opt = {}) {
    const int n = static_cast<int>(nodes.size());
    if (static_cast<int>(side_value.size()) != n)
        throw std::invalid_argument("build_cusped_domain: need one value per side");

    CuspedDomain out;
    std::vector<int> cusp_of_node(n, -1);

    // cusp charts: walls normalized to x = 0 (previous side) and x = 1 (next side)
    for (int i = 0; i < n; ++i) {
        if (!nodes[i].ideal) continue;
        CuspStripInfo info;
        info.node = i;
        const Geodesic prev = side_geodesic(nodes[(i + n - 1) % n], nodes[i]);
        const Geodesic next = side_geodesic(nodes[i], nodes[(i + 1) % n]);
        Mobius M = std::isinf(nodes[i].x_ideal) ? Mobius::identity()
                                                : Mobius::ideal_to_infinity(nodes[i].x_ideal);
        // images of the two walls are vertical lines; find their x by mapping
        // a point of each
        auto wall_x = [&](const Geodesic& g) {
            const Complex probe = g.vertical ? Complex(g.a, 1.0) : geodesic_point(g, 0.0);
            return M(probe).real();
        };
        const double x_prev = wall_x(prev), x_next = wall_x(next);
        if (std::abs(x_next - x_prev) < 1e-14)
            throw NumericError("build_cusped_domain: coincident cusp walls");
        // affine normalization (orientation-preserving): lower wall -> 0, upper -> 1
        const double lo = std::min(x_prev, x_next), hi = std::max(x_prev, x_next);
        M = M.then(Mobius::shift(-lo)).then(Mobius::scale(1.0 / (hi - lo)));
        info.to_chart = M;
        info.collar = opt.collar;
        info.depth = opt.depth;
        const double v_prev = side_value[(i + n - 1) % n];
        const double v_next = side_value[i];
        info.wall_of_prev = (x_prev == lo) ? 0.0 : 1.0;
        info.wall_of_next = (x_next == lo) ? 0.0 : 1.0;
        info.value_at_0 = (info.wall_of_prev == 0.0) ? v_prev : v_next;
        info.value_at_1 = (info.wall_of_prev == 1.0) ? v_prev : v_next;
        cusp_of_node[i] = static_cast<int>(out.strips.size());
        out.strips.push_back(info);
    }

    auto bulk_maxlen = [&](Complex z) { return 0.8 * opt.ell * z.imag(); };

    // assemble the boundary polygon
    std::vector<BoundaryPoint> bd;
    auto push = [&](Complex p, int arc, double val, int cusp) {
        if (!bd.empty()) {
            if (std::abs(bd.back().pos - p) < 1e-13) return;
            if (bd.size() > 1 && std::abs(bd.front().pos - p) < 1e-13) return;
        }
        bd.push_back(BoundaryPoint{p, arc, val, cusp});
    };

    const int cut_arc_base = n;  // cut arcs get ids n + cusp_id
    for (int i = 0; i < n; ++i) {
        const DomainNode& a = nodes[i];
        const DomainNode& b = nodes[(i + 1) % n];
        const Geodesic g = side_geodesic(a, b);
        const double val = side_value[i];

        // portion inside a's strip: the leaving wall, from depth down to collar.
        // The cut arc across a's strip top is emitted here so the polygon stays
        // ordered: ... arriving wall up, cut arc, leaving wall down ...
        if (a.ideal) {
            const int cid = cusp_of_node[i];
            const auto& s = out.strips[cid];
            const Mobius inv = s.to_chart.inverse();
            const int rows = static_cast<int>(std::ceil((s.depth - s.collar) * opt.columns));
            // cut arc from the arriving wall to the leaving wall (linear data)
            const double xa = s.wall_of_prev, xb = s.wall_of_next;
            for (int j = 1; j < opt.columns; ++j) {
                const double x = xa + (xb - xa) * j / opt.columns;
                push(inv(Complex(x, s.depth)), cut_arc_base + cid,
                     s.value_at_0 + (s.value_at_1 - s.value_at_0) * x, cid);
            }
            for (int k = rows; k >= 0; --k) {
                const double y = s.collar + (s.depth - s.collar) * k / rows;
                push(inv(Complex(s.wall_of_next, y)), i, val, cid);
            }
        }
        // bulk portion: between collar exits (or the finite nodes)
        Complex p0, p1;
        if (a.ideal) {
            const auto& s = out.strips[cusp_of_node[i]];
            p0 = s.to_chart.inverse()(Complex(s.wall_of_next, s.collar));
        } else {
            p0 = a.pos;
        }
        if (b.ideal) {
            const auto& s = out.strips[cusp_of_node[(i + 1) % n]];
            p1 = s.to_chart.inverse()(Complex(s.wall_of_prev, s.collar));
        } else {
            p1 = b.pos;
        }
        const double s0 = geodesic_param(g, p0);
        const double s1 = geodesic_param(g, p1);
        auto pts = sample_curve_adaptive([&](double s) { return geodesic_point(g, s); }, s0, s1,
                                         bulk_maxlen);
        for (auto& p : pts) push(p, i, val, -1);

        // portion inside b's strip: the arriving wall from collar up to depth
        if (b.ideal) {
            const int cid = cusp_of_node[(i + 1) % n];
            const auto& s = out.strips[cid];
            const Mobius inv = s.to_chart.inverse();
            const int rows = static_cast<int>(std::ceil((s.depth - s.collar) * opt.columns));
            for (int k = 0; k <= rows; ++k) {
                const double y = s.collar + (s.depth - s.collar) * k / rows;
                push(inv(Complex(s.wall_of_prev, y)), i, val, cid);
            }
        }
    }

    // interior candidates: strip grids + bulk hyperbolic grid
    std::vector<Complex> interior;
    std::vector<int> cusp_tag;
    for (std::size_t cid = 0; cid < out.strips.size(); ++cid) {
        const auto& s = out.strips[cid];
        const Mobius inv = s.to_chart.inverse();
        const int rows = static_cast<int>(std::ceil((s.depth - s.collar) * opt.columns));
        for (int k = 1; k < rows; ++k) {
            const double y = s.collar + (s.depth - s.collar) * k / rows;
            for (int j = 1; j < opt.columns; ++j) {
                interior.push_back(inv(Complex(static_cast<double>(j) / opt.columns, y)));
                cusp_tag.push_back(static_cast<int>(cid));
            }
        }
    }
    // bulk grid over the bounding box, excluding strip regions
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& b : bd) {
        xmin = std::min(xmin, b.pos.real());
        xmax = std::max(xmax, b.pos.real());
        ymin = std::min(ymin, b.pos.imag());
        ymax = std::max(ymax, b.pos.imag());
    }
    for (auto& p : halfplane_grid(xmin, xmax, std::max(1e-3, 0.5 * ymin), ymax, opt.ell, opt.jitter,
                                  opt.seed)) {
        bool in_strip = false;
        for (auto& s : out.strips) {
            const Complex w = s.to_chart(p);
            if (w.imag() > 0.92 * s.collar && w.real() > -0.3 && w.real() < 1.3) {
                in_strip = true;
                break;
            }
        }
        if (!in_strip) {
            interior.push_back(p);
            cusp_tag.push_back(-1);
        }
    }

    out.dm = mesh_polygon(bd, interior, 0.45, cusp_tag);
    return out;
}

// ---------------------------------------------------------------------------
// wall-graph convergence ladder: solve the lens problems for n in n_list and
// report sup u_n over the compact piece |rho| <= K_radius of the symmetry
// diameter {Re w = 0}.

struct LadderEntry {
    int n;
    double sup_u;
};

struct LadderResult {
    std::vector<LadderEntry> entries;
    std::vector<GraphSolution> solutions;  // aligned with entries
};

inline double sup_on_diameter(const GraphSolution& sol, double K_radius, int samples = 201) {
    const double rmax = std::tanh(0.5 * K_radius);
    double sup = -1e300;
    for (int i = 0; i < samples; ++i) {
        const double s = -rmax + 2.0 * rmax * i / (samples - 1);
        const double u = interpolate(sol, Complex(0.0, s));
        if (std::isfinite(u)) sup = std::max(sup, u);
    }
    return sup;
}

inline LadderResult wall_graph_ladder(const std::vector<int>& n_list, double K_radius,
                                      const LensOptions& opt) {
    LadderResult out;
    for (int n : n_list) {
        DomainMesh dm = lens_domain(n, opt);
        GraphSolution sol = solve_graph(dm, Chart::Disk);
        out.entries.push_back({n, sup_on_diameter(sol, K_radius)});
        out.solutions.push_back(std::move(sol));
    }
    return out;
}

// Max of (u_bigger - u_smaller) over vertices shared by the two meshes (the
// interior candidate family is global, so nested lens domains share vertices).
inline double max_excess_on_shared_vertices(const GraphSolution& smaller,
                                            const GraphSolution& bigger) {
    auto key = [](Complex p) {
        return std::pair<long long, long long>(std::llround(p.real() * 1e12),
                                               std::llround(p.imag() * 1e12));
    };
    std::map<std::pair<long long, long long>, double> values;
    for (std::size_t i = 0; i < smaller.mesh.vertices.size(); ++i)
        values[key(smaller.mesh.vertices[i].xy())] = smaller.u[i];
    double worst = -1e300;
    for (std::size_t i = 0; i < bigger.mesh.vertices.size(); ++i) {
        auto it = values.find(key(bigger.mesh.vertices[i].xy()));
        if (it == values.end()) continue;
        worst = std::max(worst, bigger.u[i] - it->second);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// structured rectangle problem helper (tilted-plane reproduction and friends)

inline DomainMesh rectangle_problem(double x0, double x1, double y0, double y1, int nx, int ny,
                                    const std::function<double(Complex)>& data) {
    DomainMesh dm = mesh_rectangle(x0, x1, y0, y1, nx, ny);
    for (int v : dm.boundary) dm.bc_value[v] = data(dm.mesh.vertices[v].xy());
    return dm;
}

}  // namespace hypermin
