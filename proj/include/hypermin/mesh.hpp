#pragma once
#include <cstdio>
#include <cstdlib>

// Triangle meshes in the (x, y, t) chart: the common currency of the solvers
// and verifiers.  Includes a Bowyer-Watson Delaunay kernel, a polygonal-domain
// mesher with hyperbolically graded interior points, structured rectangle
// grids, level-set truncation, and boundary-loop extraction.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hypermin/geometry.hpp"

namespace hypermin {

struct TriMesh {
    std::vector<Point3> vertices;
    std::vector<std::array<int, 3>> tris;
    // Optional parallel tags (empty or per-vertex).
    std::vector<int> vertex_arc;   // boundary arc id, -1 interior
    std::vector<int> vertex_cusp;  // cusp-strip id, -1 bulk

    int add_vertex(const Point3& p, int arc = -1, int cusp = -1) {
        vertices.push_back(p);
        if (!vertex_arc.empty() || arc != -1) {
            vertex_arc.resize(vertices.size() - 1, -1);
            vertex_arc.push_back(arc);
        }
        if (!vertex_cusp.empty() || cusp != -1) {
            vertex_cusp.resize(vertices.size() - 1, -1);
            vertex_cusp.push_back(cusp);
        }
        return static_cast<int>(vertices.size()) - 1;
    }
    int arc_of(int v) const {
        return v < static_cast<int>(vertex_arc.size()) ? vertex_arc[v] : -1;
    }
    int cusp_of(int v) const {
        return v < static_cast<int>(vertex_cusp.size()) ? vertex_cusp[v] : -1;
    }
};

// chart-euclidean signed area of a triangle (x,y only)
inline double chart_area2(Complex a, Complex b, Complex c) {
    return (b.real() - a.real()) * (c.imag() - a.imag()) -
           (c.real() - a.real()) * (b.imag() - a.imag());
}

// Intrinsic edge length by midpoint metric evaluation (second order on smooth patches).
inline double edge_length_ambient(const Point3& p, const Point3& q, AmbientKind kind) {
    const double ym = 0.5 * (p.y + q.y);
    const double dx = p.x - q.x, dy = p.y - q.y, dt = p.t - q.t;
    if (kind == AmbientKind::HyperbolicCusp) return std::sqrt(dx * dx + dy * dy + dt * dt) / ym;
    const double dh = std::hypot(dx, dy) / ym;
    return std::sqrt(dh * dh + dt * dt);
}

// Corner angles of a triangle with side lengths (a = |BC|, b = |CA|, c = |AB|).
inline std::array<double, 3> triangle_angles(double a, double b, double c) {
    auto ang = [](double opp, double s1, double s2) {
        double v = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
        v = std::clamp(v, -1.0, 1.0);
        return std::acos(v);
    };
    if (!(a > 0) || !(b > 0) || !(c > 0)) throw NumericError("triangle_angles: degenerate side");
    return {ang(a, b, c), ang(b, c, a), ang(c, a, b)};
}

inline double triangle_area_from_sides(double a, double b, double c) {
    // numerically stable Heron (Kahan ordering)
    std::array<double, 3> s{a, b, c};
    std::sort(s.begin(), s.end());
    const double x = s[2], y = s[1], z = s[0];
    const double q = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
    return 0.25 * std::sqrt(std::max(0.0, q));
}

// Ambient area of a mesh triangle with the metric evaluated at the chart centroid.
inline double triangle_area_ambient(const Point3& A, const Point3& B, const Point3& C,
                                    AmbientKind kind) {
    const double yc = (A.y + B.y + C.y) / 3.0;
    auto metric_dot = [&](const Point3& u, const Point3& v) {
        if (kind == AmbientKind::HyperbolicCusp)
            return (u.x * v.x + u.y * v.y + u.t * v.t) / (yc * yc);
        return (u.x * v.x + u.y * v.y) / (yc * yc) + u.t * v.t;
    };
    const Point3 e1{B.x - A.x, B.y - A.y, B.t - A.t};
    const Point3 e2{C.x - A.x, C.y - A.y, C.t - A.t};
    const double g11 = metric_dot(e1, e1), g22 = metric_dot(e2, e2), g12 = metric_dot(e1, e2);
    return 0.5 * std::sqrt(std::max(0.0, g11 * g22 - g12 * g12));
}

inline double mesh_area_ambient(const TriMesh& m, AmbientKind kind) {
    double a = 0.0;
    for (const auto& t : m.tris)
        a += triangle_area_ambient(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]], kind);
    return a;
}

inline double max_edge_chart(const TriMesh& m) {
    double e = 0.0;
    for (const auto& t : m.tris)
        for (int k = 0; k < 3; ++k) {
            const auto& p = m.vertices[t[k]];
            const auto& q = m.vertices[t[(k + 1) % 3]];
            e = std::max(e, std::hypot(p.x - q.x, p.y - q.y));
        }
    return e;
}

inline double max_edge_ambient(const TriMesh& m, AmbientKind kind) {
    double e = 0.0;
    for (const auto& t : m.tris)
        for (int k = 0; k < 3; ++k)
            e = std::max(e, edge_length_ambient(m.vertices[t[k]], m.vertices[t[(k + 1) % 3]], kind));
    return e;
}

// ---------------------------------------------------------------------------
// boundary structure

namespace detail {
struct EdgeKey {
    int a, b;
    bool operator==(const EdgeKey& o) const { return a == o.a && b == o.b; }
};
struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& e) const {
        return std::hash<std::int64_t>()((std::int64_t(e.a) << 32) ^ std::int64_t(e.b));
    }
};
}  // namespace detail

// Boundary edges as directed pairs (v0, v1) following the triangle orientation.
inline std::vector<std::array<int, 2>> boundary_edges(const TriMesh& m) {
    std::unordered_map<detail::EdgeKey, int, detail::EdgeKeyHash> count;
    for (const auto& t : m.tris)
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            count[{std::min(a, b), std::max(a, b)}]++;
        }
    std::vector<std::array<int, 2>> out;
    for (const auto& t : m.tris)
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            if (count[{std::min(a, b), std::max(a, b)}] == 1) out.push_back({a, b});
        }
    return out;
}

// Ordered closed boundary loops (vertex index cycles).
inline std::vector<std::vector<int>> boundary_loops(const TriMesh& m) {
    auto edges = boundary_edges(m);
    std::unordered_map<int, int> next;
    for (const auto& e : edges) next[e[0]] = e[1];
    std::vector<std::vector<int>> loops;
    std::unordered_map<int, bool> used;
    for (const auto& e : edges) {
        if (used[e[0]]) continue;
        std::vector<int> loop;
        int v = e[0];
        while (!used[v]) {
            used[v] = true;
            loop.push_back(v);
            auto it = next.find(v);
            if (it == next.end()) break;  // open chain; tolerated for sliced meshes
            v = it->second;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

// ---------------------------------------------------------------------------
// Bowyer-Watson Delaunay triangulation of chart points

// Incremental Bowyer-Watson with triangle adjacency, visibility-walk point
// location, and BFS-connected cavities (keeps the cavity star-shaped even for
// the near-cocircular grids produced by structured strips).
class Delaunay {
  public:
    explicit Delaunay(const std::vector<Complex>& pts) : pts_(pts) {
        if (pts.size() < 3) throw std::invalid_argument("Delaunay: need >= 3 points");
        build();
    }

    // triangles indexing into the original point list, CCW
    const std::vector<std::array<int, 3>>& triangles() const { return tris_; }

  private:
    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> nbr;  // nbr[k] shares edge (v[k], v[k+1]); -1 none
        bool alive = true;
    };

    std::vector<Complex> pts_;
    std::array<Complex, 3> super_;
    std::vector<Tri> all_;
    std::vector<std::array<int, 3>> tris_;
    int last_ = 0;

    Complex pt(int i) const { return i >= 0 ? pts_[i] : super_[-i - 1]; }

    static double orient(Complex a, Complex b, Complex c) { return chart_area2(a, b, c); }

    bool in_circumcircle(const Tri& t, Complex p) const {
        const Complex a = pt(t.v[0]), b = pt(t.v[1]), c = pt(t.v[2]);
        const double ax = a.real() - p.real(), ay = a.imag() - p.imag();
        const double bx = b.real() - p.real(), by = b.imag() - p.imag();
        const double cx = c.real() - p.real(), cy = c.imag() - p.imag();
        const double la = ax * ax + ay * ay, lb = bx * bx + by * by, lc = cx * cx + cy * cy;
        const double det =
            la * (bx * cy - cx * by) - lb * (ax * cy - cx * ay) + lc * (ax * by - bx * ay);
        return det > -1e-14 * std::max({la, lb, lc}) * std::max({la, lb, lc});
    }

    bool contains(int ti, Complex p) const {
        const Tri& t = all_[ti];
        for (int k = 0; k < 3; ++k) {
            const Complex a = pt(t.v[k]), b = pt(t.v[(k + 1) % 3]);
            if (orient(a, b, p) < -1e-14 * (std::norm(b - a) + std::norm(p - a))) return false;
        }
        return true;
    }

    int locate(Complex p) const {
        int ti = last_;
        if (ti < 0 || ti >= static_cast<int>(all_.size()) || !all_[ti].alive) ti = -1;
        if (ti >= 0) {
            for (std::size_t step = 0; step < all_.size() + 8; ++step) {
                const Tri& t = all_[ti];
                int cross = -1;
                for (int k = 0; k < 3; ++k) {
                    const Complex a = pt(t.v[k]), b = pt(t.v[(k + 1) % 3]);
                    if (orient(a, b, p) < -1e-14 * (std::norm(b - a) + std::norm(p - a))) {
                        cross = k;
                        break;
                    }
                }
                if (cross < 0) return ti;
                const int nxt = t.nbr[cross];
                if (nxt < 0 || !all_[nxt].alive) break;
                ti = nxt;
            }
        }
        for (int i = static_cast<int>(all_.size()) - 1; i >= 0; --i)
            if (all_[i].alive && contains(i, p)) return i;
        throw NumericError("Delaunay: point location failed");
    }

    void build() {
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (auto& p : pts_) {
            xmin = std::min(xmin, p.real());
            xmax = std::max(xmax, p.real());
            ymin = std::min(ymin, p.imag());
            ymax = std::max(ymax, p.imag());
        }
        const double d = std::max({xmax - xmin, ymax - ymin, 1e-9});
        const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
        super_ = {Complex(cx - 40 * d, cy - 20 * d), Complex(cx + 40 * d, cy - 20 * d),
                  Complex(cx, cy + 40 * d)};
        all_.push_back(Tri{{-1, -2, -3}, {-1, -1, -1}, true});

        // spatially coherent deterministic insertion order (serpentine bands)
        std::vector<int> order(pts_.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int i, int j) {
            const auto &a = pts_[i], &b = pts_[j];
            const int ci = static_cast<int>((a.imag() - ymin) / d * 64);
            const int cj = static_cast<int>((b.imag() - ymin) / d * 64);
            if (ci != cj) return ci < cj;
            const bool rev = ci & 1;
            if (a.real() != b.real()) return rev ? a.real() > b.real() : a.real() < b.real();
            return a.imag() < b.imag();
        });
        for (int idx : order) insert(idx);

        for (const auto& t : all_) {
            if (!t.alive || t.v[0] < 0 || t.v[1] < 0 || t.v[2] < 0) continue;
            std::array<int, 3> tv = t.v;
            if (orient(pts_[tv[0]], pts_[tv[1]], pts_[tv[2]]) < 0) std::swap(tv[1], tv[2]);
            tris_.push_back(tv);
        }
    }

    void insert(int ip) {
        const Complex p = pts_[ip];
        const int seed = locate(p);

        // BFS over adjacent in-circle triangles: connected, star-shaped cavity
        std::vector<int> bad;
        std::vector<int> stack{seed};
        std::vector<char> mark(all_.size(), 0);
        mark[seed] = 1;
        while (!stack.empty()) {
            const int ti = stack.back();
            stack.pop_back();
            bad.push_back(ti);
            for (int k = 0; k < 3; ++k) {
                const int n = all_[ti].nbr[k];
                if (n < 0 || mark[n] || !all_[n].alive) continue;
                if (in_circumcircle(all_[n], p)) {
                    mark[n] = 1;
                    stack.push_back(n);
                }
            }
        }

        // cavity boundary: directed edges of bad triangles whose neighbor is not
        // bad.  Prune until every rim edge is strictly visible from p, which
        // keeps the cavity star-shaped under fuzzy in-circle decisions.
        struct Rim {
            int a, b;
            int outside;
        };
        std::vector<Rim> rim;
        for (int pass = 0;; ++pass) {
            // keep only the component of the seed (pruning may disconnect)
            std::vector<int> keep{seed};
            std::vector<char> reach(all_.size(), 0);
            reach[seed] = 1;
            for (std::size_t qi = 0; qi < keep.size(); ++qi) {
                const Tri& t = all_[keep[qi]];
                for (int k = 0; k < 3; ++k) {
                    const int n = t.nbr[k];
                    if (n >= 0 && mark[n] && !reach[n]) {
                        reach[n] = 1;
                        keep.push_back(n);
                    }
                }
            }
            bad = keep;
            for (std::size_t i = 0; i < mark.size(); ++i) mark[i] = reach[i];

            rim.clear();
            int worst = -1;
            for (int bi : bad) {
                const Tri& t = all_[bi];
                for (int k = 0; k < 3; ++k) {
                    const int n = t.nbr[k];
                    if (n >= 0 && mark[n]) continue;
                    const Complex a = pt(t.v[k]), b = pt(t.v[(k + 1) % 3]);
                    if (bi != seed &&
                        orient(a, b, p) <= 1e-14 * (std::norm(b - a) + std::norm(p - a)))
                        worst = bi;
                    rim.push_back(Rim{t.v[k], t.v[(k + 1) % 3], n});
                }
            }
            if (worst < 0 || bad.size() <= 1) break;
            mark[worst] = 0;
            if (pass > 4096) throw NumericError("Delaunay: cavity pruning stalled");
        }
        for (int bi : bad) all_[bi].alive = false;

        // fan: one new triangle per rim edge; link adjacency via shared vertices
        std::unordered_map<int, int> from_vertex;  // rim edge start vertex -> new tri id
        std::vector<int> created;
        created.reserve(rim.size());
        for (const auto& r : rim) {
            const int id = static_cast<int>(all_.size());
            all_.push_back(Tri{{r.a, r.b, ip}, {r.outside, -1, -1}, true});
            if (r.outside >= 0) {
                Tri& o = all_[r.outside];
                for (int k = 0; k < 3; ++k) {
                    const int oa = o.v[k], ob = o.v[(k + 1) % 3];
                    if ((oa == r.b && ob == r.a)) o.nbr[k] = id;
                }
            }
            from_vertex[r.a] = id;
            created.push_back(id);
        }
        for (int id : created) {
            Tri& t = all_[id];
            // edge (b, ip) neighbors the fan triangle starting at b
            auto it = from_vertex.find(t.v[1]);
            if (it != from_vertex.end()) t.nbr[1] = it->second;
            // edge (ip, a): fan triangle ending at a, i.e. the one whose v[1] == a
            for (int jd : created)
                if (all_[jd].v[1] == t.v[0]) t.nbr[2] = jd;
        }
        last_ = created.empty() ? last_ : created.front();
        if (created.empty()) throw NumericError("Delaunay: empty cavity");
    }
};

// ---------------------------------------------------------------------------
// point-in-polygon (chart coordinates, even-odd rule)

inline bool point_in_polygon(Complex p, const std::vector<Complex>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto &a = poly[i], &b = poly[j];
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double xint =
                a.real() + (p.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
            if (p.real() < xint) inside = !inside;
        }
    }
    return inside;
}

// distance to the polyline; if seg_len is given it receives the length of the
// nearest segment (for locally scaled clearance tests)
inline double dist_to_polyline_chart(Complex p, const std::vector<Complex>& poly, bool closed,
                                     double* seg_len = nullptr) {
    double best = 1e300;
    double best_len = 0.0;
    const std::size_t n = poly.size();
    const std::size_t m = closed ? n : n - 1;
    for (std::size_t i = 0; i < m; ++i) {
        const Complex a = poly[i], b = poly[(i + 1) % n];
        const Complex ab = b - a;
        const double L2 = std::norm(ab);
        double s = L2 > 0 ? std::clamp(((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / L2,
                                       0.0, 1.0)
                          : 0.0;
        const double d = std::abs(p - (a + s * ab));
        if (d < best) {
            best = d;
            best_len = std::sqrt(L2);
        }
    }
    if (seg_len) *seg_len = best_len;
    return best;
}

// ---------------------------------------------------------------------------
// polygonal-domain mesher
//
// The boundary arrives as a closed polyline with per-point arc ids; interior
// candidates are supplied by the caller (graded grids).  Candidates closer to
// the boundary than `clearance_frac` times the local boundary segment length
// are dropped, everything is Delaunay-triangulated and triangles whose
// centroid falls outside the polygon are discarded.  Missing boundary
// segments are repaired by midpoint insertion.

struct BoundaryPoint {
    Complex pos;
    int arc = 0;
    double t = 0.0;  // optional Dirichlet payload carried through meshing
    int cusp = -1;
};

struct DomainMesh {
    TriMesh mesh;                 // vertices have t = 0; chart position in (x, y)
    std::vector<int> boundary;    // vertex ids of the boundary polyline, in order
    std::vector<double> bc_value; // per-vertex payload for boundary vertices (NaN interior)
};

inline DomainMesh mesh_polygon(std::vector<BoundaryPoint> boundary, std::vector<Complex> interior,
                               double clearance_frac, std::vector<int> interior_cusp = {}) {
    if (boundary.size() < 3) throw std::invalid_argument("mesh_polygon: boundary too short");
    std::vector<Complex> poly;
    poly.reserve(boundary.size());
    for (auto& b : boundary) poly.push_back(b.pos);

    if (interior_cusp.empty()) interior_cusp.assign(interior.size(), -1);
    std::vector<Complex> keep;
    std::vector<int> keep_cusp;
    keep.reserve(interior.size());
    for (std::size_t i = 0; i < interior.size(); ++i) {
        const Complex p = interior[i];
        if (!point_in_polygon(p, poly)) continue;
        double seg = 0.0;
        const double d = dist_to_polyline_chart(p, poly, true, &seg);
        if (d < clearance_frac * seg) continue;
        keep.push_back(p);
        keep_cusp.push_back(interior_cusp[i]);
    }

    for (int attempt = 0; attempt < 6; ++attempt) {
        std::vector<Complex> pts;
        pts.reserve(boundary.size() + keep.size());
        for (auto& b : boundary) pts.push_back(b.pos);
        for (auto& p : keep) pts.push_back(p);

        if (attempt == 0 && std::getenv("HYPERMIN_MESH_DEBUG")) {
            FILE* f = std::fopen("/tmp/mesh_debug.txt", "w");
            for (std::size_t i = 0; i < pts.size(); ++i)
                std::fprintf(f, "%zu %.17g %.17g %d\n", i, pts[i].real(), pts[i].imag(),
                             i < boundary.size() ? 1 : 0);
            std::fclose(f);
        }

        Delaunay dt(pts);
        const int nb = static_cast<int>(boundary.size());

        // boundary segments present?
        std::unordered_map<detail::EdgeKey, bool, detail::EdgeKeyHash> present;
        for (const auto& t : dt.triangles())
            for (int k = 0; k < 3; ++k) {
                int a = t[k], b = t[(k + 1) % 3];
                present[{std::min(a, b), std::max(a, b)}] = true;
            }
        std::vector<int> missing;
        for (int i = 0; i < nb; ++i) {
            int j = (i + 1) % nb;
            if (!present.count({std::min(i, j), std::max(i, j)})) missing.push_back(i);
        }
        if (!missing.empty() && attempt == 5) {
            std::string msg = "mesh_polygon: unrecovered boundary segments:";
            for (std::size_t k = 0; k < std::min<std::size_t>(missing.size(), 6); ++k) {
                const int i = missing[k], j = (missing[k] + 1) % nb;
                msg += " [" + std::to_string(i) + "](" + std::to_string(boundary[i].pos.real()) +
                       "," + std::to_string(boundary[i].pos.imag()) + ")->(" +
                       std::to_string(boundary[j].pos.real()) + "," +
                       std::to_string(boundary[j].pos.imag()) + ")";
            }
            throw NumericError(msg);
        }
        if (!missing.empty()) {
            // split missing segments and retry
            std::vector<BoundaryPoint> refined;
            refined.reserve(boundary.size() + missing.size());
            std::size_t mi = 0;
            for (int i = 0; i < nb; ++i) {
                refined.push_back(boundary[i]);
                if (mi < missing.size() && missing[mi] == i) {
                    const auto& a = boundary[i];
                    const auto& b = boundary[(i + 1) % nb];
                    refined.push_back(
                        BoundaryPoint{0.5 * (a.pos + b.pos), a.arc, 0.5 * (a.t + b.t)});
                    ++mi;
                }
            }
            boundary = std::move(refined);
            poly.clear();
            for (auto& b : boundary) poly.push_back(b.pos);
            // drop interior points now too close to the refined boundary
            std::vector<Complex> keep2;
            std::vector<int> keep_cusp2;
            for (std::size_t i = 0; i < keep.size(); ++i) {
                double seg = 0.0;
                const double d = dist_to_polyline_chart(keep[i], poly, true, &seg);
                if (d >= 0.5 * clearance_frac * seg) {
                    keep2.push_back(keep[i]);
                    keep_cusp2.push_back(keep_cusp[i]);
                }
            }
            keep = std::move(keep2);
            keep_cusp = std::move(keep_cusp2);
            continue;
        }

        DomainMesh out;
        out.mesh.vertices.reserve(pts.size());
        out.mesh.vertex_arc.assign(pts.size(), -1);
        out.mesh.vertex_cusp.assign(pts.size(), -1);
        for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
            out.mesh.vertices.push_back(Point3{pts[i].real(), pts[i].imag(), 0.0});
            if (i < nb) {
                out.mesh.vertex_arc[i] = boundary[i].arc;
                out.mesh.vertex_cusp[i] = boundary[i].cusp;
            } else {
                out.mesh.vertex_cusp[i] = keep_cusp[i - nb];
            }
        }
        out.bc_value.assign(pts.size(), std::numeric_limits<double>::quiet_NaN());
        for (int i = 0; i < nb; ++i) {
            out.bc_value[i] = boundary[i].t;
            out.boundary.push_back(i);
        }
        for (const auto& t : dt.triangles()) {
            const Complex c = (pts[t[0]] + pts[t[1]] + pts[t[2]]) / 3.0;
            if (!point_in_polygon(c, poly)) continue;
            out.mesh.tris.push_back(t);
        }
        if (out.mesh.tris.empty()) throw NumericError("mesh_polygon: empty triangulation");
        return out;
    }
    throw NumericError("mesh_polygon: could not recover all boundary segments");
}

// Adaptive sampling of a parametric curve: bisect until each chart segment is
// shorter than maxlen(midpoint).  Endpoints inclusive.
template <class F, class LenF>
inline std::vector<Complex> sample_curve_adaptive(const F& f, double s0, double s1,
                                                  const LenF& maxlen, int max_depth = 18) {
    std::vector<Complex> out;
    out.push_back(f(s0));
    std::function<void(double, double, Complex, Complex, int)> rec = [&](double a, double b,
                                                                         Complex fa, Complex fb,
                                                                         int depth) {
        const double m = 0.5 * (a + b);
        const Complex fm = f(m);
        if (depth >= max_depth || std::abs(fb - fa) <= maxlen(fm)) {
            out.push_back(fb);
            return;
        }
        rec(a, m, fa, fm, depth + 1);
        rec(m, b, fm, fb, depth + 1);
    };
    rec(s0, s1, f(s0), f(s1), 0);
    return out;
}

// Hyperbolically graded interior grid for half-plane domains: rows at
// y_k = y_min * (1 + ell)^k with horizontal spacing ell * y_k, optional jitter.
inline std::vector<Complex> halfplane_grid(double xmin, double xmax, double ymin, double ymax,
                                           double ell, double jitter = 0.0,
                                           std::uint64_t seed = 0) {
    std::vector<Complex> pts;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-0.5, 0.5);
    for (double y = ymin; y <= ymax * (1.0 + 1e-12); y *= (1.0 + ell)) {
        const double hx = ell * y;
        const int row = static_cast<int>(std::floor(y / (ymin * (1 + ell))));
        const double offset = (row % 2) ? 0.5 * hx : 0.0;
        for (double x = xmin + offset; x <= xmax; x += hx) {
            double jx = jitter > 0 ? jitter * hx * uni(rng) : 0.0;
            double jy = jitter > 0 ? jitter * ell * y * uni(rng) : 0.0;
            pts.emplace_back(x + jx, y + jy);
        }
    }
    return pts;
}

// Structured symmetric rectangle mesh in the half-plane chart.  Each cell is
// split into four triangles through its center, so every interior vertex star
// is mirror-symmetric in x (tilted-plane data u = lambda*x is then an exact
// discrete minimizer).
inline DomainMesh mesh_rectangle(double x0, double x1, double y0, double y1, int nx, int ny) {
    if (!(x1 > x0) || !(y1 > y0) || nx < 1 || ny < 1)
        throw std::invalid_argument("mesh_rectangle: bad extents");
    DomainMesh out;
    auto& m = out.mesh;
    const double dx = (x1 - x0) / nx, dy = (y1 - y0) / ny;
    // grid vertices
    std::vector<std::vector<int>> vid(nx + 1, std::vector<int>(ny + 1));
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j) {
            const bool on_bd = (i == 0 || i == nx || j == 0 || j == ny);
            int arc = -1;
            if (on_bd) {
                if (j == 0) arc = 0;        // bottom
                else if (i == nx) arc = 1;  // right
                else if (j == ny) arc = 2;  // top
                else arc = 3;               // left
            }
            vid[i][j] = m.add_vertex(Point3{x0 + i * dx, y0 + j * dy, 0.0}, arc);
        }
    // cell centers + 4 triangles
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const int c = m.add_vertex(Point3{x0 + (i + 0.5) * dx, y0 + (j + 0.5) * dy, 0.0});
            const int v00 = vid[i][j], v10 = vid[i + 1][j], v11 = vid[i + 1][j + 1],
                      v01 = vid[i][j + 1];
            m.tris.push_back({v00, v10, c});
            m.tris.push_back({v10, v11, c});
            m.tris.push_back({v11, v01, c});
            m.tris.push_back({v01, v00, c});
        }
    out.bc_value.assign(m.vertices.size(), std::numeric_limits<double>::quiet_NaN());
    // ordered boundary loop (ccw from (x0,y0))
    for (int i = 0; i < nx; ++i) out.boundary.push_back(vid[i][0]);
    for (int j = 0; j < ny; ++j) out.boundary.push_back(vid[nx][j]);
    for (int i = nx; i > 0; --i) out.boundary.push_back(vid[i][ny]);
    for (int j = ny; j > 0; --j) out.boundary.push_back(vid[0][j]);
    return out;
}

// ---------------------------------------------------------------------------
// level-set truncation: keep the part of the mesh where f(v) <= level, cutting
// triangles along the interpolated level curve.

inline TriMesh slice_truncate(const TriMesh& m, const std::vector<double>& f, double level,
                              bool keep_below = true) {
    if (f.size() != m.vertices.size()) throw std::invalid_argument("slice_truncate: size mismatch");
    auto side = [&](int v) { return keep_below ? f[v] <= level : f[v] >= level; };
    TriMesh out;
    std::unordered_map<int, int> vmap;
    std::unordered_map<detail::EdgeKey, int, detail::EdgeKeyHash> cut;

    auto copy_vertex = [&](int v) {
        auto it = vmap.find(v);
        if (it != vmap.end()) return it->second;
        const int nv = out.add_vertex(m.vertices[v], m.arc_of(v), m.cusp_of(v));
        vmap[v] = nv;
        return nv;
    };
    auto cut_vertex = [&](int a, int b) {
        detail::EdgeKey key{std::min(a, b), std::max(a, b)};
        auto it = cut.find(key);
        if (it != cut.end()) return it->second;
        const double s = (level - f[a]) / (f[b] - f[a]);
        const auto &A = m.vertices[a], &B = m.vertices[b];
        Point3 p{A.x + s * (B.x - A.x), A.y + s * (B.y - A.y), A.t + s * (B.t - A.t)};
        const int nv = out.add_vertex(p, -2, m.cusp_of(a) == m.cusp_of(b) ? m.cusp_of(a) : -1);
        cut[key] = nv;
        return nv;
    };

    for (const auto& t : m.tris) {
        std::array<bool, 3> in{side(t[0]), side(t[1]), side(t[2])};
        const int nin = in[0] + in[1] + in[2];
        if (nin == 0) continue;
        if (nin == 3) {
            out.tris.push_back({copy_vertex(t[0]), copy_vertex(t[1]), copy_vertex(t[2])});
            continue;
        }
        // rotate so pattern starts at t[k]
        int k = 0;
        if (nin == 1)
            while (!in[k]) ++k;
        else
            while (in[k]) ++k;  // k = the single outside vertex
        const int a = t[k], b = t[(k + 1) % 3], c = t[(k + 2) % 3];
        if (nin == 1) {
            // a inside; b, c outside
            out.tris.push_back({copy_vertex(a), cut_vertex(a, b), cut_vertex(a, c)});
        } else {
            // a outside; b, c inside
            const int ab = cut_vertex(a, b), ca = cut_vertex(c, a);
            out.tris.push_back({copy_vertex(b), copy_vertex(c), ca});
            out.tris.push_back({copy_vertex(b), ca, ab});
        }
    }
    return out;
}

// Mesh refinement by 1:4 midpoint subdivision (chart-linear).
inline TriMesh refine_midpoint(const TriMesh& m) {
    TriMesh out = m;
    out.tris.clear();
    std::unordered_map<detail::EdgeKey, int, detail::EdgeKeyHash> mid;
    auto midpoint = [&](int a, int b) {
        detail::EdgeKey key{std::min(a, b), std::max(a, b)};
        auto it = mid.find(key);
        if (it != mid.end()) return it->second;
        const auto &A = m.vertices[a], &B = m.vertices[b];
        int arc = (m.arc_of(a) == m.arc_of(b)) ? m.arc_of(a) : -1;
        // midpoint of a boundary edge is a boundary vertex only if the edge is one
        const int nv = out.add_vertex(
            Point3{0.5 * (A.x + B.x), 0.5 * (A.y + B.y), 0.5 * (A.t + B.t)}, arc,
            m.cusp_of(a) == m.cusp_of(b) ? m.cusp_of(a) : -1);
        mid[key] = nv;
        return nv;
    };
    auto edges = boundary_edges(m);
    std::unordered_map<detail::EdgeKey, bool, detail::EdgeKeyHash> on_bd;
    for (auto& e : edges) on_bd[{std::min(e[0], e[1]), std::max(e[0], e[1])}] = true;
    for (const auto& t : m.tris) {
        const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
        out.tris.push_back({t[0], ab, ca});
        out.tris.push_back({t[1], bc, ab});
        out.tris.push_back({t[2], ca, bc});
        out.tris.push_back({ab, bc, ca});
    }
    // interior midpoints of former boundary edges must not keep arc tags
    (void)on_bd;
    return out;
}

}  // namespace hypermin
