#pragma once

// Standard end models E_(p,q), boundary-curve type classification, the
// boundary diameter G with its integer cover count k0, and trapping-slab
// arithmetic.
//
// Slab functional convention (per kind):
//   (p,0):  s(x,t) = p*tau*t          (t-slab, scaled)
//   (0,q):  s(x,t) = x                (x-slab, unscaled)
//   (p,q):  s(x,t) = p*tau*t - q*h*x
// Slab width is invariant under the deck group in all three cases.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hypermin/geometry.hpp"
#include "hypermin/mesh.hpp"

namespace hypermin {

struct EndType {
    int p = 0;
    int q = 0;  // (p, q) != (0, 0); NOT reduced by gcd (covering degree matters)
    bool operator==(const EndType& o) const { return p == o.p && q == o.q; }
};

// slope of the associated tilted plane, lambda = qh/(p tau); requires p != 0
inline double end_slope(const EndType& e, const CuspModel& m) {
    if (e.p == 0) throw std::domain_error("end_slope: vertical type has no finite slope");
    return static_cast<double>(e.q) * m.h / (static_cast<double>(e.p) * m.tau);
}

struct StandardEnd {
    EndType kind;
    double constant = 0.0;  // t0 for (p,0), x0 for (0,q), c0 otherwise
    CuspModel model;
};

struct BoundaryCurve {
    // polyline C(s) = (x(s), y0, t(s)) sampled over one period s in [0,1]
    // INCLUSIVE: the last sample is C(1) = C(0) + (p tau, 0, q h).
    std::vector<Point3> samples;
    CuspModel model;
};

struct TrappingSlab {
    double c_min = 0.0;
    double c_max = 0.0;
    double coef_t = 0.0;  // functional s(x,t) = coef_t * t + coef_x * x
    double coef_x = 0.0;
    double width() const { return c_max - c_min; }
};

inline void slab_coefficients(const EndType& kind, const CuspModel& m, double& coef_t,
                              double& coef_x) {
    if (kind.q == 0) {
        coef_t = kind.p * m.tau;
        coef_x = 0.0;
    } else if (kind.p == 0) {
        coef_t = 0.0;
        coef_x = 1.0;
    } else {
        coef_t = kind.p * m.tau;
        coef_x = -kind.q * m.h;
    }
}

inline double slab_functional(const EndType& kind, const CuspModel& m, double x, double t) {
    double ct, cx;
    slab_coefficients(kind, m, ct, cx);
    return ct * t + cx * x;
}

// functional value of the standard end itself (its zero-width slab level)
inline double standard_end_level(const StandardEnd& e) {
    if (e.kind.q == 0) return e.kind.p * e.model.tau * e.constant;
    if (e.kind.p == 0) return e.constant;
    return e.constant;
}

// ---------------------------------------------------------------------------
// classification

// p = round(dx/tau), q = round(dt/h) from the displacement over one period.
// The default closure tolerance is 1e-6 * max(tau, h).
inline EndType classify(const BoundaryCurve& curve, double tolerance = -1.0) {
    if (curve.samples.size() < 2) throw std::invalid_argument("classify: need >= 2 samples");
    const CuspModel& m = curve.model;
    if (tolerance < 0) tolerance = 1e-6 * std::max(m.tau, m.h);
    const Point3& first = curve.samples.front();
    const Point3& last = curve.samples.back();
    const double Dx = last.x - first.x;
    const double Dt = last.t - first.t;
    const int p = static_cast<int>(std::lround(Dx / m.tau));
    const int q = static_cast<int>(std::lround(Dt / m.h));
    const double res = std::max(std::abs(Dx - p * m.tau), std::abs(Dt - q * m.h));
    if (res > tolerance)
        throw std::domain_error("classify: not a deck-periodic curve (closure residual " +
                                std::to_string(res) + ")");
    if (p == 0 && q == 0)
        throw std::domain_error("classify: compact lifted boundary excluded (type (0,0))");
    return EndType{p, q};
}

// Sampled boundary curve from a parametrization of [0,1]; n+1 samples inclusive.
template <class F>
inline BoundaryCurve sample_curve(const F& f, const CuspModel& model, int n) {
    BoundaryCurve c;
    c.model = model;
    c.samples.reserve(n + 1);
    for (int i = 0; i <= n; ++i) c.samples.push_back(f(static_cast<double>(i) / n));
    return c;
}

namespace detail {
inline std::vector<Point3> dedup(const std::vector<Point3>& pts) {
    std::vector<Point3> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        if (!out.empty() && std::abs(p.x - out.back().x) < 1e-15 &&
            std::abs(p.t - out.back().t) < 1e-15)
            continue;
        out.push_back(p);
    }
    return out;
}
}  // namespace detail

// G = sup |t(s1) - t(s2)| over one period.
inline double diameter_G(const BoundaryCurve& curve) {
    if (curve.samples.empty()) throw std::invalid_argument("diameter_G: empty curve");
    const auto pts = detail::dedup(curve.samples);
    double tmin = pts.front().t, tmax = tmin;
    for (const auto& p : pts) {
        tmin = std::min(tmin, p.t);
        tmax = std::max(tmax, p.t);
    }
    return tmax - tmin;
}

// smallest non-negative integer with k0*h >= G (exact at integer ratios)
inline int k0_of(double G, double h) {
    if (!(h > 0.0)) throw std::domain_error("k0_of: h must be positive");
    if (G <= 0.0) return 0;
    const double r = G / h;
    const double k = std::round(r);
    if (std::abs(r - k) <= 1e-12 * std::max(1.0, r)) return static_cast<int>(k);
    return static_cast<int>(std::ceil(r));
}

// Exact envelope slab of the boundary curve in the type functional.
inline TrappingSlab slab_of_curve(const BoundaryCurve& curve, const EndType& kind,
                                  double tolerance = -1.0) {
    const EndType got = classify(curve, tolerance);
    if (!(got == kind))
        throw std::domain_error("slab_of_curve: curve classifies as (" + std::to_string(got.p) +
                                "," + std::to_string(got.q) + "), not the requested kind");
    TrappingSlab slab;
    slab_coefficients(kind, curve.model, slab.coef_t, slab.coef_x);
    const auto pts = detail::dedup(curve.samples);
    double lo = 1e300, hi = -1e300;
    for (const auto& p : pts) {
        const double s = slab.coef_t * p.t + slab.coef_x * p.x;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    slab.c_min = lo;
    slab.c_max = hi;
    return slab;
}

inline TrappingSlab slab_of_mesh(const TriMesh& mesh, const EndType& kind, const CuspModel& m) {
    TrappingSlab slab;
    slab_coefficients(kind, m, slab.coef_t, slab.coef_x);
    double lo = 1e300, hi = -1e300;
    for (const auto& p : mesh.vertices) {
        const double s = slab.coef_t * p.t + slab.coef_x * p.x;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    slab.c_min = lo;
    slab.c_max = hi;
    return slab;
}

// ---------------------------------------------------------------------------
// standard end meshes: planar patches satisfying the defining equation exactly

inline TriMesh standard_end_mesh(const StandardEnd& end, double y_min, double y_max, int nu,
                                 int ny) {
    if (!(y_min >= end.model.y0)) throw std::domain_error("standard_end_mesh: y below y0");
    if (!(y_max > y_min) || nu < 2 || ny < 2)
        throw std::invalid_argument("standard_end_mesh: bad range/resolution");
    TriMesh m;
    const CuspModel& cm = end.model;
    std::vector<std::vector<int>> vid(nu);
    for (int i = 0; i < nu; ++i) {
        const double s = static_cast<double>(i) / (nu - 1);
        for (int j = 0; j < ny; ++j) {
            // geometric spacing in y (uniform hyperbolically)
            const double y = y_min * std::pow(y_max / y_min, static_cast<double>(j) / (ny - 1));
            Point3 p;
            if (end.kind.q == 0) {
                p = Point3{s * end.kind.p * cm.tau, y, end.constant};
            } else if (end.kind.p == 0) {
                p = Point3{end.constant, y, s * end.kind.q * cm.h};
            } else {
                const double x = s * end.kind.p * cm.tau;
                p = Point3{x, y, (end.constant + end.kind.q * cm.h * x) / (end.kind.p * cm.tau)};
            }
            vid[i].push_back(m.add_vertex(p));
        }
    }
    for (int i = 0; i + 1 < nu; ++i)
        for (int j = 0; j + 1 < ny; ++j) {
            m.tris.push_back({vid[i][j], vid[i + 1][j], vid[i + 1][j + 1]});
            m.tris.push_back({vid[i][j], vid[i + 1][j + 1], vid[i][j + 1]});
        }
    return m;
}

// ---------------------------------------------------------------------------
// ambient distance to a standard end (numeric for the helicoidal case)

inline double dist_to_standard_end(const Point3& p, const StandardEnd& end) {
    const CuspModel& m = end.model;
    if (end.kind.q == 0) {
        // {t = t0, y >= y0}: vertical offset only (p.y assumed >= y0)
        return std::abs(p.t - end.constant);
    }
    if (end.kind.p == 0) {
        // {x = x0} x R: distance to a vertical geodesic plane
        return std::asinh(std::abs(p.x - end.constant) / p.y);
    }
    // helicoidal plane {p tau t - q h x = c0}: minimize over the x-parametrized
    // surface (x, y, t(x)) with nested golden sections.
    const double a = end.kind.p * m.tau, b = end.kind.q * m.h;
    auto t_of_x = [&](double x) { return (end.constant + b * x) / a; };
    auto d_for_x = [&](double x) {
        // min over y of product distance to the vertical line {x} x {t(x)}:
        // the ray {(x, y, t(x)) : y > 0} is not geodesic in y... minimize directly.
        auto d_for_y = [&](double ly) {
            const double y = std::exp(ly);
            const double dh = dist_h2(p.x, p.y, x, y);
            const double dt = p.t - t_of_x(x);
            return std::sqrt(dh * dh + dt * dt);
        };
        const double ly0 = std::log(p.y);
        const double lo = ly0 - 3.0, hi = ly0 + 3.0;
        const double ly = golden_min(d_for_y, lo, hi, 50);
        return d_for_y(ly);
    };
    // window: between the foot under p and the x where the plane passes t = p.t,
    // padded by several hyperbolic units at p's scale
    const double x_level = (a * p.t - end.constant) / b;
    const double pad = 8.0 * p.y + 8.0;
    const double lo = std::min(p.x, x_level) - pad;
    const double hi = std::max(p.x, x_level) + pad;
    double best = 1e300;
    const int coarse = 256;
    double xbest = p.x;
    for (int i = 0; i <= coarse; ++i) {
        const double x = lo + (hi - lo) * i / coarse;
        const double d = d_for_x(x);
        if (d < best) {
            best = d;
            xbest = x;
        }
    }
    const double step = (hi - lo) / coarse;
    const double refine = golden_min(d_for_x, xbest - step, xbest + step, 60);
    return std::min(best, d_for_x(refine));
}

// For each ladder height, the sup over mesh vertices in a band around it of the
// ambient distance to the standard end.  Bands are [y/band, y*band].
struct ProfileEntry {
    double y;
    double sup_distance;
    int count;  // vertices in the band (0 => skipped)
};

inline std::vector<ProfileEntry> asymptotic_distance_profile(const TriMesh& mesh,
                                                             const StandardEnd& end,
                                                             const std::vector<double>& y_ladder,
                                                             double band = 1.2) {
    std::vector<ProfileEntry> out;
    for (double y : y_ladder) {
        ProfileEntry e{y, 0.0, 0};
        for (const auto& v : mesh.vertices) {
            if (v.y < y / band || v.y > y * band) continue;
            e.sup_distance = std::max(e.sup_distance, dist_to_standard_end(v, end));
            e.count++;
        }
        out.push_back(e);
    }
    return out;
}

}  // namespace hypermin
