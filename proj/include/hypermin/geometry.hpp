#pragma once

// Half-plane / half-space models and their isometries.
//
// One chart convention throughout: surfaces live in the upper half-plane
// (x, y), y > 0, with the vertical coordinate t.  Ambient metrics:
//   product:    ds^2 = (dx^2 + dy^2)/y^2 + dt^2
//   hyperbolic: ds^2 = (dx^2 + dy^2 + dt^2)/y^2
// The Poincare disk exists only as an input chart; `disk_to_halfplane`
// converts on ingestion (disk origin -> (0,1), disk point (0,1) -> infinity).

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hypermin/numerics.hpp"

namespace hypermin {

using Complex = std::complex<double>;

struct Point3 {
    double x = 0.0;
    double y = 1.0;  // > 0
    double t = 0.0;

    Complex xy() const { return {x, y}; }
};

inline Point3 make_point(double x, double y, double t = 0.0) {
    if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(t))
        throw std::domain_error("Point3: require finite coordinates with y > 0");
    return Point3{x, y, t};
}

enum class AmbientKind { ProductCusp, HyperbolicCusp };

struct CuspModel {
    double tau = 1.0;  // parabolic period, > 0
    double h = 1.0;    // vertical period, > 0
    double y0 = 1.0;   // truncation level, >= 1
    AmbientKind ambient = AmbientKind::ProductCusp;
};

inline CuspModel make_cusp_model(double tau, double h, double y0, AmbientKind ambient) {
    if (!(tau > 0.0) || !(h > 0.0) || !(y0 >= 1.0))
        throw std::domain_error("CuspModel: require tau > 0, h > 0, y0 >= 1");
    return CuspModel{tau, h, y0, ambient};
}

// ---------------------------------------------------------------------------
// distances

inline double dist_h2(double x1, double y1, double x2, double y2) {
    if (!(y1 > 0.0) || !(y2 > 0.0)) throw std::domain_error("dist_h2: y must be positive");
    const double dx = x1 - x2, dy = y1 - y2;
    return std::acosh(1.0 + (dx * dx + dy * dy) / (2.0 * y1 * y2));
}

inline double dist_h2(Complex p, Complex q) { return dist_h2(p.real(), p.imag(), q.real(), q.imag()); }

inline double dist_h3(const Point3& p, const Point3& q) {
    if (!(p.y > 0.0) || !(q.y > 0.0)) throw std::domain_error("dist_h3: y must be positive");
    const double dx = p.x - q.x, dy = p.y - q.y, dt = p.t - q.t;
    return std::acosh(1.0 + (dx * dx + dy * dy + dt * dt) / (2.0 * p.y * q.y));
}

inline double dist_ambient(const Point3& p, const Point3& q, AmbientKind kind) {
    if (kind == AmbientKind::HyperbolicCusp) return dist_h3(p, q);
    const double dh = dist_h2(p.x, p.y, q.x, q.y), dt = p.t - q.t;
    return std::sqrt(dh * dh + dt * dt);
}

// ---------------------------------------------------------------------------
// geodesics of the half-plane

struct Geodesic {
    // Vertical line {x = a} when vertical, else semicircle with feet a < b.
    bool vertical = false;
    double a = 0.0;
    double b = 0.0;

    static Geodesic vertical_line(double x) { return Geodesic{true, x, x}; }
    static Geodesic semicircle(double a, double b) {
        if (!(a < b)) throw std::domain_error("Geodesic: semicircle feet require a < b");
        return Geodesic{false, a, b};
    }
    double center() const { return 0.5 * (a + b); }
    double radius() const { return 0.5 * (b - a); }
};

inline Geodesic geodesic_through(Complex p, Complex q) {
    if (!(p.imag() > 0.0) || !(q.imag() > 0.0))
        throw std::domain_error("geodesic_through: points must have y > 0");
    const double dx = p.real() - q.real();
    if (std::abs(dx) < 1e-14 * (1.0 + std::abs(p.real()))) return Geodesic::vertical_line(p.real());
    const double m = (std::norm(p) - std::norm(q)) / (2.0 * dx);
    const double r = std::hypot(p.real() - m, p.imag());
    return Geodesic::semicircle(m - r, m + r);
}

inline double dist_to_geodesic(Complex p, const Geodesic& g) {
    if (!(p.imag() > 0.0)) throw std::domain_error("dist_to_geodesic: y must be positive");
    if (g.vertical) return std::asinh(std::abs(p.real() - g.a) / p.imag());
    const Complex w = (p - Complex(g.a, 0.0)) / (Complex(g.b, 0.0) - p);
    return std::asinh(std::abs(w.real()) / w.imag());
}

// Arc-length point on a geodesic: parameter s is signed hyperbolic distance from
// the apex (vertical line: from y = 1; semicircle: from the top point).
inline Complex geodesic_point(const Geodesic& g, double s) {
    if (g.vertical) return {g.a, std::exp(s)};
    // unit-speed parametrization c + r*(tanh s, sech s)
    return {g.center() + g.radius() * std::tanh(s), g.radius() / std::cosh(s)};
}

// ---------------------------------------------------------------------------
// disk <-> half-plane model map
//
// phi(w) = i(1 - iw)/(1 + iw):  phi(0) = i,  phi(i) = inf,  phi(-i) = 0,
// phi(1) = 1, phi(-1) = -1.  Inverse: w = (i - z)/(iz - 1).

inline Complex disk_to_halfplane(Complex w) {
    if (!(std::norm(w) < 1.0)) throw std::domain_error("disk_to_halfplane: require |w| < 1");
    const Complex i(0.0, 1.0);
    return i * (1.0 - i * w) / (1.0 + i * w);
}

inline Complex halfplane_to_disk(Complex z) {
    if (!(z.imag() > 0.0)) throw std::domain_error("halfplane_to_disk: require Im z > 0");
    const Complex i(0.0, 1.0);
    return (i - z) / (i * z - 1.0);
}

// Boundary version: maps ideal points of the disk (|w| = 1) to points of the real
// axis, with w = i going to infinity (returned as +inf).
inline double disk_boundary_to_real(Complex w) {
    const Complex i(0.0, 1.0);
    const Complex den = 1.0 + i * w;
    if (std::abs(den) < 1e-14) return std::numeric_limits<double>::infinity();
    const Complex z = i * (1.0 - i * w) / den;
    return z.real();
}

// ---------------------------------------------------------------------------
// isometries as ordered generator words

struct Parabolic {
    double tau;
};
struct VerticalTranslate {
    double h;
};
struct HyperbolicTranslate {
    Geodesic axis;
    double length;  // positive translates from foot a toward foot b
};
struct GeodesicReflection {
    Geodesic mirror;
};
struct ModelMap {
    bool disk_to_half = true;
};

using Generator =
    std::variant<Parabolic, VerticalTranslate, HyperbolicTranslate, GeodesicReflection, ModelMap>;

inline Complex apply_xy(const Generator& g, Complex z) {
    return std::visit(
        [&](const auto& gen) -> Complex {
            using T = std::decay_t<decltype(gen)>;
            if constexpr (std::is_same_v<T, Parabolic>) {
                return z + Complex(gen.tau, 0.0);
            } else if constexpr (std::is_same_v<T, VerticalTranslate>) {
                return z;
            } else if constexpr (std::is_same_v<T, HyperbolicTranslate>) {
                const double e = std::exp(gen.length);
                if (gen.axis.vertical) {
                    return Complex(gen.axis.a, 0.0) + e * (z - Complex(gen.axis.a, 0.0));
                }
                // conjugate by N: a -> 0, b -> inf; scale by e; back
                const Complex A(gen.axis.a, 0.0), B(gen.axis.b, 0.0);
                const Complex w = e * (z - A) / (z - B);
                return (B * w - A) / (w - 1.0);
            } else if constexpr (std::is_same_v<T, GeodesicReflection>) {
                if (gen.mirror.vertical) return Complex(2.0 * gen.mirror.a - z.real(), z.imag());
                const Complex c(gen.mirror.center(), 0.0);
                const double r2 = gen.mirror.radius() * gen.mirror.radius();
                return c + r2 / std::conj(z - c);
            } else {
                return gen.disk_to_half ? disk_to_halfplane(z) : halfplane_to_disk(z);
            }
        },
        g);
}

inline double apply_t(const Generator& g, double t) {
    if (const auto* v = std::get_if<VerticalTranslate>(&g)) return t + v->h;
    return t;
}

inline Generator invert(const Generator& g) {
    return std::visit(
        [](const auto& gen) -> Generator {
            using T = std::decay_t<decltype(gen)>;
            if constexpr (std::is_same_v<T, Parabolic>) {
                return Parabolic{-gen.tau};
            } else if constexpr (std::is_same_v<T, VerticalTranslate>) {
                return VerticalTranslate{-gen.h};
            } else if constexpr (std::is_same_v<T, HyperbolicTranslate>) {
                return HyperbolicTranslate{gen.axis, -gen.length};
            } else if constexpr (std::is_same_v<T, GeodesicReflection>) {
                return gen;  // involution
            } else {
                return ModelMap{!gen.disk_to_half};
            }
        },
        g);
}

class Isometry {
  public:
    Isometry() = default;
    explicit Isometry(Generator g) : word_{std::move(g)} {}
    explicit Isometry(std::vector<Generator> w) : word_(std::move(w)) {}

    static Isometry identity() { return {}; }
    static Isometry parabolic(double tau) { return Isometry(Parabolic{tau}); }
    static Isometry vertical(double h) { return Isometry(VerticalTranslate{h}); }
    static Isometry translate_along(const Geodesic& axis, double length) {
        return Isometry(HyperbolicTranslate{axis, length});
    }
    static Isometry reflect_in(const Geodesic& mirror) { return Isometry(GeodesicReflection{mirror}); }
    static Isometry model_map(bool disk_to_half) { return Isometry(ModelMap{disk_to_half}); }

    // pi-rotation about a half-plane point: product of reflections in two
    // perpendicular geodesics through it.
    static Isometry rotation_pi(Complex center) {
        if (!(center.imag() > 0.0)) throw std::domain_error("rotation_pi: center must have y > 0");
        const Geodesic vert = Geodesic::vertical_line(center.real());
        const Geodesic circ =
            Geodesic::semicircle(center.real() - center.imag(), center.real() + center.imag());
        Isometry iso;
        iso.word_ = {GeodesicReflection{circ}, GeodesicReflection{vert}};
        return iso;
    }

    Isometry then(const Isometry& next) const {
        Isometry out;
        out.word_ = word_;
        out.word_.insert(out.word_.end(), next.word_.begin(), next.word_.end());
        return out;
    }

    Isometry inverse() const {
        Isometry out;
        out.word_.reserve(word_.size());
        for (auto it = word_.rbegin(); it != word_.rend(); ++it) out.word_.push_back(invert(*it));
        return out;
    }

    Complex apply_xy_point(Complex z) const {
        for (const auto& g : word_) z = apply_xy(g, z);
        return z;
    }

    Point3 apply(const Point3& p) const {
        Complex z = p.xy();
        double t = p.t;
        for (const auto& g : word_) {
            z = apply_xy(g, z);
            t = apply_t(g, t);
        }
        return Point3{z.real(), z.imag(), t};
    }

    double vertical_shift() const {
        double s = 0.0;
        for (const auto& g : word_)
            if (const auto* v = std::get_if<VerticalTranslate>(&g)) s += v->h;
        return s;
    }

    const std::vector<Generator>& word() const { return word_; }
    bool empty() const { return word_.empty(); }

  private:
    std::vector<Generator> word_;
};

// g . composed_with(f): apply f first, then g.
inline Isometry compose(const Isometry& g, const Isometry& f) { return f.then(g); }

// Real Mobius transform (a z + b)/(c z + d), ad - bc > 0: chart helper for
// half-plane cusp coordinates (sends a chosen ideal point to infinity).
struct Mobius {
    double a = 1, b = 0, c = 0, d = 1;

    static Mobius identity() { return {}; }
    // sends the ideal point x0 (on the real axis) to infinity: z -> -1/(z - x0)
    static Mobius ideal_to_infinity(double x0) { return Mobius{0, -1, 1, -x0}; }
    static Mobius scale(double s) { return Mobius{s, 0, 0, 1}; }
    static Mobius shift(double dx) { return Mobius{1, dx, 0, 1}; }

    Complex operator()(Complex z) const { return (a * z + b) / (c * z + d); }
    double at_infinity() const { return c == 0 ? std::numeric_limits<double>::infinity() : a / c; }
    Mobius inverse() const { return Mobius{d, -b, -c, a}; }
    Mobius then(const Mobius& n) const {
        return Mobius{n.a * a + n.b * c, n.a * b + n.b * d, n.c * a + n.d * c, n.c * b + n.d * d};
    }
};

// ---------------------------------------------------------------------------
// cusp-model quantities

// Magnitude of the mean curvature of the level tori {y = const}, with the
// normal pointing toward the cusp (increasing y).
inline double level_torus_mean_curvature(const CuspModel& model) {
    return model.ambient == AmbientKind::ProductCusp ? 0.5 : 1.0;
}

// Induced length of the horizontal cycle c(y) = {y = const}/[psi].
inline double horocycle_length(const CuspModel& model, double y) {
    if (!(y >= model.y0)) throw std::domain_error("horocycle_length: y below truncation level y0");
    return model.tau / y;
}

// ---------------------------------------------------------------------------
// log maps (normal coordinates), used by the curvature estimators

// Tangent coordinates of q in the orthonormal frame (y0*dx, y0*dy) at p.
inline std::array<double, 2> log_h2(Complex p, Complex q) {
    const double d = dist_h2(p, q);
    if (d < 1e-15) return {0.0, 0.0};
    const double dx = q.real() - p.real();
    if (std::abs(dx) < 1e-14 * (1.0 + std::abs(p.real()))) {
        const double s = q.imag() > p.imag() ? 1.0 : -1.0;
        return {0.0, s * d};
    }
    const Geodesic g = geodesic_through(p, q);
    const double th0 = std::atan2(p.imag(), p.real() - g.center());
    const double th1 = std::atan2(q.imag(), q.real() - g.center());
    // chart tangent of the circle at p is i*e^{i th0}; orient toward q
    Complex dir = Complex(0.0, 1.0) * std::polar(1.0, th0);
    if (th1 < th0) dir = -dir;
    return {d * dir.real(), d * dir.imag()};
}

// Product metric: frame (y0*dx, y0*dy, dt).
inline std::array<double, 3> log_product(const Point3& p, const Point3& q) {
    const auto uv = log_h2(p.xy(), q.xy());
    return {uv[0], uv[1], q.t - p.t};
}

// Half-space hyperbolic metric: frame (y0*dx, y0*dy, y0*dt).  The geodesic lives
// in the vertical plane through both points; reduce to a half-plane problem.
inline std::array<double, 3> log_h3(const Point3& p, const Point3& q) {
    const double dx = q.x - p.x, dt = q.t - p.t;
    const double horiz = std::hypot(dx, dt);
    const Complex p2(0.0, p.y), q2(horiz, q.y);
    const auto uv = log_h2(p2, q2);
    if (horiz < 1e-15) return {0.0, uv[1], 0.0};
    return {uv[0] * dx / horiz, uv[1], uv[0] * dt / horiz};
}

inline std::array<double, 3> log_ambient(const Point3& p, const Point3& q, AmbientKind kind) {
    return kind == AmbientKind::ProductCusp ? log_product(p, q) : log_h3(p, q);
}

}  // namespace hypermin
