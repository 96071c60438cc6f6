#pragma once

// Small numerical kernels shared by the geometry and solver headers:
// fixed-step RK4, Gauss-Legendre quadrature, scalar bisection, golden-section
// minimization, and a deterministic chunked parallel_for.

#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hypermin {

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// One classical RK4 step for a 2-state system y' = f(v, y).
template <class F>
inline std::array<double, 2> rk4_step(const F& f, double v, std::array<double, 2> y, double h) {
    auto k1 = f(v, y);
    auto k2 = f(v + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    auto k3 = f(v + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    auto k4 = f(v + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    return {y[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

namespace detail {
// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; symmetric).
inline constexpr std::array<double, 8> gl16_x = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> gl16_w = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
}  // namespace detail

// Composite 16-point Gauss-Legendre over [a, b] with n panels.
template <class F>
inline double gauss_legendre(const F& f, double a, double b, int panels = 8) {
    if (!(b >= a)) throw std::invalid_argument("gauss_legendre: b < a");
    double total = 0.0;
    const double hp = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * hp;
        const double r = 0.5 * hp;
        double s = 0.0;
        for (int i = 0; i < 8; ++i) {
            s += detail::gl16_w[i] * (f(c + r * detail::gl16_x[i]) + f(c - r * detail::gl16_x[i]));
        }
        total += s * r;
    }
    return total;
}

// Root of a continuous scalar function on [lo, hi]; f(lo) and f(hi) must differ in sign.
template <class F>
inline double bisect_root(const F& f, double lo, double hi, int iters = 80) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0)) throw NumericError("bisect_root: no sign change on bracket");
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Golden-section minimizer for a unimodal-ish scalar function.
template <class F>
inline double golden_min(const F& f, double a, double b, int iters = 60) {
    constexpr double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

inline int hardware_threads() {
    if (const char* env = std::getenv("HYPERMIN_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

// Deterministic parallel map-reduce: body(i) fills out[i]; chunk order is fixed,
// so any later reduction over `out` is bit-reproducible regardless of thread count.
template <class Body>
inline void parallel_for(std::size_t n, const Body& body) {
    const int nt = hardware_threads();
    if (nt <= 1 || n < 256) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace hypermin
