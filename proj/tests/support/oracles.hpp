#pragma once

// Test-only oracles, independent of the library implementation paths they
// check: brute-force quadrature, direct enumeration, finite differences.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

// Hyperbolic length of the circular/vertical geodesic arc between two
// half-plane points by dense trapezoid quadrature of |dz|/y.
inline double geodesic_length_quadrature(std::complex<double> p, std::complex<double> q,
                                         int n = 200000) {
    const double dx = p.real() - q.real();
    auto seg_len = [&](std::function<std::complex<double>(double)> z) {
        double total = 0.0;
        std::complex<double> prev = z(0.0);
        for (int i = 1; i <= n; ++i) {
            const std::complex<double> cur = z(static_cast<double>(i) / n);
            const double ym = 0.5 * (prev.imag() + cur.imag());
            total += std::abs(cur - prev) / ym;
            prev = cur;
        }
        return total;
    };
    if (std::abs(dx) < 1e-13) {
        return seg_len([&](double s) {
            return std::complex<double>(p.real(),
                                        p.imag() * std::pow(q.imag() / p.imag(), s));
        });
    }
    const double m = (std::norm(p) - std::norm(q)) / (2.0 * dx);
    const double r = std::hypot(p.real() - m, p.imag());
    const double th0 = std::atan2(p.imag(), p.real() - m);
    const double th1 = std::atan2(q.imag(), q.real() - m);
    return seg_len([&](double s) {
        const double th = th0 + s * (th1 - th0);
        return std::complex<double>(m + r * std::cos(th), r * std::sin(th));
    });
}

// Mean curvature magnitude of the level surface {y = c} from the first
// variation of area under the unit-speed normal flow y -> c e^s:
// 2H = -d/ds log Area(s) at s = 0, with areas computed by Riemann sums.
inline double level_surface_mean_curvature_fd(bool hyperbolic_ambient, double c) {
    auto area = [&](double s) {
        const double y = c * std::exp(s);
        // patch x in [0,1], t in [0,1]; area element dx dt / y^2 (hyperbolic)
        // or dx dt / y (product)
        const int n = 400;
        double a = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a += 1.0 / (n * n) * (hyperbolic_ambient ? 1.0 / (y * y) : 1.0 / y);
        return a;
    };
    const double eps = 1e-5;
    const double dlog = (std::log(area(eps)) - std::log(area(-eps))) / (2 * eps);
    return 0.5 * std::abs(dlog);
}

// RK4 integration of alpha'' = -alpha from alpha(0)=0, alpha'(0)=T, stopping
// at the return to zero (bisected); reports samples and the endpoint.
struct SineOde {
    std::vector<std::array<double, 3>> samples;  // v, alpha, alpha'
    double v0 = 0.0;
};

inline SineOde integrate_sine_ode(double T, double step) {
    SineOde out;
    auto f = [](std::array<double, 2> y) { return std::array<double, 2>{y[1], -y[0]}; };
    auto rk4 = [&](std::array<double, 2> y, double h) {
        auto k1 = f(y);
        auto k2 = f({y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
        auto k3 = f({y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
        auto k4 = f({y[0] + h * k3[0], y[1] + h * k3[1]});
        return std::array<double, 2>{y[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                                     y[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    };
    std::array<double, 2> y{0.0, T};
    double v = 0.0;
    out.samples.push_back({v, y[0], y[1]});
    while (true) {
        auto yn = rk4(y, step);
        if (yn[0] <= 0.0) {
            double lo = 0, hi = step;
            for (int i = 0; i < 80; ++i) {
                double mid = 0.5 * (lo + hi);
                (rk4(y, mid)[0] > 0 ? lo : hi) = mid;
            }
            out.v0 = v + hi;
            return out;
        }
        y = yn;
        v += step;
        out.samples.push_back({v, y[0], y[1]});
    }
}

// Profile-interval width by direct quadrature of the unsubstituted improper
// integral 2 * int_0^{amax} sqrt(1 + l^2 a^2) / sqrt(amax^2 - a^2) da, with a
// conservative refinement that stays off the endpoint.
inline double v0_quadrature_raw(double lambda, double T) {
    const double amax = std::sqrt(T - 1.0) / lambda;
    auto g = [&](double a) {
        return std::sqrt(1.0 + lambda * lambda * a * a) / std::sqrt(amax * amax - a * a);
    };
    // split [0, amax): smooth part + sqrt-singular tail handled by u = sqrt(amax - a)
    const double cut = 0.9 * amax;
    int n = 200000;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a0 = cut * i / n, a1 = cut * (i + 1) / n;
        total += 0.5 * (g(a0) + g(a1)) * (a1 - a0);
    }
    // tail: a = amax - u^2, da = -2u du, sqrt(amax^2-a^2) = sqrt(u^2 (2 amax - u^2))
    const double umax = std::sqrt(amax - cut);
    for (int i = 0; i < n; ++i) {
        const double u0 = umax * i / n, u1 = umax * (i + 1) / n;
        auto gt = [&](double u) {
            const double a = amax - u * u;
            return 2.0 * std::sqrt(1.0 + lambda * lambda * a * a) / std::sqrt(2.0 * amax - u * u);
        };
        total += 0.5 * (gt(u0) + gt(u1)) * (u1 - u0);
    }
    return 2.0 * total;
}

}  // namespace oracles
