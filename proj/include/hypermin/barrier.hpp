#pragma once

// Ruled minimal surfaces (u, v) -> (u, alpha(v), v + lambda*u) in the product
// metric, their first integral, and the sweeping families built from them.
//
// lambda = 0 is a separate analytic branch alpha = T sin v on [0, pi] (any
// T > 0); the first integral degenerates to the constant 1 there, so it does
// not share the (lambda, T) parametrization of the tilted family.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hypermin/mesh.hpp"
#include "hypermin/numerics.hpp"

namespace hypermin {

struct BarrierParams {
    double lambda = 0.0;  // >= 0
    double T = 2.0;       // > 1 for lambda > 0; > 0 on the lambda = 0 branch
    double t_offset = 0.0;
};

inline void validate(const BarrierParams& p) {
    if (p.lambda < 0) throw std::domain_error("BarrierParams: lambda must be >= 0");
    if (p.lambda > 0 && !(p.T > 1.0)) throw std::domain_error("T must exceed 1");
    if (p.lambda == 0 && !(p.T > 0.0)) throw std::domain_error("T must be positive");
}

// Mean curvature of the ruled surface at a point with profile data
// (alpha, alpha', alpha''):
//   2H = -(alpha^2/Z^3) (alpha'' (1 + lambda^2 alpha^2) + alpha (1 + lambda^2 alpha'^2)),
//   Z^2 = alpha'^2 (1 + lambda^2 alpha^2) + alpha^2.
inline double ruled_mean_curvature(double alpha, double alpha_p, double alpha_pp, double lambda) {
    if (!(alpha > 0.0)) throw std::domain_error("ruled_mean_curvature: alpha must be positive");
    const double la2 = lambda * lambda * alpha * alpha;
    const double lap2 = lambda * lambda * alpha_p * alpha_p;
    const double Z2 = alpha_p * alpha_p * (1.0 + la2) + alpha * alpha;
    const double Z3 = Z2 * std::sqrt(Z2);
    return -0.5 * (alpha * alpha / Z3) * (alpha_pp * (1.0 + la2) + alpha * (1.0 + lap2));
}

// alpha'' from the minimality ODE; used everywhere instead of numerical
// differentiation (valid in particular where alpha' changes sign).
inline double alpha_pp_ode(double alpha, double alpha_p, double lambda) {
    const double la2 = lambda * lambda * alpha * alpha;
    const double lap2 = lambda * lambda * alpha_p * alpha_p;
    return -alpha * (1.0 + lap2) / (1.0 + la2);
}

struct BarrierSample {
    double v;
    double alpha;
    double alpha_prime;
};

struct BarrierCurve {
    std::vector<BarrierSample> samples;
    double v0 = 0.0;  // right endpoint of the positivity interval
    BarrierParams params;

    double first_integral(std::size_t i) const {
        const auto& s = samples[i];
        const double l2 = params.lambda * params.lambda;
        return (1.0 + l2 * s.alpha_prime * s.alpha_prime) * (1.0 + l2 * s.alpha * s.alpha);
    }

    double max_first_integral_residual() const {
        if (params.lambda == 0.0) return 0.0;
        double r = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            r = std::max(r, std::abs(first_integral(i) - params.T));
        return r;
    }

    double max_mean_curvature_residual() const {
        double r = 0.0;
        for (const auto& s : samples) {
            if (!(s.alpha > 0.0)) continue;
            const double app = alpha_pp_ode(s.alpha, s.alpha_prime, params.lambda);
            r = std::max(r, std::abs(ruled_mean_curvature(s.alpha, s.alpha_prime, app, params.lambda)));
        }
        return r;
    }

    double max_alpha() const {
        double m = 0.0;
        for (const auto& s : samples) m = std::max(m, s.alpha);
        return m;
    }

    // linear interpolation of alpha(v) on [0, v0]
    double alpha_at(double v) const {
        if (samples.empty()) return 0.0;
        if (v <= samples.front().v) return samples.front().alpha;
        if (v >= samples.back().v) return samples.back().alpha;
        std::size_t lo = 0, hi = samples.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (samples[mid].v <= v ? lo : hi) = mid;
        }
        const auto &a = samples[lo], &b = samples[hi];
        const double s = (v - a.v) / (b.v - a.v);
        return a.alpha + s * (b.alpha - a.alpha);
    }
};

// Integrate the profile ODE with classical RK4 at fixed step until alpha
// returns to zero; the endpoint v0 comes from bisecting the final partial step
// (|alpha| tolerance ~1e-12), not from the last grid point.
inline BarrierCurve integrate_alpha(const BarrierParams& params, double step) {
    validate(params);
    if (!(step > 0.0)) throw std::domain_error("integrate_alpha: step must be positive");

    BarrierCurve curve;
    curve.params = params;

    if (params.lambda == 0.0) {
        // analytic branch alpha = T sin v, v in [0, pi]
        const int n = std::max(2, static_cast<int>(std::ceil(M_PI / step)));
        const double h = M_PI / n;
        curve.samples.reserve(n + 1);
        for (int i = 0; i <= n; ++i) {
            const double v = i * h;
            curve.samples.push_back({v, params.T * std::sin(v), params.T * std::cos(v)});
        }
        curve.v0 = M_PI;
        return curve;
    }

    const double lambda = params.lambda;
    auto field = [lambda](double, std::array<double, 2> y) -> std::array<double, 2> {
        return {y[1], alpha_pp_ode(y[0], y[1], lambda)};
    };

    std::array<double, 2> y{0.0, std::sqrt(params.T - 1.0) / lambda};
    double v = 0.0;
    curve.samples.push_back({v, y[0], y[1]});
    const std::size_t max_steps = static_cast<std::size_t>(1e7);
    for (std::size_t k = 0; k < max_steps; ++k) {
        const auto yn = rk4_step(field, v, y, step);
        if (yn[0] <= 0.0) {
            // bisect the step fraction for the zero crossing
            double lo = 0.0, hi = step;
            std::array<double, 2> yend = yn;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const auto ym = rk4_step(field, v, y, mid);
                if (ym[0] > 0.0)
                    lo = mid;
                else {
                    hi = mid;
                    yend = ym;
                }
            }
            curve.v0 = v + hi;
            curve.samples.push_back({curve.v0, 0.0, yend[1]});
            return curve;
        }
        y = yn;
        v += step;
        curve.samples.push_back({v, y[0], y[1]});
    }
    throw NumericError("integrate_alpha: no return to zero within step budget");
}

// Width of the positivity interval by quadrature.  Using the first integral,
//   alpha'(a) = sqrt(amax^2 - a^2) / sqrt(1 + lambda^2 a^2),  amax = sqrt(T-1)/lambda,
// and substituting a = amax sin(theta) removes the endpoint singularity:
//   v0 = 2 * Int_0^{pi/2} sqrt(1 + (T-1) sin^2 theta) dtheta.
inline double v0_of_T(double lambda, double T) {
    if (!(lambda > 0.0)) throw std::domain_error("v0_of_T: lambda must be positive");
    if (!(T > 1.0)) throw std::domain_error("T must exceed 1");
    auto integrand = [T](double th) {
        const double s = std::sin(th);
        return std::sqrt(1.0 + (T - 1.0) * s * s);
    };
    const double coarse = 2.0 * gauss_legendre(integrand, 0.0, 0.5 * M_PI, 8);
    const double fine = 2.0 * gauss_legendre(integrand, 0.0, 0.5 * M_PI, 16);
    if (std::abs(fine - coarse) > 1e-9 * std::max(1.0, std::abs(fine)))
        throw NumericError("v0_of_T: quadrature did not converge (coarse=" +
                           std::to_string(coarse) + ", fine=" + std::to_string(fine) + ")");
    return fine;
}

// Largest |v| on the rising branch with alpha <= M, measured from integrated
// samples.  For lambda > 0 this is guaranteed <= M*lambda/sqrt(T/(1+lambda^2 M^2)-1);
// the lambda = 0 branch has the closed form arcsin(M/T).
inline double compact_convergence_gap(double lambda, double T, double M, double step = 1e-3) {
    if (!(M > 0.0)) throw std::domain_error("compact_convergence_gap: M must be positive");
    if (lambda == 0.0) {
        if (!(T > 0.0) || M > T) throw std::domain_error("compact_convergence_gap: require M <= T");
        return std::asin(M / T);
    }
    if (!(T > 1.0 + lambda * lambda * M * M))
        throw std::domain_error("compact_convergence_gap: require T > 1 + lambda^2 M^2");
    const BarrierCurve curve = integrate_alpha({lambda, T, 0.0}, step);
    double gap = 0.0;
    for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i) {
        const auto &a = curve.samples[i], &b = curve.samples[i + 1];
        if (b.alpha_prime <= 0.0) break;  // past the rising branch
        if (b.alpha <= M) {
            gap = b.v;
        } else {
            gap = a.v + (M - a.alpha) / (b.alpha - a.alpha) * (b.v - a.v);
            break;
        }
    }
    return gap;
}

inline double convergence_gap_bound(double lambda, double T, double M) {
    return M * lambda / std::sqrt(T / (1.0 + lambda * lambda * M * M) - 1.0);
}

struct RuledPatch {
    TriMesh mesh;
    BarrierParams params;
    BarrierCurve curve;
};

// Sample the ruled surface (u, alpha(v), v + lambda*u + t_offset) on a grid:
// nu columns across [u_min, u_max] and nv rows along the profile samples.
inline RuledPatch barrier_mesh(const BarrierParams& params, double u_min, double u_max, int nu,
                               int nv, double step = 1e-3) {
    if (nu < 2 || nv < 2) throw std::invalid_argument("barrier_mesh: resolution must be >= 2x2");
    if (!(u_max > u_min)) throw std::invalid_argument("barrier_mesh: bad u range");
    RuledPatch patch;
    patch.params = params;
    patch.curve = integrate_alpha(params, step);
    const auto& cs = patch.curve.samples;

    // subsample the profile to nv rows (always keeping the endpoints)
    std::vector<std::size_t> rows;
    rows.reserve(nv);
    for (int j = 0; j < nv; ++j) {
        const double frac = static_cast<double>(j) / (nv - 1);
        rows.push_back(std::min(cs.size() - 1, static_cast<std::size_t>(frac * (cs.size() - 1))));
    }
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

    auto& m = patch.mesh;
    const int cols = nu;
    std::vector<std::vector<int>> vid(cols);
    for (int i = 0; i < cols; ++i) {
        const double u = u_min + (u_max - u_min) * i / (cols - 1);
        for (std::size_t j = 0; j < rows.size(); ++j) {
            const auto& s = cs[rows[j]];
            const double yy = std::max(s.alpha, 1e-12);  // profile endpoints touch y = 0
            vid[i].push_back(
                m.add_vertex(Point3{u, yy, s.v + params.lambda * u + params.t_offset}));
        }
    }
    for (int i = 0; i + 1 < cols; ++i)
        for (std::size_t j = 0; j + 1 < rows.size(); ++j) {
            const int a = vid[i][j], b = vid[i + 1][j], c = vid[i + 1][j + 1], d = vid[i][j + 1];
            m.tris.push_back({a, b, c});
            m.tris.push_back({a, c, d});
        }
    return patch;
}

}  // namespace hypermin
