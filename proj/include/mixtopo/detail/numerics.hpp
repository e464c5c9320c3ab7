#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace mixtopo::detail {

/// Stable log(sum(exp(v))). Entries of -inf are allowed and ignored.
double logsumexp(const std::vector<double>& v);

/// Logistic function, stable in both tails.
inline double logistic(double t) {
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

/// Inverse of logistic. Requires a in (0, 1).
inline double logit(double a) { return std::log(a) - std::log1p(-a); }

/// Grid on [0, 1]: n_uniform+1 equally spaced nodes plus geometric ladders
/// at both endpoints (1e-1 * 0.5^k down to <= 1e-12). Sorted, deduplicated,
/// includes 0 and 1.
std::vector<double> composite_grid(int n_uniform);

/// The same grid expressed in logit coordinates (endpoints dropped),
/// extended linearly in t to [t_lo, t_hi] so that far-tail crossings of
/// strongly separated pairs are still bracketed. Sorted ascending.
std::vector<double> logit_grid(int n_uniform, double t_lo, double t_hi);

/// Bisection for a sign change of f on [a, b]; f(a) and f(b) must have
/// opposite signs. Stops when the bracket is below abs_tol or after 200
/// halvings. Returns the midpoint of the final bracket.
double bisect(const std::function<double(double)>& f, double a, double b,
              double fa, double fb, double abs_tol);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

/// Halton low-discrepancy sequence value, index >= 0, prime base.
double halton(std::uint64_t index, std::uint32_t base);

/// SplitMix64 — used to derive independent RNG streams from user seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// All real roots of c3 x^3 + c2 x^2 + c1 x + c0 = 0 (Cardano/trigonometric
/// form, each root polished by Newton). Degenerates gracefully to the
/// quadratic/linear cases when leading coefficients vanish.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0);

} // namespace mixtopo::detail
