#include "mixtopo/detail/numerics.hpp"

#include <algorithm>
#include <limits>

namespace mixtopo::detail {

double logsumexp(const std::vector<double>& v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

std::vector<double> composite_grid(int n_uniform) {
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n_uniform) + 96);
    for (int k = 0; k <= n_uniform; ++k)
        g.push_back(static_cast<double>(k) / n_uniform);
    for (double v = 1e-1; v > 1e-12; v *= 0.5) {
        g.push_back(v);
        g.push_back(1.0 - v);
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

std::vector<double> logit_grid(int n_uniform, double t_lo, double t_hi) {
    std::vector<double> t;
    for (double a : composite_grid(n_uniform))
        if (a > 0.0 && a < 1.0) t.push_back(logit(a));
    // ladder bottoms out near logit(1e-12) ~ -27.6; extend by steps of 2
    for (double v = t.front() - 2.0; v > t_lo; v -= 2.0) t.push_back(v);
    for (double v = t.back() + 2.0; v < t_hi; v += 2.0) t.push_back(v);
    t.push_back(t_lo);
    t.push_back(t_hi);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

double bisect(const std::function<double(double)>& f, double a, double b,
              double fa, double fb, double abs_tol) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    for (int it = 0; it < 200 && (b - a) > abs_tol; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) != (fm < 0.0)) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return (fa + 4.0 * fm + fb) * (h / 6.0);
}

double simpson_rec(const std::function<double(double)>& f, double a, double m,
                   double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

double halton(std::uint64_t index, std::uint32_t base) {
    double f = 1.0, r = 0.0;
    std::uint64_t i = index + 1; // skip the zero point
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

double polish_newton(double x, double c3, double c2, double c1, double c0) {
    for (int it = 0; it < 8; ++it) {
        const double f = ((c3 * x + c2) * x + c1) * x + c0;
        const double df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
        if (df == 0.0) break;
        const double step = f / df;
        x -= step;
        if (std::abs(step) <= 1e-14 * (1.0 + std::abs(x))) break;
    }
    return x;
}

} // namespace

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
    std::vector<double> roots;
    const double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
    if (scale == 0.0) return roots;
    if (std::abs(c3) <= 1e-14 * scale) {
        // quadratic (or lower)
        if (std::abs(c2) <= 1e-14 * scale) {
            if (c1 != 0.0) roots.push_back(-c0 / c1);
            return roots;
        }
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        if (disc < 0.0) return roots;
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
        roots.push_back(q / c2);
        if (q != 0.0) roots.push_back(c0 / q);
        if (roots.size() == 2 && roots[0] > roots[1]) std::swap(roots[0], roots[1]);
        return roots;
    }
    // depressed cubic t^3 + p t + q with x = t - b/3
    const double b = c2 / c3;
    const double c = c1 / c3;
    const double d = c0 / c3;
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double shift = -b / 3.0;
    const double disc = 4.0 * p * p * p + 27.0 * q * q;
    if (disc > 0.0) {
        // single real root (Cardano)
        const double s = std::sqrt(disc / 108.0);
        const double u = std::cbrt(-q / 2.0 + s);
        const double v = std::cbrt(-q / 2.0 - s);
        roots.push_back(polish_newton(u + v + shift, c3, c2, c1, c0));
    } else {
        // three real roots (trigonometric form)
        const double r = std::sqrt(-p / 3.0);
        double arg = (3.0 * q) / (2.0 * p * r);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const double t = 2.0 * r * std::cos(phi - 2.0 * M_PI * k / 3.0);
            roots.push_back(polish_newton(t + shift, c3, c2, c1, c0));
        }
        std::sort(roots.begin(), roots.end());
    }
    return roots;
}

} // namespace mixtopo::detail
