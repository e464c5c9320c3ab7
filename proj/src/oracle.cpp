#include "mixtopo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mixtopo/detail/numerics.hpp"

namespace mixtopo {

GridSpec GridSpec::default_for(const Mixture& m, int points_per_dim) {
    const int D = m.dim();
    GridSpec spec;
    spec.points_per_dim = points_per_dim;
    spec.lower = Vec::Constant(D, std::numeric_limits<double>::infinity());
    spec.upper = Vec::Constant(D, -std::numeric_limits<double>::infinity());
    Vec sd_max = Vec::Zero(D);
    for (int j = 0; j < m.component_count(); ++j) {
        const Component& c = m.component(j);
        for (int k = 0; k < D; ++k) {
            spec.lower[k] = std::min(spec.lower[k], c.mean[k]);
            spec.upper[k] = std::max(spec.upper[k], c.mean[k]);
            sd_max[k] = std::max(sd_max[k], std::sqrt(c.cov(k, k)));
        }
    }
    spec.lower -= 4.0 * sd_max;
    spec.upper += 4.0 * sd_max;
    return spec;
}

namespace {

double inv_length_scale(const Mixture& m) {
    double s = 1.0;
    for (int j = 0; j < m.component_count(); ++j)
        s = std::max(s, std::sqrt(m.component(j).cov_inv.norm()));
    return s;
}

// Ascent on log g: Newton step when the Hessian of log g is usable,
// otherwise steepest ascent; backtracking line search (Armijo 1e-4),
// at most 500 iterations, gradient tolerance 1e-10 * scale.
Vec ascend_log_g(const Mixture& m, Vec x, double gtol) {
    const auto log_g = [&](const Vec& p) { return log_density(m, p); };
    const auto grad_log_g = [&](const Vec& p) -> Vec {
        return gradient(m, p) / density(m, p);
    };
    double f = log_g(x);
    for (int it = 0; it < 500; ++it) {
        const Vec g = grad_log_g(x);
        if (g.norm() <= gtol) break;
        // Hessian of log g = H/g - (grad/g)(grad/g)'
        const Mat hl = hessian(m, x) / density(m, x) - g * g.transpose();
        Vec dir;
        Eigen::LDLT<Mat> ldlt(-hl);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
            dir = ldlt.solve(g);
            if (!dir.allFinite() || dir.dot(g) <= 0.0) dir = g;
        } else {
            dir = g;
        }
        double step = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            const Vec cand = x + step * dir;
            const double fc = log_g(cand);
            if (fc >= f + 1e-4 * step * dir.dot(g)) {
                moved = true;
                const double delta = step * dir.norm();
                x = cand;
                f = fc;
                if (delta <= 1e-15 * (1.0 + x.norm())) return x;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return x;
}

void merge_into(std::vector<Vec>& modes, const Vec& x) {
    for (const Vec& u : modes)
        if ((u - x).cwiseAbs().maxCoeff() < 1e-6) return;
    modes.push_back(x);
}

void sort_points(std::vector<Vec>& pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        for (int k = 0; k < a.size(); ++k) {
            if (a[k] < b[k]) return true;
            if (a[k] > b[k]) return false;
        }
        return false;
    });
}

bool is_strict_mode(const Mixture& m, const Vec& x) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(hessian(m, x));
    return eig.eigenvalues().maxCoeff() < 0.0;
}

} // namespace

std::vector<Vec> grid_modes(const Mixture& m, const GridSpec& spec) {
    const int D = m.dim();
    if (D > 3) throw DimensionTooLarge("grid search is limited to D <= 3");
    if (spec.points_per_dim < 3) throw BadArgument("need at least 3 points per dimension");
    for (int k = 0; k < D; ++k)
        if (!(spec.lower[k] < spec.upper[k]) || !std::isfinite(spec.lower[k]) ||
            !std::isfinite(spec.upper[k]))
            throw BadArgument("grid bounds must be finite with lower < upper");

    const int n = spec.points_per_dim;
    std::vector<int> dims(D, n);
    long total = 1;
    for (int k = 0; k < D; ++k) total *= n;

    const auto coord = [&](int k, int idx) {
        return spec.lower[k] + (spec.upper[k] - spec.lower[k]) * idx / (n - 1);
    };
    std::vector<double> vals(total);
    {
        Vec x(D);
        std::vector<int> idx(D, 0);
        for (long flat = 0; flat < total; ++flat) {
            long rem = flat;
            for (int k = D - 1; k >= 0; --k) {
                idx[k] = static_cast<int>(rem % n);
                rem /= n;
            }
            for (int k = 0; k < D; ++k) x[k] = coord(k, idx[k]);
            vals[flat] = log_density(m, x);
        }
    }

    const double gtol = 1e-10 * inv_length_scale(m);
    std::vector<Vec> modes;
    std::vector<int> idx(D), nb(D);
    for (long flat = 0; flat < total; ++flat) {
        long rem = flat;
        bool interior = true;
        for (int k = D - 1; k >= 0; --k) {
            idx[k] = static_cast<int>(rem % n);
            rem /= n;
            if (idx[k] == 0 || idx[k] == n - 1) interior = false;
        }
        if (!interior) continue;
        const double v = vals[flat];
        bool strict = true;
        const int n_nb = D == 1 ? 3 : (D == 2 ? 9 : 27);
        for (int code = 0; code < n_nb && strict; ++code) {
            int c = code;
            bool self = true;
            for (int k = 0; k < D; ++k) {
                const int off = c % 3 - 1;
                c /= 3;
                if (off != 0) self = false;
                nb[k] = idx[k] + off;
            }
            if (self) continue;
            long f2 = 0;
            for (int k = 0; k < D; ++k) f2 = f2 * n + nb[k];
            if (vals[f2] >= v) strict = false;
        }
        if (!strict) continue;
        Vec x(D);
        for (int k = 0; k < D; ++k) x[k] = coord(k, idx[k]);
        const Vec polished = ascend_log_g(m, x, gtol);
        if (is_strict_mode(m, polished)) merge_into(modes, polished);
    }
    sort_points(modes);
    return modes;
}

std::vector<Vec> multistart_ascent(const Mixture& m, int n_starts, std::uint64_t seed) {
    if (n_starts < 1) throw BadArgument("need at least one start");
    const int D = m.dim();
    const GridSpec spec = GridSpec::default_for(m, 2);
    static constexpr std::uint32_t primes[] = {2, 3, 5, 7, 11, 13, 17};
    std::uint64_t state = seed ^ 0x9d2c5680ULL;
    Vec shift(D);
    for (int k = 0; k < D; ++k)
        shift[k] = static_cast<double>(detail::splitmix64(state) >> 11) * 0x1.0p-53;

    const double gtol = 1e-10 * inv_length_scale(m);
    std::vector<Vec> modes;
    for (int s = 0; s < n_starts; ++s) {
        Vec x(D);
        for (int k = 0; k < D; ++k) {
            double u = detail::halton(s, primes[k % 7]) + shift[k];
            u -= std::floor(u);
            x[k] = spec.lower[k] + (spec.upper[k] - spec.lower[k]) * u;
        }
        const Vec polished = ascend_log_g(m, x, gtol);
        if (is_strict_mode(m, polished)) merge_into(modes, polished);
    }
    sort_points(modes);
    return modes;
}

Diagnostics verify_report(const Mixture& m, const TopographyReport& report) {
    Diagnostics diag;

    {
        CheckResult c{"gradient_norm_at_critical_points", true, 0.0, ""};
        for (const CriticalPoint& cp : report.critical_points) {
            const double scale =
                std::max(cp.elevation * gradient_scale(m, cp.x), 1e-300);
            c.measured = std::max(c.measured, gradient(m, cp.x).norm() / scale);
        }
        c.pass = c.measured <= 1e-8;
        diag.checks.push_back(c);
    }

    {
        CheckResult c{"posterior_fixed_point", true, 0.0, ""};
        for (const CriticalPoint& cp : report.critical_points) {
            const SimplexPoint p = posterior(m, cp.x);
            c.measured = std::max(
                c.measured, (p.coords() - cp.alpha.coords()).cwiseAbs().maxCoeff());
        }
        c.pass = c.measured <= 1e-8;
        diag.checks.push_back(c);
    }

    {
        CheckResult c{"mode_set_matches_grid_search", true, 0.0, ""};
        if (m.dim() <= 3) {
            const int points = m.dim() <= 2 ? 401 : 121;
            const std::vector<Vec> oracle =
                grid_modes(m, GridSpec::default_for(m, points));
            std::vector<Vec> reported;
            for (const CriticalPoint& cp : report.critical_points)
                if (cp.kind == CriticalKind::Mode) reported.push_back(cp.x);
            if (oracle.size() != reported.size()) {
                c.pass = false;
                std::ostringstream os;
                os << "grid search found " << oracle.size() << " modes, report has "
                   << reported.size();
                c.detail = os.str();
                c.measured = std::numeric_limits<double>::infinity();
            } else {
                for (const Vec& x : reported) {
                    double best = std::numeric_limits<double>::infinity();
                    for (const Vec& y : oracle)
                        best = std::min(best, (x - y).cwiseAbs().maxCoeff());
                    c.measured = std::max(c.measured, best);
                }
                c.pass = c.measured <= 1e-3;
            }
        } else {
            c.detail = "skipped: D > 3";
        }
        diag.checks.push_back(c);
    }

    {
        CheckResult cg{"gradient_vs_finite_differences", true, 0.0, ""};
        CheckResult ch{"hessian_vs_finite_differences", true, 0.0, ""};
        const GridSpec spec = GridSpec::default_for(m, 2);
        std::uint64_t state = 0x243f6a8885a308d3ULL;
        for (int trial = 0; trial < 20; ++trial) {
            Vec x(m.dim());
            for (int k = 0; k < m.dim(); ++k) {
                const double u =
                    static_cast<double>(detail::splitmix64(state) >> 11) * 0x1.0p-53;
                x[k] = spec.lower[k] + (spec.upper[k] - spec.lower[k]) * u;
            }
            const Vec g = gradient(m, x);
            const Mat h = hessian(m, x);
            Vec g_fd(m.dim());
            Mat h_fd(m.dim(), m.dim());
            for (int k = 0; k < m.dim(); ++k) {
                const double step_g = 1e-6 * (1.0 + std::abs(x[k]));
                Vec xp = x, xm = x;
                xp[k] += step_g;
                xm[k] -= step_g;
                g_fd[k] = (density(m, xp) - density(m, xm)) / (2.0 * step_g);
                const double step_h = 1e-4 * (1.0 + std::abs(x[k]));
                xp = x; xm = x;
                xp[k] += step_h;
                xm[k] -= step_h;
                h_fd.col(k) = (gradient(m, xp) - gradient(m, xm)) / (2.0 * step_h);
            }
            h_fd = 0.5 * (h_fd + h_fd.transpose());
            const double gref = std::max(g.norm(), 1e-12 * density(m, x) + 1e-300);
            const double href = std::max(h.norm(), 1e-12 * density(m, x) + 1e-300);
            cg.measured = std::max(cg.measured, (g - g_fd).norm() / gref);
            ch.measured = std::max(ch.measured, (h - h_fd).norm() / href);
        }
        cg.pass = cg.measured <= 1e-5;
        ch.pass = ch.measured <= 1e-4;
        diag.checks.push_back(cg);
        diag.checks.push_back(ch);
    }

    diag.all_pass = std::all_of(diag.checks.begin(), diag.checks.end(),
                                [](const CheckResult& c) { return c.pass; });
    return diag;
}

} // namespace mixtopo
