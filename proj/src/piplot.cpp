#include "mixtopo/piplot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mixtopo/detail/numerics.hpp"

namespace mixtopo {

namespace {

// Pair evaluations are driven by t = logit(alpha). The pi-equation argument
// t + log phi_j(x) - log phi_i(x) stays computable even where alpha itself
// underflows (strong separations put the outermost crossings at alphas far
// below machine range), so the t parameterization is the primary one.
struct PairView {
    const Component& ci;
    const Component& cj;

    PairView(const Mixture& m, int i, int j)
        : ci(m.component(i)), cj(m.component(j)) {}

    Vec x_of_alpha(double a) const {
        const Mat s = a * ci.cov_inv + (1.0 - a) * cj.cov_inv;
        const Vec rhs = a * (ci.cov_inv * ci.mean) + (1.0 - a) * (cj.cov_inv * cj.mean);
        return Eigen::LLT<Mat>(s).solve(rhs);
    }

    // log phi_j(x) - log phi_i(x) at x = x*(alpha), alpha = logistic(t)
    double log_ratio(double t) const {
        const Vec x = x_of_alpha(detail::logistic(t));
        return cj.log_pdf(x) - ci.log_pdf(x);
    }

    // pi-equation argument: logit(pi_of_alpha) as a function of t
    double pi_arg(double t) const { return t + log_ratio(t); }
};

} // namespace

double pi_of_alpha(const Mixture& m, int i, int j, double alpha) {
    detail_pair::check_pair(m, i, j, true);
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw BadArgument("alpha must lie in [0, 1]");
    if (alpha == 0.0) return 0.0;
    if (alpha == 1.0) return 1.0;
    const PairView pv(m, i, j);
    return detail::logistic(pv.pi_arg(detail::logit(alpha)));
}

const char* to_string(CrossDir d) { return d == CrossDir::Rising ? "rising" : "falling"; }

std::vector<PiSolution> solve_pi_equation(const Mixture& m, int i, int j, double pi) {
    detail_pair::check_pair(m, i, j, true);
    if (!(pi > 0.0 && pi < 1.0)) throw BadArgument("pi must lie strictly inside (0, 1)");
    const PairView pv(m, i, j);
    const double target = detail::logit(pi);

    // Tail bounds: pi_arg(t) ~ t + const in the tails; pick t limits that
    // guarantee a sign on both sides of every crossing.
    const double c_at_j = pv.cj.log_pdf(pv.cj.mean) - pv.ci.log_pdf(pv.cj.mean);
    const double c_at_i = pv.cj.log_pdf(pv.ci.mean) - pv.ci.log_pdf(pv.ci.mean);
    const double pad = 40.0 + std::abs(target);
    const double t_lo = -(std::abs(c_at_j) + pad);
    const double t_hi = std::abs(c_at_i) + pad;

    const std::vector<double> ts = detail::logit_grid(4096, t_lo, t_hi);
    std::vector<double> vals(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) vals[k] = pv.pi_arg(ts[k]) - target;

    const auto f = [&](double t) { return pv.pi_arg(t) - target; };
    std::vector<std::pair<double, bool>> roots; // (t, rising)
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        if (vals[k] == 0.0) {
            // crossing through a grid node: sides must have opposite signs
            const bool left_neg = k > 0 ? vals[k - 1] < 0.0 : true;
            bool right_pos = vals[k + 1] > 0.0;
            if (vals[k + 1] == 0.0 && k + 2 < ts.size()) right_pos = vals[k + 2] > 0.0;
            if (left_neg == right_pos) roots.emplace_back(ts[k], left_neg);
            continue;
        }
        if (vals[k] * vals[k + 1] < 0.0) {
            // bisect in t; refine until the alpha bracket is below 1e-12
            const bool rising = vals[k] < 0.0;
            double a = ts[k], b = ts[k + 1], fa = vals[k];
            for (int it = 0; it < 200; ++it) {
                const double width_alpha = detail::logistic(b) - detail::logistic(a);
                if (width_alpha <= 1e-12 || (b - a) <= 1e-13) break;
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                const double fm = f(mid);
                if (fm == 0.0) { a = b = mid; break; }
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid; fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.emplace_back(0.5 * (a + b), rising);
        }
    }

    std::vector<PiSolution> out;
    out.reserve(roots.size());
    for (const auto& [t, rising] : roots)
        out.push_back(PiSolution{detail::logistic(t), rising ? CrossDir::Rising : CrossDir::Falling});
    std::sort(out.begin(), out.end(),
              [](const PiSolution& a, const PiSolution& b) { return a.alpha < b.alpha; });
    return out;
}

std::vector<CriticalPoint> critical_points_for_pi(const Mixture& m, int i, int j,
                                                  double pi) {
    const std::vector<PiSolution> sols = solve_pi_equation(m, i, j, pi);
    const Mixture sub = Mixture::make(
        {{m.component(i).mean, m.component(i).cov}, {m.component(j).mean, m.component(j).cov}},
        {pi, 1.0 - pi});
    std::vector<CriticalPoint> out;
    out.reserve(sols.size());
    for (const PiSolution& s : sols) {
        CriticalPoint cp = classify_critical(sub, SimplexPoint::pair(s.alpha));
        const bool expect_mode = s.direction == CrossDir::Rising;
        const bool is_mode = cp.kind == CriticalKind::Mode;
        if (expect_mode != is_mode) {
            std::ostringstream os;
            os << "crossing at alpha = " << s.alpha << " is "
               << to_string(s.direction) << " but classified as " << to_string(cp.kind);
            throw InternalInconsistency(os.str());
        }
        out.push_back(std::move(cp));
    }
    return out;
}

int mode_count(const Mixture& m, int i, int j, double pi) {
    detail_pair::check_pair(m, i, j, false);
    if ((m.component(i).mean - m.component(j).mean).norm() == 0.0) return 1;
    int n = 0;
    for (const PiSolution& s : solve_pi_equation(m, i, j, pi))
        if (s.direction == CrossDir::Rising) ++n;
    return n;
}

ModalityBands modality_bands(const Mixture& m, int i, int j) {
    detail_pair::check_pair(m, i, j, false);
    ModalityBands out;
    if ((m.component(i).mean - m.component(j).mean).norm() == 0.0) {
        out.bands.push_back(Band{0.0, 1.0, 1});
        return out;
    }
    out.zero_alphas = q_zeroes(m, i, j);
    for (double z : out.zero_alphas) out.breakpoints.push_back(pi_of_alpha(m, i, j, z));
    std::sort(out.breakpoints.begin(), out.breakpoints.end());

    std::vector<double> edges{0.0};
    for (double b : out.breakpoints)
        if (b > edges.back()) edges.push_back(b);
    if (edges.back() < 1.0) edges.push_back(1.0);

    std::vector<Band> raw;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double mid = 0.5 * (edges[k] + edges[k + 1]);
        raw.push_back(Band{edges[k], edges[k + 1], mode_count(m, i, j, mid)});
    }
    for (const Band& b : raw) {
        if (!out.bands.empty() && out.bands.back().modes == b.modes)
            out.bands.back().hi = b.hi;
        else
            out.bands.push_back(b);
    }
    return out;
}

PiCurve pi_curve(const Mixture& m, int i, int j, int n_samples) {
    detail_pair::check_pair(m, i, j, true);
    if (n_samples < 2) throw BadArgument("n_samples must be at least 2");
    PiCurve c;
    for (double a : detail::composite_grid(n_samples))
        c.samples.emplace_back(a, pi_of_alpha(m, i, j, a));
    return c;
}

} // namespace mixtopo
