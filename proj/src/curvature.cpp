#include "mixtopo/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mixtopo/detail/numerics.hpp"
#include "mixtopo/piplot.hpp"

namespace mixtopo {

namespace detail_pair {

void check_pair(const Mixture& m, int i, int j, bool require_distinct_means) {
    if (i < 0 || j < 0 || i >= m.component_count() || j >= m.component_count()) {
        std::ostringstream os;
        os << "pair (" << i + 1 << ", " << j + 1 << ") out of range for "
           << m.component_count() << " components";
        throw BadArgument(os.str());
    }
    if (i == j) throw BadArgument("pair indices must be distinct");
    if (require_distinct_means &&
        (m.component(i).mean - m.component(j).mean).norm() == 0.0)
        throw CoincidentMeans("component means coincide; the pair ridgeline is a single point");
}

} // namespace detail_pair

CurvatureEval curvature_eval(const Mixture& m, int i, int j, double alpha) {
    detail_pair::check_pair(m, i, j, false);
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw BadArgument("alpha must lie in [0, 1]");
    const Component& ci = m.component(i);
    const Component& cj = m.component(j);
    const Vec delta = cj.mean - ci.mean;
    const Mat s = alpha * ci.cov_inv + (1.0 - alpha) * cj.cov_inv;
    Eigen::LLT<Mat> llt(s);
    const Vec u = ci.cov_inv * llt.solve(cj.cov_inv * delta);
    const double p = u.dot(llt.solve(u));
    const double q = 1.0 - alpha * (1.0 - alpha) * p;
    return CurvatureEval{alpha, p, q, p * p * q};
}

QZeroes q_zeroes_full(const Mixture& m, int i, int j) {
    detail_pair::check_pair(m, i, j, false);
    QZeroes out;
    if ((m.component(i).mean - m.component(j).mean).norm() == 0.0)
        return out; // p == 0, q == 1 everywhere

    const auto qv = [&](double a) { return curvature_eval(m, i, j, a).q; };
    const std::vector<double> grid = detail::composite_grid(4096);
    std::vector<double> vals(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) vals[k] = qv(grid[k]);

    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        if (vals[k] == 0.0) {
            const bool left_neg = k > 0 && vals[k - 1] < 0.0;
            const bool right_neg = vals[k + 1] < 0.0;
            if (left_neg != right_neg)
                out.crossing.push_back(grid[k]);
            else if (grid[k] > 0.0 && grid[k] < 1.0)
                out.degenerate.push_back(grid[k]);
            continue;
        }
        if (vals[k] * vals[k + 1] < 0.0)
            out.crossing.push_back(
                detail::bisect(qv, grid[k], grid[k + 1], vals[k], vals[k + 1], 1e-12));
    }

    // tangential zeroes: local minima of q dipping to ~0 without a sign change
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        if (vals[k] <= 0.0) continue;
        if (vals[k] < vals[k - 1] && vals[k] < vals[k + 1] && vals[k] <= 1e-8) {
            // golden-section refinement of the minimum
            double a = grid[k - 1], b = grid[k + 1];
            constexpr double kInvPhi = 0.6180339887498949;
            double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
            double f1 = qv(x1), f2 = qv(x2);
            for (int it = 0; it < 120 && (b - a) > 1e-13; ++it) {
                if (f1 < f2) {
                    b = x2; x2 = x1; f2 = f1;
                    x1 = b - kInvPhi * (b - a); f1 = qv(x1);
                } else {
                    a = x1; x1 = x2; f1 = f2;
                    x2 = a + kInvPhi * (b - a); f2 = qv(x2);
                }
            }
            const double amin = 0.5 * (a + b);
            if (std::abs(qv(amin)) <= 1e-10) out.degenerate.push_back(amin);
        }
    }
    std::sort(out.crossing.begin(), out.crossing.end());
    std::sort(out.degenerate.begin(), out.degenerate.end());
    return out;
}

std::vector<double> q_zeroes(const Mixture& m, int i, int j) {
    return q_zeroes_full(m, i, j).crossing;
}

double rf_bound(double sigma2) {
    const double s = sigma2;
    return (2.0 * std::pow(1.0 - s + s * s, 1.5) -
            (2.0 * s * s * s - 3.0 * s * s - 3.0 * s + 2.0)) /
           s;
}

namespace {

// Discriminant criterion for the proportional-case cubic: nonnegative iff
// the cubic has more than two real zeroes, i.e. the pair can be bimodal.
double separation_discriminant(double mu2, double sigma2) {
    const double s = sigma2;
    return mu2 * mu2 * s + 2.0 * mu2 * (s - 2.0) * (s + 1.0) * (2.0 * s - 1.0) -
           27.0 * s * (s - 1.0) * (s - 1.0);
}

} // namespace

SpecialCaseReport special_case_analysis(const Mixture& m, int i, int j) {
    detail_pair::check_pair(m, i, j, false);
    const Component& ci = m.component(i);
    const Component& cj = m.component(j);
    SpecialCaseReport rep;

    const Vec delta = cj.mean - ci.mean;
    rep.mahalanobis2 = delta.dot(ci.cov_inv * delta);

    const double tr_i = ci.cov.trace();
    const double s2 = cj.cov.trace() / tr_i;
    const bool proportional =
        (cj.cov - s2 * ci.cov).norm() <= 1e-10 * cj.cov.norm();

    if (delta.norm() == 0.0) {
        // single-point ridgeline: unimodal for every mixing proportion
        rep.cov_case = proportional ? (std::abs(s2 - 1.0) <= 1e-10
                                           ? CovCase::EqualVariance
                                           : CovCase::ProportionalVariance)
                                    : CovCase::General;
        if (proportional) {
            rep.sigma2 = std::abs(s2 - 1.0) <= 1e-10 ? 1.0 : s2;
            rep.rf_bound = rf_bound(*rep.sigma2);
        }
        rep.unimodal_for_all_pi = true;
        return rep;
    }

    if (!proportional) {
        rep.cov_case = CovCase::General;
        rep.root_alphas = q_zeroes(m, i, j);
        rep.unimodal_for_all_pi = rep.root_alphas.empty();
        if (rep.root_alphas.size() == 2) {
            const double pi_a = pi_of_alpha(m, i, j, rep.root_alphas[0]);
            const double pi_b = pi_of_alpha(m, i, j, rep.root_alphas[1]);
            rep.pi_interval = std::make_pair(std::min(pi_a, pi_b), std::max(pi_a, pi_b));
        }
        return rep;
    }

    const bool equal = std::abs(s2 - 1.0) <= 1e-10;
    rep.cov_case = equal ? CovCase::EqualVariance : CovCase::ProportionalVariance;
    rep.sigma2 = equal ? 1.0 : s2;
    rep.rf_bound = rf_bound(*rep.sigma2);
    const double mu2 = rep.mahalanobis2;

    std::vector<double> roots;
    if (equal) {
        // q(alpha) = 1 - alpha*(1-alpha)*mu2
        if (mu2 > 4.0) {
            const double half_span = std::sqrt(0.25 - 1.0 / mu2);
            roots = {0.5 - half_span, 0.5 + half_span};
        }
    } else {
        // q1(alpha) = ((1-alpha) + sigma2*alpha)^3 - alpha*(1-alpha)*mu2*sigma2,
        // alpha being the weight of component i
        const double u = s2 - 1.0;
        const double c3 = u * u * u;
        const double c2 = 3.0 * u * u + mu2 * s2;
        const double c1 = 3.0 * u - mu2 * s2;
        const double c0 = 1.0;
        for (double r : detail::real_cubic_roots(c3, c2, c1, c0))
            if (r > 0.0 && r < 1.0) roots.push_back(r);
        std::sort(roots.begin(), roots.end());
        if (roots.size() == 2 && std::abs(roots[0] - roots[1]) <= 1e-12)
            roots.clear(); // tangency: double root, no sign change
    }

    const bool unimodal_by_bound = mu2 <= *rep.rf_bound;
    const bool unimodal_by_disc = separation_discriminant(mu2, *rep.sigma2) <= 0.0;
    const bool unimodal_by_roots = roots.size() < 2;
    if (unimodal_by_bound != unimodal_by_disc ||
        (!equal && unimodal_by_bound != unimodal_by_roots &&
         std::abs(mu2 - *rep.rf_bound) > 1e-9 * std::max(1.0, mu2))) {
        std::ostringstream os;
        os << "separation bound, discriminant and cubic roots disagree (mu2 = " << mu2
           << ", sigma2 = " << *rep.sigma2 << ")";
        throw InternalInconsistency(os.str());
    }

    rep.unimodal_for_all_pi = unimodal_by_bound;
    if (!rep.unimodal_for_all_pi) {
        // for a bimodal-capable pair exactly two of the real roots fall in (0, 1)
        if (roots.size() != 2) roots = q_zeroes(m, i, j);
        if (roots.size() == 2) {
            rep.root_alphas = roots;
            const double pi_a = pi_of_alpha(m, i, j, roots[0]);
            const double pi_b = pi_of_alpha(m, i, j, roots[1]);
            rep.pi_interval = std::make_pair(std::min(pi_a, pi_b), std::max(pi_a, pi_b));
        }
    }
    return rep;
}

const char* to_string(CovCase c) {
    switch (c) {
        case CovCase::EqualVariance: return "equal_variance";
        case CovCase::ProportionalVariance: return "proportional_variance";
        case CovCase::General: return "general";
    }
    return "unknown";
}

} // namespace mixtopo
