#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mixtopo/model.hpp"

namespace mixtopo {

struct CurvatureEval {
    double alpha;
    double p;     // nonnegative quadratic form along the pair ridgeline
    double q;     // 1 - alpha*(1-alpha)*p; its sign changes bound the mode-count bands
    double kappa; // p^2 * q
};

/// Curvature of the pair (i, j) ridgeline at alpha (the barycentric weight
/// of component i). p is evaluated as (A d)' S^-1 (A d) with
/// A = cov_i^-1 S^-1 cov_j^-1 and d = mean_j - mean_i, so it is nonnegative
/// by construction.
CurvatureEval curvature_eval(const Mixture& m, int i, int j, double alpha);

struct QZeroes {
    std::vector<double> crossing;   // sign-change zeroes, sorted; even count
    std::vector<double> degenerate; // tangential zeroes (no sign change)
};

/// All zeroes of q on (0, 1), located by sign-change bracketing on the
/// composite grid (4096 uniform nodes plus endpoint ladders to 1e-12) and
/// bisected to 1e-12. Coincident means give q == 1, hence no zeroes.
QZeroes q_zeroes_full(const Mixture& m, int i, int j);

/// Just the sign-change zeroes.
std::vector<double> q_zeroes(const Mixture& m, int i, int j);

enum class CovCase { EqualVariance, ProportionalVariance, General };

const char* to_string(CovCase c);

struct SpecialCaseReport {
    CovCase cov_case = CovCase::General;
    std::optional<double> sigma2;  // cov_j = sigma2 * cov_i, when proportional
    double mahalanobis2 = 0.0;     // (mean_j - mean_i)' cov_i^-1 (mean_j - mean_i)
    bool unimodal_for_all_pi = false;
    std::vector<double> root_alphas;
    std::optional<std::pair<double, double>> pi_interval; // bimodal iff pi inside
    std::optional<double> rf_bound; // separation threshold, when proportional
};

/// Separation threshold for proportional covariances:
/// (2 (1 - s + s^2)^{3/2} - (2 s^3 - 3 s^2 - 3 s + 2)) / s with s = sigma2.
/// Equals 4 exactly at sigma2 = 1.
double rf_bound(double sigma2);

/// Detects equal / proportional covariances (relative Frobenius deviation
/// <= 1e-10, sigma2 estimated as the trace ratio) and solves the closed
/// forms: quadratic roots in the equal case, cubic roots in the proportional
/// case, cross-checked against the discriminant criterion. The general case
/// defers to q_zeroes. Roots and the pi interval are reported for pairs that
/// can be bimodal.
SpecialCaseReport special_case_analysis(const Mixture& m, int i, int j);

namespace detail_pair {
/// Shared guard: checks pair indices against the mixture and throws
/// CoincidentMeans when the two means are identical.
void check_pair(const Mixture& m, int i, int j, bool require_distinct_means);
}

} // namespace mixtopo
