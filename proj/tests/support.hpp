#pragma once

// Shared test utilities: fixture mixtures, independent finite-difference
// oracles and seeded random-instance generators. Everything here is kept
// independent of the library's analytic paths so it can serve as a check
// on them.

#include <cmath>
#include <random>
#include <vector>

#include "mixtopo/model.hpp"

namespace testsup {

using mixtopo::Mat;
using mixtopo::Mixture;
using mixtopo::Vec;

inline Mixture example1() {
    Mat s1 = Mat::Zero(2, 2), s2 = Mat::Zero(2, 2);
    s1.diagonal() << 1.0, 0.05;
    s2.diagonal() << 0.05, 1.0;
    Vec m1 = Vec::Zero(2), m2 = Vec::Constant(2, 1.0);
    return Mixture::make({{m1, s1}, {m2, s2}}, {0.5, 0.5});
}

inline Mixture example2() {
    Mat s1 = Mat::Zero(3, 3), s2 = Mat::Zero(3, 3);
    s1.diagonal() << 1.0, 1.0, 0.05;
    s2.diagonal() << 0.05, 1.0, 1.0;
    Vec m1 = Vec::Zero(3);
    Vec m2(3);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    m2 << inv_sqrt2, 2.0, inv_sqrt2;
    return Mixture::make({{m1, s1}, {m2, s2}}, {0.5, 0.5});
}

inline Mixture example3() {
    Mat eye = Mat::Identity(2, 2);
    Vec m1(2), m2(2), m3(2);
    m1 << 0, 0;
    m2 << 0, 3;
    m3 << 3, 0;
    return Mixture::make({{m1, eye}, {m2, eye}, {m3, eye}},
                         {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

inline Mixture example4() {
    Mat s13 = Mat::Zero(2, 2), s2 = Mat::Zero(2, 2);
    s13.diagonal() << 1.0, 0.05;
    s2.diagonal() << 0.05, 1.0;
    Vec m1(2), m2(2), m3(2);
    m1 << 0, 0;
    m2 << 1, 1;
    m3 << 2, 2;
    return Mixture::make({{m1, s13}, {m2, s2}, {m3, s13}},
                         {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

/// Direct per-component sum of Gaussian densities, no log-domain tricks:
/// the independent oracle for density values.
inline double naive_density(const Mixture& m, const Vec& x) {
    double total = 0.0;
    for (int j = 0; j < m.component_count(); ++j) {
        const auto& c = m.component(j);
        const Vec diff = x - c.mean;
        const double quad = diff.dot(c.cov.fullPivLu().solve(diff));
        const double det = c.cov.determinant();
        const int d = static_cast<int>(x.size());
        total += m.weight(j) * std::exp(-0.5 * quad) /
                 std::sqrt(std::pow(2.0 * M_PI, d) * det);
    }
    return total;
}

/// Central finite-difference gradient of the density.
inline Vec fd_gradient(const Mixture& m, const Vec& x, double step) {
    Vec g(x.size());
    for (int k = 0; k < x.size(); ++k) {
        const double h = step * (1.0 + std::abs(x[k]));
        Vec xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        g[k] = (mixtopo::density(m, xp) - mixtopo::density(m, xm)) / (2.0 * h);
    }
    return g;
}

/// Central finite-difference Hessian of the density (differences of the
/// analytic gradient are deliberately avoided: this squares the density
/// evaluations instead so the check stays independent).
inline Mat fd_hessian(const Mixture& m, const Vec& x, double step) {
    const int d = static_cast<int>(x.size());
    Mat h(d, d);
    const double f0 = mixtopo::density(m, x);
    for (int a = 0; a < d; ++a) {
        const double ha = step * (1.0 + std::abs(x[a]));
        for (int b = a; b < d; ++b) {
            const double hb = step * (1.0 + std::abs(x[b]));
            if (a == b) {
                Vec xp = x, xm = x;
                xp[a] += ha;
                xm[a] -= ha;
                h(a, a) = (mixtopo::density(m, xp) - 2.0 * f0 + mixtopo::density(m, xm)) /
                          (ha * ha);
            } else {
                Vec xpp = x, xpm = x, xmp = x, xmm = x;
                xpp[a] += ha; xpp[b] += hb;
                xpm[a] += ha; xpm[b] -= hb;
                xmp[a] -= ha; xmp[b] += hb;
                xmm[a] -= ha; xmm[b] -= hb;
                h(a, b) = h(b, a) =
                    (mixtopo::density(m, xpp) - mixtopo::density(m, xpm) -
                     mixtopo::density(m, xmp) + mixtopo::density(m, xmm)) /
                    (4.0 * ha * hb);
            }
        }
    }
    return h;
}

/// Random SPD matrix with eigenvalues in [lo, hi].
inline Mat random_spd(std::mt19937_64& rng, int d, double lo, double hi) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat a(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a(r, c) = normal(rng);
    const Eigen::HouseholderQR<Mat> qr(a);
    const Mat q = qr.householderQ();
    std::uniform_real_distribution<double> eig(lo, hi);
    Vec lam(d);
    for (int k = 0; k < d; ++k) lam[k] = eig(rng);
    return q * lam.asDiagonal() * q.transpose();
}

struct RandomMixtureSpec {
    int k_min = 2, k_max = 2;
    int d_min = 1, d_max = 3;
    double mean_box = 3.0;
    double eig_lo = 0.05, eig_hi = 2.0;
    double weight_lo = 0.05, weight_hi = 0.95;
};

inline Mixture random_mixture(std::mt19937_64& rng, const RandomMixtureSpec& spec = {}) {
    std::uniform_int_distribution<int> kd(spec.k_min, spec.k_max);
    std::uniform_int_distribution<int> dd(spec.d_min, spec.d_max);
    const int k = kd(rng);
    const int d = dd(rng);
    std::uniform_real_distribution<double> mu(-spec.mean_box, spec.mean_box);
    std::vector<std::pair<Vec, Mat>> comps;
    for (int c = 0; c < k; ++c) {
        Vec mean(d);
        for (int i = 0; i < d; ++i) mean[i] = mu(rng);
        comps.emplace_back(mean, random_spd(rng, d, spec.eig_lo, spec.eig_hi));
    }
    std::vector<double> w(k);
    if (k == 2) {
        std::uniform_real_distribution<double> wu(spec.weight_lo, spec.weight_hi);
        w[0] = wu(rng);
        w[1] = 1.0 - w[0];
    } else {
        std::uniform_real_distribution<double> wu(0.1, 1.0);
        double sum = 0.0;
        for (double& wi : w) sum += (wi = wu(rng));
        for (double& wi : w) wi /= sum;
    }
    return Mixture::make(comps, w);
}

/// Seeded sample from a mixture (for the EM recovery check).
inline Mat sample_mixture(const Mixture& m, int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Mat out(n, m.dim());
    for (int r = 0; r < n; ++r) {
        double u = u01(rng);
        int pick = 0;
        for (; pick + 1 < m.component_count(); ++pick) {
            u -= m.weight(pick);
            if (u <= 0.0) break;
        }
        Vec z(m.dim());
        for (int k = 0; k < m.dim(); ++k) z[k] = normal(rng);
        out.row(r) =
            (m.component(pick).mean + m.component(pick).chol_lower * z).transpose();
    }
    return out;
}

} // namespace testsup
