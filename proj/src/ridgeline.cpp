#include "mixtopo/ridgeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mixtopo/detail/numerics.hpp"

namespace mixtopo {

namespace {

void check_alpha(const Mixture& m, const SimplexPoint& alpha) {
    if (alpha.size() != m.component_count()) {
        std::ostringstream os;
        os << "simplex point has " << alpha.size() << " coordinates, mixture has "
           << m.component_count() << " components";
        throw DimensionMismatch(os.str());
    }
}

} // namespace

Mat weighted_precision(const Mixture& m, const SimplexPoint& alpha) {
    check_alpha(m, alpha);
    Mat s = Mat::Zero(m.dim(), m.dim());
    for (int j = 0; j < m.component_count(); ++j)
        if (alpha[j] != 0.0) s.noalias() += alpha[j] * m.component(j).cov_inv;
    return s;
}

Vec ridgeline_point(const Mixture& m, const SimplexPoint& alpha) {
    check_alpha(m, alpha);
    Mat s = Mat::Zero(m.dim(), m.dim());
    Vec rhs = Vec::Zero(m.dim());
    for (int j = 0; j < m.component_count(); ++j) {
        if (alpha[j] == 0.0) continue;
        const Component& c = m.component(j);
        s.noalias() += alpha[j] * c.cov_inv;
        rhs.noalias() += alpha[j] * (c.cov_inv * c.mean);
    }
    return Eigen::LLT<Mat>(s).solve(rhs);
}

TangentFrame tangent_frame(const Mixture& m, const SimplexPoint& alpha) {
    check_alpha(m, alpha);
    const int K = m.component_count();
    const int D = m.dim();
    const Vec x = ridgeline_point(m, alpha);

    TangentFrame f;
    f.s_alpha = weighted_precision(m, alpha);
    Eigen::LLT<Mat> llt(f.s_alpha);
    f.v.reserve(K);
    for (int j = 0; j < K; ++j)
        f.v.push_back(m.component(j).cov_inv * (x - m.component(j).mean));

    double scale = 0.0;
    for (const Vec& vj : f.v) scale = std::max(scale, vj.norm());
    f.d.reserve(K - 1);
    double dmax = 0.0;
    for (int j = 0; j + 1 < K; ++j) {
        f.d.push_back(llt.solve(f.v[j] - f.v[K - 1]));
        dmax = std::max(dmax, f.d.back().norm());
    }
    if (K >= 2 && dmax <= 1e-14 * (1.0 + scale))
        throw DegenerateFrame("all tangent directions vanish; component means coincide");

    bool interior = true;
    for (int j = 0; j < K; ++j)
        if (alpha[j] <= 0.0 || alpha[j] >= 1.0) interior = false;
    if (K == 1) interior = false;

    if (interior) {
        // rows of the constraint matrix are (S_alpha d_j)' = (v_j - v_K)'
        Mat rows(K - 1, D);
        for (int j = 0; j + 1 < K; ++j) rows.row(j) = (f.v[j] - f.v[K - 1]).transpose();
        Eigen::FullPivLU<Mat> lu(rows);
        lu.setThreshold(1e-12);
        Mat kernel = lu.kernel();
        if (kernel.cols() == 1 && kernel.col(0).norm() == 0.0) kernel.resize(D, 0);
        // orthonormalize for stable downstream use
        Eigen::HouseholderQR<Mat> qr(kernel);
        Mat q = qr.householderQ() * Mat::Identity(D, kernel.cols());
        for (int c = 0; c < q.cols(); ++c) f.w_basis.push_back(q.col(c));
    }
    return f;
}

RidgelineEval elevation(const Mixture& m, const SimplexPoint& alpha) {
    RidgelineEval e{SimplexPoint::unchecked(alpha.coords()), ridgeline_point(m, alpha), 0.0, 0.0};
    e.log_elevation = log_density(m, e.x);
    e.elevation = std::exp(e.log_elevation);
    return e;
}

namespace {

double ridgeline_speed(const Mixture& m, double a) {
    const SimplexPoint alpha = SimplexPoint::pair(a);
    const Vec x = ridgeline_point(m, alpha);
    const Component& c0 = m.component(0);
    const Component& c1 = m.component(1);
    const Vec v0 = c0.cov_inv * (x - c0.mean);
    const Vec v1 = c1.cov_inv * (x - c1.mean);
    const Mat s = weighted_precision(m, alpha);
    return Eigen::LLT<Mat>(s).solve(v0 - v1).norm();
}

} // namespace

double arclength(const Mixture& m, double alpha_end) {
    if (m.component_count() != 2)
        throw NotTwoComponents("arclength is defined for two-component mixtures");
    if (!(alpha_end >= 0.0 && alpha_end <= 1.0))
        throw BadArgument("alpha must lie in [0, 1]");
    if (alpha_end == 0.0) return 0.0;
    return detail::adaptive_simpson([&](double a) { return ridgeline_speed(m, a); },
                                    0.0, alpha_end, 1e-8);
}

std::vector<ProfileSample> elevation_profile(const Mixture& m, int n_samples) {
    if (m.component_count() != 2)
        throw NotTwoComponents("elevation profiles are defined for two-component mixtures");
    if (n_samples < 2) throw BadArgument("n_samples must be at least 2");
    const std::vector<double> grid = detail::composite_grid(n_samples);
    std::vector<ProfileSample> out;
    out.reserve(grid.size());
    double acc = 0.0;
    double prev = 0.0;
    for (double a : grid) {
        if (!out.empty())
            acc += detail::adaptive_simpson(
                [&](double t) { return ridgeline_speed(m, t); }, prev, a, 1e-12);
        const SimplexPoint alpha = SimplexPoint::pair(a);
        const Vec x = ridgeline_point(m, alpha);
        out.push_back(ProfileSample{a, acc, x, density(m, x)});
        prev = a;
    }
    return out;
}

std::vector<TriangleNode> simplex_grid_elevation(const Mixture& m, int resolution) {
    if (m.component_count() != 3)
        throw NotThreeComponents("triangle grids are defined for three-component mixtures");
    if (resolution < 2) throw BadArgument("resolution must be at least 2");
    const int r = resolution;
    const auto index = [r](int i, int j) { return i * (r + 1) + j; };

    std::vector<double> h(static_cast<std::size_t>(r + 1) * (r + 1),
                          -std::numeric_limits<double>::infinity());
    for (int i = 0; i <= r; ++i) {
        for (int j = 0; j <= r - i; ++j) {
            Vec a(3);
            a << static_cast<double>(i) / r, static_cast<double>(j) / r,
                static_cast<double>(r - i - j) / r;
            const SimplexPoint alpha = SimplexPoint::unchecked(std::move(a));
            h[index(i, j)] = std::exp(log_density(m, ridgeline_point(m, alpha)));
        }
    }

    static constexpr int kNbr[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    std::vector<TriangleNode> out;
    out.reserve(static_cast<std::size_t>(r + 1) * (r + 2) / 2);
    for (int i = 0; i <= r; ++i) {
        for (int j = 0; j <= r - i; ++j) {
            const double hij = h[index(i, j)];
            bool strict_max = true;
            for (const auto& nb : kNbr) {
                const int ni = i + nb[0];
                const int nj = j + nb[1];
                if (ni < 0 || nj < 0 || ni + nj > r) continue;
                if (h[index(ni, nj)] >= hij) {
                    strict_max = false;
                    break;
                }
            }
            TriangleNode node;
            node.a1 = static_cast<double>(i) / r;
            node.a2 = static_cast<double>(j) / r;
            node.a3 = static_cast<double>(r - i - j) / r;
            node.tx = node.a2 + 0.5 * node.a3;
            node.ty = node.a3 * (std::sqrt(3.0) / 2.0);
            node.h = hij;
            node.is_local_max = strict_max;
            out.push_back(node);
        }
    }
    return out;
}

const char* to_string(CriticalKind kind) {
    switch (kind) {
        case CriticalKind::Mode: return "mode";
        case CriticalKind::Saddle: return "saddle";
        case CriticalKind::LocalMin: return "local_min";
    }
    return "unknown";
}

CriticalPoint classify_critical(const Mixture& m, const SimplexPoint& alpha) {
    check_alpha(m, alpha);
    const Vec x = ridgeline_point(m, alpha);
    const double g = density(m, x);
    const double scale = g * gradient_scale(m, x);
    const double gnorm = gradient(m, x).norm();
    if (gnorm > 1e-6 * scale) {
        std::ostringstream os;
        os << "gradient norm " << gnorm << " exceeds 1e-6 * " << scale
           << "; alpha is not refined to a critical point";
        throw NotCritical(os.str());
    }
    const Mat h = hessian(m, x);
    Eigen::SelfAdjointEigenSolver<Mat> eig(h);
    const Vec& ev = eig.eigenvalues();
    const double radius = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
    int neg = 0;
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i]) <= 1e-9 * radius) {
            std::ostringstream os;
            os << "Hessian eigenvalue " << ev[i] << " within 1e-9 of zero at alpha";
            throw DegenerateCritical(os.str());
        }
        if (ev[i] < 0.0) ++neg;
    }
    CriticalPoint cp{SimplexPoint::unchecked(alpha.coords()), x, g, neg, CriticalKind::Saddle};
    if (neg == m.dim())
        cp.kind = CriticalKind::Mode;
    else if (neg == 0)
        cp.kind = CriticalKind::LocalMin;
    if (cp.kind == CriticalKind::LocalMin && m.dim() > m.component_count() - 1)
        throw InternalInconsistency(
            "local minimum classified although the ridgeline is a strict dimension reduction");
    return cp;
}

} // namespace mixtopo
