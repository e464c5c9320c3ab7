#include "mixtopo/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mixtopo/detail/numerics.hpp"

namespace mixtopo {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

double Component::log_pdf(const Vec& x) const {
    // solve L y = (x - mean); quadratic form is |y|^2
    Vec y = chol_lower.triangularView<Eigen::Lower>().solve(x - mean);
    return log_norm - 0.5 * y.squaredNorm();
}

SimplexPoint SimplexPoint::checked(Vec coords) {
    if (coords.size() == 0)
        throw BadSimplexPoint("simplex point must have at least one coordinate");
    double sum = 0.0;
    for (int i = 0; i < coords.size(); ++i) {
        const double a = coords[i];
        if (!(a >= 0.0 && a <= 1.0)) {
            std::ostringstream os;
            os << "simplex coordinate " << i << " = " << a << " outside [0, 1]";
            throw BadSimplexPoint(os.str());
        }
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "simplex coordinates sum to " << sum << ", expected 1";
        throw BadSimplexPoint(os.str());
    }
    return SimplexPoint(std::move(coords));
}

SimplexPoint SimplexPoint::vertex(int k, int size) {
    Vec c = Vec::Zero(size);
    c[k] = 1.0;
    return SimplexPoint(std::move(c));
}

SimplexPoint SimplexPoint::pair(double alpha) {
    Vec c(2);
    c[0] = alpha;
    c[1] = 1.0 - alpha;
    return SimplexPoint(std::move(c));
}

Mixture validate_mixture(const RawModel& raw) {
    const int K = static_cast<int>(raw.weights.size());
    if (K < 1) throw BadWeights("mixture must have at least one component");
    if (static_cast<int>(raw.components.size()) != K) {
        std::ostringstream os;
        os << "got " << raw.components.size() << " components but " << K << " weights";
        throw DimensionMismatch(os.str());
    }
    const int D = raw.dim > 0 ? raw.dim : static_cast<int>(raw.components.front().first.size());
    if (D < 1) throw DimensionMismatch("dimension must be at least 1");

    Mixture m;
    m.dim_ = D;
    m.components_.reserve(K);
    for (int j = 0; j < K; ++j) {
        const auto& [mean, cov] = raw.components[j];
        if (mean.size() != D || cov.rows() != D || cov.cols() != D) {
            std::ostringstream os;
            os << "component " << j + 1 << ": mean is " << mean.size()
               << "-dimensional, cov is " << cov.rows() << "x" << cov.cols()
               << ", model dimension is " << D;
            throw DimensionMismatch(os.str());
        }
        const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
        const double mag = cov.cwiseAbs().maxCoeff();
        if (asym > 1e-12 * std::max(mag, 1e-300)) {
            std::ostringstream os;
            os << "component " << j + 1 << ": covariance is not symmetric (max deviation "
               << asym << ")";
            throw NotPositiveDefinite(os.str());
        }
        Component c;
        c.mean = mean;
        c.cov = 0.5 * (cov + cov.transpose());
        Eigen::LLT<Mat> llt(c.cov);
        if (llt.info() != Eigen::Success) {
            std::ostringstream os;
            os << "component " << j + 1 << ": covariance is not positive definite";
            throw NotPositiveDefinite(os.str());
        }
        c.chol_lower = llt.matrixL();
        c.cov_inv = llt.solve(Mat::Identity(D, D));
        c.log_det = 2.0 * c.chol_lower.diagonal().array().log().sum();
        c.log_norm = -0.5 * D * kLog2Pi - 0.5 * c.log_det;
        m.components_.push_back(std::move(c));
    }

    double sum = 0.0;
    for (double w : raw.weights) {
        if (w < 0.0) throw BadWeights("mixing proportions must be nonnegative");
        if (w > 1.0 + 1e-9) throw BadWeights("mixing proportions must lie in [0, 1]");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "mixing proportions sum to " << sum << ", expected 1";
        throw BadWeights(os.str());
    }
    m.weights_ = Vec(K);
    m.log_weights_ = Vec(K);
    for (int j = 0; j < K; ++j) {
        m.weights_[j] = raw.weights[j] / sum;
        m.log_weights_[j] = m.weights_[j] > 0.0
                                ? std::log(m.weights_[j])
                                : -std::numeric_limits<double>::infinity();
    }
    return m;
}

Mixture Mixture::make(const std::vector<std::pair<Vec, Mat>>& components,
                      const std::vector<double>& weights) {
    RawModel raw;
    raw.dim = components.empty() ? 0 : static_cast<int>(components.front().first.size());
    raw.weights = weights;
    raw.components = components;
    return validate_mixture(raw);
}

namespace {

void check_dim(const Mixture& m, const Vec& x) {
    if (x.size() != m.dim()) {
        std::ostringstream os;
        os << "point is " << x.size() << "-dimensional, model dimension is " << m.dim();
        throw DimensionMismatch(os.str());
    }
}

} // namespace

double log_density(const Mixture& m, const Vec& x) {
    check_dim(m, x);
    std::vector<double> terms;
    terms.reserve(m.component_count());
    for (int j = 0; j < m.component_count(); ++j) {
        if (m.weight(j) == 0.0) continue;
        terms.push_back(m.log_weight(j) + m.component(j).log_pdf(x));
    }
    return detail::logsumexp(terms);
}

double density(const Mixture& m, const Vec& x) { return std::exp(log_density(m, x)); }

Vec gradient(const Mixture& m, const Vec& x) {
    check_dim(m, x);
    Vec g = Vec::Zero(m.dim());
    for (int j = 0; j < m.component_count(); ++j) {
        if (m.weight(j) == 0.0) continue;
        const Component& c = m.component(j);
        const double dens = m.weight(j) * std::exp(c.log_pdf(x));
        g.noalias() -= dens * (c.cov_inv * (x - c.mean));
    }
    return g;
}

Mat hessian(const Mixture& m, const Vec& x) {
    check_dim(m, x);
    Mat h = Mat::Zero(m.dim(), m.dim());
    for (int j = 0; j < m.component_count(); ++j) {
        if (m.weight(j) == 0.0) continue;
        const Component& c = m.component(j);
        const double dens = m.weight(j) * std::exp(c.log_pdf(x));
        const Vec v = c.cov_inv * (x - c.mean);
        h.noalias() += dens * (v * v.transpose() - c.cov_inv);
    }
    return 0.5 * (h + h.transpose());
}

SimplexPoint posterior(const Mixture& m, const Vec& x) {
    check_dim(m, x);
    const int K = m.component_count();
    Vec lw(K);
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < K; ++j) {
        lw[j] = m.weight(j) > 0.0 ? m.log_weight(j) + m.component(j).log_pdf(x)
                                  : -std::numeric_limits<double>::infinity();
        mx = std::max(mx, lw[j]);
    }
    Vec p(K);
    double sum = 0.0;
    for (int j = 0; j < K; ++j) {
        p[j] = std::isfinite(lw[j]) ? std::exp(lw[j] - mx) : 0.0;
        sum += p[j];
    }
    p /= sum;
    return SimplexPoint::unchecked(std::move(p));
}

double gradient_scale(const Mixture& m, const Vec& x) {
    double mx = 0.0;
    for (int j = 0; j < m.component_count(); ++j) {
        const Component& c = m.component(j);
        mx = std::max(mx, (c.cov_inv * (x - c.mean)).norm());
    }
    return 1.0 + mx;
}

} // namespace mixtopo
