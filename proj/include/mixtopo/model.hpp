#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mixtopo/errors.hpp"

namespace mixtopo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// One Gaussian component. Constructed through Mixture validation, which
/// symmetrizes the covariance and caches its Cholesky factor, inverse and
/// log determinant for reuse by every downstream evaluation.
struct Component {
    Vec mean;
    Mat cov;

    Mat chol_lower;  // cov = L L'
    Mat cov_inv;
    double log_det = 0.0;
    double log_norm = 0.0; // -(D/2) log(2*pi) - log_det/2

    int dim() const { return static_cast<int>(mean.size()); }

    /// log N(x; mean, cov). Assumes x.size() == dim().
    double log_pdf(const Vec& x) const;
};

/// Raw, unvalidated model record as parsed from a model file.
struct RawModel {
    int dim = 0;
    std::vector<double> weights;
    std::vector<std::pair<Vec, Mat>> components; // (mean, cov)
};

/// A point on the unit simplex: coords in [0,1] summing to 1.
class SimplexPoint {
public:
    /// Validates range and sum (absolute tolerance 1e-12).
    static SimplexPoint checked(Vec coords);
    /// No validation; for values produced by the library itself.
    static SimplexPoint unchecked(Vec coords) { return SimplexPoint(std::move(coords)); }
    static SimplexPoint vertex(int k, int size);
    /// K=2 convenience: (alpha, 1-alpha) with alpha the first coordinate.
    static SimplexPoint pair(double alpha);

    int size() const { return static_cast<int>(coords_.size()); }
    double operator[](int i) const { return coords_[i]; }
    const Vec& coords() const { return coords_; }

private:
    explicit SimplexPoint(Vec coords) : coords_(std::move(coords)) {}
    Vec coords_;
};

/// Validated, immutable K-component Gaussian mixture in D dimensions.
/// All evaluation entry points are pure functions; a Mixture can be shared
/// freely across threads.
class Mixture {
public:
    int dim() const { return dim_; }
    int component_count() const { return static_cast<int>(components_.size()); }
    const Component& component(int j) const { return components_[j]; }
    const std::vector<Component>& components() const { return components_; }
    double weight(int j) const { return weights_[j]; }
    const Vec& weights() const { return weights_; }
    double log_weight(int j) const { return log_weights_[j]; } // -inf when 0

    friend Mixture validate_mixture(const RawModel& raw);
    /// Convenience for programmatic construction; routes through validation.
    static Mixture make(const std::vector<std::pair<Vec, Mat>>& components,
                        const std::vector<double>& weights);

private:
    Mixture() = default;
    std::vector<Component> components_;
    Vec weights_;
    Vec log_weights_;
    int dim_ = 0;
};

/// Validates a raw model record: dimension agreement, covariance symmetry
/// (relative tolerance 1e-12, then exact symmetrization) and positive
/// definiteness, weights in [0,1] summing to 1 (renormalized when within
/// 1e-9, rejected otherwise).
Mixture validate_mixture(const RawModel& raw);

/// log g(x), evaluated with log-sum-exp over component log densities.
double log_density(const Mixture& m, const Vec& x);
double density(const Mixture& m, const Vec& x);

/// Analytic gradient of g at x.
Vec gradient(const Mixture& m, const Vec& x);

/// Analytic Hessian of g at x; symmetric by construction.
Mat hessian(const Mixture& m, const Vec& x);

/// Posterior component weights at x, computed in the log domain.
SimplexPoint posterior(const Mixture& m, const Vec& x);

/// Characteristic inverse length scale used for gradient-norm thresholds:
/// 1 + max_j |cov_j^-1 (x - mean_j)|.
double gradient_scale(const Mixture& m, const Vec& x);

} // namespace mixtopo
