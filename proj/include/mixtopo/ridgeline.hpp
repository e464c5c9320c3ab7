#pragma once

#include <vector>

#include "mixtopo/model.hpp"

namespace mixtopo {

// Scalar-parameter convention used everywhere a two-component ridgeline is
// indexed by a single alpha: alpha is the barycentric weight of the FIRST
// component, so the curve runs from the second component's mean (alpha = 0)
// to the first component's mean (alpha = 1).

/// Image of a simplex point under the ridgeline map: the solution of
/// (sum_j alpha_j cov_j^-1) x = sum_j alpha_j cov_j^-1 mean_j, computed with
/// a Cholesky solve. Depends on means and covariances only, never weights.
Vec ridgeline_point(const Mixture& m, const SimplexPoint& alpha);

/// The weighted precision matrix S_alpha = sum_j alpha_j cov_j^-1.
Mat weighted_precision(const Mixture& m, const SimplexPoint& alpha);

struct TangentFrame {
    Mat s_alpha;                 // weighted precision at alpha
    std::vector<Vec> v;          // v_j = cov_j^-1 (x - mean_j), one per component
    std::vector<Vec> d;          // tangent directions, one per free coordinate (K-1)
    std::vector<Vec> w_basis;    // basis of {w : w' S_alpha d_j = 0 for all j}
};

/// Tangent directions of the ridgeline surface at alpha and a basis of the
/// directions orthogonal to it (in the S_alpha inner product). The w basis
/// is only built for strictly interior alpha; endpoint frames return d only.
TangentFrame tangent_frame(const Mixture& m, const SimplexPoint& alpha);

struct RidgelineEval {
    SimplexPoint alpha;
    Vec x;
    double elevation;      // g(x), weight-dependent
    double log_elevation;  // log g(x)
};

/// Elevation of the mixture density along the ridgeline: g(x*(alpha)).
RidgelineEval elevation(const Mixture& m, const SimplexPoint& alpha);

/// Arclength of the K=2 ridgeline from 0 to alpha_end (adaptive Simpson,
/// absolute tolerance 1e-8).
double arclength(const Mixture& m, double alpha_end);

struct ProfileSample {
    double alpha;
    double arclength;
    Vec x;
    double h; // g(x)
};

/// Elevation profile for K=2 on a composite grid: n_samples uniform steps
/// plus geometric refinement toward both endpoints (down to 1e-12), since
/// modes can sit within 1e-3 of the ends. Sorted by alpha ascending.
std::vector<ProfileSample> elevation_profile(const Mixture& m, int n_samples);

struct TriangleNode {
    double a1, a2, a3; // barycentric coordinates
    double tx, ty;     // planar embedding: tx = a2 + a3/2, ty = a3*sqrt(3)/2
    double h;          // g(x*(alpha))
    bool is_local_max; // strict against all present triangular-lattice neighbors
};

/// Barycentric elevation grid for K=3: alpha = (i, j, r-i-j)/r over all
/// lattice nodes, with strict local maxima flagged against the 6 lattice
/// neighbors (boundary nodes compare only existing neighbors).
std::vector<TriangleNode> simplex_grid_elevation(const Mixture& m, int resolution);

enum class CriticalKind { Mode, Saddle, LocalMin };

struct CriticalPoint {
    SimplexPoint alpha;
    Vec x;
    double elevation;
    int neg_eigs;       // negative eigenvalues of the Hessian of g at x
    CriticalKind kind;  // Mode iff neg_eigs == D, LocalMin iff neg_eigs == 0
};

const char* to_string(CriticalKind kind);

/// Classifies the critical point x*(alpha). The caller must supply a refined
/// alpha: the gradient of g at x*(alpha) must have norm <= 1e-6 times the
/// local scale, otherwise NotCritical is thrown. Eigenvalues within
/// 1e-9 * spectral radius of zero raise DegenerateCritical. When D > K-1 a
/// local minimum is impossible; seeing one raises InternalInconsistency.
CriticalPoint classify_critical(const Mixture& m, const SimplexPoint& alpha);

} // namespace mixtopo
