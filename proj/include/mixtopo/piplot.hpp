#pragma once

#include <vector>

#include "mixtopo/curvature.hpp"
#include "mixtopo/model.hpp"
#include "mixtopo/ridgeline.hpp"

namespace mixtopo {

// For a component pair (i, j), alpha is the barycentric weight of component
// i along the pair ridgeline. pi_of_alpha returns the mixing weight of
// component i at which x*(alpha) becomes a critical point of the pair
// density. It satisfies pi(0) = 0 and pi(1) = 1, rises through modes and
// falls through saddles, so the solutions of pi(alpha) = pi at rising
// crossings enumerate the modes for that mixing weight.

/// The critical mixing weight of component i at alpha, computed in the log
/// domain; exact 0 and 1 at the endpoints. Throws CoincidentMeans when
/// mean_i == mean_j (the pair ridgeline degenerates to a point).
double pi_of_alpha(const Mixture& m, int i, int j, double alpha);

enum class CrossDir { Rising, Falling };

const char* to_string(CrossDir d);

struct PiSolution {
    double alpha;
    CrossDir direction;
};

/// All solutions of pi_of_alpha(.) = pi in (0, 1), sorted by alpha.
/// Bracketing runs on the composite grid (4096 uniform nodes plus geometric
/// endpoint ladders) in logit coordinates, with the tails extended far
/// enough that the outermost crossings of strongly separated pairs are
/// still bracketed; bisection refines each root to alpha tolerance 1e-12.
/// The count is odd and directions alternate starting and ending Rising.
std::vector<PiSolution> solve_pi_equation(const Mixture& m, int i, int j, double pi);

/// Maps every pi-equation solution to a classified critical point of the
/// (i, j) submixture with weights (pi, 1-pi). Rising crossings must come
/// back as modes and falling ones as saddles (local minima in 1D);
/// a mismatch with the Hessian count raises InternalInconsistency.
std::vector<CriticalPoint> critical_points_for_pi(const Mixture& m, int i, int j,
                                                  double pi);

/// Number of modes of the (i, j) pair at mixing weight pi: the number of
/// rising crossings. Coincident means give 1 for every pi.
int mode_count(const Mixture& m, int i, int j, double pi);

struct Band {
    double lo, hi;
    int modes;
};

struct ModalityBands {
    std::vector<double> breakpoints; // pi values at the q zeroes, sorted
    std::vector<Band> bands;         // partition of (0, 1), constant mode count
    std::vector<double> zero_alphas; // the q zeroes themselves, sorted
};

/// Partition of pi in (0, 1) into maximal intervals of constant mode count.
/// Breakpoints are the pi values at the sign-change zeroes of q; the count
/// inside each interval is measured by solving the pi-equation at the
/// interval midpoint. Coincident means yield the single band (0, 1) x {1}.
ModalityBands modality_bands(const Mixture& m, int i, int j);

struct PiCurve {
    std::vector<std::pair<double, double>> samples; // (alpha, pi)
};

/// Samples pi_of_alpha over the composite grid, endpoints included.
PiCurve pi_curve(const Mixture& m, int i, int j, int n_samples);

} // namespace mixtopo
