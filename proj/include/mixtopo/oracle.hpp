#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixtopo/model.hpp"
#include "mixtopo/topo.hpp"

namespace mixtopo {

// Brute-force verification machinery, kept independent of the ridgeline
// path: modes are found by exhaustive grid search in x space and polished
// by ascent on log g.

struct GridSpec {
    Vec lower;
    Vec upper;
    int points_per_dim = 101;

    /// Componentwise min/max of the means padded by 4 times the largest
    /// marginal standard deviation in each coordinate.
    static GridSpec default_for(const Mixture& m, int points_per_dim);
};

/// Exhaustive grid search for modes (D <= 3): strict local maxima of log g
/// against all 3^D - 1 neighbors, polished by Newton/backtracking ascent to
/// gradient tolerance 1e-10 (scaled), duplicates within 1e-6 merged.
/// Deterministic; results sorted lexicographically.
std::vector<Vec> grid_modes(const Mixture& m, const GridSpec& spec);

/// Seeded multistart ascent from low-discrepancy starts in the default
/// search box. Deterministic given the seed.
std::vector<Vec> multistart_ascent(const Mixture& m, int n_starts, std::uint64_t seed);

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0; // worst observed error for the check
    std::string detail;
};

struct Diagnostics {
    std::vector<CheckResult> checks;
    bool all_pass = false;
};

/// Independent verification of a topography report: (a) gradient norm at
/// every reported critical point, (b) the posterior fixed-point identity,
/// (c) mode agreement against grid_modes (D <= 3), (d) analytic versus
/// finite-difference gradient and Hessian at 20 seeded random points.
Diagnostics verify_report(const Mixture& m, const TopographyReport& report);

} // namespace mixtopo
