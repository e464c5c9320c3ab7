#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixtopo/model.hpp"

namespace mixtopo {

struct DataMatrix {
    Mat values;                     // N rows, D columns
    std::vector<std::string> names; // column names, when a header was read

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
};

/// Reads a rectangular numeric CSV. Ragged rows and non-numeric cells raise
/// ParseError with the offending line number; unreadable files raise IoError.
DataMatrix load_csv(const std::string& path, bool has_header);

struct EmOptions {
    int n_seeds = 50;
    std::uint64_t seed = 0;
    int max_iter = 1000;
    double tol = 1e-8; // relative log-likelihood change
};

struct EmRun {
    Mixture mixture;
    double log_likelihood;
    std::vector<double> ll_trace; // one entry per iteration, nondecreasing
    std::uint64_t seed;
};

/// One EM run from a k-means++ style initialization drawn from the given
/// seed. Covariances get a ridge of 1e-6 times their mean diagonal at every
/// M step; a component whose regularized covariance still fails its
/// Cholesky raises DegenerateFit.
EmRun run_em_single(const DataMatrix& data, int k, std::uint64_t seed,
                    const EmOptions& opts = {});

/// Best-of-n_seeds EM fit (ties broken by lower seed, so the result is
/// deterministic). Requires at least (D + 1) rows per requested component.
Mixture fit_em(const DataMatrix& data, int k, const EmOptions& opts = {});

} // namespace mixtopo
