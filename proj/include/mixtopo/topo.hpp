#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixtopo/curvature.hpp"
#include "mixtopo/model.hpp"
#include "mixtopo/piplot.hpp"
#include "mixtopo/ridgeline.hpp"

namespace mixtopo {

enum class TopoMethod { ExactK1, ExactK2, GridK3, MultistartKGE4 };

const char* to_string(TopoMethod m);

struct PairReport {
    int i = 0, j = 0;        // 0-based component indices
    double pi_pair = 0.5;    // weight of component i inside the pair
    bool coincident_means = false;
    ModalityBands bands;
    std::vector<CriticalPoint> critical_points; // of the pair submixture at pi_pair
    int modes_at_pi_pair = 1;
    SpecialCaseReport curvature;
};

struct TopoOptions {
    int resolution = 400;      // K=3 triangle grid resolution
    int n_starts = 1000;       // K>=4 multistart count
    std::uint64_t seed = 0;
    bool equal_pair_weights = false; // analyze pairs at pi_pair = 0.5
};

struct TopographyReport {
    int dim = 0;
    int components = 0;
    TopoMethod method = TopoMethod::ExactK2;
    bool heuristic = false; // set for K >= 4 (multistart gives no completeness guarantee)
    std::vector<CriticalPoint> critical_points;
    int mode_count = 0;
    std::vector<PairReport> pair_summaries; // filled for K = 2
    std::vector<std::string> diagnostics;
};

/// Pairwise analysis of components i and j as a two-component submixture
/// with pi_pair = w_i / (w_i + w_j) (or 0.5 when equal_pair_weights is set):
/// modality bands, critical points at pi_pair, and the closed-form
/// covariance-case report. Throws ZeroWeightPair when w_i + w_j == 0.
PairReport analyze_pair(const Mixture& m, int i, int j,
                        const TopoOptions& opts = {});

/// Full critical-point analysis of the mixture. K=1 and K=2 are exact
/// (pi-equation), K=3 runs the triangle grid plus ascent/saddle refinement,
/// K>=4 runs seeded multistart ascent and is flagged heuristic. Critical
/// points are deduplicated through the posterior fixed point, which also
/// collapses ridgeline plateaus that map many alphas to one x.
TopographyReport full_topography(const Mixture& m, const TopoOptions& opts = {});

enum class LinkReason { Unimodal, HighPass };

const char* to_string(LinkReason r);

struct LinkEdge {
    int i = 0, j = 0; // 0-based, i < j
    LinkReason reason = LinkReason::Unimodal;
    std::optional<double> saddle_ratio; // min saddle / min peak, for HighPass
};

struct LinkageGraph {
    int n = 0;
    std::vector<LinkEdge> edges;
    std::vector<std::vector<int>> supercomponents; // connected components, sorted
};

/// Links every pair whose submixture is unimodal at its pair weight; with
/// tau set, additionally links multimodal pairs whose lowest saddle is at
/// least tau times the lowest peak. Supercomponents are the connected
/// components, ordered by smallest member.
LinkageGraph linkage_graph(const Mixture& m, std::optional<double> tau = {},
                           const TopoOptions& opts = {});

/// Connected components of the linkage graph with tau unset.
std::vector<std::vector<int>> supercomponents(const Mixture& m,
                                              const TopoOptions& opts = {});

} // namespace mixtopo
