#include "mixtopo/topo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "mixtopo/detail/numerics.hpp"

namespace mixtopo {

const char* to_string(TopoMethod m) {
    switch (m) {
        case TopoMethod::ExactK1: return "exact_k1";
        case TopoMethod::ExactK2: return "exact_k2";
        case TopoMethod::GridK3: return "grid_k3";
        case TopoMethod::MultistartKGE4: return "multistart_k_ge_4";
    }
    return "unknown";
}

const char* to_string(LinkReason r) {
    return r == LinkReason::Unimodal ? "unimodal" : "high_pass";
}

namespace {

constexpr double kSimplexFloor = 1e-15;

// Elevation in reduced simplex coordinates u = (a_1 .. a_{K-1}),
// a_K = 1 - sum(u). Used by the K >= 3 refinement machinery.
struct ReducedElevation {
    const Mixture& m;
    int K;

    explicit ReducedElevation(const Mixture& mm) : m(mm), K(mm.component_count()) {}

    bool inside(const Vec& u) const {
        double s = 0.0;
        for (int k = 0; k < u.size(); ++k) {
            if (u[k] < kSimplexFloor) return false;
            s += u[k];
        }
        return s <= 1.0 - kSimplexFloor;
    }

    SimplexPoint alpha_of(const Vec& u) const {
        Vec a(K);
        double s = 0.0;
        for (int k = 0; k + 1 < K; ++k) {
            a[k] = u[k];
            s += u[k];
        }
        a[K - 1] = 1.0 - s;
        return SimplexPoint::unchecked(std::move(a));
    }

    double log_h(const Vec& u) const {
        return log_density(m, ridgeline_point(m, alpha_of(u)));
    }

    // gradient of log h in the reduced coordinates: with a_K eliminated,
    // dx/da_k = S^-1 (v_K - v_k), so component k is (grad g . dx/da_k) / g
    Vec grad_log_h(const Vec& u) const {
        const SimplexPoint alpha = alpha_of(u);
        const Vec x = ridgeline_point(m, alpha);
        const Mat s = weighted_precision(m, alpha);
        Eigen::LLT<Mat> llt(s);
        const Vec g = gradient(m, x);
        const double dens = density(m, x);
        std::vector<Vec> v(K);
        for (int k = 0; k < K; ++k)
            v[k] = m.component(k).cov_inv * (x - m.component(k).mean);
        Vec out(K - 1);
        for (int k = 0; k + 1 < K; ++k)
            out[k] = g.dot(llt.solve(v[K - 1] - v[k])) / dens;
        return out;
    }

    Vec fd_jacobian_solve_newton(const Vec& u) const {
        // Newton step for grad_log_h(u) = 0 with a central-difference Jacobian
        const int n = K - 1;
        const Vec g0 = grad_log_h(u);
        Mat jac(n, n);
        for (int k = 0; k < n; ++k) {
            double step = 1e-7;
            Vec up = u, dn = u;
            for (int halve = 0; halve < 40; ++halve) {
                up[k] = u[k] + step;
                dn[k] = u[k] - step;
                if (inside(up) && inside(dn)) break;
                step *= 0.5;
            }
            if (!inside(up) || !inside(dn)) { up = u; dn = u; }
            const double span = up[k] - dn[k];
            jac.col(k) = span > 0.0 ? Vec((grad_log_h(up) - grad_log_h(dn)) / span)
                                    : Vec(Vec::Zero(n));
        }
        return jac.fullPivLu().solve(-g0);
    }
};

// Backtracking ascent of log h from u0; Newton direction when it helps,
// steepest ascent otherwise. Returns the final reduced point.
Vec ascend_log_h(const ReducedElevation& re, Vec u) {
    const int n = re.K - 1;
    double f = re.log_h(u);
    for (int it = 0; it < 300; ++it) {
        const Vec g = re.grad_log_h(u);
        if (g.norm() <= 1e-12) break;
        Vec dir = Vec::Zero(n);
        bool have_newton = false;
        {
            const Vec newton = re.fd_jacobian_solve_newton(u);
            if (newton.allFinite() && newton.dot(g) > 0.0) {
                dir = newton;
                have_newton = true;
            }
        }
        if (!have_newton) dir = g;
        double step = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            Vec cand = u + step * dir;
            if (re.inside(cand)) {
                const double fc = re.log_h(cand);
                if (fc >= f + 1e-4 * step * dir.dot(g)) {
                    const double delta = (cand - u).norm();
                    u = cand;
                    f = fc;
                    moved = true;
                    if (delta <= 1e-15 * (1.0 + u.norm())) return u;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return u;
}

// Newton root-finding on the in-simplex elevation gradient; nullopt-like
// failure is signaled by returning a point outside the simplex.
Vec newton_on_gradient(const ReducedElevation& re, Vec u) {
    for (int it = 0; it < 80; ++it) {
        if (!re.inside(u)) return u;
        const Vec g = re.grad_log_h(u);
        if (g.norm() <= 1e-13) return u;
        Vec step = re.fd_jacobian_solve_newton(u);
        if (!step.allFinite()) return u;
        // dampen steps that would leave the simplex
        double lam = 1.0;
        while (lam > 1e-6 && !re.inside(u + lam * step)) lam *= 0.5;
        if (!re.inside(u + lam * step)) return u + step; // give up, lands outside
        u += lam * step;
        if ((lam * step).norm() <= 1e-15 * (1.0 + u.norm())) return u;
    }
    return u;
}

struct CriticalCollector {
    const Mixture& m;
    std::vector<CriticalPoint> points;
    std::vector<std::string>& diagnostics;

    CriticalCollector(const Mixture& mm, std::vector<std::string>& diag)
        : m(mm), diagnostics(diag) {}

    // Accepts a candidate alpha, snaps it to the posterior fixed point
    // (collapsing plateau duplicates that share one x), verifies criticality
    // and classifies. Returns true when a new point was added.
    bool add(const SimplexPoint& alpha_candidate) {
        Vec x = ridgeline_point(m, alpha_candidate);
        const double dens = density(m, x);
        if (gradient(m, x).norm() > 1e-8 * dens * gradient_scale(m, x)) return false;
        const SimplexPoint alpha = posterior(m, x);
        x = ridgeline_point(m, alpha);
        for (const CriticalPoint& cp : points) {
            const double xtol = 1e-6 * (1.0 + cp.x.cwiseAbs().maxCoeff());
            if ((cp.x - x).cwiseAbs().maxCoeff() < xtol ||
                (cp.alpha.coords() - alpha.coords()).cwiseAbs().maxCoeff() < 1e-6)
                return false;
        }
        try {
            points.push_back(classify_critical(m, alpha));
        } catch (const DegenerateCritical& e) {
            diagnostics.push_back(std::string("degenerate critical point skipped: ") + e.what());
            return false;
        } catch (const NotCritical&) {
            return false;
        }
        return true;
    }
};

void sort_report_points(std::vector<CriticalPoint>& pts) {
    const auto rank = [](CriticalKind k) {
        return k == CriticalKind::Mode ? 0 : (k == CriticalKind::Saddle ? 1 : 2);
    };
    std::sort(pts.begin(), pts.end(), [&](const CriticalPoint& a, const CriticalPoint& b) {
        if (rank(a.kind) != rank(b.kind)) return rank(a.kind) < rank(b.kind);
        if (a.elevation != b.elevation) return a.elevation > b.elevation;
        return a.alpha[0] < b.alpha[0];
    });
}

std::vector<Vec> simplex_multistart(int K, int n, std::uint64_t seed) {
    // Halton points pushed through the exponential-spacing map, with a
    // seeded Cranley-Patterson rotation; returns reduced coordinates.
    static constexpr std::uint32_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
    std::uint64_t state = seed ^ 0x5bf03635ULL;
    std::vector<double> shift(K);
    for (int k = 0; k < K; ++k)
        shift[k] = static_cast<double>(detail::splitmix64(state) >> 11) * 0x1.0p-53;
    std::vector<Vec> out;
    out.reserve(n);
    for (int idx = 0; idx < n; ++idx) {
        Vec a(K);
        double sum = 0.0;
        for (int k = 0; k < K; ++k) {
            double u = detail::halton(idx, primes[k % 11]) + shift[k];
            u -= std::floor(u);
            u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
            a[k] = -std::log(u);
            sum += a[k];
        }
        a /= sum;
        out.push_back(a.head(K - 1));
    }
    return out;
}

} // namespace

PairReport analyze_pair(const Mixture& m, int i, int j, const TopoOptions& opts) {
    detail_pair::check_pair(m, i, j, false);
    const double wi = m.weight(i);
    const double wj = m.weight(j);
    if (wi + wj == 0.0) throw ZeroWeightPair("both pair components have zero weight");

    PairReport rep;
    rep.i = i;
    rep.j = j;
    rep.pi_pair = opts.equal_pair_weights ? 0.5 : wi / (wi + wj);
    rep.coincident_means = (m.component(i).mean - m.component(j).mean).norm() == 0.0;
    rep.curvature = special_case_analysis(m, i, j);
    rep.bands = modality_bands(m, i, j);

    const Mixture sub = Mixture::make(
        {{m.component(i).mean, m.component(i).cov}, {m.component(j).mean, m.component(j).cov}},
        {rep.pi_pair, 1.0 - rep.pi_pair});

    if (rep.coincident_means || rep.pi_pair == 0.0 || rep.pi_pair == 1.0) {
        // single-Gaussian-like pair: one mode at the dominating mean
        const Vec& mu = rep.coincident_means
                            ? m.component(i).mean
                            : (rep.pi_pair == 1.0 ? m.component(i).mean : m.component(j).mean);
        rep.critical_points.push_back(classify_critical(sub, posterior(sub, mu)));
        rep.modes_at_pi_pair = 1;
        return rep;
    }

    rep.critical_points = critical_points_for_pi(m, i, j, rep.pi_pair);
    rep.modes_at_pi_pair = static_cast<int>(
        std::count_if(rep.critical_points.begin(), rep.critical_points.end(),
                      [](const CriticalPoint& c) { return c.kind == CriticalKind::Mode; }));
    return rep;
}

TopographyReport full_topography(const Mixture& m, const TopoOptions& opts) {
    TopographyReport rep;
    rep.dim = m.dim();
    rep.components = m.component_count();
    const int K = m.component_count();

    if (K == 1) {
        rep.method = TopoMethod::ExactK1;
        rep.critical_points.push_back(
            classify_critical(m, SimplexPoint::vertex(0, 1)));
        rep.mode_count = 1;
        return rep;
    }

    if (K == 2) {
        rep.method = TopoMethod::ExactK2;
        const double w0 = m.weight(0);
        if ((m.component(0).mean - m.component(1).mean).norm() == 0.0) {
            rep.critical_points.push_back(
                classify_critical(m, posterior(m, m.component(0).mean)));
            rep.diagnostics.push_back("coincident means: ridgeline is a single point");
        } else if (w0 == 0.0 || w0 == 1.0) {
            const Vec& mu = w0 == 1.0 ? m.component(0).mean : m.component(1).mean;
            rep.critical_points.push_back(classify_critical(m, posterior(m, mu)));
            rep.diagnostics.push_back("pair degenerates to a single component");
        } else {
            rep.critical_points = critical_points_for_pi(m, 0, 1, w0);
        }
        rep.pair_summaries.push_back(analyze_pair(m, 0, 1, opts));
        rep.mode_count = static_cast<int>(
            std::count_if(rep.critical_points.begin(), rep.critical_points.end(),
                          [](const CriticalPoint& c) { return c.kind == CriticalKind::Mode; }));
        sort_report_points(rep.critical_points);
        return rep;
    }

    ReducedElevation re(m);
    CriticalCollector collect(m, rep.diagnostics);

    if (K == 3) {
        rep.method = TopoMethod::GridK3;
        const std::vector<TriangleNode> grid = simplex_grid_elevation(m, opts.resolution);
        int flagged = 0;
        for (const TriangleNode& node : grid) {
            if (!node.is_local_max) continue;
            ++flagged;
            Vec u(2);
            u << std::min(std::max(node.a1, kSimplexFloor), 1.0 - 2.0 * kSimplexFloor),
                std::min(std::max(node.a2, kSimplexFloor), 1.0 - 2.0 * kSimplexFloor);
            collect.add(re.alpha_of(ascend_log_h(re, u)));
        }
        {
            std::ostringstream os;
            os << flagged << " grid maxima at resolution " << opts.resolution;
            rep.diagnostics.push_back(os.str());
        }
        // saddle hunt: seeded interior multistart plus mode-pair midpoints
        std::vector<Vec> starts = simplex_multistart(3, 256, opts.seed);
        const std::vector<CriticalPoint> modes_so_far = collect.points;
        for (std::size_t a = 0; a < modes_so_far.size(); ++a)
            for (std::size_t b = a + 1; b < modes_so_far.size(); ++b)
                starts.push_back(0.5 * (modes_so_far[a].alpha.coords().head(2) +
                                        modes_so_far[b].alpha.coords().head(2)));
        for (const Vec& s : starts) {
            if (!re.inside(s)) continue;
            const Vec u = newton_on_gradient(re, s);
            if (!re.inside(u)) continue;
            if (re.grad_log_h(u).norm() > 1e-10) continue;
            collect.add(re.alpha_of(u));
        }
    } else {
        rep.method = TopoMethod::MultistartKGE4;
        rep.heuristic = true;
        std::vector<Vec> starts = simplex_multistart(K, opts.n_starts, opts.seed);
        for (int k = 0; k < K; ++k) {
            // near-vertex starts
            Vec a = Vec::Constant(K, 1e-3 / (K - 1));
            a[k] = 1.0 - 1e-3;
            starts.push_back(a.head(K - 1));
        }
        for (const Vec& s : starts) {
            if (!re.inside(s)) continue;
            collect.add(re.alpha_of(ascend_log_h(re, s)));
        }
    }

    rep.critical_points = std::move(collect.points);
    rep.mode_count = static_cast<int>(
        std::count_if(rep.critical_points.begin(), rep.critical_points.end(),
                      [](const CriticalPoint& c) { return c.kind == CriticalKind::Mode; }));
    sort_report_points(rep.critical_points);
    return rep;
}

LinkageGraph linkage_graph(const Mixture& m, std::optional<double> tau,
                           const TopoOptions& opts) {
    const int K = m.component_count();
    if (K < 2) throw BadArgument("linkage requires at least two components");
    if (tau && !(*tau > 0.0 && *tau < 1.0))
        throw BadArgument("tau must lie in (0, 1)");

    LinkageGraph g;
    g.n = K;
    std::vector<int> parent(K);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };

    for (int i = 0; i < K; ++i) {
        for (int j = i + 1; j < K; ++j) {
            const PairReport pr = analyze_pair(m, i, j, opts);
            std::optional<LinkEdge> edge;
            if (pr.modes_at_pi_pair == 1) {
                edge = LinkEdge{i, j, LinkReason::Unimodal, std::nullopt};
            } else if (tau) {
                double min_peak = std::numeric_limits<double>::infinity();
                double min_pass = std::numeric_limits<double>::infinity();
                for (const CriticalPoint& cp : pr.critical_points) {
                    if (cp.kind == CriticalKind::Mode)
                        min_peak = std::min(min_peak, cp.elevation);
                    else
                        min_pass = std::min(min_pass, cp.elevation);
                }
                if (std::isfinite(min_peak) && std::isfinite(min_pass)) {
                    const double ratio = min_pass / min_peak;
                    if (ratio >= *tau)
                        edge = LinkEdge{i, j, LinkReason::HighPass, ratio};
                }
            }
            if (edge) {
                g.edges.push_back(*edge);
                parent[find(i)] = find(j);
            }
        }
    }

    std::vector<std::vector<int>> blocks(K);
    for (int k = 0; k < K; ++k) blocks[find(k)].push_back(k);
    for (auto& b : blocks)
        if (!b.empty()) g.supercomponents.push_back(std::move(b));
    std::sort(g.supercomponents.begin(), g.supercomponents.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return g;
}

std::vector<std::vector<int>> supercomponents(const Mixture& m, const TopoOptions& opts) {
    return linkage_graph(m, std::nullopt, opts).supercomponents;
}

} // namespace mixtopo
