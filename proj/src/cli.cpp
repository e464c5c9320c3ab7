#include "mixtopo/cli.hpp"

#include <CLI11.hpp>

#include "mixtopo/csv.hpp"
#include "mixtopo/detail/numerics.hpp"
#include "mixtopo/em.hpp"
#include "mixtopo/oracle.hpp"
#include "mixtopo/serialize.hpp"
#include "mixtopo/svg.hpp"
#include "mixtopo/topo.hpp"

namespace mixtopo::cli {

namespace {

struct Args {
    std::string model_path;
    std::string data_path;
    std::vector<int> pair{1, 2}; // 1-based
    std::string out_path, csv_path, svg_path, dot_path, bands_path, report_path;
    int samples = 4096;
    int resolution = 400;
    int k = 1;
    int n_seeds = 50;
    int points_per_dim = 0;
    std::uint64_t seed = 0;
    double pi_level = -1.0;
    double tau = -1.0;
    int max_iter = 1000;
    double tol = 1e-8;
    std::string x_axis = "alpha";
    bool has_header = false;
    bool equal_pair_weights = false;
};

void check_pair_range(const Mixture& m, const std::vector<int>& pair) {
    if (pair.size() != 2) throw BadArgument("--pair needs exactly two indices");
    for (int p : pair)
        if (p < 1 || p > m.component_count())
            throw BadArgument("pair index " + std::to_string(p) + " outside 1.." +
                              std::to_string(m.component_count()));
    if (pair[0] == pair[1]) throw BadArgument("pair indices must be distinct");
}

TopoOptions topo_options(const Args& a) {
    TopoOptions o;
    o.resolution = a.resolution;
    o.seed = a.seed;
    o.equal_pair_weights = a.equal_pair_weights;
    return o;
}

int run_validate(const Args& a, std::ostream& out) {
    const Mixture m = load_model(a.model_path);
    out << "valid model: " << m.component_count() << " components in " << m.dim()
        << " dimensions\n";
    return 0;
}

int run_analyze(const Args& a, std::ostream& out) {
    const Mixture m = load_model(a.model_path);
    const TopographyReport rep = full_topography(m, topo_options(a));
    const Diagnostics diag = verify_report(m, rep);
    int saddles = 0, minima = 0;
    for (const CriticalPoint& cp : rep.critical_points) {
        if (cp.kind == CriticalKind::Saddle) ++saddles;
        if (cp.kind == CriticalKind::LocalMin) ++minima;
    }
    json j = to_json(rep);
    j["verification"] = to_json(diag);
    if (!a.out_path.empty()) atomic_write(a.out_path, j.dump(2) + "\n");
    out << rep.mode_count << (rep.mode_count == 1 ? " mode, " : " modes, ") << saddles
        << (saddles == 1 ? " saddle" : " saddles");
    if (minima > 0) out << ", " << minima << " local minima";
    out << " (" << to_string(rep.method) << (rep.heuristic ? ", heuristic" : "")
        << "); verification " << (diag.all_pass ? "passed" : "FAILED");
    if (!a.out_path.empty()) out << "; report -> " << a.out_path;
    out << "\n";
    return diag.all_pass ? 0 : 3;
}

int run_elevation(const Args& a, std::ostream& out) {
    const Mixture m = load_model(a.model_path);
    const auto profile = elevation_profile(m, a.samples);
    if (!a.csv_path.empty()) atomic_write(a.csv_path, profile_csv(profile));
    if (!a.svg_path.empty()) {
        LineSeries s;
        for (const ProfileSample& p : profile)
            s.points.emplace_back(a.x_axis == "arclength" ? p.arclength : p.alpha, p.h);
        atomic_write(a.svg_path,
                     svg_line_plot(s, a.x_axis == "arclength" ? "arclength" : "alpha",
                                   "elevation"));
    }
    int maxima = 0;
    for (std::size_t k = 1; k + 1 < profile.size(); ++k)
        if (profile[k].h > profile[k - 1].h && profile[k].h > profile[k + 1].h) ++maxima;
    out << "elevation profile: " << profile.size() << " samples, " << maxima
        << " local maxima, total arclength " << format_sig12(profile.back().arclength)
        << "\n";
    return 0;
}

int run_pi(const Args& a, std::ostream& out) {
    const Mixture m = load_model(a.model_path);
    check_pair_range(m, a.pair);
    const int i = a.pair[0] - 1, j = a.pair[1] - 1;
    const ModalityBands bands = modality_bands(m, i, j);
    if (!a.csv_path.empty())
        atomic_write(a.csv_path, pi_curve_csv(pi_curve(m, i, j, a.samples)));
    if (!a.bands_path.empty())
        atomic_write(a.bands_path, to_json(bands, i, j).dump(2) + "\n");
    if (!a.svg_path.empty()) {
        LineSeries s;
        for (const auto& [alpha, pi] : pi_curve(m, i, j, a.samples).samples)
            s.points.emplace_back(alpha, pi);
        const double wi = m.weight(i), wj = m.weight(j);
        std::optional<double> level;
        if (wi + wj > 0.0) level = wi / (wi + wj);
        atomic_write(a.svg_path, svg_line_plot(s, "alpha", "pi", level));
    }
    out << "pair (" << a.pair[0] << "," << a.pair[1] << "): " << bands.bands.size()
        << " bands;";
    for (const Band& b : bands.bands)
        out << " [" << format_sig12(b.lo) << "," << format_sig12(b.hi) << "]->"
            << b.modes;
    out << "\n";
    return 0;
}

int run_curvature(const Args& a, std::ostream& out) {
    const Mixture m = load_model(a.model_path);
    check_pair_range(m, a.pair);
    const int i = a.pair[0] - 1, j = a.pair[1] - 1;
    const SpecialCaseReport rep = special_case_analysis(m, i, j);
    if (!a.csv_path.empty()) {
        std::vector<CurvatureEval> evals;
        for (double alpha : detail::composite_grid(a.samples))
            evals.push_back(curvature_eval(m, i, j, alpha));
        atomic_write(a.csv_path, curvature_csv(evals));
    }
    if (!a.report_path.empty()) atomic_write(a.report_path, to_json(rep).dump(2) + "\n");
    out << "pair (" << a.pair[0] << "," << a.pair[1] << "): " << to_string(rep.cov_case)
        << ", separation " << format_sig12(rep.mahalanobis2)
        << (rep.unimodal_for_all_pi ? ", unimodal for every pi" : ", multimodal for some pi")
        << "\n";
    return 0;
}

int run_contour(const Args& a, std::ostream& out) {
    const Mixture m = load_model(a.model_path);
    const auto grid = simplex_grid_elevation(m, a.resolution);
    if (!a.csv_path.empty()) atomic_write(a.csv_path, triangle_csv(grid));
    if (!a.svg_path.empty()) atomic_write(a.svg_path, svg_triangle_plot(grid));
    int flagged = 0;
    for (const TriangleNode& n : grid)
        if (n.is_local_max) ++flagged;
    out << "triangle grid at resolution " << a.resolution << ": " << grid.size()
        << " nodes, " << flagged << " local maxima\n";
    return 0;
}

int run_linkage(const Args& a, std::ostream& out) {
    const Mixture m = load_model(a.model_path);
    std::optional<double> tau;
    if (a.tau >= 0.0) tau = a.tau;
    const LinkageGraph g = linkage_graph(m, tau, topo_options(a));
    if (!a.out_path.empty()) atomic_write(a.out_path, to_json(g).dump(2) + "\n");
    if (!a.dot_path.empty()) atomic_write(a.dot_path, to_dot(g));
    out << g.edges.size() << (g.edges.size() == 1 ? " edge, " : " edges, ")
        << g.supercomponents.size() << " supercomponents:";
    for (const auto& block : g.supercomponents) {
        out << " {";
        for (std::size_t k = 0; k < block.size(); ++k)
            out << (k ? "," : "") << block[k] + 1;
        out << "}";
    }
    out << "\n";
    return 0;
}

int run_fit(const Args& a, std::ostream& out) {
    const DataMatrix data = load_csv(a.data_path, a.has_header);
    EmOptions opts;
    opts.n_seeds = a.n_seeds;
    opts.seed = a.seed;
    opts.max_iter = a.max_iter;
    opts.tol = a.tol;
    const Mixture m = fit_em(data, a.k, opts);
    if (!a.out_path.empty()) save_model(m, a.out_path);
    double ll = 0.0;
    for (int r = 0; r < data.rows(); ++r)
        ll += log_density(m, data.values.row(r).transpose());
    out << "fitted " << a.k << " components to " << data.rows() << " rows; log-likelihood "
        << format_sig12(ll);
    if (!a.out_path.empty()) out << "; model -> " << a.out_path;
    out << "\n";
    return 0;
}

int run_oracle(const Args& a, std::ostream& out) {
    const Mixture m = load_model(a.model_path);
    const TopographyReport rep = full_topography(m, topo_options(a));
    const Diagnostics diag = verify_report(m, rep);
    if (!a.out_path.empty()) atomic_write(a.out_path, to_json(diag).dump(2) + "\n");
    for (const CheckResult& c : diag.checks)
        out << (c.pass ? "pass" : "FAIL") << "  " << c.name << " (worst "
            << format_sig12(c.measured) << (c.detail.empty() ? "" : "; " + c.detail)
            << ")\n";
    out << (diag.all_pass ? "all checks passed" : "verification FAILED") << "\n";
    return diag.all_pass ? 0 : 3;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Topography analysis of multivariate Gaussian mixtures"};
    app.require_subcommand(1);
    Args a;

    const auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("model", a.model_path, "model JSON file")->required();
    };
    const auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", a.seed, "random seed (default 0)");
    };

    CLI::App* validate = app.add_subcommand("validate", "validate a model file");
    add_model(validate);

    CLI::App* analyze = app.add_subcommand(
        "analyze", "full critical-point analysis plus independent verification");
    add_model(analyze);
    analyze->add_option("--out", a.out_path, "write the report JSON here");
    analyze->add_option("--resolution", a.resolution,
                        "triangle grid resolution for K=3 (default 400)");
    analyze->add_flag("--equal-pair-weights", a.equal_pair_weights,
                      "analyze pairs at pi = 0.5 instead of the fitted weights");
    add_seed(analyze);

    CLI::App* elev = app.add_subcommand("elevation", "K=2 ridgeline elevation profile");
    add_model(elev);
    elev->add_option("--samples", a.samples, "uniform sample count (default 4096)");
    elev->add_option("--x", a.x_axis, "SVG x axis: alpha or arclength (default alpha)")
        ->check(CLI::IsMember({"alpha", "arclength"}));
    elev->add_option("--csv", a.csv_path, "write the profile CSV here");
    elev->add_option("--svg", a.svg_path, "write an SVG rendering here");

    CLI::App* pi = app.add_subcommand("pi", "pair pi-curve and mode-count bands");
    add_model(pi);
    pi->add_option("--pair", a.pair, "1-based component pair (default 1 2)")
        ->expected(2);
    pi->add_option("--samples", a.samples, "uniform sample count (default 4096)");
    pi->add_option("--csv", a.csv_path, "write the pi-curve CSV here");
    pi->add_option("--bands", a.bands_path, "write the bands JSON here");
    pi->add_option("--svg", a.svg_path, "write an SVG rendering here");

    CLI::App* curv = app.add_subcommand("curvature", "pair curvature and closed-form report");
    add_model(curv);
    curv->add_option("--pair", a.pair, "1-based component pair (default 1 2)")
        ->expected(2);
    curv->add_option("--samples", a.samples, "uniform sample count (default 4096)");
    curv->add_option("--csv", a.csv_path, "write the curvature CSV here");
    curv->add_option("--report", a.report_path, "write the special-case report JSON here");

    CLI::App* contour = app.add_subcommand("contour", "K=3 triangle elevation grid");
    add_model(contour);
    contour->add_option("--resolution", a.resolution, "grid resolution (default 400)");
    contour->add_option("--csv", a.csv_path, "write the grid CSV here");
    contour->add_option("--svg", a.svg_path, "write an SVG rendering here");

    CLI::App* linkage = app.add_subcommand("linkage", "pairwise linkage graph");
    add_model(linkage);
    linkage->add_option("--tau", a.tau,
                        "also link multimodal pairs with saddle/peak ratio >= tau");
    linkage->add_option("--json", a.out_path, "write the graph JSON here");
    linkage->add_option("--dot", a.dot_path, "write DOT text here");
    linkage->add_flag("--equal-pair-weights", a.equal_pair_weights,
                      "analyze pairs at pi = 0.5 instead of the fitted weights");
    add_seed(linkage);

    CLI::App* fit = app.add_subcommand("fit", "fit a mixture by EM");
    fit->add_option("data", a.data_path, "numeric CSV file")->required();
    fit->add_option("--k", a.k, "component count")->required();
    fit->add_flag("--header", a.has_header, "first CSV row is a header");
    fit->add_option("--seeds", a.n_seeds, "number of EM restarts (default 50)");
    fit->add_option("--max-iter", a.max_iter, "EM iteration cap (default 1000)");
    fit->add_option("--tol", a.tol, "relative log-likelihood tolerance (default 1e-8)");
    fit->add_option("--out", a.out_path, "write the fitted model JSON here");
    add_seed(fit);

    CLI::App* oracle = app.add_subcommand(
        "oracle", "brute-force cross-check of the full analysis");
    add_model(oracle);
    oracle->add_option("--out", a.out_path, "write the diagnostics JSON here");
    oracle->add_option("--resolution", a.resolution,
                       "triangle grid resolution for K=3 (default 400)");
    add_seed(oracle);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << json{{"error", {{"type", "UsageError"}, {"message", e.what()}}}}.dump()
            << "\n";
        return 1;
    }

    try {
        if (app.got_subcommand(validate)) return run_validate(a, out);
        if (app.got_subcommand(analyze)) return run_analyze(a, out);
        if (app.got_subcommand(elev)) return run_elevation(a, out);
        if (app.got_subcommand(pi)) return run_pi(a, out);
        if (app.got_subcommand(curv)) return run_curvature(a, out);
        if (app.got_subcommand(contour)) return run_contour(a, out);
        if (app.got_subcommand(linkage)) return run_linkage(a, out);
        if (app.got_subcommand(fit)) return run_fit(a, out);
        if (app.got_subcommand(oracle)) return run_oracle(a, out);
    } catch (const Error& e) {
        err << json{{"error", {{"type", e.kind()}, {"message", e.what()}}}}.dump() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << json{{"error", {{"type", "Internal"}, {"message", e.what()}}}}.dump()
            << "\n";
        return 3;
    }
    return 1;
}

} // namespace mixtopo::cli
