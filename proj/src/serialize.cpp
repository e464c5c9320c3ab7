#include "mixtopo/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mixtopo {

RawModel raw_model_from_json(const json& j) {
    try {
        RawModel raw;
        if (!j.is_object()) throw ParseError("model root must be a JSON object");
        raw.dim = j.at("dim").get<int>();
        raw.weights = j.at("weights").get<std::vector<double>>();
        for (const json& comp : j.at("components")) {
            Vec mean(raw.dim > 0 ? raw.dim : 0);
            const auto mean_arr = comp.at("mean").get<std::vector<double>>();
            mean.resize(static_cast<int>(mean_arr.size()));
            for (std::size_t k = 0; k < mean_arr.size(); ++k)
                mean[static_cast<int>(k)] = mean_arr[k];
            const auto rows = comp.at("cov").get<std::vector<std::vector<double>>>();
            Mat cov(static_cast<int>(rows.size()),
                    rows.empty() ? 0 : static_cast<int>(rows.front().size()));
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r].size() != rows.front().size())
                    throw ParseError("covariance rows have inconsistent lengths");
                for (std::size_t c = 0; c < rows[r].size(); ++c)
                    cov(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
            }
            raw.components.emplace_back(std::move(mean), std::move(cov));
        }
        return raw;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model: ") + e.what());
    }
}

json to_json(const Mixture& m) {
    json j;
    j["dim"] = m.dim();
    j["weights"] = std::vector<double>(m.weights().data(), m.weights().data() + m.component_count());
    json comps = json::array();
    for (int c = 0; c < m.component_count(); ++c) {
        const Component& comp = m.component(c);
        json jc;
        jc["mean"] = std::vector<double>(comp.mean.data(), comp.mean.data() + comp.mean.size());
        json rows = json::array();
        for (int r = 0; r < comp.cov.rows(); ++r) {
            json row = json::array();
            for (int cc = 0; cc < comp.cov.cols(); ++cc) row.push_back(comp.cov(r, cc));
            rows.push_back(std::move(row));
        }
        jc["cov"] = std::move(rows);
        comps.push_back(std::move(jc));
    }
    j["components"] = std::move(comps);
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw IoError("failed reading " + path);
    return os.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

Mixture load_model(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return validate_mixture(raw_model_from_json(j));
}

void save_model(const Mixture& m, const std::string& path) {
    atomic_write(path, to_json(m).dump(2) + "\n");
}

json to_json(const CriticalPoint& cp) {
    json j;
    j["alpha"] = std::vector<double>(cp.alpha.coords().data(),
                                     cp.alpha.coords().data() + cp.alpha.size());
    j["x"] = std::vector<double>(cp.x.data(), cp.x.data() + cp.x.size());
    j["elevation"] = cp.elevation;
    j["neg_eigs"] = cp.neg_eigs;
    j["kind"] = to_string(cp.kind);
    return j;
}

json to_json(const ModalityBands& bands, int i, int j) {
    json out;
    out["pair"] = {i + 1, j + 1};
    out["breakpoints"] = bands.breakpoints;
    json arr = json::array();
    for (const Band& b : bands.bands)
        arr.push_back({{"lo", b.lo}, {"hi", b.hi}, {"modes", b.modes}});
    out["bands"] = std::move(arr);
    out["zero_alphas"] = bands.zero_alphas;
    return out;
}

json to_json(const SpecialCaseReport& rep) {
    json j;
    j["case"] = to_string(rep.cov_case);
    if (rep.sigma2) j["sigma2"] = *rep.sigma2;
    j["mahalanobis2"] = rep.mahalanobis2;
    j["unimodal_for_all_pi"] = rep.unimodal_for_all_pi;
    j["root_alphas"] = rep.root_alphas;
    if (rep.pi_interval) j["pi_interval"] = {rep.pi_interval->first, rep.pi_interval->second};
    if (rep.rf_bound) j["rf_bound"] = *rep.rf_bound;
    return j;
}

json to_json(const PairReport& pr) {
    json j;
    j["pair"] = {pr.i + 1, pr.j + 1};
    j["pi_pair"] = pr.pi_pair;
    j["coincident_means"] = pr.coincident_means;
    j["modes_at_pi_pair"] = pr.modes_at_pi_pair;
    j["bands"] = to_json(pr.bands, pr.i, pr.j);
    json cps = json::array();
    for (const CriticalPoint& cp : pr.critical_points) cps.push_back(to_json(cp));
    j["critical_points"] = std::move(cps);
    j["curvature"] = to_json(pr.curvature);
    return j;
}

json to_json(const TopographyReport& rep) {
    json j;
    j["dim"] = rep.dim;
    j["components"] = rep.components;
    j["method"] = to_string(rep.method);
    j["heuristic"] = rep.heuristic;
    j["mode_count"] = rep.mode_count;
    json cps = json::array();
    for (const CriticalPoint& cp : rep.critical_points) cps.push_back(to_json(cp));
    j["critical_points"] = std::move(cps);
    json pairs = json::array();
    for (const PairReport& pr : rep.pair_summaries) pairs.push_back(to_json(pr));
    j["pair_summaries"] = std::move(pairs);
    j["diagnostics"] = rep.diagnostics;
    return j;
}

json to_json(const LinkageGraph& g) {
    json j;
    j["nodes"] = g.n;
    json edges = json::array();
    for (const LinkEdge& e : g.edges) {
        json je;
        je["i"] = e.i + 1;
        je["j"] = e.j + 1;
        je["reason"] = to_string(e.reason);
        if (e.saddle_ratio) je["saddle_ratio"] = *e.saddle_ratio;
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    json sc = json::array();
    for (const auto& block : g.supercomponents) {
        json jb = json::array();
        for (int v : block) jb.push_back(v + 1);
        sc.push_back(std::move(jb));
    }
    j["supercomponents"] = std::move(sc);
    return j;
}

json to_json(const Diagnostics& d) {
    json j;
    json checks = json::array();
    for (const CheckResult& c : d.checks) {
        json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        jc["measured"] = c.measured;
        if (!c.detail.empty()) jc["detail"] = c.detail;
        checks.push_back(std::move(jc));
    }
    j["checks"] = std::move(checks);
    j["all_pass"] = d.all_pass;
    return j;
}

std::string to_dot(const LinkageGraph& g) {
    std::ostringstream os;
    os << "graph linkage {\n";
    for (int v = 0; v < g.n; ++v) os << "  " << v + 1 << ";\n";
    for (const LinkEdge& e : g.edges) os << "  " << e.i + 1 << " -- " << e.j + 1 << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace mixtopo
