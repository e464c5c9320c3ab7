#include "mixtopo/em.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "mixtopo/detail/numerics.hpp"

namespace mixtopo {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

} // namespace

DataMatrix load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    DataMatrix data;
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (has_header && data.names.empty() && rows.empty()) {
            for (const std::string& c : cells) data.names.push_back(trim(c));
            width = cells.size();
            continue;
        }
        if (width == 0) width = cells.size();
        if (cells.size() != width) {
            std::ostringstream os;
            os << path << ": line " << line_no << " has " << cells.size()
               << " fields, expected " << width;
            throw ParseError(os.str());
        }
        std::vector<double> row;
        row.reserve(width);
        for (const std::string& cell : cells) {
            const std::string t = trim(cell);
            char* end = nullptr;
            const double v = std::strtod(t.c_str(), &end);
            if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
                std::ostringstream os;
                os << path << ": line " << line_no << ": not a finite number: '" << t << "'";
                throw ParseError(os.str());
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");
    data.values.resize(static_cast<int>(rows.size()), static_cast<int>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c)
            data.values(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    return data;
}

namespace {

// k-means++ style seeding: first center uniform, later centers drawn with
// probability proportional to squared distance from the nearest center.
std::vector<int> kmeanspp_centers(const Mat& x, int k, std::mt19937_64& rng) {
    const int n = static_cast<int>(x.rows());
    std::vector<int> centers;
    std::uniform_int_distribution<int> uni(0, n - 1);
    centers.push_back(uni(rng));
    Vec d2 = (x.rowwise() - x.row(centers[0])).rowwise().squaredNorm();
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    while (static_cast<int>(centers.size()) < k) {
        const double total = d2.sum();
        int pick = 0;
        if (total > 0.0) {
            double r = u01(rng) * total;
            for (pick = 0; pick < n - 1; ++pick) {
                r -= d2[pick];
                if (r <= 0.0) break;
            }
        } else {
            pick = uni(rng);
        }
        centers.push_back(pick);
        d2 = d2.cwiseMin((x.rowwise() - x.row(pick)).rowwise().squaredNorm());
    }
    return centers;
}

Mat regularized(const Mat& cov) {
    const int d = static_cast<int>(cov.rows());
    const double ridge = 1e-6 * cov.trace() / d;
    return cov + ridge * Mat::Identity(d, d);
}

} // namespace

EmRun run_em_single(const DataMatrix& data, int k, std::uint64_t seed,
                    const EmOptions& opts) {
    const int n = data.rows();
    const int d = data.cols();
    const Mat& x = data.values;
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);

    std::vector<Vec> means;
    for (int c : kmeanspp_centers(x, k, rng)) means.push_back(x.row(c).transpose());

    const Vec grand_mean = x.colwise().mean().transpose();
    Mat grand_cov = Mat::Zero(d, d);
    for (int r = 0; r < n; ++r) {
        const Vec diff = x.row(r).transpose() - grand_mean;
        grand_cov.noalias() += diff * diff.transpose();
    }
    grand_cov /= n;
    grand_cov = regularized(grand_cov);

    std::vector<Mat> covs(k, grand_cov);
    Vec weights = Vec::Constant(k, 1.0 / k);

    // component caches rebuilt per iteration
    struct Cache {
        Mat chol;
        double log_norm;
    };
    constexpr double kLog2Pi = 1.8378770664093454836;
    const auto build_cache = [&](const Mat& cov) -> Cache {
        Eigen::LLT<Mat> llt(cov);
        if (llt.info() != Eigen::Success)
            throw DegenerateFit("component covariance failed Cholesky even after regularization");
        Cache c;
        c.chol = llt.matrixL();
        const double log_det = 2.0 * c.chol.diagonal().array().log().sum();
        c.log_norm = -0.5 * d * kLog2Pi - 0.5 * log_det;
        return c;
    };

    std::vector<double> ll_trace;
    Mat log_resp(n, k);
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iter; ++it) {
        // E step
        std::vector<Cache> caches;
        caches.reserve(k);
        for (int c = 0; c < k; ++c) caches.push_back(build_cache(covs[c]));
        double ll = 0.0;
        for (int r = 0; r < n; ++r) {
            double mx = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const Vec diff = x.row(r).transpose() - means[c];
                const Vec y = caches[c].chol.triangularView<Eigen::Lower>().solve(diff);
                const double lp = (weights[c] > 0.0 ? std::log(weights[c])
                                                    : -std::numeric_limits<double>::infinity()) +
                                  caches[c].log_norm - 0.5 * y.squaredNorm();
                log_resp(r, c) = lp;
                mx = std::max(mx, lp);
            }
            double s = 0.0;
            for (int c = 0; c < k; ++c) s += std::exp(log_resp(r, c) - mx);
            const double lse = mx + std::log(s);
            ll += lse;
            for (int c = 0; c < k; ++c) log_resp(r, c) -= lse;
        }
        ll_trace.push_back(ll);
        if (std::abs(ll - prev_ll) <= opts.tol * (1.0 + std::abs(ll))) {
            prev_ll = ll;
            break;
        }
        prev_ll = ll;

        // M step
        for (int c = 0; c < k; ++c) {
            double nk = 0.0;
            Vec mean = Vec::Zero(d);
            for (int r = 0; r < n; ++r) {
                const double resp = std::exp(log_resp(r, c));
                nk += resp;
                mean.noalias() += resp * x.row(r).transpose();
            }
            if (nk <= 0.0)
                throw DegenerateFit("component lost all responsibility during fitting");
            mean /= nk;
            Mat cov = Mat::Zero(d, d);
            for (int r = 0; r < n; ++r) {
                const double resp = std::exp(log_resp(r, c));
                const Vec diff = x.row(r).transpose() - mean;
                cov.noalias() += resp * (diff * diff.transpose());
            }
            cov /= nk;
            weights[c] = nk / n;
            means[c] = mean;
            covs[c] = regularized(cov);
        }
    }

    std::vector<std::pair<Vec, Mat>> comps;
    std::vector<double> w;
    for (int c = 0; c < k; ++c) {
        comps.emplace_back(means[c], covs[c]);
        w.push_back(weights[c]);
    }
    return EmRun{Mixture::make(comps, w), prev_ll, std::move(ll_trace), seed};
}

Mixture fit_em(const DataMatrix& data, int k, const EmOptions& opts) {
    if (k < 1) throw BadArgument("component count must be at least 1");
    if (opts.n_seeds < 1 || opts.max_iter < 1 || !(opts.tol > 0.0))
        throw BadArgument("n_seeds and max_iter must be positive, tol > 0");
    const int need = k * (data.cols() + 1);
    if (data.rows() < need) {
        std::ostringstream os;
        os << "need at least " << need << " rows to fit " << k
           << " full-covariance components in " << data.cols() << " dimensions, got "
           << data.rows();
        throw TooFewRows(os.str());
    }

    std::optional<EmRun> best;
    std::string last_error;
    for (int s = 0; s < opts.n_seeds; ++s) {
        try {
            EmRun run = run_em_single(data, k, opts.seed + static_cast<std::uint64_t>(s), opts);
            if (!best || run.log_likelihood > best->log_likelihood) best = std::move(run);
        } catch (const DegenerateFit& e) {
            last_error = e.what();
        }
    }
    if (!best) throw DegenerateFit("all seeds failed: " + last_error);
    return best->mixture;
}

} // namespace mixtopo
