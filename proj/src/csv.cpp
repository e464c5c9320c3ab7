#include "mixtopo/csv.hpp"

#include <cstdio>
#include <sstream>

namespace mixtopo {

std::string format_sig12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string profile_csv(const std::vector<ProfileSample>& profile) {
    std::ostringstream os;
    const int d = profile.empty() ? 0 : static_cast<int>(profile.front().x.size());
    os << "alpha,arclength";
    for (int k = 1; k <= d; ++k) os << ",x_" << k;
    os << ",h\n";
    for (const ProfileSample& s : profile) {
        os << format_sig12(s.alpha) << ',' << format_sig12(s.arclength);
        for (int k = 0; k < d; ++k) os << ',' << format_sig12(s.x[k]);
        os << ',' << format_sig12(s.h) << '\n';
    }
    return os.str();
}

std::string triangle_csv(const std::vector<TriangleNode>& grid) {
    std::ostringstream os;
    os << "a1,a2,a3,tx,ty,h,is_local_max\n";
    for (const TriangleNode& n : grid) {
        os << format_sig12(n.a1) << ',' << format_sig12(n.a2) << ',' << format_sig12(n.a3)
           << ',' << format_sig12(n.tx) << ',' << format_sig12(n.ty) << ','
           << format_sig12(n.h) << ',' << (n.is_local_max ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string pi_curve_csv(const PiCurve& curve) {
    std::ostringstream os;
    os << "alpha,pi\n";
    for (const auto& [alpha, pi] : curve.samples)
        os << format_sig12(alpha) << ',' << format_sig12(pi) << '\n';
    return os.str();
}

std::string curvature_csv(const std::vector<CurvatureEval>& evals) {
    std::ostringstream os;
    os << "alpha,p,q,kappa\n";
    for (const CurvatureEval& e : evals)
        os << format_sig12(e.alpha) << ',' << format_sig12(e.p) << ','
           << format_sig12(e.q) << ',' << format_sig12(e.kappa) << '\n';
    return os.str();
}

} // namespace mixtopo
