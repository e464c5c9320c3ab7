#pragma once

#include <string>
#include <vector>

#include "mixtopo/piplot.hpp"
#include "mixtopo/ridgeline.hpp"

namespace mixtopo {

/// Shortest-of-12-significant-digits formatting used by every CSV writer.
std::string format_sig12(double v);

/// Header: alpha,arclength,x_1..x_D,h. Comma separated, LF line endings.
std::string profile_csv(const std::vector<ProfileSample>& profile);

/// Header: a1,a2,a3,tx,ty,h,is_local_max (0/1).
std::string triangle_csv(const std::vector<TriangleNode>& grid);

/// Header: alpha,pi.
std::string pi_curve_csv(const PiCurve& curve);

/// Header: alpha,p,q,kappa.
std::string curvature_csv(const std::vector<CurvatureEval>& evals);

} // namespace mixtopo
