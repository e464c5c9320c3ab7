#include "mixtopo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mixtopo {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMargin = 56;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string color_for(double t) {
    // dark blue -> teal -> yellow
    t = std::clamp(t, 0.0, 1.0);
    const auto lerp = [](double a, double b, double u) { return a + (b - a) * u; };
    double r, g, b;
    if (t < 0.5) {
        const double u = t / 0.5;
        r = lerp(48, 38, u); g = lerp(18, 130, u); b = lerp(98, 142, u);
    } else {
        const double u = (t - 0.5) / 0.5;
        r = lerp(38, 253, u); g = lerp(130, 231, u); b = lerp(142, 37, u);
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(r),
                  static_cast<int>(g), static_cast<int>(b));
    return buf;
}

} // namespace

std::string svg_line_plot(const LineSeries& series, const std::string& x_label,
                          const std::string& y_label, std::optional<double> hline) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& [x, y] : series.points) {
        x_lo = std::min(x_lo, x); x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y); y_hi = std::max(y_hi, y);
    }
    if (!(x_hi > x_lo)) { x_lo -= 0.5; x_hi += 0.5; }
    if (!(y_hi > y_lo)) { y_lo -= 0.5; y_hi += 0.5; }
    const double pad_y = 0.05 * (y_hi - y_lo);
    y_lo -= pad_y; y_hi += pad_y;

    const auto px = [&](double x) {
        return kMargin + (x - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin);
    };
    const auto py = [&](double y) {
        return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
       << "\" height=\"" << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
       << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = x_lo + (x_hi - x_lo) * t / 4.0;
        const double yv = y_lo + (y_hi - y_lo) * t / 4.0;
        os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << kHeight - kMargin + 18
           << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        os << "<text x=\"" << kMargin - 6 << "\" y=\"" << fmt(py(yv) + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
       << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << kHeight / 2
       << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << kHeight / 2 << ")\">" << y_label << "</text>\n";
    if (hline && *hline >= y_lo && *hline <= y_hi)
        os << "<line x1=\"" << kMargin << "\" x2=\"" << kWidth - kMargin << "\" y1=\""
           << fmt(py(*hline)) << "\" y2=\"" << fmt(py(*hline))
           << "\" stroke=\"#b22\" stroke-dasharray=\"6 4\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series.points) os << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
    os << "\"/>\n</svg>\n";
    return os.str();
}

std::string svg_triangle_plot(const std::vector<TriangleNode>& grid) {
    double h_lo = std::numeric_limits<double>::infinity(), h_hi = -h_lo;
    for (const TriangleNode& n : grid) {
        h_lo = std::min(h_lo, n.h);
        h_hi = std::max(h_hi, n.h);
    }
    // infer the lattice resolution from the node count: n = (r+1)(r+2)/2
    const std::size_t count = grid.size();
    int res = static_cast<int>(std::lround((std::sqrt(8.0 * count + 1.0) - 3.0) / 2.0));
    res = std::max(res, 1);
    const int stride = std::max(1, res / 120);

    const int size = 640;
    const int margin = 40;
    const double side = size - 2.0 * margin;
    const auto px = [&](double tx) { return margin + tx * side; };
    const auto py = [&](double ty) { return size - margin - ty * side; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
       << static_cast<int>(margin + side * std::sqrt(3.0) / 2.0 + margin) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const double denom = h_hi > h_lo ? h_hi - h_lo : 1.0;
    const double dot = std::max(1.5, side / res * stride * 0.62);
    for (const TriangleNode& n : grid) {
        const long i = std::lround(n.a1 * res);
        const long j = std::lround(n.a2 * res);
        if (i % stride != 0 || j % stride != 0) continue;
        os << "<circle cx=\"" << fmt(px(n.tx)) << "\" cy=\"" << fmt(py(n.ty))
           << "\" r=\"" << fmt(dot) << "\" fill=\"" << color_for((n.h - h_lo) / denom)
           << "\"/>\n";
    }
    for (const TriangleNode& n : grid)
        if (n.is_local_max)
            os << "<circle cx=\"" << fmt(px(n.tx)) << "\" cy=\"" << fmt(py(n.ty))
               << "\" r=\"5\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << fmt(px(0.0) - 10) << "\" y=\"" << fmt(py(0.0) + 16)
       << "\" font-size=\"13\">a1</text>\n";
    os << "<text x=\"" << fmt(px(1.0) + 2) << "\" y=\"" << fmt(py(0.0) + 16)
       << "\" font-size=\"13\">a2</text>\n";
    os << "<text x=\"" << fmt(px(0.5)) << "\" y=\"" << fmt(py(std::sqrt(3.0) / 2.0) - 8)
       << "\" font-size=\"13\">a3</text>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace mixtopo
