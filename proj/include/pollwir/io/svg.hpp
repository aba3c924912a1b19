#pragma once

/// Precision-recall curve export as a standalone SVG line plot over the
/// unit square.

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "pollwir/errors.hpp"
#include "pollwir/eval.hpp"

namespace pollwir::io {

inline void write_pr_svg(const std::string& path, const std::vector<PRPoint>& pr,
                         const std::string& title = "precision-recall") {
    constexpr int kSize = 440;
    constexpr int kMargin = 40;
    constexpr int kPlot = kSize - 2 * kMargin;
    auto px = [&](double recall) { return kMargin + recall * kPlot; };
    auto py = [&](double precision) { return kSize - kMargin - precision * kPlot; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
        << kSize << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n";
    out << "  <rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kPlot
        << "\" height=\"" << kPlot << "\" fill=\"white\" stroke=\"black\"/>\n";
    // Grid lines every 0.2.
    for (int i = 1; i < 5; ++i) {
        const double t = i / 5.0;
        out << "  <line x1=\"" << px(t) << "\" y1=\"" << py(0) << "\" x2=\"" << px(t)
            << "\" y2=\"" << py(1) << "\" stroke=\"#dddddd\"/>\n";
        out << "  <line x1=\"" << px(0) << "\" y1=\"" << py(t) << "\" x2=\"" << px(1)
            << "\" y2=\"" << py(t) << "\" stroke=\"#dddddd\"/>\n";
    }
    out << "  <text x=\"" << kSize / 2 << "\" y=\"" << kSize - 8
        << "\" text-anchor=\"middle\" font-size=\"13\">recall</text>\n";
    out << "  <text x=\"12\" y=\"" << kSize / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 12 "
        << kSize / 2 << ")\">precision</text>\n";
    out << "  <text x=\"" << kSize / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";

    std::string points;
    for (const PRPoint& p : pr) {
        if (std::isnan(p.recall)) continue;
        points += std::to_string(px(p.recall)) + "," + std::to_string(py(p.precision)) + " ";
    }
    if (!points.empty()) {
        out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\""
            << points << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace pollwir::io
