#pragma once

// Static SVG of H(t) against the Riccati comparison curve, with a T* marker.
// Output depends only on the inputs, so identical inputs give identical bytes.

#include "blowup/diagnostics.hpp"
#include "blowup/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace blowup {

struct PlotOptions {
    bool log_y = false;
    int width = 800;
    int height = 500;
    std::string title = "H(t) vs Riccati comparison";
};

namespace detail {

inline std::string fmt_num(double v, const char* spec = "%.2f") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

/// `bound` is optional; without it only the simulated curve is drawn.
[[nodiscard]] inline std::string render_svg(const std::vector<TimeSeriesRecord>& series,
                                            const std::optional<RiccatiBound>& bound, const PlotOptions& opt = {}) {
    const double left = 80, right = 30, top = 40, bottom = 60;
    const double pw = opt.width - left - right;
    const double ph = opt.height - top - bottom;

    auto ty = [&](double h) { return opt.log_y ? std::log10(h) : h; };
    auto usable = [&](double h) { return std::isfinite(h) && (!opt.log_y || h > 0.0); };

    double t_max = 0.0;
    for (const auto& r : series) t_max = std::max(t_max, r.t);
    const bool has_pole = bound && bound->T_star;
    const double pole = has_pole ? *bound->T_star : 0.0;
    if (has_pole) t_max = std::max(t_max, pole);
    if (!(t_max > 0.0)) t_max = 1.0;

    double y_lo = opt.log_y ? INFINITY : 0.0, y_hi = opt.log_y ? -INFINITY : 0.0;
    for (const auto& r : series) {
        if (!usable(r.H)) continue;
        y_lo = std::min(y_lo, ty(r.H));
        y_hi = std::max(y_hi, ty(r.H));
    }
    if (!std::isfinite(y_lo) || !std::isfinite(y_hi)) y_lo = 0.0, y_hi = 1.0;
    if (has_pole && usable(bound->H0)) y_lo = std::min(y_lo, ty(bound->H0));
    if (y_hi - y_lo <= 0.0) {
        const double pad = std::abs(y_hi) > 0 ? 0.5 * std::abs(y_hi) : 1.0;
        y_lo -= pad;
        y_hi += pad;
    }
    const double span = y_hi - y_lo;
    y_hi += 0.1 * span;
    if (!opt.log_y && y_lo < 0.0) y_lo -= 0.05 * span;

    auto px = [&](double t) { return left + pw * t / t_max; };
    auto py = [&](double y) { return top + ph * (1.0 - (y - y_lo) / (y_hi - y_lo)); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
        << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << opt.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"16\">" << detail::xml_escape(opt.title) << "</text>\n"
        << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 5; ++k) {
        const double t = t_max * k / 5.0;
        const double y = y_lo + (y_hi - y_lo) * k / 5.0;
        svg << "<line x1=\"" << detail::fmt_num(px(t)) << "\" y1=\"" << top + ph << "\" x2=\""
            << detail::fmt_num(px(t)) << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << detail::fmt_num(px(t)) << "\" y=\"" << top + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::fmt_num(t, "%.3g") << "</text>\n"
            << "<line x1=\"" << left - 5 << "\" y1=\"" << detail::fmt_num(py(y)) << "\" x2=\"" << left
            << "\" y2=\"" << detail::fmt_num(py(y)) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << left - 8 << "\" y=\"" << detail::fmt_num(py(y) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::fmt_num(opt.log_y ? std::pow(10.0, y) : y, "%.3g") << "</text>\n";
    }
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << opt.height - 15
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">t</text>\n"
        << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\" transform=\"rotate(-90 20 " << top + ph / 2 << ")\">"
        << (opt.log_y ? "log10 H" : "H") << "</text>\n";

    svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (const auto& r : series)
        if (usable(r.H)) svg << detail::fmt_num(px(r.t)) << ',' << detail::fmt_num(py(ty(r.H))) << ' ';
    svg << "\"/>\n";

    if (has_pole) {
        svg << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\" points=\"";
        const int samples = 400;
        for (int k = 0; k < samples; ++k) {
            const double t = pole * k / samples;
            const double h = comparison_solution(*bound, t);
            if (!usable(h) || ty(h) > y_hi) break;
            svg << detail::fmt_num(px(t)) << ',' << detail::fmt_num(py(ty(h))) << ' ';
        }
        svg << "\"/>\n"
            << "<line x1=\"" << detail::fmt_num(px(pole)) << "\" y1=\"" << top << "\" x2=\""
            << detail::fmt_num(px(pole)) << "\" y2=\"" << top + ph
            << "\" stroke=\"#555\" stroke-dasharray=\"2,3\"/>\n"
            << "<text x=\"" << detail::fmt_num(px(pole) - 4) << "\" y=\"" << top + 14
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">T* = "
            << detail::fmt_num(pole, "%.4g") << "</text>\n";
    }

    svg << "<text x=\"" << left + 10 << "\" y=\"" << top + 18
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f77b4\">simulated H</text>\n";
    if (has_pole)
        svg << "<text x=\"" << left + 10 << "\" y=\"" << top + 34
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">comparison solution</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

} // namespace blowup
