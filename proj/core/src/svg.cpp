#include "ddtea/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace ddtea {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 60.0;
constexpr int kTickIntervals = 5;

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    void expand(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
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

}  // namespace

void write_svg_chart(std::ostream& os, const SvgChart& chart, std::span<const SvgSeries> series) {
    Range rx{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    Range ry = rx;
    for (const auto& s : series) {
        for (double v : s.x) rx.expand(v);
        for (double v : s.y) ry.expand(v);
    }
    if (!(rx.lo < rx.hi)) {
        rx.lo -= 1.0;
        rx.hi += 1.0;
    }
    if (!(ry.lo < ry.hi)) {
        ry.lo -= 1.0;
        ry.hi += 1.0;
    }
    // Headroom so curves do not sit on the frame.
    const double pad = 0.05 * (ry.hi - ry.lo);
    ry.lo -= pad;
    ry.hi += pad;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto px = [&](double x) { return kMarginLeft + (x - rx.lo) / (rx.hi - rx.lo) * plot_w; };
    const auto py = [&](double y) {
        return kMarginTop + plot_h - (y - ry.lo) / (ry.hi - ry.lo) * plot_h;
    };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
          "font-family=\"sans-serif\" font-size=\"14\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    os << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">"
       << xml_escape(chart.title) << "</text>\n";

    // Frame and ticks.
    os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
       << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= kTickIntervals; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / kTickIntervals;
        const double fy = ry.lo + (ry.hi - ry.lo) * i / kTickIntervals;
        const double tx = px(fx);
        const double ty = py(fy);
        os << "<line x1=\"" << tx << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << tx
           << "\" y2=\"" << kMarginTop + plot_h + 6 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << tx << "\" y=\"" << kMarginTop + plot_h + 22
           << "\" text-anchor=\"middle\">" << fmt_tick(fx) << "</text>\n";
        os << "<line x1=\"" << kMarginLeft - 6 << "\" y1=\"" << ty << "\" x2=\"" << kMarginLeft
           << "\" y2=\"" << ty << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kMarginLeft - 10 << "\" y=\"" << ty + 5
           << "\" text-anchor=\"end\">" << fmt_tick(fy) << "</text>\n";
    }
    os << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
       << "\" text-anchor=\"middle\">" << xml_escape(chart.x_label) << "</text>\n";
    os << "<text x=\"20\" y=\"" << kMarginTop + plot_h / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << kMarginTop + plot_h / 2
       << ")\">" << xml_escape(chart.y_label) << "</text>\n";

    double legend_y = kMarginTop + 16.0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) {
            os << " stroke-dasharray=\"6 4\"";
        }
        os << " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        }
        os << "\"/>\n";
        if (!s.name.empty()) {
            os << "<line x1=\"" << kMarginLeft + plot_w - 150 << "\" y1=\"" << legend_y
               << "\" x2=\"" << kMarginLeft + plot_w - 120 << "\" y2=\"" << legend_y
               << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
               << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
            os << "<text x=\"" << kMarginLeft + plot_w - 112 << "\" y=\"" << legend_y + 5 << "\">"
               << xml_escape(s.name) << "</text>\n";
            legend_y += 20.0;
        }
    }
    os << "</svg>\n";
}

}  // namespace ddtea
