// Self-contained SVG line charts: fixed 800x600 viewBox, linear axes with
// tick labels at 5 intervals, one polyline per series, no external
// resources. Enough for trace and sweep figures without plotting tooling.
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ddtea {

struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct SvgChart {
    std::string title;
    std::string x_label;
    std::string y_label;
};

void write_svg_chart(std::ostream& os, const SvgChart& chart, std::span<const SvgSeries> series);

}  // namespace ddtea
