#include "fusion/charts.hpp"

#include "fusion/transforms.hpp"

#include <cstdio>

namespace fusion {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const ChartGeometry& g,
                           const std::vector<ChartSeries>& series,
                           bool diagonal_reference) {
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(ChartGeometry::width) +
           "\" height=\"" + fmt(ChartGeometry::height) + "\" viewBox=\"0 0 " +
           fmt(ChartGeometry::width) + " " + fmt(ChartGeometry::height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(ChartGeometry::width / 2) +
           "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" +
           escape_xml(title) + "</text>\n";

    // Axes.
    svg += "<line x1=\"" + fmt(g.left) + "\" y1=\"" + fmt(g.bottom) + "\" x2=\"" +
           fmt(g.right) + "\" y2=\"" + fmt(g.bottom) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(g.left) + "\" y1=\"" + fmt(g.top) + "\" x2=\"" + fmt(g.left) +
           "\" y2=\"" + fmt(g.bottom) + "\" stroke=\"black\"/>\n";

    // Ticks: five per axis.
    for (int i = 0; i <= 4; ++i) {
        const double fx = g.x0 + (g.x1 - g.x0) * i / 4.0;
        const double fy = g.y0 + (g.y1 - g.y0) * i / 4.0;
        const double px = g.map_x(fx);
        const double py = g.map_y(fy);
        svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(g.bottom) + "\" x2=\"" + fmt(px) +
               "\" y2=\"" + fmt(g.bottom + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(g.bottom + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt(fx) + "</text>\n";
        svg += "<line x1=\"" + fmt(g.left - 5) + "\" y1=\"" + fmt(py) + "\" x2=\"" +
               fmt(g.left) + "\" y2=\"" + fmt(py) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(g.left - 10) + "\" y=\"" + fmt(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + fmt(fy) +
               "</text>\n";
    }

    svg += "<text x=\"" + fmt((g.left + g.right) / 2) + "\" y=\"" +
           fmt(ChartGeometry::height - 10) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           escape_xml(x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt((g.top + g.bottom) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 18 " +
           fmt((g.top + g.bottom) / 2) + ")\">" + escape_xml(y_label) + "</text>\n";

    if (diagonal_reference) {
        svg += "<line x1=\"" + fmt(g.map_x(g.x0)) + "\" y1=\"" + fmt(g.map_y(g.y0)) +
               "\" x2=\"" + fmt(g.map_x(g.x1)) + "\" y2=\"" + fmt(g.map_y(g.y1)) +
               "\" stroke=\"#999999\" stroke-dasharray=\"6,4\"/>\n";
    }

    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"2\" points=\"";
        for (size_t i = 0; i < series[s].points.size(); ++i) {
            if (i) svg += ' ';
            svg += fmt(g.map_x(series[s].points[i].first));
            svg += ',';
            svg += fmt(g.map_y(series[s].points[i].second));
        }
        svg += "\"/>\n";
        const double ly = g.top + 18.0 * static_cast<double>(s);
        svg += "<rect x=\"" + fmt(g.right - 170) + "\" y=\"" + fmt(ly - 9) +
               "\" width=\"12\" height=\"12\" fill=\"";
        svg += color;
        svg += "\"/>\n";
        svg += "<text x=\"" + fmt(g.right - 152) + "\" y=\"" + fmt(ly + 2) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(series[s].name) +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string interpolation_chart_svg(double k) {
    ChartGeometry g;
    std::vector<ChartSeries> series;
    struct Curve {
        std::string name;
        double k;
    };
    std::vector<Curve> curves = {{"k=" + std::to_string(k).substr(0, 5), k},
                                 {"linear", 0.0},
                                 {"k=" + std::to_string(-k).substr(0, 6), -k}};
    for (const Curve& c : curves) {
        ChartSeries s;
        s.name = c.name;
        const InterpolationConfig cfg{c.k};
        for (int i = 0; i <= 100; ++i) {
            const double tau = static_cast<double>(i) / 100.0;
            s.points.emplace_back(tau, interpolation_weight(tau, cfg));
        }
        series.push_back(std::move(s));
    }
    return line_chart_svg("Interpolation weight between anchors", "tau (months / 12)",
                          "w(tau; k)", g, series);
}

std::string rating_frontier_svg(const DeltaShifts& shifts, const RatingScale& scale) {
    ChartGeometry g;
    g.x0 = -10.0;
    g.x1 = 2.0;
    g.y0 = 1.0;
    g.y1 = static_cast<double>(scale.n_classes());
    std::vector<ChartSeries> series;
    for (SizeClass size : kAllSizes) {
        ChartSeries s;
        s.name = to_string(size);
        for (int i = 0; i <= 600; ++i) {
            const double score = g.x0 + (g.x1 - g.x0) * i / 600.0;
            const double shifted = apply_delta_shift(score, size, shifts);
            const size_t rating = assign_rating(inverse_logit(shifted), scale);
            s.points.emplace_back(score, static_cast<double>(rating + 1));
        }
        series.push_back(std::move(s));
    }
    return line_chart_svg("Rating frontier by company size", "raw score (logit)",
                          "rating class", g, series);
}

} // namespace fusion
