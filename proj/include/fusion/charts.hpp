#pragma once

#include "fusion/calibration.hpp"
#include "fusion/targets.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fusion {

// Fixed geometry so chart coordinates are reproducible and testable.
struct ChartGeometry {
    static constexpr double width = 800.0;
    static constexpr double height = 500.0;
    static constexpr double left = 70.0;
    static constexpr double right = 760.0;
    static constexpr double top = 50.0;
    static constexpr double bottom = 450.0;

    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    double map_x(double x) const {
        return left + (x - x0) / (x1 - x0) * (right - left);
    }
    double map_y(double y) const {
        return bottom - (y - y0) / (y1 - y0) * (bottom - top);
    }
};

struct ChartSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

// Polyline chart with axes, ticks, and a legend; data-space domain comes
// from `geometry`.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const ChartGeometry& geometry,
                           const std::vector<ChartSeries>& series,
                           bool diagonal_reference = false);

// w(tau; k) curves for +k, the linear limit, and -k.
std::string interpolation_chart_svg(double k);

// Rating class index as a step function of the raw score, one line per size
// class after its delta shift.
std::string rating_frontier_svg(const DeltaShifts& shifts, const RatingScale& scale);

} // namespace fusion
