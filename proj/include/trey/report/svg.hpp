#pragma once

#include <string>
#include <vector>

namespace trey::report {

struct BoxSeries {
    std::string label;
    std::vector<double> samples;
};

// Minimal hand-built SVG box plot: min/q1/median/q3/max per series. When
// timestamp is false the generated-at comment is suppressed so reruns are
// byte-identical.
std::string box_plot_svg(const std::vector<BoxSeries>& series, const std::string& title,
                         const std::string& y_label, bool timestamp);

struct HistogramPanel {
    std::string label;
    std::vector<double> values;
    int bins = 12;
};

std::string histogram_svg(const std::vector<HistogramPanel>& panels, const std::string& title,
                          bool timestamp);

}  // namespace trey::report
