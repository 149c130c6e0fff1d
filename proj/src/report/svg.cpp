#include "trey/report/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace trey::report {

namespace {

std::string f1(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

std::string f3(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string timestamp_comment() {
    std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string("<!-- generated ") + buf + " -->\n";
}

struct Quartiles {
    double min, q1, median, q3, max;
};

// Linear-interpolation quantiles over the sorted samples.
Quartiles quartiles(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    auto q = [&](double p) {
        if (v.size() == 1) return v[0];
        const double pos = p * (v.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - lo;
        if (lo + 1 >= v.size()) return v.back();
        return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
    };
    return {v.front(), q(0.25), q(0.5), q(0.75), v.back()};
}

}  // namespace

std::string box_plot_svg(const std::vector<BoxSeries>& series, const std::string& title,
                         const std::string& y_label, bool timestamp) {
    const int box_w = 26;
    const int gap = 14;
    const int left = 70, top = 40, bottom = 110;
    const int plot_h = 300;
    const int width = left + static_cast<int>(series.size()) * (box_w + gap) + 30;
    const int height = top + plot_h + bottom;

    double lo = 0.0, hi = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (double v : s.samples) {
            if (first) {
                lo = hi = v;
                first = false;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    auto ys = [&](double v) { return top + plot_h * (1.0 - (v - lo) / (hi - lo)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    if (timestamp) svg << timestamp_comment();
    svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << xml_escape(title) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">"
        << xml_escape(y_label) << "</text>\n";

    // axis + ticks
    svg << "<line x1=\"" << left - 8 << "\" y1=\"" << top << "\" x2=\"" << left - 8 << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double v = lo + (hi - lo) * t / 5.0;
        const double y = ys(v);
        svg << "<line x1=\"" << left - 12 << "\" y1=\"" << f1(y) << "\" x2=\"" << left - 8
            << "\" y2=\"" << f1(y) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 16 << "\" y=\"" << f1(y + 4)
            << "\" text-anchor=\"end\">" << f3(v) << "</text>\n";
    }
    // zero line for orientation when the range spans it
    if (lo < 0.0 && hi > 0.0)
        svg << "<line x1=\"" << left - 8 << "\" y1=\"" << f1(ys(0.0)) << "\" x2=\""
            << width - 20 << "\" y2=\"" << f1(ys(0.0))
            << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";

    int x = left;
    for (const auto& s : series) {
        if (!s.samples.empty()) {
            const Quartiles q = quartiles(s.samples);
            const int cx = x + box_w / 2;
            const bool shadow = s.label.rfind("shadow", 0) == 0;
            const char* fill = shadow ? "#c9c9c9" : "#7fa8d9";
            svg << "<line x1=\"" << cx << "\" y1=\"" << f1(ys(q.min)) << "\" x2=\"" << cx
                << "\" y2=\"" << f1(ys(q.max)) << "\" stroke=\"black\"/>\n";
            svg << "<rect x=\"" << x << "\" y=\"" << f1(ys(q.q3)) << "\" width=\"" << box_w
                << "\" height=\"" << f1(std::max(0.5, ys(q.q1) - ys(q.q3))) << "\" fill=\"" << fill
                << "\" stroke=\"black\"/>\n";
            svg << "<line x1=\"" << x << "\" y1=\"" << f1(ys(q.median)) << "\" x2=\"" << x + box_w
                << "\" y2=\"" << f1(ys(q.median)) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        }
        svg << "<text x=\"" << x + box_w / 2 << "\" y=\"" << top + plot_h + 14
            << "\" text-anchor=\"end\" transform=\"rotate(-45 " << x + box_w / 2 << " "
            << top + plot_h + 14 << ")\">" << xml_escape(s.label) << "</text>\n";
        x += box_w + gap;
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string histogram_svg(const std::vector<HistogramPanel>& panels, const std::string& title,
                          bool timestamp) {
    const int panel_w = 280, panel_h = 220;
    const int left = 50, top = 50, gap = 50, bottom = 50;
    const int width = left + static_cast<int>(panels.size()) * (panel_w + gap);
    const int height = top + panel_h + bottom;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    if (timestamp) svg << timestamp_comment();
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << xml_escape(title) << "</text>\n";

    int x0 = left;
    for (const auto& panel : panels) {
        double lo = 0.0, hi = 1.0;
        if (!panel.values.empty()) {
            lo = *std::min_element(panel.values.begin(), panel.values.end());
            hi = *std::max_element(panel.values.begin(), panel.values.end());
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        const int bins = std::max(1, panel.bins);
        std::vector<int> counts(bins, 0);
        for (double v : panel.values) {
            int b = static_cast<int>((v - lo) / (hi - lo) * bins);
            counts[std::clamp(b, 0, bins - 1)]++;
        }
        const int peak = std::max(1, *std::max_element(counts.begin(), counts.end()));

        svg << "<text x=\"" << x0 + panel_w / 2 << "\" y=\"" << top - 8
            << "\" text-anchor=\"middle\">" << xml_escape(panel.label) << "</text>\n";
        svg << "<line x1=\"" << x0 << "\" y1=\"" << top + panel_h << "\" x2=\"" << x0 + panel_w
            << "\" y2=\"" << top + panel_h << "\" stroke=\"black\"/>\n";
        const double bw = static_cast<double>(panel_w) / bins;
        for (int b = 0; b < bins; ++b) {
            const double h = panel_h * static_cast<double>(counts[b]) / peak;
            svg << "<rect x=\"" << f1(x0 + b * bw) << "\" y=\"" << f1(top + panel_h - h)
                << "\" width=\"" << f1(bw - 1.0) << "\" height=\"" << f1(h)
                << "\" fill=\"#7fa8d9\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
        }
        svg << "<text x=\"" << x0 << "\" y=\"" << top + panel_h + 16
            << "\" text-anchor=\"middle\">" << f3(lo) << "</text>\n";
        svg << "<text x=\"" << x0 + panel_w << "\" y=\"" << top + panel_h + 16
            << "\" text-anchor=\"middle\">" << f3(hi) << "</text>\n";
        x0 += panel_w + gap;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace trey::report
