#include "lpfp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lpfp::svg {

namespace {

std::string fmt(double v, int digits = 4) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string rgb(double r, double g, double b) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(255 * r)),
                  static_cast<int>(std::lround(255 * g)), static_cast<int>(std::lround(255 * b)));
    return buf;
}

// s in [0, 1]: white to dark blue.
std::string sequential(double s) {
    s = std::clamp(s, 0.0, 1.0);
    return rgb(1.0 - 0.92 * s, 1.0 - 0.75 * s, 1.0 - 0.45 * s);
}

// s in [-1, 1]: blue, white, red.
std::string diverging_color(double s) {
    s = std::clamp(s, -1.0, 1.0);
    if (s >= 0) return rgb(1.0 - 0.2 * s, 1.0 - 0.85 * s, 1.0 - 0.85 * s);
    return rgb(1.0 + 0.85 * s, 1.0 + 0.7 * s, 1.0 + 0.2 * s);
}

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 110, kTop = 40, kBottom = 55;

} // namespace

std::string render(const Heatmap& map) {
    const auto nt = static_cast<Eigen::Index>(map.times.size());
    const auto ns = static_cast<Eigen::Index>(map.states.size());
    if (map.values.rows() != nt || map.values.cols() != ns) throw std::invalid_argument("heatmap: shape mismatch");
    double scale = 0.0;
    for (Eigen::Index i = 0; i < nt; ++i)
        for (Eigen::Index j = 0; j < ns; ++j)
            if (std::isfinite(map.values(i, j))) scale = std::max(scale, std::abs(map.values(i, j)));

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const double cw = nt > 0 ? pw / static_cast<double>(nt) : pw;
    const double ch = ns > 0 ? ph / static_cast<double>(ns) : ph;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(map.title)
        << "</text>\n";
    for (Eigen::Index i = 0; i < nt; ++i)
        for (Eigen::Index j = 0; j < ns; ++j) {
            const double v = map.values(i, j);
            if (!std::isfinite(v)) continue;
            const double s = scale > 0 ? v / scale : 0.0;
            const std::string color = map.diverging ? diverging_color(s) : sequential(s);
            // States grow upwards.
            out << "<rect x=\"" << fmt(kLeft + static_cast<double>(i) * cw, 7) << "\" y=\""
                << fmt(kTop + ph - static_cast<double>(j + 1) * ch, 7) << "\" width=\"" << fmt(cw + 0.05, 7)
                << "\" height=\"" << fmt(ch + 0.05, 7) << "\" fill=\"" << color << "\"/>\n";
        }
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (nt > 0 && ns > 0) {
        out << "<text x=\"" << kLeft << "\" y=\"" << kTop + ph + 18 << "\">" << fmt(map.times.front()) << "</text>\n";
        out << "<text x=\"" << kLeft + pw << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"end\">"
            << fmt(map.times.back()) << "</text>\n";
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + ph << "\" text-anchor=\"end\">"
            << fmt(map.states.front()) << "</text>\n";
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\">"
            << fmt(map.states.back()) << "</text>\n";
    }
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">time</text>\n";
    out << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << kTop + ph / 2 << ")\">state</text>\n";

    // Scale bar.
    const double bx = kWidth - kRight + 25, bw = 18;
    constexpr int steps = 50;
    for (int s = 0; s < steps; ++s) {
        const double frac = (s + 0.5) / steps;
        const std::string color = map.diverging ? diverging_color(2.0 * frac - 1.0) : sequential(frac);
        out << "<rect x=\"" << bx << "\" y=\"" << fmt(kTop + ph * (1.0 - static_cast<double>(s + 1) / steps), 7)
            << "\" width=\"" << bw << "\" height=\"" << fmt(ph / steps + 0.05, 7) << "\" fill=\"" << color << "\"/>\n";
    }
    out << "<rect x=\"" << bx << "\" y=\"" << kTop << "\" width=\"" << bw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << bx + bw + 4 << "\" y=\"" << kTop + 10 << "\">" << fmt(scale) << "</text>\n";
    out << "<text x=\"" << bx + bw + 4 << "\" y=\"" << kTop + ph << "\">" << fmt(map.diverging ? -scale : 0.0)
        << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::string render(const LineChart& chart) {
    const auto tx = [&](double v) { return chart.log_log ? std::log10(v) : v; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const Series& s : chart.series)
        for (std::size_t n = 0; n < s.x.size(); ++n) {
            if (chart.log_log && (s.x[n] <= 0 || s.y[n] <= 0)) continue;
            if (!std::isfinite(s.y[n])) continue;
            x0 = std::min(x0, tx(s.x[n]));
            x1 = std::max(x1, tx(s.x[n]));
            y0 = std::min(y0, tx(s.y[n]));
            y1 = std::max(y1, tx(s.y[n]));
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 <= y0) y1 = y0 + 1;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const auto px = [&](double v) { return kLeft + (tx(v) - x0) / (x1 - x0) * pw; };
    const auto py = [&](double v) { return kTop + ph - (tx(v) - y0) / (y1 - y0) * ph; };
    static const char* palette[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad"};

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(chart.title)
        << "</text>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const Series& s = chart.series[k];
        std::string points;
        for (std::size_t n = 0; n < s.x.size(); ++n) {
            if (chart.log_log && (s.x[n] <= 0 || s.y[n] <= 0)) continue;
            if (!std::isfinite(s.y[n])) continue;
            points += fmt(px(s.x[n]), 7) + "," + fmt(py(s.y[n]), 7) + " ";
        }
        const char* color = palette[k % 4];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << points
            << "\"/>\n";
        out << "<text x=\"" << kWidth - kRight + 8 << "\" y=\"" << kTop + 14 + 16 * static_cast<double>(k)
            << "\" fill=\"" << color << "\">" << escape(s.label) << "</text>\n";
    }
    const auto label = [&](double v) { return fmt(chart.log_log ? std::pow(10.0, v) : v); };
    out << "<text x=\"" << kLeft << "\" y=\"" << kTop + ph + 18 << "\">" << label(x0) << "</text>\n";
    out << "<text x=\"" << kLeft + pw << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"end\">" << label(x1)
        << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + ph << "\" text-anchor=\"end\">" << label(y0)
        << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\">" << label(y1)
        << "</text>\n";
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
        << escape(chart.x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << kTop + ph / 2 << ")\">" << escape(chart.y_label) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

NodeTable read_node_csv(const std::filesystem::path& path, std::size_t column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    NodeTable table;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
        if (cells.size() <= column) throw std::runtime_error("short row in '" + path.string() + "'");
        table.t.push_back(std::stod(cells[0]));
        table.x.push_back(std::stod(cells[1]));
        const std::string& v = cells[column];
        table.value.push_back(v == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(v));
    }
    return table;
}

Heatmap heatmap_from_table(const NodeTable& table, const std::string& title, bool diverging) {
    std::map<double, std::size_t> times, states;
    for (double t : table.t) times.emplace(t, 0);
    for (double x : table.x) states.emplace(x, 0);
    Heatmap map;
    map.title = title;
    map.diverging = diverging;
    for (auto& [t, index] : times) {
        index = map.times.size();
        map.times.push_back(t);
    }
    for (auto& [x, index] : states) {
        index = map.states.size();
        map.states.push_back(x);
    }
    map.values = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(map.times.size()),
                                           static_cast<Eigen::Index>(map.states.size()),
                                           std::numeric_limits<double>::quiet_NaN());
    for (std::size_t n = 0; n < table.value.size(); ++n)
        map.values(static_cast<Eigen::Index>(times[table.t[n]]), static_cast<Eigen::Index>(states[table.x[n]])) =
            table.value[n];
    return map;
}

} // namespace lpfp::svg
