#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace lpfp::svg {

/// Cell values on a (time x state) lattice. NaN cells are left blank.
struct Heatmap {
    std::string title;
    std::vector<double> times;   // columns
    std::vector<double> states;  // rows
    Eigen::MatrixXd values;      // times.size() x states.size()
    // Symmetric blue-white-red scale around zero instead of white-to-blue.
    bool diverging = false;
};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    bool log_log = false;
};

std::string render(const Heatmap& map);
std::string render(const LineChart& chart);

/// Rows of a three-column CSV with a header line: (t, x, value). Further
/// columns are ignored; `column` selects the value column (2 = third).
struct NodeTable {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> value;
};
NodeTable read_node_csv(const std::filesystem::path& path, std::size_t column = 2);

/// Lays node rows onto the lattice of their distinct times and states.
Heatmap heatmap_from_table(const NodeTable& table, const std::string& title, bool diverging = false);

} // namespace lpfp::svg
