#include "lpfp/mps.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace lpfp {

namespace {

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Name field padded to the fixed-format width, widened when longer.
std::string field(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + ' ' : s + std::string(width - s.size(), ' ');
}

void entry_line(std::ostream& out, const std::string& col, const std::string& row, double v) {
    out << "    " << field(col, 10) << field(row, 10) << number(v) << '\n';
}

[[noreturn]] void parse_error(int line, const std::string& what) {
    throw std::runtime_error("MPS line " + std::to_string(line) + ": " + what);
}

ColumnLabel label_from_name(const std::string& name) {
    ColumnLabel l;
    std::vector<std::size_t> parts;
    std::string head;
    std::istringstream in(name);
    std::string tok;
    bool first = true;
    while (std::getline(in, tok, '_')) {
        if (first) {
            head = tok;
            first = false;
            continue;
        }
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) return {ColumnLabel::Kind::other, 0, 0, 0, name};
        parts.push_back(std::stoul(tok));
    }
    if (head == "MU" && parts.size() == 2) return {ColumnLabel::Kind::mu, parts[0], parts[1], 0, {}};
    if (head == "M" && parts.size() == 3) return {ColumnLabel::Kind::m, parts[0], parts[1], parts[2], {}};
    return {ColumnLabel::Kind::other, 0, 0, 0, name};
}

RowLabel row_from_name(const std::string& name) {
    unsigned long i = 0, j = 0;
    char tail = 0;
    if (std::sscanf(name.c_str(), "R_%lu_%lu%c", &i, &j, &tail) == 2) {
        RowLabel l{i, j, {}};
        if ("R_" + std::to_string(i) + "_" + std::to_string(j) == name) return l;
    }
    return {0, 0, name};
}

} // namespace

void write_mps(const LinearProgram& lp, std::ostream& out) {
    if (lp.num_rows() == 0 || lp.num_cols() == 0) throw std::invalid_argument("write_mps: empty program");
    out << "NAME          " << lp.name << '\n';
    out << "OBJSENSE\n    MAX\n";
    out << "ROWS\n";
    out << " N  OBJ\n";
    for (std::size_t r = 0; r < lp.rows.size(); ++r) out << " E  " << lp.row_name(r) << '\n';
    out << "COLUMNS\n";
    for (Eigen::Index c = 0; c < lp.num_cols(); ++c) {
        const std::string name = lp.column_name(static_cast<std::size_t>(c));
        bool wrote = false;
        if (lp.objective(c) != 0.0) {
            entry_line(out, name, "OBJ", lp.objective(c));
            wrote = true;
        }
        for (Eigen::SparseMatrix<double>::InnerIterator it(lp.constraints, c); it; ++it) {
            entry_line(out, name, lp.row_name(static_cast<std::size_t>(it.row())), it.value());
            wrote = true;
        }
        // A column with no entries would vanish on re-import.
        if (!wrote) entry_line(out, name, "OBJ", 0.0);
    }
    out << "RHS\n";
    for (Eigen::Index r = 0; r < lp.num_rows(); ++r)
        if (lp.rhs(r) != 0.0) entry_line(out, "RHS", lp.row_name(static_cast<std::size_t>(r)), lp.rhs(r));
    out << "BOUNDS\n";
    out << "ENDATA\n";
}

void export_mps(const LinearProgram& lp, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_mps(lp, out);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

LinearProgram read_mps(std::istream& in) {
    enum class Section { none, name, objsense, rows, columns, rhs, bounds, done };
    Section section = Section::none;
    LinearProgram lp;
    std::string objective_row;
    bool maximize = false;
    std::map<std::string, std::size_t> row_index;
    std::map<std::string, std::size_t> col_index;
    std::vector<Eigen::Triplet<double>> triplets;
    std::vector<double> objective;
    std::vector<std::pair<std::size_t, double>> rhs_entries;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        std::istringstream tokens(line);
        std::vector<std::string> tok;
        for (std::string t; tokens >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (line[0] != ' ' && line[0] != '\t') {
            const std::string& head = tok[0];
            if (head == "NAME") {
                section = Section::name;
                if (tok.size() > 1) lp.name = tok[1];
            } else if (head == "OBJSENSE") {
                section = Section::objsense;
                if (tok.size() > 1) maximize = tok[1].rfind("MAX", 0) == 0;
            } else if (head == "ROWS") section = Section::rows;
            else if (head == "COLUMNS") section = Section::columns;
            else if (head == "RHS") section = Section::rhs;
            else if (head == "BOUNDS") section = Section::bounds;
            else if (head == "ENDATA") {
                section = Section::done;
                break;
            } else parse_error(lineno, "unknown section '" + head + "'");
            continue;
        }
        switch (section) {
        case Section::objsense:
            if (tok[0].rfind("MAX", 0) == 0) maximize = true;
            else if (tok[0].rfind("MIN", 0) == 0) maximize = false;
            else parse_error(lineno, "bad OBJSENSE '" + tok[0] + "'");
            break;
        case Section::rows:
            if (tok.size() != 2) parse_error(lineno, "expected '<type> <name>'");
            if (tok[0] == "N") {
                if (objective_row.empty()) objective_row = tok[1];
            } else if (tok[0] == "E") {
                if (row_index.count(tok[1])) parse_error(lineno, "duplicate row '" + tok[1] + "'");
                row_index[tok[1]] = lp.rows.size();
                lp.rows.push_back(row_from_name(tok[1]));
            } else {
                parse_error(lineno, "only equality rows are supported");
            }
            break;
        case Section::columns: {
            if (tok.size() != 3 && tok.size() != 5) parse_error(lineno, "expected column entries in pairs");
            auto [it, inserted] = col_index.try_emplace(tok[0], lp.columns.size());
            if (inserted) {
                lp.columns.push_back(label_from_name(tok[0]));
                objective.push_back(0.0);
            }
            for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
                double v = 0.0;
                try {
                    v = std::stod(tok[f + 1]);
                } catch (const std::exception&) {
                    parse_error(lineno, "bad number '" + tok[f + 1] + "'");
                }
                if (tok[f] == objective_row) {
                    objective[it->second] = v;
                } else {
                    const auto r = row_index.find(tok[f]);
                    if (r == row_index.end()) parse_error(lineno, "unknown row '" + tok[f] + "'");
                    triplets.emplace_back(static_cast<Eigen::Index>(r->second), static_cast<Eigen::Index>(it->second), v);
                }
            }
            break;
        }
        case Section::rhs:
            if (tok.size() != 3 && tok.size() != 5) parse_error(lineno, "expected rhs entries in pairs");
            for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
                const auto r = row_index.find(tok[f]);
                if (r == row_index.end()) parse_error(lineno, "unknown row '" + tok[f] + "'");
                rhs_entries.emplace_back(r->second, std::stod(tok[f + 1]));
            }
            break;
        case Section::bounds: parse_error(lineno, "explicit bounds are not supported");
        default: parse_error(lineno, "data outside a section");
        }
    }
    if (section != Section::done) throw std::runtime_error("MPS: missing ENDATA");
    if (lp.rows.empty() || lp.columns.empty()) throw std::runtime_error("MPS: empty program");

    lp.constraints.resize(static_cast<Eigen::Index>(lp.rows.size()), static_cast<Eigen::Index>(lp.columns.size()));
    lp.constraints.setFromTriplets(triplets.begin(), triplets.end());
    lp.constraints.makeCompressed();
    lp.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lp.rows.size()));
    for (const auto& [r, v] : rhs_entries) lp.rhs(static_cast<Eigen::Index>(r)) = v;
    lp.objective = Eigen::Map<const Eigen::VectorXd>(objective.data(), static_cast<Eigen::Index>(objective.size()));
    if (!maximize) lp.objective = -lp.objective;
    return lp;
}

LinearProgram import_mps(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return read_mps(in);
}

} // namespace lpfp
