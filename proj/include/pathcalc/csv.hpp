#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "path.hpp"

namespace pathcalc {

// ============================================================================
// CSV interchange
// ============================================================================
// Paths travel as `t,value` or `t,value,left,right`, sorted by t. Doubles are
// written with 17 significant digits so a write/read round trip is bit-exact.

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_double(const std::string& field, std::size_t row, const char* col) {
    const char* s = field.c_str();
    char* end = nullptr;
    const double x = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw std::invalid_argument("csv: bad number in column '" + std::string(col) +
                                    "', row " + std::to_string(row));
    return x;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') { out.push_back(cur); cur.clear(); }
        else if (c != '\r') cur += c;
    }
    out.push_back(cur);
    return out;
}

// Step paths always get explicit limit columns: with them, re-reading under
// continuous-interpolant semantics reproduces the same regulated function, so
// the on-disk form is style-free.
inline void write_path_csv(std::ostream& os, const SampledPath& f) {
    const bool decorated = !f.decorations().empty() || f.style() == PathStyle::cadlag_step;
    os << (decorated ? "t,value,left,right\n" : "t,value\n");
    const auto& ts = f.grid().points();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        os << format_double(ts[i]) << ',' << format_double(f.value_at(i));
        if (decorated)
            os << ',' << format_double(f.left_limit_at(i)) << ',' << format_double(f.right_limit_at(i));
        os << '\n';
    }
}

inline void write_path_csv(const std::string& file, const SampledPath& f) {
    std::ofstream os(file);
    if (!os) throw std::invalid_argument("csv: cannot open '" + file + "' for writing");
    write_path_csv(os, f);
}

// Reads either layout. A 4-column file reconstructs the decorations, and a
// step function serialized with explicit limits comes back as the same
// regulated function (constant between a right limit and the next left limit).
inline SampledPath read_path_csv(std::istream& is, PathStyle style = PathStyle::continuous_interpolant) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("csv: empty input");
    auto header = split_csv_line(line);
    const bool decorated = header.size() == 4;
    if (!(header.size() == 2 || decorated) || header[0] != "t")
        throw std::invalid_argument("csv: expected header 't,value[,left,right]'");
    std::vector<double> ts, vs;
    std::vector<Decoration> ds;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::invalid_argument("csv: wrong field count in row " + std::to_string(row));
        const double t = parse_double(fields[0], row, "t");
        const double v = parse_double(fields[1], row, "value");
        ts.push_back(t);
        vs.push_back(v);
        if (decorated) {
            const double l = parse_double(fields[2], row, "left");
            const double r = parse_double(fields[3], row, "right");
            if (l != v || r != v) ds.push_back({t, l, r});
        }
    }
    return SampledPath::with_decorations(style, Partition::from_points(std::move(ts)),
                                         std::move(vs), std::move(ds));
}

inline SampledPath read_path_csv(const std::string& file, PathStyle style = PathStyle::continuous_interpolant) {
    std::ifstream is(file);
    if (!is) throw std::invalid_argument("csv: cannot open '" + file + "'");
    return read_path_csv(is, style);
}

// generic table writer for reports (per-level rows and the like)
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void write(std::ostream& os) const {
        for (std::size_t j = 0; j < header.size(); ++j)
            os << header[j] << (j + 1 < header.size() ? ',' : '\n');
        for (const auto& r : rows)
            for (std::size_t j = 0; j < r.size(); ++j)
                os << format_double(r[j]) << (j + 1 < r.size() ? ',' : '\n');
    }
};

} // namespace pathcalc
