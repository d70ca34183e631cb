#pragma once
// Plain-text output helpers: commented CSV with a provenance header, and a
// reader for resuming interrupted scans (rows keyed by their first column).

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chirascat {

struct CsvFile {
    std::ofstream out;

    CsvFile(const std::string& path, const std::vector<std::string>& comments,
            const std::vector<std::string>& columns, bool append = false) {
        out.open(path, append ? std::ios::app : std::ios::trunc);
        if (!out) throw std::runtime_error("CsvFile: cannot open " + path);
        if (!append) {
            for (const auto& c : comments) out << "# " << c << "\n";
            for (std::size_t i = 0; i < columns.size(); ++i)
                out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        }
        out << std::setprecision(12);
    }

    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            out << vals[i] << (i + 1 < vals.size() ? "," : "\n");
        out.flush();  // rows survive an interrupted scan
    }
};

// First-column values of existing data rows (comments and header skipped);
// used to skip already-computed points when resuming.
inline std::set<double> csv_first_column(const std::string& path) {
    std::set<double> keys;
    std::ifstream in(path);
    if (!in) return keys;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double v;
        if (ss >> v) keys.insert(v);
    }
    return keys;
}

}  // namespace chirascat
