#include "hyplab/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hyplab {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return is;
}

std::vector<double> parse_row(const std::string& line, std::size_t n_fields,
                              std::size_t line_no) {
    std::vector<double> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) comma = line.size();
        const std::string token = line.substr(pos, comma - pos);
        char* end = nullptr;
        const double value = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0') {
            throw std::runtime_error("csv line " + std::to_string(line_no) +
                                     ": cannot parse '" + token + "' as a number");
        }
        fields.push_back(value);
        pos = comma + 1;
        if (comma == line.size()) break;
    }
    if (fields.size() != n_fields) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(n_fields) + " fields, got " +
                                 std::to_string(fields.size()));
    }
    return fields;
}

void expect_header(std::istream& is, const std::string& header) {
    std::string line;
    if (!std::getline(is, line) || line != header) {
        throw std::runtime_error("csv: expected header '" + header + "'");
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_solution_csv(std::ostream& os, const GridSolution& solution) {
    os << "t,x,u\n";
    for (std::size_t n = 0; n < solution.times.size(); ++n) {
        for (std::size_t j = 0; j < solution.x_centers.size(); ++j) {
            os << format_double(solution.times[n]) << ','
               << format_double(solution.x_centers[j]) << ','
               << format_double(solution.values[n][j]) << '\n';
        }
    }
}

void write_solution_csv(const std::string& path, const GridSolution& solution) {
    auto os = open_out(path);
    write_solution_csv(os, solution);
}

GridSolution read_solution_csv(std::istream& is) {
    expect_header(is, "t,x,u");
    GridSolution solution;
    std::string line;
    std::size_t line_no = 1;
    bool first_block = true;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto row = parse_row(line, 3, line_no);
        if (solution.times.empty() || row[0] != solution.times.back()) {
            if (!solution.times.empty()) first_block = false;
            solution.times.push_back(row[0]);
            solution.values.emplace_back();
        }
        if (first_block) {
            solution.x_centers.push_back(row[1]);
        } else {
            const std::size_t j = solution.values.back().size();
            if (j >= solution.x_centers.size() || solution.x_centers[j] != row[1]) {
                throw std::runtime_error("csv line " + std::to_string(line_no) +
                                         ": x grid differs between time blocks");
            }
        }
        solution.values.back().push_back(row[2]);
    }
    if (solution.times.empty()) throw std::runtime_error("csv: no data rows");
    for (const auto& level : solution.values) {
        if (level.size() != solution.x_centers.size()) {
            throw std::runtime_error("csv: ragged time blocks");
        }
    }
    return solution;
}

GridSolution read_solution_csv(const std::string& path) {
    auto is = open_in(path);
    return read_solution_csv(is);
}

void write_error_series_csv(std::ostream& os, const ErrorSeries& series) {
    os << "t,elf,eel\n";
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        os << format_double(series.times[i]) << ',' << format_double(series.elf[i])
           << ',' << format_double(series.eel[i]) << '\n';
    }
}

void write_error_series_csv(const std::string& path, const ErrorSeries& series) {
    auto os = open_out(path);
    write_error_series_csv(os, series);
}

ErrorSeries read_error_series_csv(std::istream& is) {
    expect_header(is, "t,elf,eel");
    ErrorSeries series;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto row = parse_row(line, 3, line_no);
        series.times.push_back(row[0]);
        series.elf.push_back(row[1]);
        series.eel.push_back(row[2]);
    }
    return series;
}

ErrorSeries read_error_series_csv(const std::string& path) {
    auto is = open_in(path);
    return read_error_series_csv(is);
}

}  // namespace hyplab
