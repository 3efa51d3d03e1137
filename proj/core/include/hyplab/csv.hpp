#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hyplab/fv.hpp"

namespace hyplab {

/// Grid solutions serialize as `t,x,u` rows, one per (time, cell), with 17
/// significant digits so values round-trip exactly.
void write_solution_csv(std::ostream& os, const GridSolution& solution);
void write_solution_csv(const std::string& path, const GridSolution& solution);

GridSolution read_solution_csv(std::istream& is);
GridSolution read_solution_csv(const std::string& path);

/// Error series serialize as `t,elf,eel` rows.
struct ErrorSeries {
    std::vector<double> times;
    std::vector<double> elf;
    std::vector<double> eel;

    bool operator==(const ErrorSeries&) const = default;
};

void write_error_series_csv(std::ostream& os, const ErrorSeries& series);
void write_error_series_csv(const std::string& path, const ErrorSeries& series);
ErrorSeries read_error_series_csv(std::istream& is);
ErrorSeries read_error_series_csv(const std::string& path);

/// 17-significant-digit decimal form; parses back to exactly the same double.
std::string format_double(double value);

}  // namespace hyplab
