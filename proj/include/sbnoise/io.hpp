// io.hpp - CSV emission/parsing with round-trip number formatting, and a
// dependency-free SVG line chart.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sbnoise/core.hpp"

namespace sbnoise::io {

/// Shortest-independent round-trip rendering: printf "%.17g".
[[nodiscard]] std::string format_double(double x);

/// Parses a number written by format_double (including nan/inf).
[[nodiscard]] double parse_double(const std::string& text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> comments;  // emitted after the rows, each prefixed by "# "
};

void write_csv(std::ostream& os, const CsvTable& table);
[[nodiscard]] CsvTable read_csv(std::istream& is);

void write_file(const std::string& path, const std::string& contents);
[[nodiscard]] std::string read_file(const std::string& path);
[[nodiscard]] std::string to_string(const CsvTable& table);

/// Columns t, re/im of the four entries, trace_defect, herm_defect, purity.
[[nodiscard]] std::vector<std::string> trajectory_header();
[[nodiscard]] CsvTable trajectory_table(const Trajectory& traj);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartLabels {
    std::string title;
    std::string x_label;
    std::string y_label;
};

/// SVG 1.1 markup: axes with ticks, one polyline per series and a legend.
[[nodiscard]] std::string render_line_chart(const ChartLabels& labels, const std::vector<Series>& series);

}  // namespace sbnoise::io
