#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace pqd::cli {

// Shortest-free, locale-independent 17-significant-digit rendering.
std::string fmt(double v);
std::string fmt(long long v);

struct Table {
    std::vector<std::string> comments;  // written as leading "# ..." lines
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Series {
    std::string label;
    std::vector<double> x, y;
};

struct Heatmap {
    std::vector<double> x, y;  // columns, rows
    std::vector<double> z;     // row-major
    bool diagonal_guides = false;
};

// All writers throw IoError.
void ensure_directory(const std::string& dir);
void write_csv(const std::string& path, const Table& t);
void write_line_svg(const std::string& path, const std::string& xlabel, const std::string& ylabel,
                    const std::vector<Series>& series);
void write_heatmap_svg(const std::string& path, const std::string& xlabel, const std::string& ylabel, const Heatmap& h);
void write_sidecar(const std::string& path, const std::string& command, const Json& resolved, double wall_time);

}  // namespace pqd::cli
