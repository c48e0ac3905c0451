#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace cslab {

/// Locale-independent decimal formatting (shortest round-trip).
std::string format_double(double v);

/// Writes a CSV file: header row, one row per matrix row, dot decimal,
/// newline-terminated.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows);

/// Writes a CSV from pre-formatted cells (for tables with blanks or labels).
void write_csv_cells(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

/// Minimal SVG line plot of one or more series sampled at x in [0,1).
void write_svg_lines(const std::string& path, const std::vector<Eigen::VectorXd>& series,
                     const std::vector<std::string>& labels);

} // namespace cslab
