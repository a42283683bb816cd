// CSV and number-list helpers for the command-line front end.
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace garma::cli {

/// Missing-value token used in CSV input and output.
inline constexpr std::string_view kNaToken = "NA";

/// Parses a single numeric field; `NA` becomes NaN. Throws std::invalid_argument.
double parse_field(std::string_view field);

/// Comma-separated numbers, e.g. "0.8,-0.2". An empty string is an empty list.
std::vector<double> parse_number_list(std::string_view text, bool allow_na = false);

/// Reads a rectangular CSV table (no header, one series per row). Blank
/// lines are skipped; ragged rows throw std::invalid_argument.
Eigen::MatrixXd read_table(std::istream& in);

/// 17 significant digits (lossless); NaN prints as NA, infinities as Inf/-Inf.
std::string format_double(double v);

void write_row(std::ostream& out, const std::vector<double>& values);
void write_table(std::ostream& out, const Eigen::MatrixXd& m);

}  // namespace garma::cli
