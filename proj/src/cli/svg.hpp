// Static SVG renderings of generated series, intensities and test results.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "garma/spectral.hpp"

namespace garma::cli {

/// One polyline per row over time indices 1..m, with the points underneath.
std::string series_svg(const Eigen::MatrixXd& series);

/// Stem plot per intensity vector, stems labelled "Freq[k/n]".
std::string intensity_svg(const std::vector<IntensityVector>& rows);

/// Intensity stems on the left, histogram of the simulated null maxima on
/// the right; the observed maximum is drawn in red in both panels.
std::string spectrum_test_svg(const SpectrumTestResult& result);

}  // namespace garma::cli
