#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "holo/bargmann.hpp"
#include "holo/geometry.hpp"

namespace holo {

/// {n, sigma: row-major array, periods: array of numbers or null}
nlohmann::json chart_to_json(const FlatChart& chart);
FlatChart chart_from_json(const nlohmann::json& j);

/// {N, coeffs: [[re, im], ...]} ordered k = -N..N
nlohmann::json state_to_json(const HoloState& state);
HoloState state_from_json(const nlohmann::json& j);

nlohmann::json complex_to_json(cplx v);
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Quoted "re,im" CSV cell.
std::string csv_cell(cplx v);

/// Row-major CSV of a complex matrix with optional header row and row labels.
std::string matrix_to_csv(const Eigen::MatrixXcd& m, const std::vector<std::string>& header = {},
                          const std::vector<std::string>& row_labels = {});

/// Writes `content` to `path` through a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace holo
