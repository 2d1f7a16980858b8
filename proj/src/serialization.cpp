#include "holo/serialization.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "holo/errors.hpp"

namespace holo {

using nlohmann::json;

json chart_to_json(const FlatChart& chart) {
  const int n = chart.dim();
  json sigma = json::array();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sigma.push_back(chart.metric()(i, j));
  json periods = json::array();
  for (const auto& p : chart.periods()) periods.push_back(p ? json(*p) : json(nullptr));
  return {{"n", n}, {"sigma", sigma}, {"periods", periods}};
}

FlatChart chart_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    if (n < 1) throw ValidationError("chart n must be positive");
    const auto& s = j.at("sigma");
    if (!s.is_array() || s.size() != static_cast<std::size_t>(n) * n)
      throw ValidationError("chart sigma must be a row-major array of n*n numbers");
    Eigen::MatrixXd sigma(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) sigma(i, k) = s.at(static_cast<std::size_t>(i * n + k)).get<double>();
    std::vector<Period> periods;
    for (const auto& p : j.at("periods")) periods.push_back(p.is_null() ? Period{} : Period{p.get<double>()});
    return make_chart(n, sigma, std::move(periods));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed chart JSON: ") + e.what());
  }
}

json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

json state_to_json(const HoloState& state) {
  json coeffs = json::array();
  for (Eigen::Index i = 0; i < state.coeffs.size(); ++i) coeffs.push_back(complex_to_json(state.coeffs[i]));
  return {{"N", state.N}, {"coeffs", coeffs}};
}

HoloState state_from_json(const json& j) {
  try {
    HoloState s;
    s.N = j.at("N").get<int>();
    if (s.N < 0) throw ValidationError("state N must be nonnegative");
    const auto& c = j.at("coeffs");
    if (!c.is_array() || c.size() != static_cast<std::size_t>(2 * s.N + 1))
      throw ValidationError("state coeffs must hold 2N+1 entries");
    s.coeffs.resize(2 * s.N + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_array() || c[i].size() != 2) throw ValidationError("coefficient must be [re, im]");
      s.coeffs[static_cast<Eigen::Index>(i)] = cplx(c[i][0].get<double>(), c[i][1].get<double>());
    }
    if (!s.coeffs.allFinite()) throw ValidationError("state has non-finite coefficients");
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed state JSON: ") + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_cell(cplx v) { return "\"" + format_double(v.real()) + "," + format_double(v.imag()) + "\""; }

std::string matrix_to_csv(const Eigen::MatrixXcd& m, const std::vector<std::string>& header,
                          const std::vector<std::string>& row_labels) {
  std::ostringstream os;
  if (!header.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    bool first = true;
    if (!row_labels.empty()) {
      os << row_labels.at(static_cast<std::size_t>(i));
      first = false;
    }
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (!first) os << ",";
      os << csv_cell(m(i, k));
      first = false;
    }
    os << "\n";
  }
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw ValidationError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValidationError("cannot move output into place at " + path + ": " + ec.message());
  }
}

}  // namespace holo
