#ifndef DADMM_METRICS_HPP
#define DADMM_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dadmm/errors.hpp"
#include "dadmm/problem.hpp"
#include "dadmm/state.hpp"

namespace dadmm {

struct MetricsRecord {
  std::size_t r = 0;
  double L = 0.0;  ///< augmented Lagrangian
  double G = 0.0;  ///< proximal gradient gap at the network average
  double D = 0.0;  ///< disagreement gap
  double grad_res = 0.0;
  double subgrad_res = 0.0;
  double feas_res = 0.0;
  std::size_t t_r = 0;
  std::size_t cumulative_comm = 0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

/// sum_i f_i(x_i) + <lambda_i, x_i - x0_i> + (beta/2)||x_i - x0_i||^2 + g(x0_i)/n.
/// +inf when some x0_i lies outside dom g.
inline double augmented_lagrangian(const AgentStates& states, const ProblemSpec& prob,
                                   double beta) {
  const double n = static_cast<double>(states.size());
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    const double g = prob.regularizer.value(s.x0);
    if (!std::isfinite(g)) return std::numeric_limits<double>::infinity();
    const Vector gap = s.x - s.x0;
    total += prob.locals[i].value(s.x) + s.lambda.dot(gap) + 0.5 * beta * gap.squaredNorm() + g / n;
  }
  return total;
}

/// ||xbar - prox_g(xbar - sum_i grad f_i(xbar))|| with unit prox parameter.
inline double prox_gradient_gap(const AgentStates& states, const ProblemSpec& prob) {
  const Vector xbar = mean_x(states);
  Vector grad = Vector::Zero(xbar.size());
  for (const auto& f : prob.locals) grad += f.gradient(xbar);
  return (xbar - prob.regularizer.prox(1.0, xbar - grad)).norm();
}

/// max_i ||x_i - xbar||.
inline double disagreement_gap(const AgentStates& states) {
  const Vector xbar = mean_x(states);
  double worst = 0.0;
  for (const auto& s : states) worst = std::max(worst, (s.x - xbar).norm());
  return worst;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "r,L,G,D,grad_res,subgrad_res,feas_res,t_r,cumulative_comm";

namespace detail {
inline std::string csv_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline void write_csv(std::ostream& out, const std::vector<MetricsRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& m : records) {
    out << m.r << ',' << detail::csv_real(m.L) << ',' << detail::csv_real(m.G) << ','
        << detail::csv_real(m.D) << ',' << detail::csv_real(m.grad_res) << ','
        << detail::csv_real(m.subgrad_res) << ',' << detail::csv_real(m.feas_res) << ','
        << m.t_r << ',' << m.cumulative_comm << '\n';
  }
}

inline void write_csv(const std::vector<MetricsRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_csv(out, records);
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::vector<MetricsRecord> read_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw IoError(origin + ": empty file, missing CSV header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw IoError(origin + ": column mismatch, expected header '" + std::string(kCsvHeader) + "'");

  std::vector<MetricsRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 9)
      throw IoError(origin + ": line " + std::to_string(lineno) + " has " +
                    std::to_string(cells.size()) + " columns, expected 9");
    auto real = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0')
        throw IoError(origin + ": line " + std::to_string(lineno) + ": bad number '" + s + "'");
      return v;
    };
    auto count = [&](const std::string& s) {
      char* end = nullptr;
      const auto v = std::strtoull(s.c_str(), &end, 10);
      if (end == s.c_str() || *end != '\0')
        throw IoError(origin + ": line " + std::to_string(lineno) + ": bad integer '" + s + "'");
      return static_cast<std::size_t>(v);
    };
    out.push_back(MetricsRecord{count(cells[0]), real(cells[1]), real(cells[2]), real(cells[3]),
                                real(cells[4]), real(cells[5]), real(cells[6]), count(cells[7]),
                                count(cells[8])});
  }
  return out;
}

inline std::vector<MetricsRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_csv(in, path);
}

}  // namespace dadmm

#endif  // DADMM_METRICS_HPP
