#pragma once

// Subject strings accepted by the records, exponent and lemma2 commands:
//
//   golden                     span{(1, g)}
//   algebraic:<degree>         power line of a fixed algebraic number
//   rational:<v>;<v>;...       span of integer vectors, e.g. rational:1,2,3
//   span:<v>;<v>;...           span of real vectors
//   theta:<r>x<c>:<entries>    matrix, row-major comma list
//   random-theta:<r>x<c>       sampled with the configured seed and bound

#include <cstdint>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dioph/constructions.hpp"
#include "dioph/harness/config.hpp"
#include "dioph/subspace.hpp"

namespace dioph::harness {

struct Subject {
  std::string label;
  std::variant<Subspace, ThetaMatrix> value;

  bool is_subspace() const { return std::holds_alternative<Subspace>(value); }
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

inline std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_number<double>("subject", item));
  return out;
}

inline std::pair<int, int> parse_shape(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw ConfigError("subject: shape must look like <rows>x<cols>, got '" + s + "'");
  const int rows = parse_number<int>("subject", s.substr(0, x));
  const int cols = parse_number<int>("subject", s.substr(x + 1));
  if (rows < 1 || cols < 1) throw ConfigError("subject: shape must be positive");
  return {rows, cols};
}

inline Eigen::MatrixXd columns_from(const std::string& body) {
  const auto vectors = split(body, ';');
  std::vector<std::vector<double>> cols;
  for (const auto& v : vectors) cols.push_back(parse_reals(v));
  if (cols.empty() || cols.front().empty()) throw ConfigError("subject: no vectors given");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(cols.front().size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != cols.front().size()) throw ConfigError("subject: vectors of different lengths");
    for (std::size_t i = 0; i < cols[j].size(); ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
    }
  }
  return m;
}

}  // namespace detail

inline Subject parse_subject(const std::string& spec, const ExperimentConfig& cfg) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "golden") return {spec, golden_line()};
  if (head == "algebraic") return {spec, algebraic_power_line(detail::parse_number<int>("subject", body))};
  if (head == "rational") {
    const Eigen::MatrixXd m = detail::columns_from(body);
    std::vector<IntVector> gens;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      IntVector v;
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (m(i, j) != std::round(m(i, j))) throw ConfigError("subject: rational generators must be integers");
        v.push_back(static_cast<std::int64_t>(m(i, j)));
      }
      gens.push_back(std::move(v));
    }
    return {spec, rational_subspace(gens).space};
  }
  if (head == "span") return {spec, orthonormal_subspace(detail::columns_from(body))};
  if (head == "theta") {
    const auto second = body.find(':');
    if (second == std::string::npos) throw ConfigError("subject: theta needs <r>x<c>:<entries>");
    const auto [rows, cols] = detail::parse_shape(body.substr(0, second));
    const auto entries = detail::parse_reals(body.substr(second + 1));
    if (entries.size() != static_cast<std::size_t>(rows * cols)) {
      throw ConfigError("subject: theta needs " + std::to_string(rows * cols) + " entries");
    }
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = entries[static_cast<std::size_t>(i * cols + j)];
    return {spec, ThetaMatrix(std::move(m))};
  }
  if (head == "random-theta") {
    const auto [rows, cols] = detail::parse_shape(body);
    return {spec, sample_theta(rows, cols, cfg.theta_bound, cfg.seed)};
  }
  throw ConfigError("subject: unknown kind '" + head + "'");
}

}  // namespace dioph::harness
