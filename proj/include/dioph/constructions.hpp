#pragma once

// Test subjects: badly approximable lines, rational controls, random
// matrices and the nested A ⊃ B scenarios used by the verification harness.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dioph/errors.hpp"
#include "dioph/rng.hpp"
#include "dioph/subspace.hpp"

namespace dioph {

inline Subspace golden_line() {
  Eigen::MatrixXd v(2, 1);
  v << 1.0, (1.0 + std::sqrt(5.0)) / 2.0;
  return orthonormal_subspace(v);
}

/// Coefficients c_0..c_n (ascending powers) of the monic polynomial whose
/// real root > 1 generates the power line of the given degree.
inline std::vector<int> power_line_polynomial(int degree) {
  switch (degree) {
    case 2: return {-1, -1, 1};
    case 3: return {-1, -1, 0, 1};
    case 4: return {-1, 0, 0, -1, 1};
    case 5: return {-1, -1, 0, 0, 0, 1};
    case 6: return {-1, -1, 0, 0, 0, 0, 1};
    default:
      throw UnsupportedDegree("algebraic_power_line: degree " + std::to_string(degree) + " not in 2..6");
  }
}

/// The root in (1, 2) of power_line_polynomial(degree).
inline long double power_line_root(int degree) {
  const std::vector<int> c = power_line_polynomial(degree);
  auto eval = [&](long double x, long double& deriv) {
    long double p = 0, dp = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      dp = dp * x + p;
      p = p * x + *it;
    }
    deriv = dp;
    return p;
  };
  long double lo = 1, hi = 2, dummy = 0;
  for (int i = 0; i < 40; ++i) {
    const long double mid = (lo + hi) / 2;
    if (eval(mid, dummy) < 0) lo = mid;
    else hi = mid;
  }
  long double x = (lo + hi) / 2;
  for (int i = 0; i < 6; ++i) {
    long double d = 0;
    const long double p = eval(x, d);
    x -= p / d;
  }
  return x;
}

/// span{(1, r, r^2, ..., r^(degree-1))} in R^degree with r = power_line_root.
inline Subspace algebraic_power_line(int degree) {
  const long double r = power_line_root(degree);
  Eigen::MatrixXd v(degree, 1);
  long double p = 1;
  for (int i = 0; i < degree; ++i) {
    v(i, 0) = static_cast<double>(p);
    p *= r;
  }
  return orthonormal_subspace(v);
}

struct RationalSubspace {
  Subspace space;
  std::vector<IntVector> generators;
};

inline RationalSubspace rational_subspace(const std::vector<IntVector>& generators) {
  if (generators.empty()) throw DimensionError("rational_subspace: no generators");
  const std::size_t d = generators.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(generators.size()));
  for (std::size_t j = 0; j < generators.size(); ++j) {
    if (generators[j].size() != d) throw DimensionError("rational_subspace: mixed dimensions");
    for (std::size_t i = 0; i < d; ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(generators[j][i]);
    }
  }
  return {orthonormal_subspace(m), generators};
}

/// rows x cols matrix with entries bound * (2u - 1), u uniform from the
/// counter generator keyed by seed, counter = row-major index.
inline ThetaMatrix sample_theta(int rows, int cols, double bound, std::uint64_t seed) {
  if (!(bound > 0.0)) throw ShapeError("sample_theta: bound must be positive");
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const auto counter = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) + static_cast<std::uint64_t>(j);
      m(i, j) = bound * (2.0 * counter_uniform(seed, counter) - 1.0);
    }
  }
  return ThetaMatrix(std::move(m), bound);
}

enum class SubjectKind { kAlgebraic, kGoldenEmbedded, kRational };

inline const char* to_string(SubjectKind k) {
  switch (k) {
    case SubjectKind::kAlgebraic: return "algebraic";
    case SubjectKind::kGoldenEmbedded: return "golden_embedded";
    case SubjectKind::kRational: return "rational";
  }
  return "?";
}

/// B ⊂ A ⊂ R^d with dim B = b, dim A = a; samples are c-dimensional graphs
/// inside A.
struct ExperimentScenario {
  int d, a, b, c;
  SubjectKind kind;
  Subspace outer;
  Subspace inner;
  double theta_bound;
  std::uint64_t seed;
};

inline constexpr double kContainmentTolerance = 1e-9;

/// Rational scenarios use B = span{e_1..e_b} and A = span{e_1..e_a}. Other
/// kinds extend B to A with seeded random directions.
inline ExperimentScenario build_scenario(int d, int a, int b, int c, SubjectKind kind, std::uint64_t seed,
                                         double theta_bound = 1.0) {
  if (!(1 <= b && b <= a && a < d)) {
    throw DimensionError("build_scenario: need 1 <= b <= a < d, got d=" + std::to_string(d) +
                         " a=" + std::to_string(a) + " b=" + std::to_string(b));
  }
  if (!(1 <= c && c <= a - 1)) throw DimensionError("build_scenario: need 1 <= c <= a-1");
  if (kind != SubjectKind::kRational && b != 1) {
    throw DimensionError(std::string("build_scenario: ") + to_string(kind) + " subject is a line (b = 1)");
  }

  auto coordinate_span = [d](int k) {
    std::vector<IntVector> gens;
    for (int i = 0; i < k; ++i) {
      IntVector e(static_cast<std::size_t>(d), 0);
      e[static_cast<std::size_t>(i)] = 1;
      gens.push_back(std::move(e));
    }
    return rational_subspace(gens).space;
  };

  if (kind == SubjectKind::kRational) {
    return {d, a, b, c, kind, coordinate_span(a), coordinate_span(b), theta_bound, seed};
  }

  Eigen::MatrixXd line(d, 1);
  if (kind == SubjectKind::kAlgebraic) {
    line = algebraic_power_line(d).basis();
  } else {
    line.setZero();
    line(0, 0) = 1.0;
    line(1, 0) = (1.0 + std::sqrt(5.0)) / 2.0;
  }
  Subspace inner = orthonormal_subspace(line);

  Eigen::MatrixXd span(d, a);
  span.leftCols(b) = inner.basis();
  std::uint64_t counter = 0;
  for (int attempt = 0;; ++attempt) {
    for (int j = b; j < a; ++j) {
      for (int i = 0; i < d; ++i) span(i, j) = 2.0 * counter_uniform(seed, counter++) - 1.0;
      span.col(j).normalize();
    }
    try {
      Subspace outer = orthonormal_subspace(span);
      for (int j = 0; j < b; ++j) {
        if (distance_to_subspace(Eigen::VectorXd(inner.basis().col(j)), outer) > kContainmentTolerance) {
          throw RankDeficient("build_scenario: inner subspace escaped the outer one");
        }
      }
      return {d, a, b, c, kind, outer, inner, theta_bound, seed};
    } catch (const RankDeficient&) {
      if (attempt == 8) throw;
    }
  }
}

}  // namespace dioph
