#pragma once

// Linear subspaces of R^d held as orthonormal bases, plus the graph
// parametrization {(x, Theta x)} over a coordinate subset.

#include <Eigen/Dense>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dioph/errors.hpp"

namespace dioph {

using IntVector = std::vector<std::int64_t>;

/// Real matrix together with a bound R on the absolute value of its entries.
class ThetaMatrix {
 public:
  ThetaMatrix() = default;

  ThetaMatrix(Eigen::MatrixXd entries, double entry_bound)
      : entries_(std::move(entries)), entry_bound_(entry_bound) {
    if (!(entry_bound_ > 0.0)) throw ShapeError("ThetaMatrix: entry bound must be positive");
    if (max_abs_entry() > entry_bound_) {
      throw ShapeError("ThetaMatrix: entry exceeds bound " + std::to_string(entry_bound_));
    }
  }

  /// Bound defaults to max(1, max |theta_ij|).
  explicit ThetaMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    entry_bound_ = std::max(1.0, max_abs_entry());
  }

  int rows() const { return static_cast<int>(entries_.rows()); }
  int cols() const { return static_cast<int>(entries_.cols()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double entry_bound() const { return entry_bound_; }

  double max_abs_entry() const {
    return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff();
  }

  /// Largest row sum of absolute values.
  double max_abs_row_sum() const {
    return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().rowwise().sum().maxCoeff();
  }

 private:
  Eigen::MatrixXd entries_;
  double entry_bound_ = 1.0;
};

/// A k-dimensional subspace written as the graph z_dependent = theta * z_free.
/// Indices are 0-based ambient coordinates, each list ascending.
struct GraphCoordinates {
  std::vector<int> free;
  std::vector<int> dependent;
  ThetaMatrix theta;
};

namespace detail {

inline GraphCoordinates best_graph_coordinates(const Eigen::MatrixXd& basis);

}  // namespace detail

/// Immutable proper subspace of R^d. Copies share storage.
class Subspace {
 public:
  int ambient_dim() const { return static_cast<int>(impl_->basis.rows()); }
  int dim() const { return static_cast<int>(impl_->basis.cols()); }

  /// d x k, orthonormal columns.
  const Eigen::MatrixXd& basis() const { return impl_->basis; }
  /// d x d orthogonal projector onto the subspace.
  const Eigen::MatrixXd& projector() const { return impl_->projector; }
  /// d x (d-k), orthonormal basis of the orthogonal complement.
  const Eigen::MatrixXd& complement() const { return impl_->complement; }
  /// Best-conditioned graph parametrization, computed once at construction.
  const GraphCoordinates& graph() const { return impl_->graph; }

 private:
  struct Impl {
    Eigen::MatrixXd basis;
    Eigen::MatrixXd complement;
    Eigen::MatrixXd projector;
    GraphCoordinates graph;
  };

  explicit Subspace(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  friend Subspace orthonormal_subspace(const Eigen::MatrixXd& columns);

  std::shared_ptr<const Impl> impl_;
};

inline constexpr double kRankThreshold = 1e-10;

/// Orthonormalizes the columns of `columns` (d rows, one spanning vector per
/// column) with column-pivoted Householder QR. Rank is decided at
/// kRankThreshold times the largest column norm.
inline Subspace orthonormal_subspace(const Eigen::MatrixXd& columns) {
  const Eigen::Index d = columns.rows();
  const Eigen::Index count = columns.cols();
  if (d < 1) throw DimensionError("orthonormal_subspace: ambient dimension must be positive");
  if (count >= d) {
    throw DimensionError("orthonormal_subspace: " + std::to_string(count) +
                         " vectors do not span a proper subspace of R^" + std::to_string(d));
  }
  auto impl = std::make_shared<Subspace::Impl>();
  if (count == 0) {
    impl->basis = Eigen::MatrixXd(d, 0);
    impl->complement = Eigen::MatrixXd::Identity(d, d);
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(columns);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < count) {
      throw RankDeficient("orthonormal_subspace: numerical rank " + std::to_string(qr.rank()) +
                          " < " + std::to_string(count));
    }
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    impl->basis = q.leftCols(count);
    impl->complement = q.rightCols(d - count);
  }
  impl->projector = impl->basis * impl->basis.transpose();
  impl->graph = detail::best_graph_coordinates(impl->basis);
  return Subspace(std::move(impl));
}

inline Subspace orthonormal_subspace(const std::vector<Eigen::VectorXd>& vectors) {
  if (vectors.empty()) throw DimensionError("orthonormal_subspace: no spanning vectors");
  Eigen::MatrixXd m(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != m.rows()) throw DimensionError("orthonormal_subspace: mixed dimensions");
    m.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return orthonormal_subspace(m);
}

namespace detail {

// Distances at or below this multiple of machine epsilon times |z| are
// indistinguishable from zero given a double-precision basis.
inline constexpr double kZeroFloorUlps = 32.0;

template <class Vec>
double complement_distance(const Vec& z, const Subspace& s) {
  const Eigen::MatrixXd& n = s.complement();
  long double total = 0.0L;
  long double norm2 = 0.0L;
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    const long double zi = static_cast<long double>(z[static_cast<std::size_t>(i)]);
    norm2 += zi * zi;
  }
  for (Eigen::Index j = 0; j < n.cols(); ++j) {
    long double dot = 0.0L;
    for (Eigen::Index i = 0; i < n.rows(); ++i) {
      dot += static_cast<long double>(n(i, j)) * static_cast<long double>(z[static_cast<std::size_t>(i)]);
    }
    total += dot * dot;
  }
  const long double dist = std::sqrt(total);
  if (dist <= kZeroFloorUlps * DBL_EPSILON * std::sqrt(norm2)) return 0.0;
  return static_cast<double>(dist);
}

}  // namespace detail

/// Euclidean distance from z to S, i.e. |(I - P) z|, evaluated as |N^T z| for
/// the orthonormal complement N with extended-precision accumulation.
inline double distance_to_subspace(const Eigen::VectorXd& z, const Subspace& s) {
  if (z.size() != s.ambient_dim()) throw DimensionError("distance_to_subspace: dimension mismatch");
  return detail::complement_distance(z, s);
}

/// Integer-point overload. Every search routine scores candidates with this
/// function, so equal inputs give bitwise equal values across code paths.
inline double distance_to_subspace(const IntVector& z, const Subspace& s) {
  if (static_cast<int>(z.size()) != s.ambient_dim()) {
    throw DimensionError("distance_to_subspace: dimension mismatch");
  }
  return detail::complement_distance(z, s);
}

/// The c-dimensional subspace {(x, Theta x)} of an a-dimensional ambient
/// subspace, written in the ambient's basis and embedded in R^d.
inline Subspace graph_subspace(const ThetaMatrix& theta, const Subspace& ambient) {
  const int a = ambient.dim();
  const int c = theta.cols();
  if (c < 1 || theta.rows() != a - c) {
    throw ShapeError("graph_subspace: theta is " + std::to_string(theta.rows()) + "x" +
                     std::to_string(c) + ", ambient dimension " + std::to_string(a));
  }
  Eigen::MatrixXd local(a, c);
  local.topRows(c) = Eigen::MatrixXd::Identity(c, c);
  local.bottomRows(a - c) = theta.entries();
  return orthonormal_subspace(Eigen::MatrixXd(ambient.basis() * local));
}

/// Graph over the first c coordinates of R^d.
inline Subspace graph_subspace(const ThetaMatrix& theta, int ambient_dim) {
  const int c = theta.cols();
  if (c < 1 || theta.rows() != ambient_dim - c) {
    throw ShapeError("graph_subspace: theta is " + std::to_string(theta.rows()) + "x" +
                     std::to_string(c) + ", ambient R^" + std::to_string(ambient_dim));
  }
  Eigen::MatrixXd cols(ambient_dim, c);
  cols.topRows(c) = Eigen::MatrixXd::Identity(c, c);
  cols.bottomRows(ambient_dim - c) = theta.entries();
  return orthonormal_subspace(cols);
}

/// Coordinate subset over which S is a graph, chosen to maximize the
/// smallest singular value of the k x k restriction (first subset in
/// lexicographic order wins ties).
inline GraphCoordinates select_graph_coordinates(const Subspace& s) { return s.graph(); }

/// Largest principal angle between two subspaces of equal dimension.
inline double max_principal_angle(const Subspace& lhs, const Subspace& rhs) {
  if (lhs.ambient_dim() != rhs.ambient_dim() || lhs.dim() != rhs.dim()) {
    throw DimensionError("max_principal_angle: subspaces differ in shape");
  }
  if (lhs.dim() == 0) return 0.0;
  Eigen::MatrixXd residual = lhs.basis() - rhs.projector() * lhs.basis();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
  return std::asin(std::min(1.0, svd.singularValues()(0)));
}

namespace detail {

inline GraphCoordinates best_graph_coordinates(const Eigen::MatrixXd& basis) {
  const int d = static_cast<int>(basis.rows());
  const int k = static_cast<int>(basis.cols());
  GraphCoordinates out;
  if (k == 0) {
    out.dependent.resize(static_cast<std::size_t>(d));
    std::iota(out.dependent.begin(), out.dependent.end(), 0);
    out.theta = ThetaMatrix(Eigen::MatrixXd(d, 0));
    return out;
  }

  // Lexicographic walk over k-subsets of {0..d-1}.
  std::vector<int> subset(static_cast<std::size_t>(k));
  std::iota(subset.begin(), subset.end(), 0);
  std::vector<int> best_subset;
  double best_sigma = -1.0;
  while (true) {
    Eigen::MatrixXd restricted(k, k);
    for (int r = 0; r < k; ++r) restricted.row(r) = basis.row(subset[static_cast<std::size_t>(r)]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted);
    const double sigma = svd.singularValues()(k - 1);
    if (sigma > best_sigma) {
      best_sigma = sigma;
      best_subset = subset;
    }
    int pos = k - 1;
    while (pos >= 0 && subset[static_cast<std::size_t>(pos)] == d - k + pos) --pos;
    if (pos < 0) break;
    ++subset[static_cast<std::size_t>(pos)];
    for (int r = pos + 1; r < k; ++r) {
      subset[static_cast<std::size_t>(r)] = subset[static_cast<std::size_t>(r - 1)] + 1;
    }
  }

  out.free = best_subset;
  for (int i = 0; i < d; ++i) {
    if (!std::binary_search(out.free.begin(), out.free.end(), i)) out.dependent.push_back(i);
  }
  Eigen::MatrixXd free_rows(k, k);
  Eigen::MatrixXd dep_rows(d - k, k);
  for (int r = 0; r < k; ++r) free_rows.row(r) = basis.row(out.free[static_cast<std::size_t>(r)]);
  for (int r = 0; r < d - k; ++r) dep_rows.row(r) = basis.row(out.dependent[static_cast<std::size_t>(r)]);
  // z_dep = B_dep u and z_free = B_free u, so z_dep = B_dep B_free^{-1} z_free.
  Eigen::MatrixXd theta =
      free_rows.transpose().partialPivLu().solve(dep_rows.transpose()).transpose();
  out.theta = ThetaMatrix(std::move(theta));
  return out;
}

}  // namespace detail

}  // namespace dioph
