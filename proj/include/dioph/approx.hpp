#pragma once

// Irrationality measure functions of matrices and subspaces, their record
// (best approximation) tables, exhaustive reference scans, and lattice point
// counts near subspaces.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dioph/decay.hpp"
#include "dioph/detail/search.hpp"
#include "dioph/errors.hpp"
#include "dioph/subspace.hpp"

namespace dioph {

/// Sup-norm range of integer points admitted at parameter t:
/// strict is 1 <= |z| < t, inclusive is 1 <= |z| <= t.
enum class NormConvention { kStrictUpper, kInclusiveUpper };

inline const char* to_string(NormConvention c) {
  return c == NormConvention::kStrictUpper ? "strict" : "inclusive";
}

struct Evaluation {
  double value = std::numeric_limits<double>::infinity();
  IntVector witness;
};

struct SearchOptions {
  std::int64_t node_budget = 100'000'000;
  // Worker threads for record extraction; <= 0 means hardware concurrency.
  int parallelism = 1;
};

struct Record {
  std::int64_t t = 0;
  double value = 0.0;
  IntVector witness;
};

/// Jump points of a measure function up to t_max_scanned.
struct RecordTable {
  std::string subject;
  NormConvention convention = NormConvention::kInclusiveUpper;
  std::vector<Record> records;
  std::int64_t t_max_scanned = 0;
  // Set once a record of value exactly 0 is found; the function is 0 from
  // there on and the table is closed.
  bool contains_integer_points = false;

  /// Step function at t; +infinity before the first record.
  double value_at(std::int64_t t) const {
    if (t > t_max_scanned && !contains_integer_points) {
      throw std::out_of_range("RecordTable::value_at: t beyond scanned range");
    }
    double v = std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
      if (r.t > t) break;
      v = r.value;
    }
    return v;
  }
};

/// Thrown by record extraction when the node budget runs out; carries the
/// table as completed before the stage that overflowed.
class RecordBudgetExceeded : public BudgetExceeded {
 public:
  RecordBudgetExceeded(const std::string& what, RecordTable partial)
      : BudgetExceeded(what), partial_(std::move(partial)) {}
  const RecordTable& partial() const { return partial_; }

 private:
  RecordTable partial_;
};

/// max_j ||theta_j . x|| evaluated in extended precision. Values within
/// rounding of an integer are reported as exactly 0.
inline double theta_value(const ThetaMatrix& theta, const IntVector& x) {
  using detail::Real;
  Real worst = 0;
  for (int j = 0; j < theta.rows(); ++j) {
    Real acc = 0;
    Real mag = 0;
    for (int i = 0; i < theta.cols(); ++i) {
      const Real term = static_cast<Real>(theta(j, i)) * static_cast<Real>(x[static_cast<std::size_t>(i)]);
      acc += term;
      mag += std::fabs(term);
    }
    Real dist = detail::distance_to_integer(acc);
    if (dist <= 32 * LDBL_EPSILON * mag) dist = 0;
    worst = std::max(worst, dist);
  }
  return static_cast<double>(worst);
}

namespace detail {

inline Real search_margin(Real scale, std::int64_t r) {
  return 1e-12L + 1e-14L * scale * static_cast<Real>(r);
}

class ThetaProblem {
 public:
  explicit ThetaProblem(const ThetaMatrix& theta)
      : theta_(theta), graph_(theta.entries()), scale_(1 + graph_.max_abs_row_sum()) {}

  const LinearGraph& graph() const { return graph_; }
  Real margin(std::int64_t r) const { return search_margin(scale_, r); }
  Real lookup_window(Real threshold, std::int64_t r) const { return threshold + margin(r); }

  std::vector<Candidate> unit_candidates() const {
    std::vector<Candidate> out;
    for (int i = 0; i < theta_.cols(); ++i) {
      IntVector e(static_cast<std::size_t>(theta_.cols()), 0);
      e[static_cast<std::size_t>(i)] = 1;
      out.push_back({theta_value(theta_, e), 1, std::move(e)});
    }
    return out;
  }

  template <class Threshold, class Sink>
  auto handler(std::int64_t r, Threshold threshold, Sink sink) const {
    const int k = graph_.free_dim;
    const int n = graph_.rows;
    return [this, r, k, n, threshold, sink](const std::int64_t* x, const Real* v) mutable {
      const Real t = threshold() + margin(r);
      for (int j = 0; j < n; ++j) {
        if (distance_to_integer(v[j]) > t) return;
      }
      IntVector p(x, x + k);
      const double value = theta_value(theta_, p);
      const std::int64_t norm = sup_norm(p);
      sink(value, norm, std::move(p));
    };
  }

  // x = 0 is never admissible.
  template <class Handler>
  void origin(Handler&) const {}

  double value(const IntVector& x) const { return theta_value(theta_, x); }
  int box_dim() const { return theta_.cols(); }

 private:
  const ThetaMatrix& theta_;
  LinearGraph graph_;
  Real scale_;
};

class SubspaceProblem {
 public:
  explicit SubspaceProblem(const Subspace& s)
      : s_(s), coords_(s.graph()), graph_(coords_.theta.entries()) {
    if (s.dim() < 1) throw DimensionError("measure function needs a subspace of dimension >= 1");
    const Eigen::MatrixXd& theta = coords_.theta.entries();
    const Eigen::Index n = theta.rows();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(n, n) + theta * theta.transpose();
    Eigen::MatrixXd q = gram.inverse();
    q_.resize(static_cast<std::size_t>(n * n));
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) q_[static_cast<std::size_t>(a * n + b)] = q(a, b);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(theta);
    const double sigma = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    spread_ = std::sqrt(1.0L + static_cast<Real>(sigma) * sigma);
    scale_ = 1 + graph_.max_abs_row_sum();
  }

  const LinearGraph& graph() const { return graph_; }
  Real margin(std::int64_t r) const { return search_margin(scale_, r); }
  // |e|_inf <= |e|_2 <= spread * dist for e = Theta x - y.
  Real lookup_window(Real threshold, std::int64_t r) const { return spread_ * (threshold + margin(r)); }

  std::vector<Candidate> unit_candidates() const {
    std::vector<Candidate> out;
    for (int i = 0; i < s_.ambient_dim(); ++i) {
      IntVector e(static_cast<std::size_t>(s_.ambient_dim()), 0);
      e[static_cast<std::size_t>(i)] = 1;
      out.push_back({distance_to_subspace(e, s_), 1, std::move(e)});
    }
    return out;
  }

  template <class Threshold, class Sink>
  auto handler(std::int64_t r, Threshold threshold, Sink sink) const {
    const int k = graph_.free_dim;
    const int n = graph_.rows;
    return [this, r, k, n, threshold, sink, lo = std::vector<std::int64_t>(static_cast<std::size_t>(n)),
            hi = std::vector<std::int64_t>(static_cast<std::size_t>(n)),
            y = std::vector<std::int64_t>(static_cast<std::size_t>(n)),
            e = std::vector<Real>(static_cast<std::size_t>(n))](const std::int64_t* x, const Real* v) mutable {
      const Real t = threshold() + margin(r);
      const Real w = spread_ * t;
      const Real rr = static_cast<Real>(r);
      for (int j = 0; j < n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        if (!std::isfinite(w) || w > 2 * rr + 2) {
          lo[jj] = -r;
          hi[jj] = r;
        } else {
          lo[jj] = std::max<std::int64_t>(-r, static_cast<std::int64_t>(std::ceil(v[j] - w)));
          hi[jj] = std::min<std::int64_t>(r, static_cast<std::int64_t>(std::floor(v[j] + w)));
        }
        if (lo[jj] > hi[jj]) return;
        y[jj] = lo[jj];
      }
      while (true) {
        Real quick = 0;
        for (int a = 0; a < n; ++a) e[static_cast<std::size_t>(a)] = v[a] - static_cast<Real>(y[static_cast<std::size_t>(a)]);
        for (int a = 0; a < n; ++a) {
          Real row = 0;
          for (int b = 0; b < n; ++b) row += q_[static_cast<std::size_t>(a * n + b)] * e[static_cast<std::size_t>(b)];
          quick += e[static_cast<std::size_t>(a)] * row;
        }
        if (!(quick > t * t)) {
          IntVector z(static_cast<std::size_t>(k + n));
          for (int i = 0; i < k; ++i) z[static_cast<std::size_t>(coords_.free[static_cast<std::size_t>(i)])] = x[i];
          for (int j = 0; j < n; ++j) {
            z[static_cast<std::size_t>(coords_.dependent[static_cast<std::size_t>(j)])] = y[static_cast<std::size_t>(j)];
          }
          if (!is_zero(z)) {
            canonicalize_sign(z);
            const double value = distance_to_subspace(z, s_);
            const std::int64_t norm = sup_norm(z);
            sink(value, norm, std::move(z));
          }
        }
        int j = n - 1;
        while (j >= 0 && y[static_cast<std::size_t>(j)] == hi[static_cast<std::size_t>(j)]) {
          y[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
          --j;
        }
        if (j < 0) break;
        ++y[static_cast<std::size_t>(j)];
      }
    };
  }

  // Points with all free coordinates zero are not reached by the free-point
  // walk; feed them through the handler directly.
  template <class Handler>
  void origin(Handler& h) const {
    std::vector<std::int64_t> x(static_cast<std::size_t>(graph_.free_dim), 0);
    std::vector<Real> v(static_cast<std::size_t>(graph_.rows), 0);
    h(x.data(), v.data());
  }

  double value(const IntVector& z) const { return distance_to_subspace(z, s_); }
  int box_dim() const { return s_.ambient_dim(); }

 private:
  const Subspace& s_;
  GraphCoordinates coords_;
  LinearGraph graph_;
  std::vector<Real> q_;
  Real spread_ = 1;
  Real scale_ = 1;
};

inline FractionTable make_table(const LinearGraph& g, std::int64_t r) {
  return FractionTable(g(g.pivot, g.free_dim - 1), r);
}

/// Minimum of the measure over 1 <= |point| <= r with the witness tie-break.
template <class Problem>
Candidate direct_search(const Problem& p, std::int64_t r, std::int64_t budget) {
  Candidate best;
  for (auto& c : p.unit_candidates()) {
    if (better(c, best)) best = std::move(c);
  }
  auto threshold = [&best] { return static_cast<Real>(best.value); };
  auto sink = [&best](double value, std::int64_t norm, IntVector&& z) {
    Candidate c{value, norm, std::move(z)};
    if (better(c, best)) best = std::move(c);
  };
  auto h = p.handler(r, threshold, sink);
  p.origin(h);
  const FractionTable table = make_table(p.graph(), r);
  auto window = [&] { return p.lookup_window(static_cast<Real>(best.value), r); };
  const std::int64_t nodes = enumerate_half(p.graph(), table, r, 0, r, window, h, budget);
  if (nodes > budget) throw BudgetExceeded("direct search exceeded node budget at radius " + std::to_string(r));
  return best;
}

struct StageResult {
  std::vector<Candidate> records;
  std::int64_t nodes = 0;
  bool exhausted = false;
};

/// New records with r_prev < norm <= r, given that the measure equals tau at
/// radius r_prev (tau = +inf on the first stage).
template <class Problem>
StageResult collect_stage(const Problem& p, std::int64_t r, std::int64_t r_prev, double tau, int parallelism,
                          std::int64_t limit) {
  const FractionTable table = make_table(p.graph(), r);
  const int k = p.graph().free_dim;
  const std::int64_t chunk_count =
      k == 1 ? 1 : std::min<std::int64_t>(r + 1, 4 * static_cast<std::int64_t>(std::max(1, parallelism)));
  std::vector<std::vector<Candidate>> found(static_cast<std::size_t>(chunk_count));
  std::vector<std::int64_t> nodes(static_cast<std::size_t>(chunk_count), 0);

  parallel_chunks(parallelism, static_cast<int>(chunk_count), [&](int chunk) {
    auto& local = found[static_cast<std::size_t>(chunk)];
    auto threshold = [tau] { return static_cast<Real>(tau); };
    auto sink = [&local, tau, r, r_prev](double value, std::int64_t norm, IntVector&& z) {
      if (!(value < tau) || norm <= r_prev || norm > r) return;
      local.push_back({value, norm, std::move(z)});
      if (local.size() > 4096) local = sweep_records(std::move(local), tau);
    };
    auto h = p.handler(r, threshold, sink);
    if (chunk == 0) p.origin(h);
    const std::int64_t width = (r + 1 + chunk_count - 1) / chunk_count;
    const std::int64_t lo = chunk * width;
    const std::int64_t hi = std::min(r, lo + width - 1);
    if (k > 1 && lo > hi) return;
    auto window = [&] { return p.lookup_window(static_cast<Real>(tau), r); };
    nodes[static_cast<std::size_t>(chunk)] = enumerate_half(p.graph(), table, r, lo, hi, window, h, limit);
  });

  StageResult out;
  std::vector<Candidate> all;
  for (std::size_t c = 0; c < found.size(); ++c) {
    out.nodes += nodes[c];
    for (auto& cand : found[c]) all.push_back(std::move(cand));
  }
  out.exhausted = out.nodes > limit;
  out.records = sweep_records(std::move(all), tau);
  return out;
}

template <class Problem>
void extend_records(const Problem& p, RecordTable& table, std::int64_t t_max, const SearchOptions& options) {
  const bool strict = table.convention == NormConvention::kStrictUpper;
  auto norm_of = [strict](std::int64_t t) { return strict ? t - 1 : t; };
  auto time_of = [strict](std::int64_t n) { return strict ? n + 1 : n; };
  if (t_max < 2) throw EmptyRange("record_table: t_max must be at least 2");
  if (table.contains_integer_points) {
    table.t_max_scanned = std::max(table.t_max_scanned, t_max);
    return;
  }
  const std::int64_t target = norm_of(t_max);
  std::int64_t r_prev = std::max<std::int64_t>(0, norm_of(table.t_max_scanned));
  double tau = table.records.empty() ? std::numeric_limits<double>::infinity() : table.records.back().value;
  const int threads = resolve_parallelism(options.parallelism);
  std::int64_t used = 0;
  while (r_prev < target) {
    const std::int64_t r = r_prev == 0 ? 1 : std::min(2 * r_prev, target);
    StageResult stage = collect_stage(p, r, r_prev, tau, threads, options.node_budget - used);
    used += stage.nodes;
    if (stage.exhausted || used > options.node_budget) {
      throw RecordBudgetExceeded("record_table: node budget " + std::to_string(options.node_budget) +
                                     " exhausted while scanning radius " + std::to_string(r),
                                 table);
    }
    for (auto& c : stage.records) {
      tau = c.value;
      table.records.push_back({time_of(c.norm), c.value, std::move(c.point)});
    }
    r_prev = r;
    table.t_max_scanned = time_of(r);
    if (tau == 0.0) {
      table.contains_integer_points = true;
      table.t_max_scanned = std::max(table.t_max_scanned, t_max);
      break;
    }
  }
}

/// Per-norm exhaustive scan of the canonical half of [-t, t]^dim, folded
/// into the inclusive measure function for every radius 1..t.
template <class Problem>
std::vector<Evaluation> brute_profile(const Problem& p, std::int64_t t) {
  const int dim = p.box_dim();
  const double volume = std::pow(2.0 * static_cast<double>(t) + 1.0, dim);
  if (volume > 1e9) throw BudgetExceeded("brute force: box volume exceeds 1e9 nodes");
  std::vector<Candidate> per_norm(static_cast<std::size_t>(t + 1));
  IntVector z(static_cast<std::size_t>(dim), -t);
  while (true) {
    // Canonical half: first nonzero coordinate positive.
    bool canonical = false;
    for (auto c : z) {
      if (c != 0) {
        canonical = c > 0;
        break;
      }
    }
    if (canonical) {
      Candidate c{p.value(z), sup_norm(z), z};
      auto& slot = per_norm[static_cast<std::size_t>(c.norm)];
      if (better(c, slot)) slot = std::move(c);
    }
    int i = dim - 1;
    while (i >= 0 && z[static_cast<std::size_t>(i)] == t) {
      z[static_cast<std::size_t>(i)] = -t;
      --i;
    }
    if (i < 0) break;
    ++z[static_cast<std::size_t>(i)];
  }
  std::vector<Evaluation> out(static_cast<std::size_t>(t + 1));
  Candidate running;
  for (std::int64_t n = 1; n <= t; ++n) {
    if (better(per_norm[static_cast<std::size_t>(n)], running)) running = per_norm[static_cast<std::size_t>(n)];
    out[static_cast<std::size_t>(n)] = {running.value, running.point};
  }
  return out;
}

inline std::int64_t radius_for(std::int64_t t, NormConvention convention) {
  const std::int64_t r = convention == NormConvention::kStrictUpper ? t - 1 : t;
  if (r < 1) {
    throw EmptyRange("no nonzero integer point with sup-norm in the " + std::string(to_string(convention)) +
                     " range at t = " + std::to_string(t));
  }
  return r;
}

/// Calls f(z, dist) for every integer z with |z - center|_sup <= half_width
/// whose graph residual allows dist(z - center, S) <= dist_window; dist is the
/// reference distance of z - center. Callers apply the exact acceptance test.
template <class F>
void scan_near_subspace(const Subspace& s, const Eigen::VectorXd& center, double half_width, double dist_window,
                        std::int64_t budget, F&& f) {
  const GraphCoordinates& coords = s.graph();
  const Eigen::MatrixXd& theta = coords.theta.entries();
  const int d = s.ambient_dim();
  const int k = static_cast<int>(coords.free.size());
  const int n = static_cast<int>(coords.dependent.size());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(theta);
  const Real sigma = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  const Real spread = std::sqrt(1.0L + sigma * sigma);
  const Real scale = 1 + LinearGraph(theta).max_abs_row_sum();
  const Real w = spread * (static_cast<Real>(dist_window) + search_margin(scale, static_cast<std::int64_t>(half_width) + 1));

  auto lower = [&](int i) { return static_cast<std::int64_t>(std::ceil(center[i] - half_width)); };
  auto upper = [&](int i) { return static_cast<std::int64_t>(std::floor(center[i] + half_width)); };

  double volume = 1.0;
  for (int i = 0; i < k; ++i) {
    const int c = coords.free[static_cast<std::size_t>(i)];
    volume *= static_cast<double>(std::max<std::int64_t>(0, upper(c) - lower(c) + 1));
  }
  if (volume > static_cast<double>(budget)) throw BudgetExceeded("lattice scan exceeds node budget");
  if (volume == 0.0) return;

  IntVector z(static_cast<std::size_t>(d), 0);
  std::vector<std::int64_t> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
  Eigen::VectorXd offset(d);
  for (int i = 0; i < k; ++i) {
    const int c = coords.free[static_cast<std::size_t>(i)];
    z[static_cast<std::size_t>(c)] = lower(c);
  }
  while (true) {
    bool empty = false;
    for (int j = 0; j < n; ++j) {
      const int c = coords.dependent[static_cast<std::size_t>(j)];
      Real v = center[c];
      for (int i = 0; i < k; ++i) {
        const int fc = coords.free[static_cast<std::size_t>(i)];
        v += static_cast<Real>(theta(j, i)) * (static_cast<Real>(z[static_cast<std::size_t>(fc)]) - center[fc]);
      }
      lo[static_cast<std::size_t>(j)] = std::max(lower(c), static_cast<std::int64_t>(std::ceil(v - w)));
      hi[static_cast<std::size_t>(j)] = std::min(upper(c), static_cast<std::int64_t>(std::floor(v + w)));
      if (lo[static_cast<std::size_t>(j)] > hi[static_cast<std::size_t>(j)]) empty = true;
    }
    if (!empty) {
      for (int j = 0; j < n; ++j) {
        z[static_cast<std::size_t>(coords.dependent[static_cast<std::size_t>(j)])] = lo[static_cast<std::size_t>(j)];
      }
      while (true) {
        for (int i = 0; i < d; ++i) offset[i] = static_cast<double>(z[static_cast<std::size_t>(i)]) - center[i];
        f(static_cast<const IntVector&>(z), distance_to_subspace(offset, s));
        int j = n - 1;
        while (j >= 0) {
          auto& coord = z[static_cast<std::size_t>(coords.dependent[static_cast<std::size_t>(j)])];
          if (coord < hi[static_cast<std::size_t>(j)]) break;
          coord = lo[static_cast<std::size_t>(j)];
          --j;
        }
        if (j < 0) break;
        ++z[static_cast<std::size_t>(coords.dependent[static_cast<std::size_t>(j)])];
      }
    }
    int i = k - 1;
    while (i >= 0) {
      auto& coord = z[static_cast<std::size_t>(coords.free[static_cast<std::size_t>(i)])];
      if (coord < upper(coords.free[static_cast<std::size_t>(i)])) break;
      coord = lower(coords.free[static_cast<std::size_t>(i)]);
      --i;
    }
    if (i < 0) break;
    ++z[static_cast<std::size_t>(coords.free[static_cast<std::size_t>(i)])];
  }
}

}  // namespace detail

/// psi_Theta(t): min over integer x with 0 < |x| <= t of max_j ||theta_j . x||.
/// Ties go to the lexicographically smallest x with first nonzero entry positive.
inline Evaluation psi_theta(const ThetaMatrix& theta, std::int64_t t, const SearchOptions& options = {}) {
  if (t < 1) throw EmptyRange("psi_theta: t must be at least 1");
  detail::ThetaProblem problem(theta);
  auto best = detail::direct_search(problem, t, options.node_budget);
  return {best.value, std::move(best.point)};
}

/// psi_B(t): min over nonzero integer z in the convention's sup-norm range of
/// the Euclidean distance from z to B. Same tie-break as psi_theta.
inline Evaluation psi_subspace(const Subspace& b, std::int64_t t,
                               NormConvention convention = NormConvention::kInclusiveUpper,
                               const SearchOptions& options = {}) {
  const std::int64_t r = detail::radius_for(t, convention);
  detail::SubspaceProblem problem(b);
  auto best = detail::direct_search(problem, r, options.node_budget);
  return {best.value, std::move(best.point)};
}

/// Continues a record table up to t_max, doubling the scan radius per stage.
inline void extend_record_table(RecordTable& table, const ThetaMatrix& theta, std::int64_t t_max,
                                const SearchOptions& options = {}) {
  detail::ThetaProblem problem(theta);
  detail::extend_records(problem, table, t_max, options);
}

inline void extend_record_table(RecordTable& table, const Subspace& b, std::int64_t t_max,
                                const SearchOptions& options = {}) {
  detail::SubspaceProblem problem(b);
  detail::extend_records(problem, table, t_max, options);
}

inline RecordTable record_table(const ThetaMatrix& theta, std::int64_t t_max,
                                NormConvention convention = NormConvention::kInclusiveUpper,
                                const SearchOptions& options = {}, std::string subject = "theta") {
  RecordTable table;
  table.subject = std::move(subject);
  table.convention = convention;
  extend_record_table(table, theta, t_max, options);
  return table;
}

inline RecordTable record_table(const Subspace& b, std::int64_t t_max,
                                NormConvention convention = NormConvention::kInclusiveUpper,
                                const SearchOptions& options = {}, std::string subject = "subspace") {
  RecordTable table;
  table.subject = std::move(subject);
  table.convention = convention;
  extend_record_table(table, b, t_max, options);
  return table;
}

/// Exhaustive reference values of the inclusive measure function for every
/// t in 1..t_max (index 0 unused). No pruning.
inline std::vector<Evaluation> brute_force_profile(const ThetaMatrix& theta, std::int64_t t_max) {
  return detail::brute_profile(detail::ThetaProblem(theta), t_max);
}

inline std::vector<Evaluation> brute_force_profile(const Subspace& b, std::int64_t t_max) {
  return detail::brute_profile(detail::SubspaceProblem(b), t_max);
}

inline Evaluation brute_force_psi(const ThetaMatrix& theta, std::int64_t t,
                                  NormConvention convention = NormConvention::kInclusiveUpper) {
  const std::int64_t r = detail::radius_for(t, convention);
  return brute_force_profile(theta, r)[static_cast<std::size_t>(r)];
}

inline Evaluation brute_force_psi(const Subspace& b, std::int64_t t,
                                  NormConvention convention = NormConvention::kInclusiveUpper) {
  const std::int64_t r = detail::radius_for(t, convention);
  return brute_force_profile(b, r)[static_cast<std::size_t>(r)];
}

/// K_T: integer points of sup-norm exactly T within phi(T) of A.
inline std::int64_t count_near_shell(const Subspace& a, const DecayFunction& phi, std::int64_t t,
                                     const SearchOptions& options = {}) {
  if (t < 1) throw EmptyRange("count_near_shell: T must be at least 1");
  const double bound = phi(static_cast<double>(t));
  std::int64_t count = 0;
  detail::scan_near_subspace(a, Eigen::VectorXd::Zero(a.ambient_dim()), static_cast<double>(t), bound,
                             options.node_budget, [&](const IntVector& z, double dist) {
                               if (detail::sup_norm(z) == t && dist <= bound) ++count;
                             });
  return count;
}

/// H_T: integer points with T/2 < |z| <= T within phi(|z|) of A.
inline std::int64_t count_near_annulus(const Subspace& a, const DecayFunction& phi, std::int64_t t,
                                       const SearchOptions& options = {}) {
  if (t < 1) throw EmptyRange("count_near_annulus: T must be at least 1");
  double widest = 0.0;
  for (std::int64_t n = t / 2 + 1; n <= t; ++n) widest = std::max(widest, phi(static_cast<double>(n)));
  std::int64_t count = 0;
  detail::scan_near_subspace(a, Eigen::VectorXd::Zero(a.ambient_dim()), static_cast<double>(t), widest,
                             options.node_budget, [&](const IntVector& z, double dist) {
                               const std::int64_t n = detail::sup_norm(z);
                               if (2 * n > t && n <= t && dist <= phi(static_cast<double>(n))) ++count;
                             });
  return count;
}

/// Integer points of scale * Omega_T + shift, where Omega_T is the set of
/// |w| <= T within psi(T) of B. Sorted lexicographically.
inline std::vector<IntVector> omega_lattice_points(const Subspace& b, const DecayFunction& psi, double t,
                                                   const Eigen::VectorXd& shift, double scale,
                                                   const SearchOptions& options = {}) {
  if (!(t >= 1.0)) throw EmptyRange("omega_lattice_points: T must be at least 1");
  if (shift.size() != b.ambient_dim()) throw DimensionError("omega_lattice_points: shift dimension mismatch");
  const double half_width = scale * t;
  const double bound = scale * psi(t);
  std::vector<IntVector> out;
  detail::scan_near_subspace(b, shift, half_width, bound, options.node_budget,
                             [&](const IntVector& z, double dist) {
                               double sup = 0.0;
                               for (std::size_t i = 0; i < z.size(); ++i) {
                                 sup = std::max(sup, std::fabs(static_cast<double>(z[i]) -
                                                               shift[static_cast<Eigen::Index>(i)]));
                               }
                               if (sup <= half_width && dist <= bound) out.push_back(z);
                             });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dioph
