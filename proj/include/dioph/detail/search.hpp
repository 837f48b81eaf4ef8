#pragma once

// Enumeration machinery shared by the measure-function evaluators.
//
// A search problem is a graph z_dep = Theta z_free with k free integer
// coordinates and n dependent rows. Free points are walked in the canonical
// half of the box [-r, r]^k (first nonzero coordinate positive). The last free
// coordinate is not looped over: a sorted table of fractional parts of
// theta(p, k-1) * s lets each prefix jump straight to the values of s that
// put dependent row p within the current window of an integer.

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dioph/subspace.hpp"

namespace dioph::detail {

using Real = long double;

inline constexpr Real kInfinity = std::numeric_limits<Real>::infinity();

inline Real frac01(Real v) {
  Real f = v - std::floor(v);
  return f >= 1.0L ? f - 1.0L : f;
}

inline Real distance_to_integer(Real v) { return std::fabs(v - std::nearbyint(v)); }

inline std::int64_t sup_norm(const IntVector& v) {
  std::int64_t m = 0;
  for (auto c : v) m = std::max(m, c < 0 ? -c : c);
  return m;
}

inline bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t c) { return c == 0; });
}

/// Flips v so that its first nonzero coordinate is positive.
inline void canonicalize_sign(IntVector& v) {
  for (auto c : v) {
    if (c > 0) return;
    if (c < 0) {
      for (auto& e : v) e = -e;
      return;
    }
  }
}

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  std::int64_t norm = 0;
  IntVector point;
};

// Total order used for witnesses: value, then lexicographic point.
inline bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  return a.point < b.point;
}

inline bool record_order(const Candidate& a, const Candidate& b) {
  if (a.norm != b.norm) return a.norm < b.norm;
  return better(a, b);
}

/// Keeps only the points that strictly improve on everything of smaller or
/// equal norm, starting from `below`. Output is sorted by norm.
inline std::vector<Candidate> sweep_records(std::vector<Candidate> pts, double below) {
  std::sort(pts.begin(), pts.end(), record_order);
  std::vector<Candidate> out;
  double current = below;
  for (std::size_t i = 0; i < pts.size();) {
    std::size_t j = i;
    while (j < pts.size() && pts[j].norm == pts[i].norm) ++j;
    if (pts[i].value < current) {
      current = pts[i].value;
      out.push_back(std::move(pts[i]));
    }
    i = j;
  }
  return out;
}

/// Sorted fractional parts {slope * s} for s in [-r, r].
class FractionTable {
 public:
  FractionTable(Real slope, std::int64_t r) {
    entries_.reserve(static_cast<std::size_t>(2 * r + 1));
    for (std::int64_t s = -r; s <= r; ++s) entries_.push_back({frac01(slope * s), s});
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      return a.frac != b.frac ? a.frac < b.frac : a.s < b.s;
    });
  }

  /// Visits s in increasing circular distance of {slope * s} from target,
  /// re-reading window() before each step and stopping once the nearest
  /// unvisited entry lies beyond it. visit(s) returns false to abort.
  template <class Window, class Visit>
  bool visit_near(Real target, Window&& window, Visit&& visit) const {
    const std::size_t n = entries_.size();
    if (n == 0) return true;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), target,
                               [](const Entry& e, Real t) { return e.frac < t; });
    std::size_t right = static_cast<std::size_t>(it - entries_.begin()) % n;
    std::size_t left = (right + n - 1) % n;
    for (std::size_t visited = 0; visited < n; ++visited) {
      Real dr = entries_[right].frac - target;
      if (dr < 0) dr += 1.0L;
      Real dl = target - entries_[left].frac;
      if (dl < 0) dl += 1.0L;
      if (std::min(dr, dl) > window()) break;
      if (dr <= dl) {
        if (!visit(entries_[right].s)) return false;
        right = (right + 1) % n;
      } else {
        if (!visit(entries_[left].s)) return false;
        left = (left + n - 1) % n;
      }
    }
    return true;
  }

 private:
  struct Entry {
    Real frac;
    std::int64_t s;
  };
  std::vector<Entry> entries_;
};

/// Row-major copy of Theta in extended precision plus the lookup row.
struct LinearGraph {
  int free_dim = 0;
  int rows = 0;
  std::vector<Real> coef;
  int pivot = 0;

  explicit LinearGraph(const Eigen::MatrixXd& theta)
      : free_dim(static_cast<int>(theta.cols())), rows(static_cast<int>(theta.rows())) {
    coef.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(free_dim));
    for (int j = 0; j < rows; ++j) {
      for (int i = 0; i < free_dim; ++i) coef[index(j, i)] = theta(j, i);
    }
    // The lookup row is the one most sensitive to the last free coordinate.
    Real best = -1;
    for (int j = 0; j < rows; ++j) {
      const Real mag = std::fabs(coef[index(j, free_dim - 1)]);
      if (mag > best) {
        best = mag;
        pivot = j;
      }
    }
  }

  std::size_t index(int j, int i) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(free_dim) + static_cast<std::size_t>(i);
  }
  Real operator()(int j, int i) const { return coef[index(j, i)]; }

  Real max_abs_row_sum() const {
    Real m = 0;
    for (int j = 0; j < rows; ++j) {
      Real s = 0;
      for (int i = 0; i < free_dim; ++i) s += std::fabs((*this)(j, i));
      m = std::max(m, s);
    }
    return m;
  }
};

/// Walks nonzero free points x in the canonical half of [-r, r]^k whose first
/// coordinate lies in [lo, hi] (ignored when k = 1) and whose pivot row is
/// within window() of an integer. Calls on_point(x, v) with v = Theta x.
/// Returns the number of nodes touched; a value above node_limit means the
/// walk stopped early.
template <class Window, class OnPoint>
std::int64_t enumerate_half(const LinearGraph& g, const FractionTable& table, std::int64_t r,
                            std::int64_t lo, std::int64_t hi, Window&& window, OnPoint&& on_point,
                            std::int64_t node_limit) {
  const int k = g.free_dim;
  const int n = g.rows;
  std::vector<std::int64_t> x(static_cast<std::size_t>(k), 0);
  std::vector<Real> s(static_cast<std::size_t>(n), 0);
  std::vector<Real> v(static_cast<std::size_t>(n), 0);
  std::int64_t nodes = 0;
  bool stopped = false;

  auto leaf = [&](bool all_zero) {
    ++nodes;
    for (int j = 0; j < n; ++j) {
      Real acc = 0;
      for (int i = 0; i + 1 < k; ++i) acc += g(j, i) * static_cast<Real>(x[static_cast<std::size_t>(i)]);
      s[static_cast<std::size_t>(j)] = acc;
    }
    const Real target = frac01(-s[static_cast<std::size_t>(g.pivot)]);
    const bool finished = table.visit_near(target, window, [&](std::int64_t last) {
      if (++nodes > node_limit) return false;
      if (all_zero && last <= 0) return true;
      x[static_cast<std::size_t>(k - 1)] = last;
      for (int j = 0; j < n; ++j) {
        v[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j)] + g(j, k - 1) * static_cast<Real>(last);
      }
      on_point(x.data(), v.data());
      return true;
    });
    if (!finished) stopped = true;
  };

  // Depth-first over prefix positions 0..k-2.
  auto descend = [&](auto&& self, int pos, bool all_zero) -> void {
    if (stopped) return;
    if (pos == k - 1) {
      leaf(all_zero);
      return;
    }
    std::int64_t from = all_zero ? 0 : -r;
    std::int64_t to = r;
    if (pos == 0) {
      from = std::max<std::int64_t>(from, lo);
      to = std::min(to, hi);
    }
    for (std::int64_t c = from; c <= to && !stopped; ++c) {
      x[static_cast<std::size_t>(pos)] = c;
      self(self, pos + 1, all_zero && c == 0);
      if (nodes > node_limit) stopped = true;
    }
    x[static_cast<std::size_t>(pos)] = 0;
  };
  descend(descend, 0, true);
  return nodes;
}

/// Runs f(chunk) for chunk in [0, count) on up to `threads` workers.
/// Exceptions propagate from the lowest failing chunk index.
template <class F>
void parallel_chunks(int threads, int count, F&& f) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min(threads, count);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline int resolve_parallelism(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace dioph::detail
