#pragma once

// Finitely supported functions on T_q, radial profiles, height sequences and
// spherical means.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treewave/exact_scalar.hpp"
#include "treewave/tree.hpp"

namespace treewave {

/// A class of vertices on which a TreeFunction is constant.
///
/// depth == 0: the single vertex `anchor` (|anchor| <= core radius).
/// depth >= 1: every descendant of `anchor` (|anchor| == core radius) lying
/// `depth` levels below it.
struct Cell {
  VertexAddress anchor;
  int depth = 0;

  int level() const { return anchor.length() + depth; }
  VertexAddress representative() const { return anchor.extended_by_zeros(depth); }

  friend auto operator<=>(const Cell&, const Cell&) = default;
  friend bool operator==(const Cell&, const Cell&) = default;
};

inline BigInt power(int q, int e) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(e));
  return p;
}

/// Number of vertices in a cell.
inline BigInt cell_multiplicity(const Cell& c, int q) {
  if (c.depth == 0) return 1;
  return power(q, c.depth - 1) * child_count(c.anchor, q);
}

/// Calls visit(d, count) for each distance d occurring between x and the
/// members of `c`, with the number of members at that distance.
template <class Visit>
void for_each_cell_distance(const VertexAddress& x, const Cell& c, int q, Visit&& visit) {
  if (c.depth == 0) {
    visit(distance(x, c.anchor), BigInt(1));
    return;
  }
  const VertexAddress& p = c.anchor;
  const int k = c.depth;
  if (!x.has_prefix(p)) {
    visit(distance(x, p) + k, cell_multiplicity(c, q));
    return;
  }
  const int j = x.length() - p.length();
  if (j == 0) {
    visit(k, cell_multiplicity(c, q));
    return;
  }
  // members p.v with |v| = k; x = p.w with |w| = j; d = j + k - 2 lcp(v, w)
  const int b0 = child_count(p, q);
  const int shared = std::min(j, k);
  for (int l = 0; l < shared; ++l) {
    int branch = (l == 0) ? b0 - 1 : q - 1;
    if (branch > 0) visit(j + k - 2 * l, power(q, k - l - 1) * branch);
  }
  if (k <= j) {
    visit(j - k, BigInt(1));
  } else {
    visit(k - j, power(q, k - j));
  }
}

/// Finitely supported function on T_q.
///
/// Values on B(0, R) are stored per vertex; beyond R a value is stored per
/// Cell. Any finitely supported function is representable once R covers its
/// support; R grows on demand.
template <WaveScalar T>
class TreeFunction {
 public:
  using Scalar = T;

  explicit TreeFunction(int q, int core_radius = 0) : q_(q), core_radius_(core_radius) {
    require_valid_q(q);
    if (core_radius < 0) throw ParameterError("core radius must be nonnegative");
  }

  static TreeFunction delta(int q, const VertexAddress& x) {
    TreeFunction f(q, x.length());
    f.set(x, ScalarField<T>{q}.one());
    return f;
  }

  int q() const { return q_; }
  int core_radius() const { return core_radius_; }
  ScalarField<T> field() const { return ScalarField<T>{q_}; }
  const std::map<Cell, T>& cells() const { return cells_; }

  Cell cell_of(const VertexAddress& x) const {
    if (x.length() <= core_radius_) return Cell{x, 0};
    return Cell{x.prefix(core_radius_), x.length() - core_radius_};
  }

  BigInt multiplicity(const Cell& c) const { return cell_multiplicity(c, q_); }

  T at(const VertexAddress& x) const { return at(cell_of(x)); }

  T at(const Cell& c) const {
    auto it = cells_.find(c);
    return it == cells_.end() ? field().zero() : it->second;
  }

  /// Sets the value at a single vertex, refining the core when needed.
  void set(const VertexAddress& x, T value) {
    if (!x.is_valid_for(q_)) throw ParameterError("vertex '" + x.to_string() + "' invalid for q=" + std::to_string(q_));
    if (x.length() > core_radius_) *this = refined(x.length());
    set_cell(Cell{x, 0}, std::move(value));
  }

  void set_cell(const Cell& c, T value) {
    if (ScalarField<T>::is_zero(value)) {
      cells_.erase(c);
    } else {
      cells_.insert_or_assign(c, std::move(value));
    }
  }

  void add_to_cell(const Cell& c, const T& value) {
    auto it = cells_.find(c);
    if (it == cells_.end()) {
      set_cell(c, value);
      return;
    }
    it->second += value;
    if (ScalarField<T>::is_zero(it->second)) cells_.erase(it);
  }

  bool is_zero() const { return cells_.empty(); }

  /// Largest |x| with f(x) != 0, or -1 for the zero function.
  int support_radius() const {
    int r = -1;
    for (const auto& [c, v] : cells_) r = std::max(r, c.level());
    return r;
  }

  /// Same function with core radius R' >= R.
  TreeFunction refined(int radius) const {
    if (radius <= core_radius_) return *this;
    TreeFunction out(q_, radius);
    const int grow = radius - core_radius_;
    for (const auto& [c, v] : cells_) {
      if (c.depth == 0) {
        out.cells_.emplace(c, v);
      } else if (c.depth <= grow) {
        std::vector<VertexAddress> members;
        detail::descend(c.anchor, c.depth, q_, members);
        for (auto& m : members) out.cells_.emplace(Cell{std::move(m), 0}, v);
      } else {
        std::vector<VertexAddress> anchors;
        detail::descend(c.anchor, grow, q_, anchors);
        for (auto& a : anchors) out.cells_.emplace(Cell{std::move(a), c.depth - grow}, v);
      }
    }
    return out;
  }

  /// Every cell whose members have |x| <= max_level, in canonical order.
  std::vector<Cell> frame(int max_level) const {
    std::vector<Cell> out;
    if (max_level < 0) return out;
    Ball core(q_, std::min(core_radius_, max_level));
    for (auto& v : core.vertices()) {
      bool boundary = v.length() == core_radius_;
      out.push_back(Cell{v, 0});
      if (boundary) {
        for (int k = 1; core_radius_ + k <= max_level; ++k) out.push_back(Cell{v, k});
      }
    }
    return out;
  }

  /// Builds a function at core radius R by evaluating fn(representative, cell)
  /// on every cell of level <= max_level.
  template <class Fn>
  static TreeFunction tabulate(int q, int core_radius, int max_level, Fn&& fn) {
    TreeFunction out(q, core_radius);
    for (const Cell& c : out.frame(max_level)) out.set_cell(c, fn(c.representative(), c));
    return out;
  }

  TreeFunction& operator+=(const TreeFunction& o) { return combine(o, +1); }
  TreeFunction& operator-=(const TreeFunction& o) { return combine(o, -1); }
  TreeFunction& operator*=(const T& s) {
    if (ScalarField<T>::is_zero(s)) {
      cells_.clear();
      return *this;
    }
    for (auto& [c, v] : cells_) v *= s;
    return *this;
  }

  friend TreeFunction operator+(TreeFunction a, const TreeFunction& b) { return a += b; }
  friend TreeFunction operator-(TreeFunction a, const TreeFunction& b) { return a -= b; }
  friend TreeFunction operator*(TreeFunction a, const T& s) { return a *= s; }
  friend TreeFunction operator*(const T& s, TreeFunction a) { return a *= s; }
  TreeFunction operator-() const {
    TreeFunction r = *this;
    for (auto& [c, v] : r.cells_) v = -v;
    return r;
  }

  friend bool operator==(const TreeFunction& a, const TreeFunction& b) {
    if (a.q_ != b.q_) return false;
    int r = std::max(a.core_radius_, b.core_radius_);
    if (a.core_radius_ == r && b.core_radius_ == r) return a.cells_ == b.cells_;
    return a.refined(r).cells_ == b.refined(r).cells_;
  }

  /// Explicit (vertex, value) pairs, lexicographic. Throws TruncationError if
  /// the support has more than `limit` vertices.
  std::vector<std::pair<VertexAddress, T>> explicit_entries(std::size_t limit) const {
    BigInt total = 0;
    for (const auto& [c, v] : cells_) total += multiplicity(c);
    if (total > BigInt(static_cast<unsigned long>(limit))) {
      throw TruncationError("support has " + total.get_str() + " vertices, above the expansion limit " +
                            std::to_string(limit));
    }
    std::vector<std::pair<VertexAddress, T>> out;
    for (const auto& [c, v] : cells_) {
      if (c.depth == 0) {
        out.emplace_back(c.anchor, v);
      } else {
        std::vector<VertexAddress> members;
        detail::descend(c.anchor, c.depth, q_, members);
        for (auto& m : members) out.emplace_back(std::move(m), v);
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
  }

 private:
  TreeFunction& combine(const TreeFunction& o, int sign) {
    if (o.q_ != q_) throw ParameterError("tree functions over different q");
    if (o.core_radius_ > core_radius_) *this = refined(o.core_radius_);
    if (o.core_radius_ == core_radius_) return merge(o, sign);
    return merge(o.refined(core_radius_), sign);
  }

  TreeFunction& merge(const TreeFunction& o, int sign) {
    for (const auto& [c, v] : o.cells_) add_to_cell(c, sign > 0 ? v : -v);
    return *this;
  }

  int q_;
  int core_radius_;
  std::map<Cell, T> cells_;
};

/// Sum over all vertices of f(x) g(x).
template <WaveScalar T>
T inner(const TreeFunction<T>& f, const TreeFunction<T>& g) {
  if (f.q() != g.q()) throw ParameterError("inner product over different q");
  int r = std::max(f.core_radius(), g.core_radius());
  TreeFunction<T> a = f.refined(r);
  TreeFunction<T> b = g.refined(r);
  T s = a.field().zero();
  for (const auto& [c, v] : a.cells()) {
    auto it = b.cells().find(c);
    if (it == b.cells().end()) continue;
    s += a.field().from_count(a.multiplicity(c)) * v * it->second;
  }
  return s;
}

template <WaveScalar T>
T sum_of_squares(const TreeFunction<T>& f) {
  T s = f.field().zero();
  for (const auto& [c, v] : f.cells()) s += f.field().from_count(f.multiplicity(c)) * v * v;
  return s;
}

/// l1 norm, as a double.
template <WaveScalar T>
double l1_norm(const TreeFunction<T>& f) {
  double s = 0;
  for (const auto& [c, v] : f.cells()) s += f.multiplicity(c).get_d() * std::abs(to_double(v));
  return s;
}

/// Sum of f over S(x, n) (unbounded; callers check truncation).
template <WaveScalar T>
T sphere_sum(const TreeFunction<T>& f, const VertexAddress& x, int n) {
  T s = f.field().zero();
  const int lx = x.length();
  for (const auto& [c, v] : f.cells()) {
    int lc = c.level();
    if (lc - lx > n || lx - lc > n || lx + lc < n) continue;
    if (c.depth == 0) {
      if (distance(x, c.anchor) == n) s += v;
      continue;
    }
    for_each_cell_distance(x, c, f.q(), [&](int d, const BigInt& count) {
      if (d == n) s += f.field().from_count(count) * v;
    });
  }
  return s;
}

/// Sum of f(y) over d(x, y) <= n with n - d(x, y) even.
template <WaveScalar T>
T parity_ball_sum(const TreeFunction<T>& f, const VertexAddress& x, int n) {
  T s = f.field().zero();
  const int lx = x.length();
  for (const auto& [c, v] : f.cells()) {
    int lc = c.level();
    if (lc - lx > n || lx - lc > n) continue;
    if (c.depth == 0) {
      int d = distance(x, c.anchor);
      if (d <= n && (n - d) % 2 == 0) s += v;
      continue;
    }
    for_each_cell_distance(x, c, f.q(), [&](int d, const BigInt& count) {
      if (d <= n && (n - d) % 2 == 0) s += f.field().from_count(count) * v;
    });
  }
  return s;
}

/// f_x^#(n) = delta(n)^{-1} sum_{y in S(x,n)} f(y).
template <WaveScalar T>
T spherical_mean(const TreeFunction<T>& f, const VertexAddress& x, int n, const Ball& ball) {
  if (ball.q() != f.q()) throw ParameterError("ball and function over different q");
  if (!x.is_valid_for(f.q())) throw ParameterError("vertex '" + x.to_string() + "' invalid for q");
  ball.require(x.length() + n, "spherical mean S(" + x.to_string() + ", " + std::to_string(n) + ")");
  ball.require(f.support_radius(), "function support");
  return sphere_sum(f, x, n) / f.field().from_count(sphere_volume(f.q(), n));
}

namespace detail {

template <WaveScalar T>
class SparseSequence {
 public:
  explicit SparseSequence(int q) : q_(q) { require_valid_q(q); }

  int q() const { return q_; }
  ScalarField<T> field() const { return ScalarField<T>{q_}; }
  const std::map<int, T>& values() const { return values_; }

  T operator[](int i) const {
    auto it = values_.find(i);
    return it == values_.end() ? field().zero() : it->second;
  }

  bool empty() const { return values_.empty(); }
  int min_index() const { return values_.empty() ? 0 : values_.begin()->first; }
  int max_index() const { return values_.empty() ? -1 : values_.rbegin()->first; }

  friend bool operator==(const SparseSequence& a, const SparseSequence& b) {
    return a.q_ == b.q_ && a.values_ == b.values_;
  }

 protected:
  void put(int i, T v) {
    if (ScalarField<T>::is_zero(v)) {
      values_.erase(i);
    } else {
      values_.insert_or_assign(i, std::move(v));
    }
  }

 private:
  int q_;
  std::map<int, T> values_;
};

}  // namespace detail

/// Radial function x -> value(|x|), finitely supported on N.
template <WaveScalar T>
class RadialProfile : public detail::SparseSequence<T> {
 public:
  using detail::SparseSequence<T>::SparseSequence;

  void set(int n, T v) {
    if (n < 0) throw DomainError("radial profile index must be >= 0, got " + std::to_string(n));
    this->put(n, std::move(v));
  }

  friend bool operator==(const RadialProfile& a, const RadialProfile& b) {
    return static_cast<const detail::SparseSequence<T>&>(a) == b;
  }
};

/// Finitely supported function on Z (heights).
template <WaveScalar T>
class HeightSequence : public detail::SparseSequence<T> {
 public:
  using detail::SparseSequence<T>::SparseSequence;

  void set(int h, T v) { this->put(h, std::move(v)); }

  bool is_even() const {
    for (const auto& [h, v] : this->values()) {
      if (!((*this)[-h] == v)) return false;
    }
    return true;
  }

  friend bool operator==(const HeightSequence& a, const HeightSequence& b) {
    return static_cast<const detail::SparseSequence<T>&>(a) == b;
  }
};

/// The radial tree function x -> p(|x|).
template <WaveScalar T>
TreeFunction<T> radialize(const RadialProfile<T>& p) {
  TreeFunction<T> f(p.q(), 0);
  for (const auto& [n, v] : p.values()) f.set_cell(Cell{VertexAddress(), n}, v);
  return f;
}

/// Profile of a radial function; DomainError if f is not radial.
template <WaveScalar T>
RadialProfile<T> radial_profile(const TreeFunction<T>& f) {
  RadialProfile<T> p(f.q());
  std::map<int, T> seen;
  std::map<int, BigInt> covered;
  for (const auto& [c, v] : f.cells()) {
    int lvl = c.level();
    auto [it, fresh] = seen.emplace(lvl, v);
    if (!fresh && !(it->second == v)) throw DomainError("function is not radial at level " + std::to_string(lvl));
    covered[lvl] += f.multiplicity(c);
  }
  for (const auto& [lvl, v] : seen) {
    if (covered[lvl] != sphere_volume(f.q(), lvl)) {
      throw DomainError("function is not radial at level " + std::to_string(lvl));
    }
    p.set(lvl, v);
  }
  return p;
}

/// Spherical means n -> f_x^#(n) for 0 <= n <= max_n.
template <WaveScalar T>
RadialProfile<T> spherical_means(const TreeFunction<T>& f, const VertexAddress& x, int max_n, const Ball& ball) {
  RadialProfile<T> m(f.q());
  for (int n = 0; n <= max_n; ++n) m.set(n, spherical_mean(f, x, n, ball));
  return m;
}

}  // namespace treewave
