#pragma once

// Closed-form propagators for the shifted wave equation
//
//   gamma L^Z_n u(x,n) = (L^T_x - 1 + gamma) u(x,n),
//   u(x,0) = f(x),  (u(x,1) - u(x,-1)) / 2 = g(x),
//
// the leapfrog recurrence it is equivalent to, and the Asgeirsson field
// U(x,y) = q^{h(y)/2} u(x, h(y)).

#include <map>
#include <string>
#include <utility>

#include "treewave/laplacians.hpp"
#include "treewave/tree_function.hpp"

namespace treewave {

/// M_n f(x) = q^{-n/2} sum_{d(y,x) <= n, n - d(y,x) even} f(y); M_{-1} = 0.
template <WaveScalar T>
TreeFunction<T> m_operator(int n, const TreeFunction<T>& f, const Ball& ball) {
  if (n < -1) throw DomainError("M_n is defined for n >= -1, got " + std::to_string(n));
  if (n == -1 || f.is_zero()) return TreeFunction<T>(f.q(), f.core_radius());
  if (n == 0) return f;
  detail::require_in(f, ball, n, "M_" + std::to_string(n));
  const T scale = f.field().pow_sqrt_q(-n);
  return TreeFunction<T>::tabulate(f.q(), f.core_radius(), f.support_radius() + n,
                                   [&](const VertexAddress& x, const Cell&) {
                                     return scale * parity_ball_sum(f, x, n);
                                   });
}

/// C_n = (M_{|n|} - M_{|n|-2}) / 2, with C_0 = identity.
template <WaveScalar T>
TreeFunction<T> cosine_propagator(int n, const TreeFunction<T>& f, const Ball& ball) {
  const int a = n < 0 ? -n : n;
  if (a == 0) return f;
  auto k = f.field();
  return (m_operator(a, f, ball) - m_operator(a - 2, f, ball)) * (k.one() / k.from_int(2));
}

/// S_n = sign(n) M_{|n|-1}, with S_0 = 0.
template <WaveScalar T>
TreeFunction<T> sine_propagator(int n, const TreeFunction<T>& g, const Ball& ball) {
  if (n == 0) return TreeFunction<T>(g.q(), g.core_radius());
  const int a = n < 0 ? -n : n;
  TreeFunction<T> out = m_operator(a - 1, g, ball);
  return n > 0 ? out : -out;
}

/// u(., n) = C_n f + S_n g.
template <WaveScalar T>
TreeFunction<T> propagate(int n, const TreeFunction<T>& f, const TreeFunction<T>& g, const Ball& ball) {
  return cosine_propagator(n, f, ball) + sine_propagator(n, g, ball);
}

/// u(., n+1) = q^{-1/2} sum_{y in S(., 1)} u(y, n) - u(., n-1).
template <WaveScalar T>
TreeFunction<T> step_recurrence(const TreeFunction<T>& u_prev, const TreeFunction<T>& u_curr, const Ball& ball) {
  auto k = u_curr.field();
  if (u_curr.is_zero()) return -u_prev;
  return neighbor_sum(u_curr, ball) * (k.one() / k.sqrt_q()) - u_prev;
}

enum class SolverMode { closed_form, recurrence };

inline std::string_view to_string(SolverMode m) {
  return m == SolverMode::closed_form ? "closed" : "recurrence";
}

/// Largest |x| in the support of f or g (0 when both vanish).
template <WaveScalar T>
int data_radius(const TreeFunction<T>& f, const TreeFunction<T>& g) {
  return std::max({0, f.support_radius(), g.support_radius()});
}

template <WaveScalar T>
class WaveTrajectory {
 public:
  WaveTrajectory(TreeFunction<T> f, TreeFunction<T> g, SolverMode mode)
      : f_(std::move(f)), g_(std::move(g)), mode_(mode) {
    if (f_.q() != g_.q()) throw ParameterError("initial data over different q");
  }

  int q() const { return f_.q(); }
  const TreeFunction<T>& f() const { return f_; }
  const TreeFunction<T>& g() const { return g_; }
  SolverMode mode() const { return mode_; }
  int data_radius() const { return treewave::data_radius(f_, g_); }
  const std::map<int, TreeFunction<T>>& snapshots() const { return snapshots_; }

  bool has(int n) const { return snapshots_.contains(n); }
  int n_min() const { return snapshots_.empty() ? 0 : snapshots_.begin()->first; }
  int n_max() const { return snapshots_.empty() ? -1 : snapshots_.rbegin()->first; }

  const TreeFunction<T>& at(int n) const {
    auto it = snapshots_.find(n);
    if (it == snapshots_.end()) {
      throw TruncationError("snapshot n=" + std::to_string(n) + " outside the solved range");
    }
    return it->second;
  }

  void put(int n, TreeFunction<T> u) { snapshots_.insert_or_assign(n, std::move(u)); }

 private:
  TreeFunction<T> f_;
  TreeFunction<T> g_;
  SolverMode mode_;
  std::map<int, TreeFunction<T>> snapshots_;
};

/// Solves for n_min <= n <= n_max (n_min <= 0 <= n_max).
template <WaveScalar T>
WaveTrajectory<T> solve(const TreeFunction<T>& f, const TreeFunction<T>& g, int n_min, int n_max, SolverMode mode,
                        const Ball& ball) {
  if (n_min > 0 || n_max < 0) throw DomainError("solve range must contain n = 0");
  WaveTrajectory<T> traj(f, g, mode);
  const int radius = traj.data_radius();
  for (int n = n_min; n <= n_max; ++n) {
    int need = (n < 0 ? -n : n) + radius;
    if (need > ball.radius()) {
      throw TruncationError("snapshot n=" + std::to_string(n) + " needs radius " + std::to_string(need) +
                            " but the truncation ball has radius " + std::to_string(ball.radius()));
    }
  }
  if (mode == SolverMode::closed_form) {
    for (int n = n_min; n <= n_max; ++n) traj.put(n, propagate(n, f, g, ball));
    return traj;
  }
  TreeFunction<T> c1 = cosine_propagator(1, f, ball);
  std::map<int, TreeFunction<T>> seq;
  seq.emplace(0, f);
  seq.emplace(1, c1 + g);
  seq.emplace(-1, c1 - g);
  for (int n = 1; n < n_max; ++n) seq.insert_or_assign(n + 1, step_recurrence(seq.at(n - 1), seq.at(n), ball));
  for (int n = -1; n > n_min; --n) seq.insert_or_assign(n - 1, step_recurrence(seq.at(n + 1), seq.at(n), ball));
  for (auto& [n, u] : seq) {
    if (n >= n_min && n <= n_max) traj.put(n, std::move(u));
  }
  return traj;
}

/// U(x, y) = q^{h(y)/2} u(x, h(y)), which satisfies L^T_x U = L^T_y U.
template <WaveScalar T>
class AsgeirssonField {
 public:
  AsgeirssonField(WaveTrajectory<T> u, Ball ball) : u_(std::move(u)), ball_(ball) {
    if (ball_.q() != u_.q()) throw ParameterError("ball and trajectory over different q");
  }

  int q() const { return u_.q(); }
  const Ball& ball() const { return ball_; }
  const WaveTrajectory<T>& trajectory() const { return u_; }

  T operator()(const VertexAddress& x, const VertexAddress& y) const {
    check(x);
    check(y);
    const int h = height(y);
    return field().pow_sqrt_q(h) * u_.at(h).at(x);
  }

  T laplacian_x(const VertexAddress& x, const VertexAddress& y) const {
    T s = field().zero();
    for (const auto& xn : neighbors(x, q())) s += (*this)(xn, y);
    return (*this)(x, y) - s / field().from_int(q() + 1);
  }

  T laplacian_y(const VertexAddress& x, const VertexAddress& y) const {
    T s = field().zero();
    for (const auto& yn : neighbors(y, q())) s += (*this)(x, yn);
    return (*this)(x, y) - s / field().from_int(q() + 1);
  }

 private:
  ScalarField<T> field() const { return ScalarField<T>{q()}; }
  void check(const VertexAddress& v) const {
    if (!ball_.contains(v)) ball_.require(v.length(), "vertex " + v.to_string());
  }

  WaveTrajectory<T> u_;
  Ball ball_;
};

template <WaveScalar T>
AsgeirssonField<T> asgeirsson_field(const WaveTrajectory<T>& u, const Ball& ball) {
  return AsgeirssonField<T>(u, ball);
}

/// sum_{x' in S(x,m)} sum_{y' in S(y,n)} U(x', y'), with S(y, n) enumerated
/// explicitly and grouped by height.
template <WaveScalar T>
T double_sphere_sum(const AsgeirssonField<T>& U, const VertexAddress& x, const VertexAddress& y, int m, int n) {
  const Ball& ball = U.ball();
  ball.require(x.length() + m, "sphere S(" + x.to_string() + ", " + std::to_string(m) + ")");
  std::map<int, BigInt> heights;
  for (const auto& yp : ball.sphere(y, n)) heights[height(yp)] += 1;
  ScalarField<T> k{U.q()};
  T total = k.zero();
  for (const auto& [h, count] : heights) {
    total += k.from_count(count) * k.pow_sqrt_q(h) * sphere_sum(U.trajectory().at(h), x, m);
  }
  return total;
}

/// Both sides of the double-sphere identity at (x, y, m, n).
template <WaveScalar T>
std::pair<T, T> asgeirsson_verify(const AsgeirssonField<T>& U, const VertexAddress& x, const VertexAddress& y, int m,
                                  int n) {
  return {double_sphere_sum(U, x, y, m, n), double_sphere_sum(U, x, y, n, m)};
}

/// Double spherical mean V(m, n).
template <WaveScalar T>
T double_spherical_mean(const AsgeirssonField<T>& U, const VertexAddress& x, const VertexAddress& y, int m, int n) {
  ScalarField<T> k{U.q()};
  return double_sphere_sum(U, x, y, m, n) /
         (k.from_count(sphere_volume(U.q(), m)) * k.from_count(sphere_volume(U.q(), n)));
}

}  // namespace treewave
