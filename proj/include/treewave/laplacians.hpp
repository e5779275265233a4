#pragma once

// Combinatorial Laplacians on Z and T_q, their radial and horocyclic parts,
// the 2-step Laplacian, and the spectral constants.

#include <cmath>
#include <numbers>

#include "treewave/tree_function.hpp"

namespace treewave {

template <WaveScalar T>
struct SpectralConstants {
  T gamma;        // 2 / (q^{1/2} + q^{-1/2}); spectrum of L^T is [1 - gamma, 1 + gamma]
  T gamma_tilde;  // (q-1)^2 / (q (q+1)); bottom of the spectrum of the 2-step Laplacian
  double tau;     // 2 pi / log q, period of the Fourier variable
};

template <WaveScalar T>
SpectralConstants<T> spectral_constants(int q) {
  require_valid_q(q);
  ScalarField<T> k{q};
  T gamma = k.from_int(2) / (k.sqrt_q() + k.one() / k.sqrt_q());
  T gamma_tilde = k.from_rational(Rational((q - 1) * (q - 1), q * (q + 1)));
  return {gamma, gamma_tilde, 2 * std::numbers::pi / std::log(static_cast<double>(q))};
}

namespace detail {

template <WaveScalar T>
void require_in(const TreeFunction<T>& f, const Ball& ball, int reach, std::string_view what) {
  if (ball.q() != f.q()) throw ParameterError("ball and function over different q");
  if (f.is_zero()) return;
  ball.require(f.support_radius() + reach, what);
}

}  // namespace detail

/// x -> sum_{y in S(x,1)} f(y).
template <WaveScalar T>
TreeFunction<T> neighbor_sum(const TreeFunction<T>& f, const Ball& ball) {
  detail::require_in(f, ball, 1, "neighbour sum");
  const int q = f.q();
  return TreeFunction<T>::tabulate(q, f.core_radius(), f.support_radius() + 1,
                                   [&](const VertexAddress& x, const Cell&) {
                                     T s = f.field().zero();
                                     for (const auto& y : neighbors(x, q)) s += f.at(y);
                                     return s;
                                   });
}

/// x -> sum_{y in S(x,2)} f(y).
template <WaveScalar T>
TreeFunction<T> two_sphere_sum(const TreeFunction<T>& f, const Ball& ball) {
  detail::require_in(f, ball, 2, "2-sphere sum");
  const int q = f.q();
  return TreeFunction<T>::tabulate(q, f.core_radius(), f.support_radius() + 2,
                                   [&](const VertexAddress& x, const Cell&) {
                                     T s = f.field().zero();
                                     for (const auto& y : sphere_unbounded(x, 2, q)) s += f.at(y);
                                     return s;
                                   });
}

/// L^T f(x) = f(x) - (q+1)^{-1} sum_{y in S(x,1)} f(y).
template <WaveScalar T>
TreeFunction<T> laplacian_tree(const TreeFunction<T>& f, const Ball& ball) {
  if (f.is_zero()) return f;
  auto k = f.field();
  return f - neighbor_sum(f, ball) * (k.one() / k.from_int(f.q() + 1));
}

/// 2-step Laplacian: f(x) - (q(q+1))^{-1} sum_{y in S(x,2)} f(y).
template <WaveScalar T>
TreeFunction<T> two_step_laplacian(const TreeFunction<T>& f, const Ball& ball) {
  if (f.is_zero()) return f;
  auto k = f.field();
  return f - two_sphere_sum(f, ball) * (k.one() / k.from_int(f.q() * (f.q() + 1)));
}

/// L^Z f(n) = f(n) - (f(n+1) + f(n-1)) / 2.
template <WaveScalar T>
HeightSequence<T> laplacian_line(const HeightSequence<T>& f) {
  HeightSequence<T> out(f.q());
  if (f.empty()) return out;
  auto k = f.field();
  T half = k.one() / k.from_int(2);
  for (int n = f.min_index() - 1; n <= f.max_index() + 1; ++n) {
    out.set(n, f[n] - (f[n + 1] + f[n - 1]) * half);
  }
  return out;
}

/// L^T on horocyclic functions: f(h) - q/(q+1) f(h-1) - 1/(q+1) f(h+1).
template <WaveScalar T>
HeightSequence<T> horocyclic_laplacian(const HeightSequence<T>& f) {
  HeightSequence<T> out(f.q());
  if (f.empty()) return out;
  auto k = f.field();
  const int q = f.q();
  T down = k.from_rational(Rational(q, q + 1));
  T up = k.from_rational(Rational(1, q + 1));
  for (int h = f.min_index() - 1; h <= f.max_index() + 1; ++h) {
    out.set(h, f[h] - down * f[h - 1] - up * f[h + 1]);
  }
  return out;
}

/// Radial part of L^T: f(0) - f(1) at 0; f(n) - f(n-1)/(q+1) - q f(n+1)/(q+1) for n >= 1.
template <WaveScalar T>
RadialProfile<T> radial_laplacian(const RadialProfile<T>& p) {
  RadialProfile<T> out(p.q());
  if (p.empty()) return out;
  auto k = p.field();
  const int q = p.q();
  T inward = k.from_rational(Rational(1, q + 1));
  T outward = k.from_rational(Rational(q, q + 1));
  out.set(0, p[0] - p[1]);
  for (int n = 1; n <= p.max_index() + 1; ++n) {
    out.set(n, p[n] - inward * p[n - 1] - outward * p[n + 1]);
  }
  return out;
}

/// Rayleigh quotient <L f, f> / <f, f> of an operator on a nonzero f.
template <WaveScalar T, class Op>
T rayleigh_quotient(const TreeFunction<T>& f, Op&& op) {
  return inner(op(f), f) / sum_of_squares(f);
}

}  // namespace treewave
