#pragma once

// Abel transform, dual Abel transform, their inverses, and the Fourier layer
// H = F o A on radial functions.

#include <complex>
#include <map>

#include "treewave/laplacians.hpp"
#include "treewave/tree_function.hpp"

namespace treewave {

enum class TransformMethod { brute, closed };

namespace detail {

/// #{x : |x| = n, h(x) = h} for n <= radius, by explicit enumeration.
inline std::map<std::pair<int, int>, BigInt> height_census(const Ball& ball, int radius) {
  ball.require(radius, "height census");
  std::map<std::pair<int, int>, BigInt> census;
  for (const auto& x : Ball(ball.q(), radius).vertices()) census[{x.length(), height(x)}] += 1;
  return census;
}

template <WaveScalar T>
T even_part(const HeightSequence<T>& s, int k) {
  auto f = s.field();
  return (s[k] + s[-k]) / f.from_int(2);
}

}  // namespace detail

/// A f(h) = q^{h/2} sum_{h(x) = h} f(|x|).
template <WaveScalar T>
HeightSequence<T> abel(const RadialProfile<T>& p, TransformMethod method, const Ball& ball) {
  HeightSequence<T> out(p.q());
  if (p.empty()) return out;
  const int q = p.q();
  auto k = p.field();
  const int top = p.max_index();
  if (method == TransformMethod::brute) {
    if (ball.q() != q) throw ParameterError("ball and profile over different q");
    auto census = detail::height_census(ball, top);
    std::map<int, T> acc;
    for (const auto& [key, count] : census) {
      auto [n, h] = key;
      T v = p[n];
      if (ScalarField<T>::is_zero(v)) continue;
      auto [it, fresh] = acc.try_emplace(h, k.zero());
      it->second += k.from_count(count) * v;
    }
    for (auto& [h, v] : acc) out.set(h, k.pow_sqrt_q(h) * v);
    return out;
  }
  T ratio = k.from_rational(Rational(q - 1, q));
  for (int h = 0; h <= top; ++h) {
    T v = k.pow_sqrt_q(h) * p[h];
    for (int j = 1; h + 2 * j <= top; ++j) v += ratio * k.pow_sqrt_q(h + 2 * j) * p[h + 2 * j];
    out.set(h, v);
    out.set(-h, v);
  }
  return out;
}

template <WaveScalar T>
HeightSequence<T> abel(const RadialProfile<T>& p) {
  return abel(p, TransformMethod::closed, Ball(p.q(), 0));
}

/// A^{-1} f(n) = sum_{k >= 0} q^{-n/2 - k} (f(n+2k) - f(n+2k+2)), for even f.
template <WaveScalar T>
RadialProfile<T> abel_inverse(const HeightSequence<T>& s) {
  if (!s.is_even()) throw DomainError("inverse Abel transform needs an even sequence");
  RadialProfile<T> out(s.q());
  if (s.empty()) return out;
  auto k = s.field();
  const int top = s.max_index();
  for (int n = 0; n <= top; ++n) {
    T v = k.zero();
    for (int j = 0; n + 2 * j <= top; ++j) v += k.pow_sqrt_q(-n - 2 * j) * (s[n + 2 * j] - s[n + 2 * j + 2]);
    out.set(n, v);
  }
  return out;
}

/// A* f(n) = delta(n)^{-1} sum_{|x| = n} q^{h(x)/2} f(h(x)).
template <WaveScalar T>
T dual_abel(const HeightSequence<T>& s, int n, TransformMethod method, const Ball& ball) {
  if (n < 0) throw DomainError("dual Abel transform is indexed by n >= 0");
  const int q = s.q();
  auto k = s.field();
  if (method == TransformMethod::brute) {
    if (ball.q() != q) throw ParameterError("ball and sequence over different q");
    std::map<int, BigInt> heights;
    for (const auto& x : ball.sphere(VertexAddress(), n)) heights[height(x)] += 1;
    T total = k.zero();
    for (const auto& [h, count] : heights) total += k.from_count(count) * k.pow_sqrt_q(h) * s[h];
    return total / k.from_count(sphere_volume(q, n));
  }
  if (n == 0) return s[0];
  // f(+-k) in the closed form is read as the even part (f(k) + f(-k)) / 2
  T scale = k.pow_sqrt_q(-n) / k.from_int(q + 1);
  T v = k.from_int(2 * q) * detail::even_part(s, n);
  T inner = k.zero();
  for (int j = -n + 2; j < n; j += 2) inner += detail::even_part(s, j);
  v += k.from_int(q - 1) * inner;
  return scale * v;
}

template <WaveScalar T>
T dual_abel(const HeightSequence<T>& s, int n) {
  return dual_abel(s, n, TransformMethod::closed, Ball(s.q(), 0));
}

template <WaveScalar T>
RadialProfile<T> dual_abel_profile(const HeightSequence<T>& s, int max_n, TransformMethod method,
                                   const Ball& ball) {
  RadialProfile<T> out(s.q());
  for (int n = 0; n <= max_n; ++n) out.set(n, dual_abel(s, n, method, ball));
  return out;
}

/// (A*)^{-1} on N-indexed data, evaluated for |h| <= max_h and extended evenly.
template <WaveScalar T>
HeightSequence<T> dual_abel_inverse(const RadialProfile<T>& m, int max_h) {
  HeightSequence<T> out(m.q());
  auto k = m.field();
  T half = k.one() / k.from_int(2);
  if (max_h >= 0) out.set(0, m[0]);
  for (int h = 1; h <= max_h; ++h) {
    // odd h: tail term uses f(1) and sum_{k=1}^{(h-1)/2}; even h: f(0) and sum_{k=1}^{h/2}
    const int base = h % 2;
    const int terms = (h - base) / 2;
    T v = k.pow_sqrt_q(h) * m[h] + k.pow_sqrt_q(-h) * m[base];
    for (int j = 1; j <= terms; ++j) v += k.pow_sqrt_q(h - 4 * j + 2) * (m[h - 2 * j + 2] - m[h - 2 * j]);
    v *= half;
    out.set(h, v);
    out.set(-h, v);
  }
  return out;
}

inline std::complex<double> cos_q(double lambda, int q) {
  const double t = lambda * std::log(static_cast<double>(q));
  return {std::cos(t), 0.0};
}

inline std::complex<double> sin_q(double lambda, int q) {
  const double t = lambda * std::log(static_cast<double>(q));
  return {std::sin(t), 0.0};
}

/// F f(lambda) = sum_h q^{i lambda h} f(h). Float mode only.
template <WaveScalar T>
std::complex<double> fourier_height(const HeightSequence<T>& s, double lambda) {
  if constexpr (ScalarField<T>::mode != ScalarMode::float64) {
    (void)s;
    (void)lambda;
    throw ModeError("the Fourier transform on Z is only available in float mode");
  } else {
    const double logq = std::log(static_cast<double>(s.q()));
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [h, v] : s.values()) acc += std::polar(1.0, lambda * h * logq) * v;
    return acc;
  }
}

/// Converts an exact sequence to doubles (for the Fourier layer).
inline HeightSequence<double> to_float(const HeightSequence<QSurd>& s) {
  HeightSequence<double> out(s.q());
  for (const auto& [h, v] : s.values()) out.set(h, v.to_double());
  return out;
}

inline HeightSequence<double> to_float(const HeightSequence<double>& s) { return s; }

/// Spherical transform H = F o A of a radial profile.
template <WaveScalar T>
std::complex<double> spherical_transform(const RadialProfile<T>& p, double lambda) {
  return fourier_height(to_float(abel(p)), lambda);
}

}  // namespace treewave
