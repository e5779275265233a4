#pragma once

// Kinetic, potential and total energy of a wave trajectory, the equipartition
// gap, Huygens shell concentration and propagation bounds.

#include <cmath>
#include <vector>

#include "treewave/laplacians.hpp"
#include "treewave/wave.hpp"

namespace treewave {

template <WaveScalar T>
struct EnergyReport {
  int n = 0;
  T kinetic;
  T potential;        // (q+1)/8 sum (L~ - gamma~) u * u
  T potential_pairs;  // pair-sum form over d(x,y) = 2
  T total;
  T gap;  // kinetic - potential
};

namespace detail {

template <WaveScalar T>
T half_difference_energy(const TreeFunction<T>& plus, const TreeFunction<T>& minus) {
  auto k = plus.field();
  TreeFunction<T> v = (plus - minus) * (k.one() / k.from_int(2));
  return sum_of_squares(v) / k.from_int(2);
}

/// sum over ordered pairs d(x,y) = 2 of (u(x) - u(y))^2.
template <WaveScalar T>
T two_step_pair_sum(const TreeFunction<T>& u) {
  auto k = u.field();
  const int q = u.q();
  T total = k.zero();
  for (const auto& [c, ux] : u.cells()) {
    T local = k.zero();
    for (const auto& y : sphere_unbounded(c.representative(), 2, q)) {
      T uy = u.at(y);
      T d = ux - uy;
      local += d * d;
      // the pair (y, x) with y outside the support is not visited from y
      if (ScalarField<T>::is_zero(uy)) local += ux * ux;
    }
    total += k.from_count(u.multiplicity(c)) * local;
  }
  return total;
}

}  // namespace detail

/// P(n) as (q+1)/8 sum_x (L~ - gamma~) u(x,n) u(x,n).
template <WaveScalar T>
T potential_energy(const TreeFunction<T>& u, const Ball& ball) {
  auto k = u.field();
  const int q = u.q();
  if (u.is_zero()) return k.zero();
  T gamma_tilde = spectral_constants<T>(q).gamma_tilde;
  TreeFunction<T> shifted = two_step_laplacian(u, ball) - u * gamma_tilde;
  return k.from_rational(Rational(q + 1, 8)) * inner(shifted, u);
}

/// P(n) as 1/(4q) sum_{d(x,y)=2} |(u(x) - u(y))/2|^2 - (q-1)^2/(8q) sum_x |u(x)|^2.
template <WaveScalar T>
T potential_energy_pairs(const TreeFunction<T>& u, const Ball& ball) {
  auto k = u.field();
  const int q = u.q();
  if (u.is_zero()) return k.zero();
  detail::require_in(u, ball, 2, "pair-sum potential");
  T pairs = detail::two_step_pair_sum(u) * k.from_rational(Rational(1, 16 * q));
  return pairs - k.from_rational(Rational((q - 1) * (q - 1), 8 * q)) * sum_of_squares(u);
}

/// K(n), P(n) (both forms), E(n) and K(n) - P(n). Needs snapshots n-1, n, n+1.
template <WaveScalar T>
EnergyReport<T> energies(const WaveTrajectory<T>& u, int n, const Ball& ball) {
  const auto& prev = u.at(n - 1);
  const auto& curr = u.at(n);
  const auto& next = u.at(n + 1);
  EnergyReport<T> r;
  r.n = n;
  r.kinetic = detail::half_difference_energy(next, prev);
  r.potential = potential_energy(curr, ball);
  r.potential_pairs = potential_energy_pairs(curr, ball);
  r.total = r.kinetic + r.potential;
  r.gap = r.kinetic - r.potential;
  return r;
}

/// Energy table for n_min <= n <= n_max.
template <WaveScalar T>
std::vector<EnergyReport<T>> energy_table(const WaveTrajectory<T>& u, int n_min, int n_max, const Ball& ball) {
  std::vector<EnergyReport<T>> out;
  for (int n = n_min; n <= n_max; ++n) out.push_back(energies(u, n, ball));
  return out;
}

/// E = 1/4 sum (1 - C_2) f * f + 1/2 sum |g|^2.
template <WaveScalar T>
T total_energy_closed_form(const TreeFunction<T>& f, const TreeFunction<T>& g, const Ball& ball) {
  auto k = f.field();
  T e = sum_of_squares(g) / k.from_int(2);
  if (!f.is_zero()) e += inner(f - cosine_propagator(2, f, ball), f) / k.from_int(4);
  return e;
}

/// (1 - C_2) f.
template <WaveScalar T>
TreeFunction<T> one_minus_c2(const TreeFunction<T>& f, const Ball& ball) {
  return f - cosine_propagator(2, f, ball);
}

/// K(n) - P(n) through the operator identities
///   U_n^- = -1/4 (1 - C_2) C_{2n},  V_n^- = 1/2 C_{2n},  W_n^- = -1/4 (1 - C_2) S_{2n}.
template <WaveScalar T>
T equipartition_gap_operator(const TreeFunction<T>& f, const TreeFunction<T>& g, int n, const Ball& ball) {
  auto k = f.field();
  T quarter = k.one() / k.from_int(4);
  T gap = k.zero();
  if (!f.is_zero()) gap -= quarter * inner(one_minus_c2(cosine_propagator(2 * n, f, ball), ball), f);
  if (!g.is_zero()) gap += inner(cosine_propagator(2 * n, g, ball), g) / k.from_int(2);
  if (!f.is_zero() && !g.is_zero()) {
    gap -= k.from_int(2) * quarter * inner(one_minus_c2(sine_propagator(2 * n, f, ball), ball), g);
  }
  return gap;
}

/// Constant C(f, g) with |K(n) - P(n)| <= C q^{-|n|} for n != 0, from
/// ||C_{2n} f||_inf <= (q-1)/2 q^{-|n|} ||f||_1, ||S_{2n} f||_inf <= q^{1/2} q^{-|n|} ||f||_1
/// and ||(1 - C_2) f||_1 <= ((q - 1/q)/2 + 2) ||f||_1.
template <WaveScalar T>
double equipartition_bound_constant(const TreeFunction<T>& f, const TreeFunction<T>& g) {
  const double q = f.q();
  const double kappa = (q - 1.0 / q) / 2.0 + 2.0;
  const double nf = l1_norm(f);
  const double ng = l1_norm(g);
  return (q - 1.0) / 8.0 * kappa * nf * nf + (q - 1.0) / 4.0 * ng * ng + std::sqrt(q) / 2.0 * kappa * nf * ng;
}

/// The three operator combinations whose multipliers make the total energy
/// independent of n: returns U_n^+ f, V_n^+ g, W_n^+ f.
template <WaveScalar T>
struct PlusOperators {
  TreeFunction<T> u_plus_f;
  TreeFunction<T> v_plus_g;
  TreeFunction<T> w_plus_f;
};

template <WaveScalar T>
PlusOperators<T> plus_operators(const TreeFunction<T>& f, const TreeFunction<T>& g, int n, const Ball& ball) {
  auto k = f.field();
  T eighth = k.one() / k.from_int(8);
  T quarter = k.one() / k.from_int(4);
  auto dc = [&](const TreeFunction<T>& h) {
    return cosine_propagator(n + 1, h, ball) - cosine_propagator(n - 1, h, ball);
  };
  auto ds = [&](const TreeFunction<T>& h) {
    return sine_propagator(n + 1, h, ball) - sine_propagator(n - 1, h, ball);
  };
  auto c = [&](const TreeFunction<T>& h) { return cosine_propagator(n, h, ball); };
  auto s = [&](const TreeFunction<T>& h) { return sine_propagator(n, h, ball); };
  PlusOperators<T> out{
      dc(dc(f)) * eighth + one_minus_c2(c(c(f)), ball) * quarter,
      ds(ds(g)) * eighth + one_minus_c2(s(s(g)), ball) * quarter,
      dc(ds(f)) * eighth + one_minus_c2(c(s(f)), ball) * quarter,
  };
  return out;
}

template <WaveScalar T>
struct HuygensReport {
  int n = 0;
  int shell_margin = 0;  // N_n
  T interior_mass;       // sum_{|x| < |n| - N_n} |u(x,n)|^2
  T interior_gradient;   // sum_{|x|,|y| < |n| - N_n, d(x,y) = 2} |u(x,n) - u(y,n)|^2
  T interior_kinetic;    // sum_{|x| < |n| - N_n} |u(x,n+1) - u(x,n-1)|^2
};

/// Default shell schedule N_n = floor(sqrt |n|).
inline int sqrt_schedule(int n) {
  int a = n < 0 ? -n : n;
  int r = static_cast<int>(std::sqrt(static_cast<double>(a)));
  while ((r + 1) * (r + 1) <= a) ++r;
  while (r * r > a) --r;
  return r;
}

template <WaveScalar T>
HuygensReport<T> huygens_report(const WaveTrajectory<T>& u, int n, int shell_margin, const Ball& ball) {
  const auto& curr = u.at(n);
  const auto& prev = u.at(n - 1);
  const auto& next = u.at(n + 1);
  auto k = curr.field();
  const int q = u.q();
  const int bound = (n < 0 ? -n : n) - shell_margin;
  ball.require(bound + 1, "Huygens interior region");
  HuygensReport<T> r{n, shell_margin, k.zero(), k.zero(), k.zero()};
  if (bound <= 0) return r;
  for (const auto& [c, v] : curr.cells()) {
    if (c.level() < bound) r.interior_mass += k.from_count(curr.multiplicity(c)) * v * v;
  }
  TreeFunction<T> velocity = next - prev;
  for (const auto& [c, v] : velocity.cells()) {
    if (c.level() < bound) r.interior_kinetic += k.from_count(velocity.multiplicity(c)) * v * v;
  }
  for (const Cell& c : curr.frame(bound - 1)) {
    const VertexAddress x = c.representative();
    const T ux = curr.at(c);
    T local = k.zero();
    for (const auto& y : sphere_unbounded(x, 2, q)) {
      if (y.length() >= bound) continue;
      T d = ux - curr.at(y);
      local += d * d;
    }
    r.interior_gradient += k.from_count(curr.multiplicity(c)) * local;
  }
  return r;
}

template <WaveScalar T>
struct PropagationRecord {
  int n = 0;
  int support_radius = -1;  // max |x| with u(x,n) != 0
  T scaled_amplitude;       // max_x |u(x,n)| q^{|n|/2}
  bool within_light_cone = true;
};

/// Per-snapshot support radius and scaled amplitude; data are centred at the origin.
template <WaveScalar T>
std::vector<PropagationRecord<T>> propagation_bounds(const WaveTrajectory<T>& u) {
  std::vector<PropagationRecord<T>> out;
  const int radius = u.data_radius();
  ScalarField<T> k{u.q()};
  for (const auto& [n, snap] : u.snapshots()) {
    PropagationRecord<T> rec{n, snap.support_radius(), k.zero(), true};
    T best = k.zero();
    for (const auto& [c, v] : snap.cells()) {
      T a = ScalarField<T>::sign(v) < 0 ? -v : v;
      if (ScalarField<T>::sign(a - best) > 0) best = a;
    }
    rec.scaled_amplitude = best * k.pow_sqrt_q(n < 0 ? -n : n);
    rec.within_light_cone = rec.support_radius <= (n < 0 ? -n : n) + radius;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace treewave
