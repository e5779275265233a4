#pragma once

// Property-check suite over seeded random data. The report text depends only
// on the options, so reruns with the same seed are byte-identical.

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "treewave/energy.hpp"
#include "treewave/transforms.hpp"
#include "treewave/wave.hpp"

namespace treewave {

struct VerifyOptions {
  std::vector<int> q_values{2, 3};
  std::uint64_t seed = 1;
  int data_radius = 2;  // support radius of the random initial data
  int steps = 6;        // |n| <= steps
  int amplitude = 3;    // data values in [-amplitude, amplitude]
  int samples = 8;      // random base points for pointwise checks
  // Multiplies C_n f for n != 0; anything but 1 corrupts the solution (negative control).
  Rational propagator_scale{1};
};

struct CheckResult {
  std::string theorem;
  int q = 0;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  std::string to_text() const {
    std::ostringstream os;
    std::size_t failures = 0;
    for (const auto& c : checks) {
      os << (c.passed ? "PASS" : "FAIL") << "  q=" << c.q << "  " << c.theorem;
      if (!c.detail.empty()) os << "  [" << c.detail << "]";
      os << '\n';
      if (!c.passed) ++failures;
    }
    os << (failures == 0 ? "all " + std::to_string(checks.size()) + " checks passed"
                         : std::to_string(failures) + " of " + std::to_string(checks.size()) + " checks failed")
       << '\n';
    return os.str();
  }
};

namespace detail {

/// Integer in [-a, a] from the raw generator (portable across standard libraries).
inline long draw(std::mt19937_64& rng, int a) {
  return static_cast<long>(rng() % static_cast<std::uint64_t>(2 * a + 1)) - a;
}

inline TreeFunction<QSurd> seeded_data(int q, int radius, int amplitude, std::mt19937_64& rng) {
  TreeFunction<QSurd> f(q, radius);
  ScalarField<QSurd> k{q};
  for (const auto& x : Ball(q, radius).vertices()) f.set(x, k.from_int(draw(rng, amplitude)));
  return f;
}

inline VertexAddress seeded_vertex(int q, int max_len, std::mt19937_64& rng) {
  int n = static_cast<int>(rng() % static_cast<std::uint64_t>(max_len + 1));
  std::vector<Label> labels;
  for (int i = 0; i < n; ++i) labels.push_back(static_cast<Label>(rng() % static_cast<std::uint64_t>(i == 0 ? q + 1 : q)));
  return VertexAddress(std::move(labels));
}

/// Closed-form trajectory whose cosine part is scaled by `scale` for n != 0.
inline WaveTrajectory<QSurd> scaled_trajectory(const TreeFunction<QSurd>& f, const TreeFunction<QSurd>& g, int steps,
                                               const Rational& scale, const Ball& ball) {
  if (scale == 1) return solve(f, g, -steps, steps, SolverMode::closed_form, ball);
  WaveTrajectory<QSurd> u(f, g, SolverMode::closed_form);
  QSurd s = ScalarField<QSurd>{f.q()}.from_rational(scale);
  for (int n = -steps; n <= steps; ++n) {
    if (n == 0) {
      u.put(0, f);
    } else {
      u.put(n, cosine_propagator(n, f, ball) * s + sine_propagator(n, g, ball));
    }
  }
  return u;
}

}  // namespace detail

inline VerifyReport verify_suite(const VerifyOptions& opt) {
  VerifyReport report;
  std::mt19937_64 rng(opt.seed);
  for (int q : opt.q_values) {
    require_valid_q(q);
    auto add = [&](std::string theorem, bool ok, std::string detail = "") {
      report.checks.push_back({std::move(theorem), q, ok, std::move(detail)});
    };
    ScalarField<QSurd> k{q};
    const int N = opt.data_radius;
    const int steps = opt.steps;
    Ball ball(q, steps + N + 2);
    Ball wide(q, 2 * steps + N + 2);
    auto f = detail::seeded_data(q, N, opt.amplitude, rng);
    auto g = detail::seeded_data(q, N, opt.amplitude, rng);

    auto closed = detail::scaled_trajectory(f, g, steps, opt.propagator_scale, ball);
    auto rec = solve(f, g, -steps, steps, SolverMode::recurrence, ball);
    {
      bool same = true;
      for (int n = -steps; n <= steps; ++n) same = same && closed.at(n) == rec.at(n);
      add("solution theorem: closed-form propagators equal the leapfrog recurrence", same,
          "|n| <= " + std::to_string(steps));
    }
    add("initial conditions u(0) = f, (u(1) - u(-1))/2 = g",
        closed.at(0) == f && (closed.at(1) - closed.at(-1)) * k.from_rational(Rational(1, 2)) == g);
    {
      bool inside = true;
      for (const auto& r : propagation_bounds(closed)) inside = inside && r.within_light_cone;
      add("finite propagation speed: supp u(n) within |x| <= |n| + N", inside);
    }
    {
      auto e0 = energies(closed, 0, ball);
      bool conserved = true, forms = true, positive = true;
      for (int n = -(steps - 1); n <= steps - 1; ++n) {
        auto r = energies(closed, n, ball);
        conserved = conserved && r.total == e0.total;
        forms = forms && r.potential == r.potential_pairs;
        positive = positive && r.potential.sign() >= 0 && r.kinetic.sign() >= 0;
      }
      add("energy conservation: E(n) = E(0)", conserved, "E = " + e0.total.to_string());
      add("potential energy: pair-sum form equals the 2-step Laplacian form", forms);
      add("energy nonnegativity: K(n) >= 0, P(n) >= 0", positive);
      add("total energy closed form 1/4 <(1 - C_2) f, f> + 1/2 |g|^2",
          e0.total == total_energy_closed_form(f, g, ball));
      bool gaps = true, bounded = true;
      const double c = equipartition_bound_constant(f, g);
      for (int n = -(steps - 1); n <= steps - 1; ++n) {
        auto r = energies(closed, n, ball);
        gaps = gaps && r.gap == equipartition_gap_operator(f, g, n, wide);
        if (n != 0) bounded = bounded && std::abs(r.gap.to_double()) <= c * std::pow(q, -std::abs(n));
      }
      add("equipartition: K - P equals the operator pairings of C_2n, S_2n", gaps);
      add("equipartition: |K(n) - P(n)| <= C(f,g) q^{-|n|}", bounded);
    }
    {
      auto shell = huygens_report(closed, steps - 1, sqrt_schedule(steps - 1), ball);
      bool finite = shell.interior_mass.sign() >= 0 && shell.interior_gradient.sign() >= 0 &&
                    shell.interior_kinetic.sign() >= 0;
      std::ostringstream d;
      d << "n=" << steps - 1 << " N=" << shell.shell_margin << " mass=" << shell.interior_mass.to_double();
      add("asymptotic Huygens principle: interior sums (reported)", finite, d.str());
    }
    {
      Ball domain(q, steps);
      AsgeirssonField<QSurd> U(closed, domain);
      bool hyp = true, sym = true;
      const int reach = steps / 2;
      for (int i = 0; i < opt.samples; ++i) {
        auto x = detail::seeded_vertex(q, reach, rng);
        auto y = detail::seeded_vertex(q, reach, rng);
        hyp = hyp && U.laplacian_x(x, y) == U.laplacian_y(x, y);
        for (int m = 0; m <= steps - reach; ++m)
          for (int n = 0; n < m; ++n) {
            auto [lhs, rhs] = asgeirsson_verify(U, x, y, m, n);
            sym = sym && lhs == rhs;
          }
      }
      add("Asgeirsson hypothesis: L_x U = L_y U", hyp);
      add("Asgeirsson mean value theorem: double-sphere symmetry", sym);
    }
    {
      Ball census(q, 6);
      RadialProfile<QSurd> p(q);
      HeightSequence<QSurd> s(q);
      for (int n = 0; n <= 6; ++n) p.set(n, QSurd(q, detail::draw(rng, opt.amplitude), detail::draw(rng, opt.amplitude)));
      for (int h = 0; h <= 6; ++h) {
        QSurd v(q, detail::draw(rng, opt.amplitude), detail::draw(rng, opt.amplitude));
        s.set(h, v);
        s.set(-h, v);
      }
      auto a = abel(p);
      add("Abel transform: horocycle sums equal the closed form", abel(p, TransformMethod::brute, census) == a);
      add("inverse Abel transform: A^-1 A = id and A A^-1 = id", abel_inverse(a) == p && abel(abel_inverse(s)) == s);
      bool dual = true;
      for (int n = 0; n <= 6; ++n) dual = dual && dual_abel(s, n, TransformMethod::brute, census) == dual_abel(s, n);
      add("dual Abel transform: sphere averages equal the closed form", dual);
      auto m = dual_abel_profile(s, 6, TransformMethod::closed, census);
      bool dinv = dual_abel_inverse(m, 6) == s;
      auto s2 = dual_abel_inverse(p, 6);
      for (int n = 0; n <= 6; ++n) dinv = dinv && dual_abel(s2, n) == p[n];
      add("inverse dual Abel transform: round trips", dinv);
      QSurd lhs = k.zero(), rhs = k.zero();
      for (const auto& [h, v] : a.values()) lhs += v * s[h];
      for (int n = 0; n <= 6; ++n) rhs += k.from_count(sphere_volume(q, n)) * p[n] * dual_abel(s, n);
      add("duality of A and A*", lhs == rhs);
    }
    {
      Ball big(q, N + 8);
      auto lf = laplacian_tree(f, big);
      bool commute = true;
      for (int i = 0; i < opt.samples; ++i) {
        auto x = detail::seeded_vertex(q, 2, rng);
        auto means = spherical_means(f, x, 5, big);
        auto lm = radial_laplacian(means);
        for (int n = 0; n <= 4; ++n) commute = commute && spherical_mean(lf, x, n, big) == lm[n];
      }
      add("spherical means intertwine L^T with its radial part", commute);
      auto c = spectral_constants<QSurd>(q);
      QSurd r1 = rayleigh_quotient(f, [&](const auto& h) { return laplacian_tree(h, big); });
      QSurd r2 = rayleigh_quotient(f, [&](const auto& h) { return two_step_laplacian(h, big); });
      add("spectrum of L^T: Rayleigh quotient in [1 - gamma, 1 + gamma]", r1 >= k.one() - c.gamma && r1 <= k.one() + c.gamma);
      add("2-step Laplacian: Rayleigh quotient in [gamma~, (q+1)/q]",
          r2 >= c.gamma_tilde && r2 <= k.from_rational(Rational(q + 1, q)));
      auto l = laplacian_tree(f, big);
      add("2-step Laplacian identity L~ = (q+1)/q L (2 - L)",
          two_step_laplacian(f, big) == laplacian_tree(f * k.from_int(2) - l, big) * k.from_rational(Rational(q + 1, q)));
    }
    {
      RadialProfile<QSurd> p(q);
      for (int n = 0; n <= 3; ++n) p.set(n, k.from_int(detail::draw(rng, opt.amplitude)));
      auto fp = radialize(p);
      Ball big(q, 12);
      const double tau = spectral_constants<double>(q).tau;
      double worst = 0;
      for (int n = 1; n <= 6; ++n) {
        auto cp = radial_profile(cosine_propagator(n, fp, big));
        auto sp = radial_profile(sine_propagator(n, fp, big));
        for (int i = 0; i < 100; ++i) {
          double l = (i + 0.5) * (tau / 2) / 100.0;
          auto base = spherical_transform(p, l);
          worst = std::max(worst, std::abs(spherical_transform(cp, l) - cos_q(n * l, q) * base));
          worst = std::max(worst, std::abs(spherical_transform(sp, l) - sin_q(n * l, q) / sin_q(l, q) * base));
        }
      }
      add("Fourier multipliers of C_n and S_n", worst <= 1e-10);
    }
  }
  return report;
}

}  // namespace treewave
