#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace treewave;
using tw_test::enumerate_ball;
using tw_test::qs;

namespace {

QSurd rat(int q, long n, long d) { return QSurd(q, Rational(n, d), 0); }

/// Test data: random values on B(0,2) plus a radial tail out to level 4.
TreeFunction<QSurd> mixed_data(int q, std::mt19937_64& rng) {
  auto f = tw_test::random_data<QSurd>(q, 2, rng);
  RadialProfile<QSurd> p(q);
  p.set(3, qs(q, 1, 1));
  p.set(4, qs(q, -2));
  return f + radialize(p);
}

}  // namespace

TEST(SpectralConstants, Values) {
  for (int q : {2, 3, 4, 5}) {
    auto c = spectral_constants<QSurd>(q);
    EXPECT_GT(c.gamma.sign(), 0);
    EXPECT_LT(c.gamma, qs(q, 1));
    EXPECT_GT(c.gamma_tilde.sign(), 0);
    EXPECT_LT(c.gamma_tilde, qs(q, 1));
    EXPECT_NEAR(c.tau, 2 * std::numbers::pi / std::log(q), 1e-15);
    auto d = spectral_constants<double>(q);
    EXPECT_NEAR(d.gamma, c.gamma.to_double(), 1e-15);
  }
  EXPECT_EQ(spectral_constants<QSurd>(2).gamma, QSurd(2, 0, Rational(2, 3)));
  EXPECT_EQ(spectral_constants<QSurd>(2).gamma_tilde, rat(2, 1, 6));
}

TEST(LaplacianLine, Examples) {
  HeightSequence<QSurd> d(2);
  d.set(0, qs(2, 1));
  auto l = laplacian_line(d);
  EXPECT_EQ(l[0], qs(2, 1));
  EXPECT_EQ(l[1], rat(2, -1, 2));
  EXPECT_EQ(l[-1], rat(2, -1, 2));
  EXPECT_EQ(l.values().size(), 3u);
  HeightSequence<QSurd> c(2);
  for (int h = -5; h <= 5; ++h) c.set(h, qs(2, 4));
  auto lc = laplacian_line(c);
  for (int h = -4; h <= 4; ++h) EXPECT_EQ(lc[h], qs(2, 0));
}

TEST(Horocyclic, IdentityOnDeltaHeights) {
  for (int q : {2, 3}) {
    ScalarField<QSurd> k{q};
    QSurd gamma = spectral_constants<QSurd>(q).gamma;
    for (int h0 = -3; h0 <= 3; ++h0) {
      HeightSequence<QSurd> f(q);
      f.set(h0, qs(q, 1));
      HeightSequence<QSurd> scaled(q);
      for (const auto& [h, val] : f.values()) scaled.set(h, k.pow_sqrt_q(-h) * val);
      auto lz = laplacian_line(scaled);
      auto lhs = horocyclic_laplacian(f);
      for (int h = h0 - 2; h <= h0 + 2; ++h) {
        QSurd rhs = gamma * k.pow_sqrt_q(h) * lz[h] + (qs(q, 1) - gamma) * f[h];
        EXPECT_EQ(lhs[h], rhs);
      }
    }
  }
}

TEST(Horocyclic, MatchesTreeLaplacianPointwise) {
  for (int q : {2, 3}) {
    HeightSequence<QSurd> f(q);
    f.set(-1, qs(q, 2));
    f.set(0, qs(q, 0, 1));
    f.set(2, qs(q, -3));
    auto lf = horocyclic_laplacian(f);
    for (const auto& x : enumerate_ball(q, 3)) {
      QSurd s = qs(q, 0);
      for (const auto& y : neighbors(x, q)) s += f[height(y)];
      EXPECT_EQ(lf[height(x)], f[height(x)] - s / qs(q, q + 1));
    }
  }
}

TEST(LaplacianTree, DeltaExample) {
  Ball b(2, 4);
  auto l = laplacian_tree(TreeFunction<QSurd>::delta(2, VertexAddress()), b);
  auto e = tw_test::expand(l, 4);
  EXPECT_EQ(e.size(), 4u);
  EXPECT_EQ(l.at(VertexAddress()), qs(2, 1));
  for (const auto& x : b.sphere(VertexAddress(), 1)) EXPECT_EQ(l.at(x), rat(2, -1, 3));
}

TEST(LaplacianTree, ConstantInterior) {
  TreeFunction<QSurd> c(3, 3);
  for (const auto& x : enumerate_ball(3, 3)) c.set(x, qs(3, 5));
  auto l = laplacian_tree(c, Ball(3, 4));
  for (const auto& x : enumerate_ball(3, 2)) EXPECT_EQ(l.at(x), qs(3, 0));
  EXPECT_THROW(laplacian_tree(c, Ball(3, 3)), TruncationError);
}

TEST(LaplacianTree, CompressedMatchesExplicit) {
  std::mt19937_64 rng(1);
  for (int q : {2, 3}) {
    auto f = mixed_data(q, rng);
    Ball b(q, 7);
    auto ef = tw_test::expand(f, 6);
    auto nb = neighbor_sum(f, b);
    auto ts = two_sphere_sum(f, b);
    for (const auto& x : enumerate_ball(q, 6)) {
      QSurd s1 = qs(q, 0), s2 = qs(q, 0);
      for (const auto& [y, val] : ef) {
        if (distance(x, y) == 1) s1 += val;
        if (distance(x, y) == 2) s2 += val;
      }
      EXPECT_EQ(nb.at(x), s1) << x.to_string();
      EXPECT_EQ(ts.at(x), s2) << x.to_string();
    }
  }
}

TEST(LaplacianTree, CommutesWithSphericalMeans) {
  std::mt19937_64 rng(4);
  for (int q : {2, 3}) {
    Ball b(q, 9);
    auto f = mixed_data(q, rng);
    auto lf = laplacian_tree(f, b);
    for (const char* xs : {"", "1", "0,1", "2,0,1"}) {
      VertexAddress x = VertexAddress::parse(xs);
      auto means = spherical_means(f, x, 5, b);
      auto lmeans = radial_laplacian(means);
      for (int n = 0; n <= 4; ++n) EXPECT_EQ(spherical_mean(lf, x, n, b), lmeans[n]) << xs << " n=" << n;
    }
  }
}

TEST(RadialLaplacian, Examples) {
  RadialProfile<QSurd> d(2);
  d.set(0, qs(2, 1));
  auto l = radial_laplacian(d);
  EXPECT_EQ(l[0], qs(2, 1));
  EXPECT_EQ(l[1], rat(2, -1, 3));
  RadialProfile<QSurd> c(2);
  for (int n = 0; n <= 6; ++n) c.set(n, qs(2, 3));
  auto lc = radial_laplacian(c);
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(lc[n], qs(2, 0));
}

TEST(RadialLaplacian, PreservesRadiality) {
  for (int q : {2, 3}) {
    RadialProfile<QSurd> p(q);
    p.set(0, qs(q, 2));
    p.set(1, qs(q, -1, 1));
    p.set(4, qs(q, 5));
    auto lf = laplacian_tree(radialize(p), Ball(q, 6));
    EXPECT_EQ(lf, radialize(radial_laplacian(p)));
    EXPECT_EQ(radial_profile(lf), radial_laplacian(p));
  }
}

TEST(TwoStep, DeltaExample) {
  Ball b(2, 4);
  auto l = two_step_laplacian(TreeFunction<QSurd>::delta(2, VertexAddress()), b);
  EXPECT_EQ(tw_test::expand(l, 4).size(), 7u);
  EXPECT_EQ(l.at(VertexAddress()), qs(2, 1));
  for (const auto& x : b.sphere(VertexAddress(), 2)) EXPECT_EQ(l.at(x), rat(2, -1, 6));
  for (const auto& x : b.sphere(VertexAddress(), 1)) EXPECT_EQ(l.at(x), qs(2, 0));
}

TEST(TwoStep, OperatorIdentity) {
  std::mt19937_64 rng(2);
  for (int q : {2, 3, 4}) {
    Ball b(q, 8);
    std::vector<TreeFunction<QSurd>> data{TreeFunction<QSurd>::delta(q, VertexAddress()), mixed_data(q, rng)};
    for (const auto& f : data) {
      auto lf = laplacian_tree(f, b);
      auto rhs = laplacian_tree(f * qs(q, 2) - lf, b) * rat(q, q + 1, q);
      EXPECT_EQ(two_step_laplacian(f, b), rhs);
    }
  }
}

TEST(Rayleigh, QuotientsInSpectralIntervals) {
  std::mt19937_64 rng(9);
  for (int q : {2, 3}) {
    Ball b(q, 8);
    auto c = spectral_constants<QSurd>(q);
    for (int i = 0; i < 10; ++i) {
      auto f = mixed_data(q, rng);
      QSurd r1 = rayleigh_quotient(f, [&](const auto& h) { return laplacian_tree(h, b); });
      EXPECT_GE(r1, qs(q, 1) - c.gamma);
      EXPECT_LE(r1, qs(q, 1) + c.gamma);
      QSurd r2 = rayleigh_quotient(f, [&](const auto& h) { return two_step_laplacian(h, b); });
      EXPECT_GE(r2, c.gamma_tilde);
      EXPECT_LE(r2, rat(q, q + 1, q));
    }
  }
}

TEST(SelfAdjoint, CountingInnerProduct) {
  std::mt19937_64 rng(12);
  for (int q : {2, 3}) {
    Ball b(q, 8);
    auto f = mixed_data(q, rng);
    auto g = tw_test::random_data<QSurd>(q, 3, rng);
    EXPECT_EQ(inner(laplacian_tree(f, b), g), inner(f, laplacian_tree(g, b)));
    EXPECT_EQ(inner(two_step_laplacian(f, b), g), inner(f, two_step_laplacian(g, b)));
    // radial part: counting measure on T pushed to N, i.e. weights delta(n)
    RadialProfile<QSurd> p(q), r(q);
    p.set(0, qs(q, 1));
    p.set(2, qs(q, 3, 1));
    r.set(1, qs(q, -2));
    r.set(3, qs(q, 1));
    auto weighted = [&](const RadialProfile<QSurd>& a, const RadialProfile<QSurd>& c) {
      QSurd s = qs(q, 0);
      for (int n = 0; n <= 6; ++n) s += ScalarField<QSurd>{q}.from_count(sphere_volume(q, n)) * a[n] * c[n];
      return s;
    };
    EXPECT_EQ(weighted(radial_laplacian(p), r), weighted(p, radial_laplacian(r)));
  }
  HeightSequence<QSurd> a(2), c(2);
  a.set(0, qs(2, 1));
  a.set(3, qs(2, 0, 2));
  c.set(1, qs(2, 5));
  c.set(2, qs(2, -1));
  auto dot = [](const HeightSequence<QSurd>& x, const HeightSequence<QSurd>& y) {
    QSurd s = qs(2, 0);
    for (int h = -6; h <= 6; ++h) s += x[h] * y[h];
    return s;
  };
  EXPECT_EQ(dot(laplacian_line(a), c), dot(a, laplacian_line(c)));
}

TEST(Laplacians, Linearity) {
  std::mt19937_64 rng(13);
  Ball b(3, 8);
  auto f = mixed_data(3, rng);
  auto g = mixed_data(3, rng);
  QSurd s = qs(3, 2, -1);
  EXPECT_EQ(laplacian_tree(f + g * s, b), laplacian_tree(f, b) + laplacian_tree(g, b) * s);
  EXPECT_EQ(two_step_laplacian(f + g * s, b), two_step_laplacian(f, b) + two_step_laplacian(g, b) * s);
}
