#pragma once

// Shared brute-force oracles for the test suite. Everything here works on
// fully enumerated balls and never touches the compressed cell machinery.

#include <deque>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "treewave/treewave.hpp"

namespace tw_test {

using namespace treewave;

template <class T>
using Explicit = std::map<VertexAddress, T>;

/// All vertices of B(0,R), generated from the label rules alone.
inline std::vector<VertexAddress> enumerate_ball(int q, int radius) {
  std::vector<VertexAddress> out{VertexAddress()};
  std::vector<VertexAddress> frontier{VertexAddress()};
  for (int r = 1; r <= radius; ++r) {
    std::vector<VertexAddress> next;
    for (const auto& v : frontier) {
      std::vector<Label> labels = v.labels();
      Label top = v.is_origin() ? static_cast<Label>(q + 1) : static_cast<Label>(q);
      for (Label l = 0; l < top; ++l) {
        auto w = labels;
        w.push_back(l);
        next.emplace_back(std::move(w));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

/// Adjacency of B(0,R) as an explicit graph: parent and children.
inline std::map<VertexAddress, std::vector<VertexAddress>> adjacency(int q, int radius) {
  std::map<VertexAddress, std::vector<VertexAddress>> adj;
  for (const auto& v : enumerate_ball(q, radius)) {
    adj[v];
    if (!v.is_origin()) {
      std::vector<Label> p(v.labels().begin(), v.labels().end() - 1);
      VertexAddress parent(p);
      adj[v].push_back(parent);
      adj[parent].push_back(v);
    }
  }
  return adj;
}

/// Graph distance by breadth-first search.
inline int bfs_distance(const std::map<VertexAddress, std::vector<VertexAddress>>& adj, const VertexAddress& x,
                        const VertexAddress& y) {
  std::map<VertexAddress, int> dist{{x, 0}};
  std::deque<VertexAddress> queue{x};
  while (!queue.empty()) {
    VertexAddress v = queue.front();
    queue.pop_front();
    if (v == y) return dist[v];
    for (const auto& w : adj.at(v)) {
      if (!dist.contains(w)) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return -1;
}

/// Height as the stabilised value of k - d(x, omega(k)).
inline int height_by_limit(const VertexAddress& x) {
  int k = x.length() + 2;
  std::vector<Label> zeros(static_cast<std::size_t>(k), 0);
  return k - distance(x, VertexAddress(zeros));
}

template <class T>
Explicit<T> expand(const TreeFunction<T>& f, int radius) {
  Explicit<T> out;
  for (const auto& x : enumerate_ball(f.q(), radius)) {
    T v = f.at(x);
    if (!ScalarField<T>::is_zero(v)) out.emplace(x, v);
  }
  return out;
}

template <class T>
T lookup(const Explicit<T>& f, const VertexAddress& x, int q) {
  auto it = f.find(x);
  return it == f.end() ? ScalarField<T>{q}.zero() : it->second;
}

/// Generic brute kernel operator: x -> sum_y w(d(x,y)) f(y) over B(0,R).
template <class T, class Weight>
Explicit<T> brute_kernel(const Explicit<T>& f, int q, int radius, Weight&& w) {
  Explicit<T> out;
  ScalarField<T> k{q};
  for (const auto& x : enumerate_ball(q, radius)) {
    T s = k.zero();
    for (const auto& [y, v] : f) {
      T c = w(distance(x, y));
      if (!ScalarField<T>::is_zero(c)) s += c * v;
    }
    if (!ScalarField<T>::is_zero(s)) out.emplace(x, s);
  }
  return out;
}

template <class T>
Explicit<T> brute_m(int n, const Explicit<T>& f, int q, int radius) {
  ScalarField<T> k{q};
  if (n < 0) return {};
  T scale = k.one();
  for (int i = 0; i < n; ++i) scale = scale / k.sqrt_q();
  return brute_kernel(f, q, radius, [&](int d) { return (d <= n && (n - d) % 2 == 0) ? scale : k.zero(); });
}

template <class T>
Explicit<T> combine(const Explicit<T>& a, const Explicit<T>& b, const T& ca, const T& cb, int q) {
  Explicit<T> out;
  std::set<VertexAddress> keys;
  for (const auto& [x, v] : a) keys.insert(x);
  for (const auto& [x, v] : b) keys.insert(x);
  for (const auto& x : keys) {
    T v = ca * lookup(a, x, q) + cb * lookup(b, x, q);
    if (!ScalarField<T>::is_zero(v)) out.emplace(x, v);
  }
  return out;
}

/// The displayed kernel form of the solution, for n != 0:
///   f-weight 1/2 q^{-|n|/2} at d = |n|, -(q-1)/2 q^{-|n|/2} at d < |n| with |n| - d even;
///   g-weight sign(n) q^{-(|n|-1)/2} at d < |n| with |n| - d odd.
template <class T>
Explicit<T> brute_solution(int n, const Explicit<T>& f, const Explicit<T>& g, int q, int radius) {
  ScalarField<T> k{q};
  if (n == 0) return f;
  const int a = n < 0 ? -n : n;
  const T sf = k.pow_sqrt_q(-a);
  const T sg = (n > 0 ? k.one() : -k.one()) * k.pow_sqrt_q(-(a - 1));
  const T half = k.one() / k.from_int(2);
  Explicit<T> uf = brute_kernel(f, q, radius, [&](int d) {
    if (d == a) return half * sf;
    if (d < a && (a - d) % 2 == 0) return -k.from_int(q - 1) * half * sf;
    return k.zero();
  });
  Explicit<T> ug = brute_kernel(g, q, radius, [&](int d) { return (d < a && (a - d) % 2 == 1) ? sg : k.zero(); });
  return combine(uf, ug, k.one(), k.one(), q);
}

template <class T>
bool same(const TreeFunction<T>& f, const Explicit<T>& e, int radius) {
  return expand(f, radius) == e;
}

/// Small-integer random data on B(0, r), seeded.
template <class T>
TreeFunction<T> random_data(int q, int r, std::mt19937_64& rng, int amplitude = 3) {
  std::uniform_int_distribution<int> dist(-amplitude, amplitude);
  ScalarField<T> k{q};
  TreeFunction<T> f(q, r);
  for (const auto& x : enumerate_ball(q, r)) f.set(x, k.from_int(dist(rng)));
  return f;
}

inline QSurd qs(int q, long a, long b = 0) { return QSurd(q, Rational(a), Rational(b)); }
inline QSurd qsr(int q, const char* a, const char* b = "0") {
  return QSurd(q, parse_rational(a), parse_rational(b));
}

}  // namespace tw_test
