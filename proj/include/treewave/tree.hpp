#pragma once

// Vertex addressing, metric, horocyclic height and spheres on the
// homogeneous tree T_q (every vertex has q+1 neighbours).
//
// A vertex is the geodesic word leading to it from the origin. The first
// label is in {0..q}, every later label in {0..q-1}; a child of a non-origin
// vertex x is x followed by one more label, so words never backtrack.
// The distinguished geodesic ray is the all-zero word, and heights increase
// along it.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "treewave/errors.hpp"
#include "treewave/exact_scalar.hpp"

namespace treewave {

using Label = std::uint32_t;

class VertexAddress {
 public:
  VertexAddress() = default;
  explicit VertexAddress(std::vector<Label> labels) : labels_(std::move(labels)) {}
  VertexAddress(std::initializer_list<Label> labels) : labels_(labels) {}

  /// "0,1,0" -> word; "" -> origin.
  static VertexAddress parse(std::string_view text) {
    std::vector<Label> labels;
    if (text.empty()) return VertexAddress();
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find(',', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view tok = text.substr(pos, end - pos);
      Label v{};
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size() || tok.empty()) {
        throw ParameterError("malformed vertex address '" + std::string(text) + "'");
      }
      labels.push_back(v);
      pos = end + 1;
    }
    return VertexAddress(std::move(labels));
  }

  /// |x|, the distance to the origin.
  int length() const { return static_cast<int>(labels_.size()); }
  bool is_origin() const { return labels_.empty(); }
  const std::vector<Label>& labels() const { return labels_; }
  Label operator[](std::size_t i) const { return labels_[i]; }

  VertexAddress parent() const {
    if (labels_.empty()) throw DomainError("the origin has no parent");
    return VertexAddress(std::vector<Label>(labels_.begin(), labels_.end() - 1));
  }
  VertexAddress child(Label l) const {
    std::vector<Label> v = labels_;
    v.push_back(l);
    return VertexAddress(std::move(v));
  }
  VertexAddress prefix(int n) const {
    return VertexAddress(std::vector<Label>(labels_.begin(), labels_.begin() + n));
  }
  bool has_prefix(const VertexAddress& p) const {
    return p.labels_.size() <= labels_.size() &&
           std::equal(p.labels_.begin(), p.labels_.end(), labels_.begin());
  }
  /// Appends `count` zero labels (descends along the leftmost branch).
  VertexAddress extended_by_zeros(int count) const {
    std::vector<Label> v = labels_;
    v.insert(v.end(), static_cast<std::size_t>(count), Label{0});
    return VertexAddress(std::move(v));
  }

  bool is_valid_for(int q) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      Label bound = i == 0 ? static_cast<Label>(q) : static_cast<Label>(q - 1);
      if (labels_[i] > bound) return false;
    }
    return true;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(labels_[i]);
    }
    return s;
  }

  friend auto operator<=>(const VertexAddress&, const VertexAddress&) = default;
  friend bool operator==(const VertexAddress&, const VertexAddress&) = default;

 private:
  std::vector<Label> labels_;
};

inline int common_prefix_length(const VertexAddress& x, const VertexAddress& y) {
  auto n = static_cast<std::size_t>(std::min(x.length(), y.length()));
  std::size_t i = 0;
  while (i < n && x[i] == y[i]) ++i;
  return static_cast<int>(i);
}

/// Graph distance d(x, y).
inline int distance(const VertexAddress& x, const VertexAddress& y) {
  return x.length() + y.length() - 2 * common_prefix_length(x, y);
}

/// Horocyclic height with respect to the end of the all-zero ray:
/// 2 * (number of leading zero labels) - |x|.
inline int height(const VertexAddress& x) {
  int zeros = 0;
  while (zeros < x.length() && x[static_cast<std::size_t>(zeros)] == 0) ++zeros;
  return 2 * zeros - x.length();
}

/// Point of the distinguished geodesic at k >= 0.
inline VertexAddress geodesic_point(int k) { return VertexAddress().extended_by_zeros(k); }

/// Number of children of x in the word scheme.
inline int child_count(const VertexAddress& x, int q) { return x.is_origin() ? q + 1 : q; }

inline void require_valid_q(int q) {
  if (q < 2) throw ParameterError("branching parameter q must be >= 2, got " + std::to_string(q));
}

/// delta(n) = |S(x, n)|: 1 if n = 0, (q+1) q^{n-1} otherwise.
inline BigInt sphere_volume(int q, int n) {
  if (n < 0) return 0;
  if (n == 0) return 1;
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(n - 1));
  return p * (q + 1);
}

inline std::vector<VertexAddress> neighbors(const VertexAddress& x, int q) {
  std::vector<VertexAddress> out;
  out.reserve(static_cast<std::size_t>(q) + 1);
  if (!x.is_origin()) out.push_back(x.parent());
  for (int l = 0; l < child_count(x, q); ++l) out.push_back(x.child(static_cast<Label>(l)));
  return out;
}

namespace detail {

inline void descend(const VertexAddress& v, int depth, int q, std::vector<VertexAddress>& out) {
  if (depth == 0) {
    out.push_back(v);
    return;
  }
  for (int l = 0; l < child_count(v, q); ++l) descend(v.child(static_cast<Label>(l)), depth - 1, q, out);
}

}  // namespace detail

/// Vertices at distance exactly n from `center`, in lexicographic order.
/// Unbounded: callers enforce truncation through Ball.
inline std::vector<VertexAddress> sphere_unbounded(const VertexAddress& center, int n, int q) {
  std::vector<VertexAddress> out;
  if (n < 0) return out;
  int up_max = std::min(n, center.length());
  for (int up = 0; up <= up_max; ++up) {
    VertexAddress a = center.prefix(center.length() - up);
    int down = n - up;
    if (down == 0) {
      out.push_back(a);
    } else if (up == 0) {
      detail::descend(a, down, q, out);
    } else {
      Label came_from = center[static_cast<std::size_t>(center.length() - up)];
      for (int l = 0; l < child_count(a, q); ++l) {
        if (static_cast<Label>(l) == came_from) continue;
        detail::descend(a.child(static_cast<Label>(l)), down - 1, q, out);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Explicit truncation domain B(0, R) of T_q.
class Ball {
 public:
  Ball(int q, int radius) : q_(q), radius_(radius) {
    require_valid_q(q);
    if (radius < 0) throw ParameterError("ball radius must be nonnegative");
  }

  int q() const { return q_; }
  int radius() const { return radius_; }

  bool contains(const VertexAddress& x) const { return x.length() <= radius_; }

  /// 1 + sum_{n=1}^{R} (q+1) q^{n-1}.
  BigInt vertex_count() const {
    BigInt total = 0;
    for (int n = 0; n <= radius_; ++n) total += sphere_volume(q_, n);
    return total;
  }

  /// Throws TruncationError unless level <= R.
  void require(int level, std::string_view what) const {
    if (level > radius_) {
      throw TruncationError(std::string(what) + " reaches radius " + std::to_string(level) +
                            " beyond the truncation ball of radius " + std::to_string(radius_));
    }
  }

  /// All vertices in lexicographic order.
  std::vector<VertexAddress> vertices() const {
    std::vector<VertexAddress> out;
    collect(VertexAddress(), out);
    return out;
  }

  std::vector<VertexAddress> sphere(const VertexAddress& center, int n) const {
    if (!center.is_valid_for(q_)) throw ParameterError("vertex '" + center.to_string() + "' invalid for q");
    require(center.length() + n, "sphere S(" + center.to_string() + ", " + std::to_string(n) + ")");
    return sphere_unbounded(center, n, q_);
  }

 private:
  void collect(const VertexAddress& v, std::vector<VertexAddress>& out) const {
    out.push_back(v);
    if (v.length() == radius_) return;
    for (int l = 0; l < child_count(v, q_); ++l) collect(v.child(static_cast<Label>(l)), out);
  }

  int q_;
  int radius_;
};

}  // namespace treewave
