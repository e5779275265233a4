#pragma once

// Exact arithmetic in the quadratic field Q(sqrt q), plus the float64 backend
// that shares its operation surface.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "treewave/errors.hpp"

namespace treewave {

/// Arbitrary-precision rational, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p" or "p/r" with decimal integers. Throws ParameterError on bad input.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParameterError("empty rational literal");
  Rational r;
  if (r.set_str(s, 10) != 0) throw ParameterError("malformed rational literal '" + s + "'");
  if (r.get_den() == 0) throw ArithmeticError("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }

/// Correctly rounded conversion of a rational to the nearest double.
inline double rational_to_double(const Rational& r) {
  mpfr_t x;
  mpfr_init2(x, 53);
  mpfr_set_q(x, r.get_mpq_t(), MPFR_RNDN);
  double d = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  return d;
}

/// Integer square root when q is a perfect square, 0 otherwise.
inline long exact_sqrt(long q) {
  if (q < 0) return 0;
  auto s = static_cast<long>(std::llround(std::sqrt(static_cast<double>(q))));
  for (long c = (s > 1 ? s - 1 : 0); c <= s + 1; ++c) {
    if (c * c == q) return c;
  }
  return 0;
}

/// a + b*sqrt(q) with rational a, b.
///
/// Normal form: when q is a perfect square the surd part is folded into the
/// rational part, so equality is structural. A value built from a bare
/// rational has q == 0 ("unbound") and adopts the q of whatever it meets.
class QSurd {
 public:
  QSurd() = default;
  QSurd(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  explicit QSurd(Rational a) : a_(std::move(a)) { a_.canonicalize(); }
  QSurd(int q, Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)), q_(q) {
    if (q_ != 0 && q_ < 2) throw ParameterError("branching parameter q must be >= 2");
    if (q_ == 0 && b_ != 0) throw ParameterError("surd part requires a branching parameter");
    normalize();
  }

  static QSurd sqrt_of(int q) { return QSurd(q, 0, 1); }

  const Rational& rational_part() const { return a_; }
  const Rational& surd_part() const { return b_; }
  int q() const { return q_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

  QSurd conjugate() const {
    QSurd r = *this;
    r.b_ = -r.b_;
    return r;
  }

  /// Field norm a^2 - q b^2.
  Rational norm() const {
    Rational n = a_ * a_ - Rational(q_) * b_ * b_;
    return n;
  }

  int sign() const {
    int sa = sgn(a_);
    int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // opposite signs: the larger magnitude wins, a^2 vs q b^2
    Rational lhs = a_ * a_;
    Rational rhs = Rational(q_) * b_ * b_;
    return cmp(lhs, rhs) > 0 ? sa : sb;
  }

  /// Nearest double (round-to-nearest, ties to even).
  double to_double() const {
    if (sgn(b_) == 0) return rational_to_double(a_);
    for (mpfr_prec_t prec = 128;; prec *= 2) {
      mpfr_t s_lo, s_hi, lo, hi;
      mpfr_inits2(prec, s_lo, s_hi, lo, hi, static_cast<mpfr_ptr>(nullptr));
      mpfr_set_si(s_lo, q_, MPFR_RNDN);
      mpfr_sqrt(s_lo, s_lo, MPFR_RNDD);
      mpfr_set_si(s_hi, q_, MPFR_RNDN);
      mpfr_sqrt(s_hi, s_hi, MPFR_RNDU);
      if (sgn(b_) > 0) {
        mpfr_mul_q(lo, s_lo, b_.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(hi, s_hi, b_.get_mpq_t(), MPFR_RNDU);
      } else {
        mpfr_mul_q(lo, s_hi, b_.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(hi, s_lo, b_.get_mpq_t(), MPFR_RNDU);
      }
      mpfr_add_q(lo, lo, a_.get_mpq_t(), MPFR_RNDD);
      mpfr_add_q(hi, hi, a_.get_mpq_t(), MPFR_RNDU);
      double dlo = mpfr_get_d(lo, MPFR_RNDN);
      double dhi = mpfr_get_d(hi, MPFR_RNDN);
      mpfr_clears(s_lo, s_hi, lo, hi, static_cast<mpfr_ptr>(nullptr));
      if (dlo == dhi || prec > (1 << 16)) return dlo;
    }
  }

  QSurd operator-() const { return QSurd(Raw{}, -a_, -b_, q_); }

  QSurd& operator+=(const QSurd& o) {
    q_ = common_q(q_, o.q_);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  QSurd& operator-=(const QSurd& o) {
    q_ = common_q(q_, o.q_);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  QSurd& operator*=(const QSurd& o) {
    int q = common_q(q_, o.q_);
    if (sgn(b_) == 0 && sgn(o.b_) == 0) {
      a_ *= o.a_;
    } else {
      Rational a = a_ * o.a_ + Rational(q) * b_ * o.b_;
      Rational b = a_ * o.b_ + b_ * o.a_;
      a_ = std::move(a);
      b_ = std::move(b);
    }
    q_ = q;
    return *this;
  }
  QSurd& operator/=(const QSurd& o) {
    int q = common_q(q_, o.q_);
    if (o.is_zero()) throw ArithmeticError("division by zero in Q(sqrt q)");
    if (sgn(o.b_) == 0) {
      a_ /= o.a_;
      b_ /= o.a_;
      q_ = q;
      return *this;
    }
    Rational n = o.norm();
    QSurd num = *this;
    num *= o.conjugate();
    a_ = num.a_ / n;
    b_ = num.b_ / n;
    q_ = q;
    return *this;
  }

  QSurd& operator*=(const Rational& r) {
    a_ *= r;
    b_ *= r;
    return *this;
  }

  friend QSurd operator+(QSurd x, const QSurd& y) { return x += y; }
  friend QSurd operator-(QSurd x, const QSurd& y) { return x -= y; }
  friend QSurd operator*(QSurd x, const QSurd& y) { return x *= y; }
  friend QSurd operator/(QSurd x, const QSurd& y) { return x /= y; }

  friend bool operator==(const QSurd& x, const QSurd& y) {
    (void)common_q(x.q_, y.q_);
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend std::strong_ordering operator<=>(const QSurd& x, const QSurd& y) {
    int s = (x - y).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Human-readable "a + b*sqrt(q)".
  std::string to_string() const {
    if (sgn(b_) == 0) return a_.get_str();
    std::string root = "sqrt(" + std::to_string(q_) + ")";
    if (sgn(a_) == 0) return b_.get_str() + "*" + root;
    if (sgn(b_) < 0) return a_.get_str() + " - " + Rational(-b_).get_str() + "*" + root;
    return a_.get_str() + " + " + b_.get_str() + "*" + root;
  }

  friend std::ostream& operator<<(std::ostream& os, const QSurd& x) { return os << x.to_string(); }

 private:
  struct Raw {};
  QSurd(Raw, Rational a, Rational b, int q) : a_(std::move(a)), b_(std::move(b)), q_(q) {}

  static int common_q(int p, int r) {
    if (p == 0) return r;
    if (r == 0 || p == r) return p;
    throw ParameterError("mismatched branching parameters q=" + std::to_string(p) +
                         " and q=" + std::to_string(r));
  }

  void normalize() {
    a_.canonicalize();
    b_.canonicalize();
    if (q_ == 0 || sgn(b_) == 0) return;
    if (long s = exact_sqrt(q_); s != 0) {
      a_ += b_ * s;
      b_ = 0;
    }
  }

  Rational a_{0};
  Rational b_{0};
  int q_{0};
};

enum class ScalarMode { exact, float64 };

inline std::string_view to_string(ScalarMode m) { return m == ScalarMode::exact ? "exact" : "float"; }

inline ScalarMode parse_scalar_mode(std::string_view s) {
  if (s == "exact") return ScalarMode::exact;
  if (s == "float" || s == "float64") return ScalarMode::float64;
  throw UsageError("mode: expected exact|float, got '" + std::string(s) + "'");
}

template <class T>
concept WaveScalar = std::same_as<T, QSurd> || std::same_as<T, double>;

/// Constants and conversions for a scalar backend at a fixed q.
template <WaveScalar T>
struct ScalarField;

template <>
struct ScalarField<QSurd> {
  static constexpr ScalarMode mode = ScalarMode::exact;
  int q;

  QSurd zero() const { return QSurd(q, 0, 0); }
  QSurd one() const { return QSurd(q, 1, 0); }
  QSurd from_int(long v) const { return QSurd(q, v, 0); }
  QSurd from_rational(const Rational& r) const { return QSurd(q, r, 0); }
  QSurd from_count(const BigInt& n) const { return QSurd(q, Rational(n), 0); }
  QSurd sqrt_q() const { return QSurd::sqrt_of(q); }

  /// q^{e/2} for any integer e.
  QSurd pow_sqrt_q(int e) const {
    int m = e >= 0 ? e : -e;
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(m / 2));
    QSurd r = (m % 2 == 0) ? QSurd(q, Rational(p), 0) : QSurd(q, 0, Rational(p));
    return e >= 0 ? r : one() / r;
  }

  static bool is_zero(const QSurd& x) { return x.is_zero(); }
  static int sign(const QSurd& x) { return x.sign(); }
  static double to_double(const QSurd& x) { return x.to_double(); }
};

template <>
struct ScalarField<double> {
  static constexpr ScalarMode mode = ScalarMode::float64;
  int q;

  double zero() const { return 0.0; }
  double one() const { return 1.0; }
  double from_int(long v) const { return static_cast<double>(v); }
  double from_rational(const Rational& r) const { return rational_to_double(r); }
  double from_count(const BigInt& n) const { return n.get_d(); }
  double sqrt_q() const { return std::sqrt(static_cast<double>(q)); }
  double pow_sqrt_q(int e) const { return std::pow(static_cast<double>(q), 0.5 * e); }

  static bool is_zero(double x) { return x == 0.0; }
  static int sign(double x) { return (x > 0) - (x < 0); }
  static double to_double(double x) { return x; }
};

template <WaveScalar T>
double to_double(const T& x) {
  return ScalarField<T>::to_double(x);
}

}  // namespace treewave
