#pragma once

#include "twzhu/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twzhu {

// Dense univariate polynomial over Q in the level indeterminate k.
// Coefficients are stored low degree first, with no trailing zeros.
class Poly {
 public:
  Poly() = default;
  Poly(const Rational& c);  // NOLINT(google-explicit-constructor)
  static Poly variable();
  static Poly from_coeffs(std::vector<Rational> c);

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
  Rational constant() const { return c_.empty() ? Rational(0) : c_.front(); }
  Rational eval(const Rational& x) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend bool operator==(const Poly&, const Poly&) = default;

  // Euclidean division; divisor must be nonzero.
  static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
  // Monic gcd (zero only if both are zero).
  static Poly gcd(Poly a, Poly b);
  Poly monic() const;

  std::string to_string() const;
  std::size_t hash() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

// Element of Q(k): numerator over a monic denominator, coprime.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long n) : num_(Rational(n)) {}               // NOLINT
  Scalar(const Rational& r) : num_(r) {}              // NOLINT
  Scalar(const Poly& p) : num_(p) {}                  // NOLINT
  Scalar(Poly num, Poly den);
  static Scalar level() { return Scalar(Poly::variable()); }

  // Parses expressions in k with + - * / ^ and parentheses.
  static Scalar parse(std::string_view text);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return den_.is_constant() && num_.is_constant() && num_.constant().is_one(); }
  bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
  // Constant value; throws if the scalar depends on k.
  Rational to_rational() const;
  // Value at k = x; nullopt when the denominator vanishes there.
  std::optional<Rational> eval(const Rational& x) const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar&, const Scalar&) = default;

  std::string to_string() const;
  std::size_t hash() const { return num_.hash() * 31 + den_.hash(); }

 private:
  void normalize();
  Poly num_;
  Poly den_{Rational(1)};
};

}  // namespace twzhu
