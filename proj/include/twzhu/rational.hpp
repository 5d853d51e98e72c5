#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace twzhu {

// Exact rational number, always in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long n, long d);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "p", "-p", "p/q".  Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  // Fits in a long when is_integer(); throws otherwise.
  long to_long() const;

  Rational floor() const;
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  Rational inverse() const;

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  // "p/q", with "/q" omitted for integers.
  std::string to_string() const;
  std::size_t hash() const;

 private:
  mpq_class v_{0};
};

// x(x-1)...(x-j+1)/j!
Rational gen_binom(const Rational& x, unsigned j);

// Class in Q/Z, stored by its representative in [0, 1).
class Phase {
 public:
  Phase() = default;
  explicit Phase(const Rational& r) : v_(r - r.floor()) {}
  const Rational& value() const { return v_; }
  bool is_zero() const { return v_.is_zero(); }
  Phase operator+(const Phase& o) const { return Phase(v_ + o.v_); }
  Phase operator-(const Phase& o) const { return Phase(v_ - o.v_); }
  Phase operator-() const { return Phase(-v_); }
  friend bool operator==(const Phase&, const Phase&) = default;
  friend auto operator<=>(const Phase&, const Phase&) = default;
  std::string to_string() const { return v_.to_string(); }

 private:
  Rational v_;
};

// The unique e in (-1, 0] with e + weight congruent to phase mod 1.
Rational epsilon(const Phase& phase, const Rational& weight);

// 1 if eps_a + eps_b <= -1 else 0.  Both arguments must lie in (-1, 0].
int chi(const Rational& eps_a, const Rational& eps_b);

// Binomial with integer top, for the mode-algebra bookkeeping.
Rational binom_int(long n, unsigned k);

}  // namespace twzhu

template <>
struct std::hash<twzhu::Rational> {
  std::size_t operator()(const twzhu::Rational& r) const { return r.hash(); }
};
