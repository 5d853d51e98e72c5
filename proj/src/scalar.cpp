#include "twzhu/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace twzhu {

// ---- Poly ----

Poly::Poly(const Rational& c) {
  if (!c.is_zero()) c_.push_back(c);
}

Poly Poly::variable() { return from_coeffs({Rational(0), Rational(1)}); }

Poly Poly::from_coeffs(std::vector<Rational> c) {
  Poly p;
  p.c_ = std::move(c);
  p.trim();
  return p;
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational Poly::eval(const Rational& x) const {
  Rational r(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& c : p.c_) c = -c;
  return p;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  if (s.is_zero()) {
    c_.clear();
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return Poly::from_coeffs(std::move(r));
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  r = a;
  std::vector<Rational> qc(a.c_.size() >= b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 0, Rational(0));
  Rational lead_inv = b.leading().inverse();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    int shift = r.degree() - b.degree();
    Rational f = r.leading() * lead_inv;
    qc[shift] += f;
    for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i + shift] -= f * b.c_[i];
    r.trim();
  }
  q = from_coeffs(std::move(qc));
}

Poly Poly::gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Poly p = *this;
  p *= leading().inverse();
  return p;
}

std::string Poly::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (int p = degree(); p >= 0; --p) {
    const Rational& c = c_[p];
    if (c.is_zero()) continue;
    bool neg = c.sign() < 0;
    Rational m = c.abs();
    std::string term;
    if (p == 0) {
      term = m.to_string();
    } else {
      std::string var = p == 1 ? "k" : "k^" + std::to_string(p);
      term = m.is_one() ? var : m.to_string() + "*" + var;
    }
    if (out.empty())
      out = (neg ? "-" : "") + term;
    else
      out += (neg ? "-" : "+") + term;
  }
  return out;
}

std::size_t Poly::hash() const {
  std::size_t h = c_.size();
  for (const auto& c : c_) h = h * 1315423911u + c.hash();
  return h;
}

// ---- Scalar ----

Scalar::Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("scalar with zero denominator");
  normalize();
}

void Scalar::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(Rational(1));
    return;
  }
  if (den_.is_constant()) {
    if (!den_.constant().is_one()) {
      num_ *= den_.constant().inverse();
      den_ = Poly(Rational(1));
    }
    return;
  }
  Poly g = Poly::gcd(num_, den_);
  if (!g.is_constant()) {
    Poly q, r;
    Poly::divmod(num_, g, q, r);
    num_ = q;
    Poly::divmod(den_, g, q, r);
    den_ = q;
  }
  Rational l = den_.leading();
  if (!l.is_one()) {
    Rational li = l.inverse();
    num_ *= li;
    den_ *= li;
  }
  if (den_.is_constant()) den_ = Poly(Rational(1));
}

Rational Scalar::to_rational() const {
  if (!is_rational()) throw std::domain_error("scalar depends on k: " + to_string());
  return num_.constant();
}

std::optional<Rational> Scalar::eval(const Rational& x) const {
  Rational d = den_.eval(x);
  if (d.is_zero()) return std::nullopt;
  return num_.eval(x) / d;
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  s.num_ = -s.num_;
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (den_.is_constant() && o.den_.is_constant()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
    normalize();
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (den_.is_constant() && o.den_.is_constant()) {
    num_ = num_ * o.num_;
    return *this;
  }
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw std::domain_error("scalar division by zero");
  if (o.is_rational()) {
    num_ *= o.num_.constant().inverse();
    return *this;
  }
  num_ = num_ * o.den_;
  den_ = den_ * o.num_;
  normalize();
  return *this;
}

std::string Scalar::to_string() const {
  if (den_.is_constant()) return num_.to_string();
  auto atom = [](const Poly& p) {
    std::string s = p.to_string();
    bool simple = s.find_first_of("+-*/", s[0] == '-' ? 1 : 0) == std::string::npos;
    return simple ? s : "(" + s + ")";
  };
  // Print with integer coefficients: scale both parts by the common denominator
  // and strip the common content.
  mpz_class l(1), g(0);
  for (const Poly* p : {&num_, &den_})
    for (const auto& c : p->coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.raw().get_den_mpz_t());
  for (const Poly* p : {&num_, &den_})
    for (const auto& c : p->coeffs()) {
      mpz_class v = c.raw().get_num() * (l / c.raw().get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
  Rational f(mpq_class(l, g));
  return atom(num_ * f) + "/" + atom(den_ * f);
}

// ---- parsing ----

namespace {

class ScalarParser {
 public:
  explicit ScalarParser(std::string_view s) : s_(s) {}

  Scalar run() {
    Scalar v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("scalar parse error at " + std::to_string(pos_) + ": " + what + " in '" +
                                std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Scalar expr() {
    Scalar v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  Scalar term() {
    Scalar v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        Scalar d = unary();
        if (d.is_zero()) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }
  Scalar unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Scalar power() {
    Scalar base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
      Scalar r(1);
      for (int i = 0; i < e; ++i) r *= base;
      return r;
    }
    return base;
  }
  Scalar atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Scalar v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (c == 'k') {
      ++pos_;
      return Scalar::level();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Scalar(Rational(mpq_class(mpz_class(std::string(s_.substr(start, pos_ - start))))));
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Scalar Scalar::parse(std::string_view text) { return ScalarParser(text).run(); }

}  // namespace twzhu
