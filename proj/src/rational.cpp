#include "twzhu/rational.hpp"

#include <stdexcept>

namespace twzhu {

Rational::Rational(long n, long d) {
  if (d == 0) throw std::domain_error("zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto strip = [](std::string& t) {
    while (!t.empty() && (t.front() == ' ')) t.erase(t.begin());
    while (!t.empty() && (t.back() == ' ')) t.pop_back();
  };
  strip(s);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto valid_int = [](const std::string& t) {
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string ns = s.substr(0, slash);
  std::string ds = slash == std::string::npos ? "1" : s.substr(slash + 1);
  strip(ns);
  strip(ds);
  if (ns.empty() || ds.empty() || !valid_int(ns) || !valid_int(ds) || ds[0] == '-' || ds[0] == '+')
    throw std::invalid_argument("malformed rational: " + s);
  if (ns[0] == '+') ns.erase(ns.begin());
  mpz_class n(ns), d(ds);
  if (d == 0) throw std::invalid_argument("zero denominator: " + s);
  mpq_class q(n, d);
  q.canonicalize();
  return Rational(q);
}

long Rational::to_long() const {
  if (!is_integer() || !v_.get_num().fits_slong_p()) throw std::overflow_error("not a small integer");
  return v_.get_num().get_si();
}

Rational Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return Rational(mpq_class(q));
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  return Rational(mpq_class(1 / v_));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  v_ /= o.v_;
  return *this;
}

std::string Rational::to_string() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::size_t Rational::hash() const {
  auto limb = [](const mpz_class& z) -> std::size_t {
    std::size_t h = mpz_size(z.get_mpz_t()) ? mpz_getlimbn(z.get_mpz_t(), 0) : 0;
    return h * 2 + (sgn(z) < 0);
  };
  return limb(v_.get_num()) * 1000003u ^ limb(v_.get_den());
}

Rational gen_binom(const Rational& x, unsigned j) {
  mpq_class r(1);
  for (unsigned i = 0; i < j; ++i) {
    r *= (x.raw() - i);
    r /= (i + 1);
  }
  return Rational(r);
}

Rational binom_int(long n, unsigned k) { return gen_binom(Rational(n), k); }

Rational epsilon(const Phase& phase, const Rational& weight) {
  // e = phase - weight mod 1, shifted into (-1, 0].
  Rational t = phase.value() - weight;
  Rational frac = t - t.floor();  // in [0, 1)
  return frac.is_zero() ? Rational(0) : frac - Rational(1);
}

int chi(const Rational& eps_a, const Rational& eps_b) {
  auto in_range = [](const Rational& e) { return e > Rational(-1) && e <= Rational(0); };
  if (!in_range(eps_a) || !in_range(eps_b)) throw std::domain_error("chi: epsilon outside (-1, 0]");
  return (eps_a + eps_b <= Rational(-1)) ? 1 : 0;
}

}  // namespace twzhu
