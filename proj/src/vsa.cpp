#include "twzhu/vsa.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

namespace twzhu {

namespace {

Scalar factorial(unsigned n) {
  Rational r(1);
  for (unsigned i = 2; i <= n; ++i) r *= Rational(static_cast<long>(i));
  return Scalar(r);
}

Scalar sign_scalar(bool negative) { return Scalar(negative ? -1 : 1); }

}  // namespace

// ---- Monomial / VElement / LambdaPoly ----

Monomial Monomial::prepend(Field x) const {
  std::vector<Field> f;
  f.reserve(f_.size() + 1);
  f.push_back(x);
  f.insert(f.end(), f_.begin(), f_.end());
  return Monomial(std::move(f));
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ull ^ f_.size();
  for (const auto& x : f_) {
    h ^= (static_cast<std::size_t>(x.gen) << 20 | x.order) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

VElement VElement::from(const Monomial& m, const Scalar& c) {
  VElement e;
  e.add(m, c);
  return e;
}

Scalar VElement::coeff(const Monomial& m) const {
  auto it = t_.find(m);
  return it == t_.end() ? Scalar(0) : it->second;
}

void VElement::add(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = t_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

void VElement::add_scaled(const VElement& o, const Scalar& c) {
  if (c.is_zero()) return;
  if (c.is_one()) {
    for (const auto& [m, v] : o.t_) add(m, v);
  } else {
    for (const auto& [m, v] : o.t_) add(m, v * c);
  }
}

VElement& VElement::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    t_.clear();
    return *this;
  }
  if (c.is_one()) return *this;
  for (auto& [m, v] : t_) v *= c;
  return *this;
}

void LambdaPoly::trim() {
  while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
}

void trim_products(std::vector<VElement>& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

void add_products(std::vector<VElement>& acc, const std::vector<VElement>& p, const Scalar& c, std::size_t shift) {
  if (c.is_zero()) return;
  if (acc.size() < p.size() + shift) acc.resize(p.size() + shift);
  for (std::size_t i = 0; i < p.size(); ++i) acc[i + shift].add_scaled(p[i], c);
}

// ---- GeneratorTable ----

std::uint32_t GeneratorTable::add_generator(Generator g) {
  gens_.push_back(std::move(g));
  return static_cast<std::uint32_t>(gens_.size() - 1);
}

void GeneratorTable::set_bracket(std::uint32_t a, std::uint32_t b, LambdaPoly p) {
  if (a > b) throw std::invalid_argument("bracket table stores pairs with left <= right only");
  p.trim();
  if (p.is_zero())
    br_.erase({a, b});
  else
    br_[{a, b}] = std::move(p);
}

const LambdaPoly* GeneratorTable::bracket(std::uint32_t a, std::uint32_t b) const {
  auto it = br_.find({a, b});
  return it == br_.end() ? nullptr : &it->second;
}

std::optional<std::uint32_t> GeneratorTable::index_of(const std::string& name) const {
  for (std::uint32_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].name == name) return i;
  return std::nullopt;
}

Rational GeneratorTable::weight(const Monomial& m) const {
  Rational w(0);
  for (const auto& f : m.fields()) w += gens_[f.gen].weight + Rational(static_cast<long>(f.order));
  return w;
}

Rational GeneratorTable::zeta(const Monomial& m) const {
  Rational z(0);
  for (const auto& f : m.fields()) z += gens_[f.gen].zeta;
  return z;
}

Phase GeneratorTable::phase(const Monomial& m) const {
  Rational p(0);
  for (const auto& f : m.fields()) p += gens_[f.gen].phase.value();
  return Phase(p);
}

bool GeneratorTable::odd(const Monomial& m) const {
  bool o = false;
  for (const auto& f : m.fields()) o ^= gens_[f.gen].odd;
  return o;
}

Rational GeneratorTable::zeta_unit() const {
  mpz_class n(1);
  for (const auto& g : gens_) {
    mpz_class d = g.zeta.denominator();
    mpz_lcm(n.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  }
  return Rational(mpq_class(mpz_class(1), n));
}

void GeneratorTable::validate() const {
  std::vector<std::string> errs;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const auto& g = gens_[i];
    if (g.name.empty()) errs.push_back("generator " + std::to_string(i) + " has empty name");
    for (std::size_t j = 0; j < i; ++j)
      if (gens_[j].name == g.name) errs.push_back("duplicate generator name " + g.name);
    if (g.zeta.sign() <= 0) errs.push_back("generator " + g.name + " has non-positive pregrade");
  }
  Rational unit = gens_.empty() ? Rational(1) : zeta_unit();
  for (const auto& [key, poly] : br_) {
    auto [a, b] = key;
    if (a >= gens_.size() || b >= gens_.size() || a > b) {
      errs.push_back("bracket entry with invalid index pair");
      continue;
    }
    const auto& ga = gens_[a];
    const auto& gb = gens_[b];
    std::string where = "[" + ga.name + " " + gb.name + "]";
    Rational bound = ga.zeta + gb.zeta - unit;
    for (std::size_t n = 0; n < poly.coeffs.size(); ++n) {
      for (const auto& [m, c] : poly.coeffs[n].terms()) {
        bool ok = true;
        for (const auto& f : m.fields())
          if (f.gen >= gens_.size()) ok = false;
        if (!ok) {
          errs.push_back(where + ": unknown generator in monomial");
          continue;
        }
        for (std::size_t i = 1; i < m.size(); ++i) {
          if (m[i] < m[i - 1]) ok = false;
          if (m[i] == m[i - 1] && gens_[m[i].gen].odd) ok = false;
        }
        if (!ok) errs.push_back(where + ": monomial not in PBW order");
        if (odd(m) != (ga.odd != gb.odd)) errs.push_back(where + ": parity mismatch at lambda^" + std::to_string(n));
        Rational want = ga.weight + gb.weight - Rational(static_cast<long>(n)) - Rational(1);
        if (weight(m) != want)
          errs.push_back(where + ": weight " + weight(m).to_string() + " at lambda^" + std::to_string(n) +
                         ", expected " + want.to_string());
        if (!(phase(m) == ga.phase + gb.phase)) errs.push_back(where + ": phase not additive");
        if (zeta(m) > bound)
          errs.push_back(where + ": pregrade " + zeta(m).to_string() + " exceeds " + bound.to_string());
      }
    }
  }
  if (!errs.empty()) {
    std::ostringstream os;
    for (std::size_t i = 0; i < errs.size(); ++i) os << (i ? "; " : "") << errs[i];
    throw ValidationError(os.str());
  }
}

// ---- Vsa ----

Vsa::Vsa(GeneratorTable table) : table_(std::move(table)) {}

std::size_t Vsa::cache_entries() const {
  return prod_cache_.size() + no_cache_.size() + insert_cache_.size() + translate_cache_.size();
}

const Vsa::Products& Vsa::gen_products(Field a, Field b) {
  return mono_products(Monomial({a}), Monomial({b}));
}

const Vsa::Products& Vsa::mono_products(const Monomial& a, const Monomial& b) {
  PairKey key{a, b};
  auto it = prod_cache_.find(key);
  if (it != prod_cache_.end()) return it->second;
  Products p = compute_mono_products(a, b);
  return prod_cache_.emplace(std::move(key), std::move(p)).first->second;
}

const VElement& Vsa::insert(Field a, const Monomial& b) {
  PairKey key{Monomial({a}), b};
  auto it = insert_cache_.find(key);
  if (it != insert_cache_.end()) return it->second;
  VElement v = compute_insert(a, b);
  return insert_cache_.emplace(std::move(key), std::move(v)).first->second;
}

const VElement& Vsa::mono_no(const Monomial& a, const Monomial& b) {
  PairKey key{a, b};
  auto it = no_cache_.find(key);
  if (it != no_cache_.end()) return it->second;
  VElement v = compute_mono_no(a, b);
  return no_cache_.emplace(std::move(key), std::move(v)).first->second;
}

const VElement& Vsa::mono_translate(const Monomial& m) {
  auto it = translate_cache_.find(m);
  if (it != translate_cache_.end()) return it->second;
  VElement r;
  const auto& f = m.fields();
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<Field> w = f;
    w[i].order += 1;
    r.add_scaled(from_word(w), Scalar(Rational(static_cast<long>(f[i].order + 1))));
  }
  return translate_cache_.emplace(m, std::move(r)).first->second;
}

VElement Vsa::from_word(const std::vector<Field>& word) {
  if (word.empty()) return VElement::vacuum();
  VElement x = VElement::from(Monomial({word.back()}));
  for (std::size_t i = word.size() - 1; i-- > 0;) x = insert_elem(word[i], x);
  return x;
}

VElement Vsa::insert_elem(Field a, const VElement& x) {
  VElement r;
  for (const auto& [m, c] : x.terms()) r.add_scaled(insert(a, m), c);
  return r;
}

VElement Vsa::no_elem_mono(const VElement& x, const Monomial& b) {
  VElement r;
  for (const auto& [m, c] : x.terms()) r.add_scaled(mono_no(m, b), c);
  return r;
}

std::vector<VElement> Vsa::derivative_chain(const VElement& x, unsigned k) {
  std::vector<VElement> d;
  d.reserve(k + 1);
  d.push_back(x);
  for (unsigned j = 1; j <= k; ++j)
    d.push_back(Scalar(Rational(1, static_cast<long>(j))) * translate(d.back()));
  return d;
}

VElement Vsa::reorder_integral(const Products& p) {
  VElement r;
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (p[n].is_zero()) continue;
    r.add_scaled(derivative(p[n], static_cast<unsigned>(n + 1)), Scalar(n % 2 ? -1 : 1));
  }
  return r;
}

VElement Vsa::compute_insert(Field a, const Monomial& b) {
  if (b.empty()) return VElement::from(Monomial({a}));
  Field first = b[0];
  if (a < first || (a == first && !odd_field(a))) return VElement::from(b.prepend(a));
  Monomial rest = b.tail();
  if (a == first) {
    // Repeated odd field: 2 :a:aC:: equals the reordering integral times C.
    VElement r = no_elem_mono(reorder_integral(gen_products(a, a)), rest);
    return Scalar(Rational(1, 2)) * r;
  }
  bool s = odd_field(a) && odd_field(first);
  VElement r = insert_elem(first, insert(a, rest));
  r *= sign_scalar(s);
  r += no_elem_mono(reorder_integral(gen_products(a, first)), rest);
  return r;
}

VElement Vsa::compute_mono_no(const Monomial& a, const Monomial& b) {
  if (a.empty()) return VElement::from(b);
  if (b.empty()) return VElement::from(a);
  if (a.size() == 1) return insert(a[0], b);
  Field x = a[0];
  Monomial rest = a.tail();
  bool s = odd_field(x) && table_.odd(rest);
  VElement r = insert_elem(x, mono_no(rest, b));
  const Products& sp = mono_products(rest, b);
  for (std::size_t n = 0; n < sp.size(); ++n) {
    if (sp[n].is_zero()) continue;
    Field dx{x.gen, static_cast<std::uint32_t>(x.order + n + 1)};
    Scalar coef(binom_int(static_cast<long>(x.order + n + 1), static_cast<unsigned>(n + 1)));
    r.add_scaled(insert_elem(dx, sp[n]), coef);
  }
  const Products& tp = mono_products(Monomial({x}), b);
  if (!tp.empty()) {
    auto d = derivative_chain(VElement::from(rest), static_cast<unsigned>(tp.size()));
    for (std::size_t n = 0; n < tp.size(); ++n) {
      if (tp[n].is_zero()) continue;
      r.add_scaled(normal_order(d[n + 1], tp[n]), sign_scalar(s));
    }
  }
  return r;
}

Vsa::Products Vsa::compute_gen_products(Field a, Field b) {
  Products out;
  if (a.order == 0 && b.order == 0) {
    if (a.gen <= b.gen) {
      if (const LambdaPoly* p = table_.bracket(a.gen, b.gen)) {
        for (std::size_t n = 0; n < p->coeffs.size(); ++n) out.push_back(factorial(static_cast<unsigned>(n)) * p->coeffs[n]);
      }
    } else {
      // Skew-symmetry from the stored pair (b, a).
      const Products& q = gen_products(b, a);
      bool s = odd_field(a) && odd_field(b);
      out.resize(q.size());
      for (std::size_t n = 0; n < q.size(); ++n) {
        for (std::size_t i = 0; n + i < q.size(); ++i) {
          if (q[n + i].is_zero()) continue;
          bool neg = !s;  // overall factor -(-1)^{p(a)p(b)}
          if ((n + i) % 2) neg = !neg;
          out[n].add_scaled(derivative(q[n + i], static_cast<unsigned>(i)), sign_scalar(neg));
        }
      }
    }
    trim_products(out);
    return out;
  }
  // Sesquilinearity: [D^(k)a_l D^(m)b] = ((-l)^k/k!) sum_i l^(m-i)/(m-i)! D^(i)[a_l b].
  const Products& p = gen_products(Field{a.gen, 0}, Field{b.gen, 0});
  unsigned k = a.order, m = b.order;
  for (std::size_t mm = 0; mm < p.size(); ++mm) {
    if (p[mm].is_zero()) continue;
    auto d = derivative_chain(p[mm], m);
    for (unsigned i = 0; i <= m; ++i) {
      if (d[i].is_zero()) continue;
      std::size_t deg = k + (m - i) + mm;
      Scalar coef = factorial(static_cast<unsigned>(deg)) /
                    (factorial(k) * factorial(m - i) * factorial(static_cast<unsigned>(mm)));
      if (k % 2) coef = -coef;
      if (out.size() <= deg) out.resize(deg + 1);
      out[deg].add_scaled(d[i], coef);
    }
  }
  trim_products(out);
  return out;
}

Vsa::Products Vsa::compute_mono_products(const Monomial& a, const Monomial& b) {
  Products acc;
  if (a.empty() || b.empty()) return acc;
  if (a.size() == 1 && b.size() == 1) return compute_gen_products(a[0], b[0]);
  if (a.size() == 1) {
    // Right Wick rule for a_(n) :bC:.
    Field x = a[0];
    Field first = b[0];
    Monomial rest = b.tail();
    bool s = odd_field(x) && odd_field(first);
    const Products& p = gen_products(x, first);
    for (std::size_t n = 0; n < p.size(); ++n) {
      if (p[n].is_zero()) continue;
      if (acc.size() <= n) acc.resize(n + 1);
      acc[n] += no_elem_mono(p[n], rest);
    }
    const Products& q = mono_products(a, rest);
    for (std::size_t n = 0; n < q.size(); ++n) {
      if (q[n].is_zero()) continue;
      if (acc.size() <= n) acc.resize(n + 1);
      acc[n].add_scaled(insert_elem(first, q[n]), sign_scalar(s));
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
      for (const auto& [mono, c] : p[j].terms()) {
        const Products& r = mono_products(mono, rest);
        for (std::size_t mm = 0; mm < r.size(); ++mm) {
          if (r[mm].is_zero()) continue;
          std::size_t n = j + 1 + mm;
          if (acc.size() <= n) acc.resize(n + 1);
          acc[n].add_scaled(r[mm], c * Scalar(binom_int(static_cast<long>(n), static_cast<unsigned>(j))));
        }
      }
    }
    trim_products(acc);
    return acc;
  }
  // Left Wick rule for :x A':_(n) B.
  Field x = a[0];
  Monomial rest = a.tail();
  bool s = odd_field(x) && table_.odd(rest);
  const Products& sp = mono_products(rest, b);
  for (std::size_t m = 0; m < sp.size(); ++m) {
    if (sp[m].is_zero()) continue;
    for (std::size_t j = 0; j <= m; ++j) {
      Field dx{x.gen, static_cast<std::uint32_t>(x.order + j)};
      Scalar coef(binom_int(static_cast<long>(x.order + j), static_cast<unsigned>(j)));
      if (acc.size() <= m - j) acc.resize(m - j + 1);
      acc[m - j].add_scaled(insert_elem(dx, sp[m]), coef);
    }
  }
  const Products& tp = mono_products(Monomial({x}), b);
  if (!tp.empty()) {
    auto d = derivative_chain(VElement::from(rest), static_cast<unsigned>(tp.size() - 1));
    for (std::size_t m = 0; m < tp.size(); ++m) {
      if (tp[m].is_zero()) continue;
      for (std::size_t j = 0; j <= m; ++j) {
        if (d[j].is_zero()) continue;
        if (acc.size() <= m - j) acc.resize(m - j + 1);
        acc[m - j].add_scaled(normal_order(d[j], tp[m]), sign_scalar(s));
      }
    }
    for (std::size_t q = 0; q < tp.size(); ++q) {
      for (const auto& [mono, c] : tp[q].terms()) {
        const Products& r = mono_products(rest, mono);
        for (std::size_t p = 0; p < r.size(); ++p) {
          if (r[p].is_zero()) continue;
          std::size_t n = p + q + 1;
          if (acc.size() <= n) acc.resize(n + 1);
          acc[n].add_scaled(r[p], s ? -c : c);
        }
      }
    }
  }
  trim_products(acc);
  return acc;
}

// ---- public operations ----

VElement Vsa::translate(const VElement& a) {
  VElement r;
  for (const auto& [m, c] : a.terms()) r.add_scaled(mono_translate(m), c);
  return r;
}

VElement Vsa::derivative(const VElement& a, unsigned k) {
  VElement r = a;
  for (unsigned j = 1; j <= k; ++j) {
    r = translate(r);
    r *= Scalar(Rational(1, static_cast<long>(j)));
    if (r.is_zero()) break;
  }
  return r;
}

std::vector<VElement> Vsa::products(const VElement& a, const VElement& b) {
  Products acc;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) add_products(acc, mono_products(ma, mb), ca * cb);
  trim_products(acc);
  return acc;
}

LambdaPoly Vsa::lambda_bracket(const VElement& a, const VElement& b) {
  LambdaPoly lp;
  lp.coeffs = products(a, b);
  for (std::size_t n = 0; n < lp.coeffs.size(); ++n) lp.coeffs[n] *= Scalar(1) / factorial(static_cast<unsigned>(n));
  lp.trim();
  return lp;
}

VElement Vsa::normal_order(const VElement& a, const VElement& b) {
  VElement r;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) r.add_scaled(mono_no(ma, mb), ca * cb);
  return r;
}

VElement Vsa::nth_product(const VElement& a, const VElement& b, long n) {
  if (n >= 0) {
    auto p = products(a, b);
    return static_cast<std::size_t>(n) < p.size() ? p[n] : VElement();
  }
  return normal_order(derivative(a, static_cast<unsigned>(-n - 1)), b);
}

Bigrade Vsa::monomial_grade(const Monomial& m) const {
  Bigrade g;
  g.gamma_bar = table_.phase(m);
  g.weight = table_.weight(m);
  g.mu_bar = Phase(g.weight);
  g.zeta = table_.zeta(m);
  g.odd = table_.odd(m);
  return g;
}

std::optional<Bigrade> Vsa::bigrade(const VElement& a) const {
  if (a.is_zero()) return std::nullopt;
  std::optional<Bigrade> out;
  for (const auto& [m, c] : a.terms()) {
    Bigrade g = monomial_grade(m);
    if (!out) {
      out = g;
      continue;
    }
    if (!(g.gamma_bar == out->gamma_bar) || g.weight != out->weight || g.odd != out->odd) return std::nullopt;
    if (g.zeta > out->zeta) out->zeta = g.zeta;
  }
  return out;
}

std::vector<VElement> Vsa::homogeneous_parts(const VElement& a) const {
  std::map<std::tuple<Rational, Rational, bool>, VElement> parts;
  for (const auto& [m, c] : a.terms()) {
    Bigrade g = monomial_grade(m);
    parts[{g.gamma_bar.value(), g.weight, g.odd}].add(m, c);
  }
  std::vector<VElement> out;
  for (auto& [k, v] : parts) out.push_back(std::move(v));
  return out;
}

namespace {

std::vector<VElement> parity_parts(const GeneratorTable& t, const VElement& a) {
  VElement even, odd;
  for (const auto& [m, c] : a.terms()) (t.odd(m) ? odd : even).add(m, c);
  std::vector<VElement> out;
  if (!even.is_zero()) out.push_back(even);
  if (!odd.is_zero()) out.push_back(odd);
  return out;
}

}  // namespace

bool Vsa::check_skew(const VElement& a0, const VElement& b0) {
  for (const auto& a : parity_parts(table_, a0)) {
    for (const auto& b : parity_parts(table_, b0)) {
      bool s = table_.odd(a.terms().begin()->first) && table_.odd(b.terms().begin()->first);
      auto p = products(a, b);
      auto q = products(b, a);
      std::size_t top = std::max(p.size(), q.size());
      for (std::size_t n = 0; n < top; ++n) {
        VElement rhs;
        for (std::size_t i = 0; n + i < q.size(); ++i) {
          bool neg = !s;
          if ((n + i) % 2) neg = !neg;
          rhs.add_scaled(derivative(q[n + i], static_cast<unsigned>(i)), Scalar(neg ? -1 : 1));
        }
        VElement lhs = n < p.size() ? p[n] : VElement();
        if (!(lhs == rhs)) return false;
      }
    }
  }
  return true;
}

bool Vsa::check_jacobi(const VElement& a0, const VElement& b0, const VElement& c0) {
  for (const auto& a : parity_parts(table_, a0)) {
    for (const auto& b : parity_parts(table_, b0)) {
      for (const auto& c : parity_parts(table_, c0)) {
        bool s = table_.odd(a.terms().begin()->first) && table_.odd(b.terms().begin()->first);
        auto ac = products(a, c);
        auto bc = products(b, c);
        auto ab = products(a, b);
        std::vector<std::vector<VElement>> a_bc, b_ac, ab_c;
        std::size_t k = std::max({ac.size(), bc.size(), ab.size()});
        for (const auto& x : bc) {
          a_bc.push_back(products(a, x));
          k = std::max(k, a_bc.back().size());
        }
        for (const auto& x : ac) {
          b_ac.push_back(products(b, x));
          k = std::max(k, b_ac.back().size());
        }
        for (std::size_t j = 0; j < ab.size(); ++j) {
          ab_c.push_back(products(ab[j], c));
          k = std::max(k, ab_c.back().size() + j);
        }
        auto at = [](const std::vector<std::vector<VElement>>& t, std::size_t i, std::size_t j) -> VElement {
          if (i >= t.size() || j >= t[i].size()) return VElement();
          return t[i][j];
        };
        for (std::size_t m = 0; m < k; ++m) {
          for (std::size_t n = 0; n < k; ++n) {
            VElement lhs = at(a_bc, n, m);
            lhs.add_scaled(at(b_ac, m, n), Scalar(s ? 1 : -1));
            VElement rhs;
            for (std::size_t j = 0; j <= m && j < ab_c.size(); ++j) {
              std::size_t idx = m + n - j;
              rhs.add_scaled(at(ab_c, j, idx), Scalar(binom_int(static_cast<long>(m), static_cast<unsigned>(j))));
            }
            if (!(lhs == rhs)) return false;
          }
        }
      }
    }
  }
  return true;
}

}  // namespace twzhu
