#pragma once

#include "twzhu/scalar.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace twzhu {

// A divided-power derivative of a generator, D^(order) gen.
// Ordering is by generator index first, then derivative order.
struct Field {
  std::uint32_t gen = 0;
  std::uint32_t order = 0;
  friend auto operator<=>(const Field&, const Field&) = default;
  friend bool operator==(const Field&, const Field&) = default;
};

// Ordered product :f1 f2 ... fs: of fields, nondecreasing.  Empty is the vacuum.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<Field> f) : f_(std::move(f)) {}
  static Monomial single(std::uint32_t gen, std::uint32_t order = 0) { return Monomial({Field{gen, order}}); }

  const std::vector<Field>& fields() const { return f_; }
  std::size_t size() const { return f_.size(); }
  bool empty() const { return f_.empty(); }
  const Field& operator[](std::size_t i) const { return f_[i]; }
  Monomial tail() const { return Monomial(std::vector<Field>(f_.begin() + 1, f_.end())); }
  Monomial prepend(Field x) const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;
  std::size_t hash() const;

 private:
  std::vector<Field> f_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

// Finite Scalar-linear combination of monomials; zero coefficients never stored.
class VElement {
 public:
  using Terms = std::map<Monomial, Scalar>;
  VElement() = default;
  static VElement vacuum() { return from(Monomial(), Scalar(1)); }
  static VElement from(const Monomial& m, const Scalar& c = Scalar(1));
  static VElement generator(std::uint32_t gen, std::uint32_t order = 0) { return from(Monomial::single(gen, order)); }

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  Scalar coeff(const Monomial& m) const;

  void add(const Monomial& m, const Scalar& c);
  void add_scaled(const VElement& o, const Scalar& c);
  VElement& operator+=(const VElement& o) { add_scaled(o, Scalar(1)); return *this; }
  VElement& operator-=(const VElement& o) { add_scaled(o, Scalar(-1)); return *this; }
  VElement& operator*=(const Scalar& c);
  friend VElement operator+(VElement a, const VElement& b) { return a += b; }
  friend VElement operator-(VElement a, const VElement& b) { return a -= b; }
  friend VElement operator*(const Scalar& c, VElement a) { return a *= c; }
  VElement operator-() const { VElement r = *this; return r *= Scalar(-1); }
  friend bool operator==(const VElement&, const VElement&) = default;

 private:
  Terms t_;
};

// Polynomial in lambda with VElement coefficients, trailing zeros trimmed.
struct LambdaPoly {
  std::vector<VElement> coeffs;
  void trim();
  bool is_zero() const { return coeffs.empty(); }
  friend bool operator==(const LambdaPoly&, const LambdaPoly&) = default;
};

struct Generator {
  std::string name;
  bool odd = false;
  Rational weight;
  Phase phase;
  Rational zeta{1};
  friend bool operator==(const Generator&, const Generator&) = default;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Free generators plus their lambda-bracket table, stored for index pairs a <= b.
class GeneratorTable {
 public:
  std::uint32_t add_generator(Generator g);
  void set_bracket(std::uint32_t a, std::uint32_t b, LambdaPoly p);

  const std::vector<Generator>& generators() const { return gens_; }
  const Generator& gen(std::uint32_t i) const { return gens_.at(i); }
  std::size_t size() const { return gens_.size(); }
  std::optional<std::uint32_t> index_of(const std::string& name) const;
  const std::map<std::pair<std::uint32_t, std::uint32_t>, LambdaPoly>& brackets() const { return br_; }
  const LambdaPoly* bracket(std::uint32_t a, std::uint32_t b) const;

  void set_phase(std::uint32_t i, const Phase& p) { gens_.at(i).phase = p; }

  Rational weight(const Monomial& m) const;
  Rational zeta(const Monomial& m) const;
  Phase phase(const Monomial& m) const;
  bool odd(const Monomial& m) const;
  Rational zeta_unit() const;  // 1/N with Gamma = (1/N)Z

  // Throws ValidationError listing every violated table invariant.
  void validate() const;

  friend bool operator==(const GeneratorTable&, const GeneratorTable&) = default;

 private:
  std::vector<Generator> gens_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, LambdaPoly> br_;
};

struct Bigrade {
  Phase gamma_bar;
  Phase mu_bar;
  Rational weight;
  Rational zeta;  // maximum over the monomials
  bool odd = false;
  friend bool operator==(const Bigrade&, const Bigrade&) = default;
};

// Free vertex superalgebra generated by a table.  Holds memo caches, so an
// instance must not be shared across threads; copies of results are plain values.
class Vsa {
 public:
  explicit Vsa(GeneratorTable table);
  Vsa(const Vsa&) = delete;
  Vsa& operator=(const Vsa&) = delete;

  const GeneratorTable& table() const { return table_; }

  VElement translate(const VElement& a);
  // Divided power D^(k) a.
  VElement derivative(const VElement& a, unsigned k);
  // All products a_(n) b for n = 0, 1, ... up to the last nonzero one.
  std::vector<VElement> products(const VElement& a, const VElement& b);
  LambdaPoly lambda_bracket(const VElement& a, const VElement& b);
  VElement normal_order(const VElement& a, const VElement& b);
  VElement nth_product(const VElement& a, const VElement& b, long n);
  // Normal form of the right-nested product of a word of fields.
  VElement from_word(const std::vector<Field>& word);

  std::optional<Bigrade> bigrade(const VElement& a) const;
  Bigrade monomial_grade(const Monomial& m) const;
  // Splits an element into pieces homogeneous in (phase, weight, parity).
  std::vector<VElement> homogeneous_parts(const VElement& a) const;

  bool check_skew(const VElement& a, const VElement& b);
  bool check_jacobi(const VElement& a, const VElement& b, const VElement& c);

  // Memo statistics, for diagnostics only.
  std::size_t cache_entries() const;

 private:
  struct PairKey {
    Monomial a, b;
    friend bool operator==(const PairKey&, const PairKey&) = default;
  };
  struct PairHash {
    std::size_t operator()(const PairKey& k) const { return k.a.hash() * 1000003u ^ k.b.hash(); }
  };
  using Products = std::vector<VElement>;

  const Products& gen_products(Field a, Field b);
  const Products& mono_products(const Monomial& a, const Monomial& b);
  const VElement& insert(Field a, const Monomial& b);
  const VElement& mono_no(const Monomial& a, const Monomial& b);
  const VElement& mono_translate(const Monomial& m);

  Products compute_gen_products(Field a, Field b);
  Products compute_mono_products(const Monomial& a, const Monomial& b);
  VElement compute_insert(Field a, const Monomial& b);
  VElement compute_mono_no(const Monomial& a, const Monomial& b);

  VElement insert_elem(Field a, const VElement& x);
  VElement no_elem_mono(const VElement& x, const Monomial& b);
  // Sum over n of (-1)^n D^(n+1)(p[n]), the reordering correction.
  VElement reorder_integral(const Products& p);
  std::vector<VElement> derivative_chain(const VElement& x, unsigned k);

  bool odd_field(Field f) const { return table_.gen(f.gen).odd; }

  GeneratorTable table_;
  std::vector<std::vector<Products>> base_;  // generator-pair products, both orders
  std::unordered_map<PairKey, Products, PairHash> prod_cache_;
  std::unordered_map<PairKey, VElement, PairHash> no_cache_;
  std::unordered_map<PairKey, VElement, PairHash> insert_cache_;
  std::unordered_map<Monomial, VElement, MonomialHash> translate_cache_;
};

void add_products(std::vector<VElement>& acc, const std::vector<VElement>& p, const Scalar& c, std::size_t shift = 0);
void trim_products(std::vector<VElement>& p);

}  // namespace twzhu
