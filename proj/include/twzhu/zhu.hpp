#pragma once

#include "twzhu/presets.hpp"
#include "twzhu/twisted.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twzhu {

// Ordered product of fixed generators in the Zhu algebra.  Canonical when
// nondecreasing and strictly increasing across repeated odd letters.
using ZhuWord = std::vector<std::uint32_t>;

class ZhuElement {
 public:
  using Terms = std::map<ZhuWord, Scalar>;
  ZhuElement() = default;
  static ZhuElement one() { return word({}); }
  static ZhuElement word(ZhuWord w, const Scalar& c = Scalar(1));

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  Scalar coeff(const ZhuWord& w) const;

  void add(const ZhuWord& w, const Scalar& c);
  void add_scaled(const ZhuElement& o, const Scalar& c);
  ZhuElement& operator+=(const ZhuElement& o) { add_scaled(o, Scalar(1)); return *this; }
  ZhuElement& operator-=(const ZhuElement& o) { add_scaled(o, Scalar(-1)); return *this; }
  friend ZhuElement operator+(ZhuElement a, const ZhuElement& b) { return a += b; }
  friend ZhuElement operator-(ZhuElement a, const ZhuElement& b) { return a -= b; }
  friend ZhuElement operator*(const Scalar& c, const ZhuElement& a) {
    ZhuElement r;
    r.add_scaled(a, c);
    return r;
  }
  friend bool operator==(const ZhuElement&, const ZhuElement&) = default;

 private:
  Terms t_;
};

// The twisted Zhu algebra of the engine's algebra, for the automorphism
// recorded in the phase column.  Caches products; one instance per thread.
class Zhu {
 public:
  explicit Zhu(Twisted& tw);
  Zhu(const Zhu&) = delete;
  Zhu& operator=(const Zhu&) = delete;

  Twisted& twisted() { return tw_; }
  Vsa& engine() { return tw_.engine(); }
  const GeneratorTable& table() const { return tw_.engine().table(); }

  bool is_fixed(const Monomial& m) const;
  bool is_fixed(const VElement& a) const;
  bool is_fixed_generator(std::uint32_t g) const { return fixed_flag_.at(g); }
  const std::vector<std::uint32_t>& fixed_generators() const { return fixed_; }

  bool canonical(const ZhuWord& w) const;
  Rational zeta(const ZhuWord& w) const;
  Rational weight(const ZhuWord& w) const;
  bool odd(const ZhuWord& w) const;

  // Right-nested star product of the fields of m.
  VElement star_word(const Monomial& m);
  // Coordinates in the basis of right-nested star words; keys reuse the monomial ordering.
  std::map<Monomial, Scalar> star_form(const VElement& a);

  // Projection onto the Zhu algebra; throws std::invalid_argument unless a is fixed.
  ZhuElement tau(const VElement& a);
  bool j_contains(const VElement& a) { return tau(a).is_zero(); }

  ZhuElement mul(const ZhuElement& x, const ZhuElement& y);
  ZhuElement bracket(const ZhuElement& x, const ZhuElement& y);
  // Straightened product of the letters of an arbitrary word.
  const ZhuElement& normalize(const ZhuWord& w);
  // [a, b] for fixed generators a, b.
  const ZhuElement& generator_bracket(std::uint32_t a, std::uint32_t b);

 private:
  const std::map<Monomial, Scalar>& star_form_mono(const Monomial& m);
  const ZhuElement& tau_mono(const Monomial& m);
  ZhuElement splice(const ZhuWord& w, std::size_t at, const ZhuElement& mid);

  Twisted& tw_;
  std::vector<bool> fixed_flag_;
  std::vector<std::uint32_t> fixed_;
  std::map<Monomial, VElement> star_word_cache_;
  std::map<Monomial, std::map<Monomial, Scalar>> star_form_cache_;
  std::map<Monomial, ZhuElement> tau_cache_;
  std::map<ZhuWord, ZhuElement> normal_cache_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, ZhuElement> bracket_cache_;
};

std::string render(const GeneratorTable& t, const ZhuElement& x);
// Parses products of generator names such as "e*f - 2*h + 1/2"; letters need not be ordered.
ZhuElement parse_zhu(Zhu& z, const std::string& text);

// Canonical words with zeta <= zeta_max, sorted by (zeta, word).
std::vector<ZhuWord> pbw_words(const Zhu& z, const Rational& zeta_max);

struct CensusRow {
  Rational zeta;
  std::size_t expected = 0;  // free supercommutative count on the fixed letters
  std::size_t computed = 0;  // rank of straightened reversed products
};
struct CensusReport {
  std::vector<CensusRow> rows;
  bool pass = true;
};
CensusReport pbw_census(Zhu& z, const Rational& zeta_max);

// Derivatives of fixed generators: tau(D^(k) e - binom(-weight, k) e) = 0 for k <= kmax,
// and these elements span the kernel of tau on the span of D^(k) e, k <= kmax.
struct ZhuRReport {
  std::size_t generators = 0;
  std::size_t kernel_dim = 0;
  std::size_t expected_kernel = 0;
  bool relations_hold = true;
  bool pass = true;
};
ZhuRReport zhu_r_check(Zhu& z, unsigned kmax = 6);

struct GradedRow {
  Rational weight;
  std::size_t zhu = 0;   // dim gr^p of the weight filtration on the Zhu side
  std::size_t free = 0;  // dim of degree p in the free supercommutative algebra
};
struct TheoremEReport {
  Rational zeta_cap;
  std::vector<GradedRow> rows;
  bool pass = true;
};
// zeta_cap bounds the pregrade on both sides; it is needed when some letter has weight <= 0.
TheoremEReport theorem_e_dims(Zhu& z, const Rational& dmax, std::optional<Rational> zeta_cap = std::nullopt);

struct TheoremCEntry {
  std::string a, b;
  std::string computed;  // [a~, b~] from the Zhu algebra, in shifted letters
  std::string expected;  // [a, b] in the fixed subalgebra
  bool pass = false;
};
struct TheoremCReport {
  std::vector<std::string> fixed;  // basis of the fixed subalgebra
  bool closed = true;              // the fixed span is a subalgebra
  bool commutative = true;
  std::vector<TheoremCEntry> entries;
  bool pass = true;
};
// Affine algebra at symbolic level with the given phases.
TheoremCReport theorem_c_check(const LieSuperData& d, const std::vector<Phase>& phases = {});

}  // namespace twzhu
