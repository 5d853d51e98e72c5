#pragma once

#include "twzhu/linalg.hpp"
#include "twzhu/presets.hpp"
#include "twzhu/zhu.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twzhu {

// A free generator of the subcomplex under study, given as an element of the ambient algebra.
struct ComplexGenerator {
  std::string name;
  VElement value;
  Rational weight;
  int charge = 0;
  bool odd = false;
  Rational zeta{1};
};

// Ambient algebra with d = q_(0), plus free generators of a d-stable subalgebra
// whose weight blocks are finite.
struct Complex {
  std::string name;
  GeneratorTable table;
  VElement q;
  std::vector<int> charge;  // per ambient generator
  std::vector<ComplexGenerator> gens;
  std::optional<Rational> critical_level;
};

// Subcomplex of a reduction complex generated by J_a for a of grade <= 0,
// the neutral fermions and the upper ghosts.  The complementary factor is acyclic.
Complex brst_plus(const BrstComplex& c);
// Whole ambient algebra as the complex; every generator must have positive weight.
Complex whole_complex(const std::string& name, const GeneratorTable& t, const VElement& q, const std::vector<int>& charge);

struct BlockRow {
  Rational weight;
  int charge = 0;
  std::size_t dim = 0, rank = 0, kernel = 0, image = 0, cohomology = 0;
};

struct CohomologyReport {
  std::vector<BlockRow> blocks;
  std::vector<Rational> weights;
  std::vector<std::size_t> h0_dims;  // per weight
  std::map<Rational, std::vector<std::string>> h0_reps;
  bool higher_vanish = true;
  bool euler = true;
};

// Vertex-algebra side: exact ranks of d on the finite (weight, charge) blocks.
class VertexCohomology {
 public:
  VertexCohomology(Vsa& v, const Complex& c);

  const Complex& complex() const { return c_; }
  // Generators of the subcomplex as a bracket-free table, used for bases and printing.
  const GeneratorTable& shadow() const { return shadow_; }
  VElement differential(const VElement& a);
  // Image in the ambient algebra of a monomial (or combination) in the subcomplex generators.
  const VElement& lift(const Monomial& m);
  VElement lift(const VElement& combo);
  VElement lift_differential(const Monomial& m);
  std::vector<Monomial> block(const Rational& weight, int charge);
  Rational zeta(const Monomial& m) const;

  CohomologyReport compute(const Rational& dmax);
  // Charge-0 classes of the given weight, as combinations in the subcomplex generators.
  std::vector<VElement> h0_classes(const Rational& weight);
  // Matrix of d on a block, in ambient coordinates; rows follow block().
  std::vector<SparseVec<Monomial, Scalar>> block_matrix(const Rational& weight, int charge);

 private:
  void enumerate(const Rational& dmax);

  Vsa& v_;
  Complex c_;
  GeneratorTable shadow_;
  Rational enumerated_{-1};
  std::map<std::pair<Rational, int>, std::vector<Monomial>> blocks_;
  std::map<Monomial, VElement> lift_cache_;
  std::map<Monomial, VElement> dlift_cache_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, VElement> dgen_cache_;
};

struct ZhuFilteredRow {
  Rational zeta;
  std::map<int, std::size_t> dim;         // per charge
  std::map<int, std::size_t> cohomology;  // per charge
};

struct ZhuH0Report {
  std::vector<std::string> letters;
  std::vector<ZhuFilteredRow> rows;
  std::vector<std::size_t> h0_dims;  // charge 0, per row
  std::vector<std::string> h0_reps;  // new classes at the last cut
  bool filtration_preserved = true;
  bool higher_vanish = true;
};

// Zhu-algebra side: dbar = ad tau(Q) on the pregrade filtration of the
// subalgebra generated by the fixed subcomplex generators.
class ZhuCohomology {
 public:
  ZhuCohomology(Zhu& z, const Complex& c);
  const ZhuElement& q_bar() const { return qbar_; }
  ZhuElement dbar(const ZhuElement& x) { return z_.bracket(qbar_, x); }
  // Letters: subcomplex generators whose value is fixed, with their images.
  const std::vector<std::size_t>& letters() const { return letters_; }
  const ZhuElement& letter_value(std::size_t i) const { return values_.at(i); }
  // Canonical words in the letters with zeta <= zmax, and their products.
  std::vector<std::vector<std::size_t>> words(const Rational& zmax) const;
  ZhuElement word_value(const std::vector<std::size_t>& w);
  Rational zeta(const std::vector<std::size_t>& w) const;
  int charge(const std::vector<std::size_t>& w) const;
  std::string render_word(const std::vector<std::size_t>& w) const;
  Rational step() const;

  ZhuH0Report compute(const Rational& zmax);

 private:
  Zhu& z_;
  Complex c_;
  ZhuElement qbar_;
  std::vector<std::size_t> letters_;
  std::map<std::size_t, ZhuElement> values_;
  std::map<std::vector<std::size_t>, ZhuElement> word_cache_;
};

struct StructureCheck {
  std::string what;
  bool pass = false;
};

struct TheoremBReport {
  std::vector<std::string> generators;  // H^0 generators found on the vertex side, fixed ones only
  std::vector<Rational> zetas;
  std::vector<std::size_t> zhu_of_h;    // filtered dims of Zhu H(C, d)
  std::vector<std::size_t> h_of_zhu;    // filtered dims of H(Zhu C, dbar)
  std::vector<StructureCheck> checks;
  bool commutative = true;
  bool inconclusive = false;
  bool pass = false;
};

// zmax also bounds the weight window used to find generators on the vertex side.
TheoremBReport theorem_b_check(Vsa& v, Zhu& z, const Complex& c, const Rational& zmax);

struct TheoremDReport {
  TheoremBReport b;
  std::vector<std::string> centralizer;   // basis of the centralizer of f in the fixed subalgebra
  std::vector<std::size_t> expected;      // free supercommutative count with Kazhdan degrees
  bool leading_term_nonzero = true;       // weight-2 class has a nonzero Cartan-current part
  bool pass = false;
};

TheoremDReport theorem_d_check(const BrstComplex& brst, const Rational& zmax);

struct SpecializationRow {
  Rational weight;
  int charge = 0;
  std::size_t dim = 0;
  std::size_t symbolic_rank = 0;
  std::vector<std::size_t> ranks;  // per sample level
  bool pass = false;
};

// Symbolic ranks of d against ranks at each sample level, on blocks of dimension <= max_dim.
std::vector<SpecializationRow> specialization_check(VertexCohomology& symbolic, const Rational& dmax,
                                                    const std::vector<Rational>& levels, std::size_t max_dim = 12);

}  // namespace twzhu
