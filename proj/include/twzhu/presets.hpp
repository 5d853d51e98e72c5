#pragma once

#include "twzhu/vsa.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twzhu {

using LieVec = std::map<std::size_t, Rational>;  // basis index -> coefficient

// Finite-dimensional Lie superalgebra given by structure constants in a basis.
struct LieSuperData {
  std::string name;
  std::vector<std::string> basis;
  std::vector<bool> odd;
  std::vector<std::vector<LieVec>> br;          // br[i][j] = [e_i, e_j]
  std::vector<std::vector<Rational>> form;      // invariant form (e_i|e_j)
  Rational dual_coxeter;
  LieVec x;                                     // grading element
  std::optional<LieVec> f;                      // nilpotent for reductions

  std::size_t dim() const { return basis.size(); }
  std::optional<std::size_t> index_of(const std::string& n) const;
  LieVec bracket(const LieVec& a, const LieVec& b) const;
  Rational pair(const LieVec& a, const LieVec& b) const;
  // ad x eigenvalue per basis element; throws if ad x is not diagonal.
  std::vector<Rational> grades() const;
  // Supertrace form str(ad a ad b), optionally restricted to the grade-0 part.
  Rational killing(const LieVec& a, const LieVec& b, bool grade_zero_only = false) const;
  // Empty when the data is a valid Lie superalgebra with invariant form.
  std::vector<std::string> validate() const;
  // Checks the good-pair conditions for (f, x).
  std::vector<std::string> validate_good_pair() const;
};

LieVec unit(std::size_t i, const Rational& c = Rational(1));

LieSuperData sl2_data();
LieSuperData osp12_data();
// Parses "0", "h/2", "-h/4", "3/2*h", ... as a multiple of a basis element.
LieVec parse_lie_element(const LieSuperData& d, const std::string& text);

struct AutomorphismCheck {
  std::string condition;
  bool pass = true;
  bool skipped = false;
  std::vector<std::string> offending;
};

struct AutomorphismReport {
  bool pass = true;
  std::vector<AutomorphismCheck> checks;
};

AutomorphismReport validate_automorphism(const LieSuperData& d, const std::vector<Phase>& phases,
                                         bool check_f = true);

// Affine vertex superalgebra at the given level, with weights 1 - j.
GeneratorTable affine(const LieSuperData& d, const Scalar& level, const std::vector<Phase>& phases = {});
GeneratorTable virasoro(const Scalar& central_charge);
// One odd generator of weight 1/2 with [Psi_l Psi] = 1.
GeneratorTable free_fermion(const Phase& phase = Phase());
GeneratorTable neutral_fermions(const LieSuperData& d, const std::vector<Phase>& phases = {});
GeneratorTable charged_fermions(const LieSuperData& d, const std::vector<Phase>& phases = {});

// Phase assignment of e^{2 pi i H}: weight mod 1 on each generator.
std::vector<Phase> theta_phases(const GeneratorTable& t);
GeneratorTable with_phases(GeneratorTable t, const std::vector<Phase>& phases);

struct BrstComplex {
  LieSuperData data;
  Scalar level;
  GeneratorTable table;
  VElement q;
  std::vector<int> charge;                       // per generator
  std::vector<std::size_t> positive;             // basis indices with j > 0
  std::vector<std::size_t> half;                 // basis indices with j = 1/2
  std::map<std::size_t, std::uint32_t> affine_gen, neutral_gen, ghost_lower, ghost_upper;
  std::vector<Rational> grades;

  // J_a = a + sum (-1)^{p(c)} c_{a,b}^c :phi_c phi^b:, built with the engine.
  VElement current(Vsa& v, std::size_t a) const;
  // nu_k(a|b) = k(a|b) + kappa_g(a|b)/2 - kappa_g0(a|b)/2
  Scalar nu(std::size_t a, std::size_t b) const;
  int charge_of(const Monomial& m) const;
};

BrstComplex brst_complex(const LieSuperData& d, const Scalar& level, const std::vector<Phase>& phases = {});

}  // namespace twzhu
