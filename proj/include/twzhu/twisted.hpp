#pragma once

#include "twzhu/vsa.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twzhu {

struct GammaData {
  Rational epsilon;  // in (-1, 0]
  Rational gamma;    // epsilon + weight
};

// Twisted products on top of an engine; the automorphism is the table's phase column.
class Twisted {
 public:
  explicit Twisted(Vsa& v) : v_(v) {}
  Vsa& engine() { return v_; }

  GammaData gamma_data(const Monomial& m) const;
  // Throws std::invalid_argument on inhomogeneous or zero input.
  GammaData gamma_data(const VElement& a) const;
  int chi(const VElement& a, const VElement& b) const;

  // Pieces of equal (phase, weight, parity); the formulas below are applied per piece.
  std::vector<VElement> split(const VElement& a) const { return v_.homogeneous_parts(a); }

  VElement star_n(const VElement& a, const VElement& b, long n);
  VElement star(const VElement& a, const VElement& b) { return star_n(a, b, -1); }
  VElement circ(const VElement& a, const VElement& b) { return star_n(a, b, -2); }
  VElement star_bracket(const VElement& a, const VElement& b);
  VElement h_g(const VElement& a) const;  // gamma_a a
  VElement h(const VElement& a) const;    // weight_a a
  // a *_n b vanishes for every n >= this bound.
  long star_bound(const VElement& a, const VElement& b);

 private:
  Vsa& v_;
};

struct IdentityParams {
  long m = 0, n = 0, k = 0;
};

struct IdentityResult {
  bool pass = false;
  VElement lhs, rhs;
};

struct IdentityInfo {
  std::string name;
  int arity;
  bool uses_m, uses_n, uses_k;
  long k_min;  // smallest admissible k
};

const std::vector<IdentityInfo>& identities();
const IdentityInfo& identity_info(const std::string& name);  // throws std::invalid_argument

IdentityResult verify_identity(Twisted& tw, const std::string& name, const std::vector<VElement>& args,
                               const IdentityParams& p = {});

}  // namespace twzhu
