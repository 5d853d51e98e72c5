#pragma once

#include "twzhu/vsa.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace twzhu {

// All PBW monomials of weight <= max_weight with at most max_len factors.
std::vector<Monomial> enumerate_monomials(const GeneratorTable& t, const Rational& max_weight, std::size_t max_len);

// Seeded source of homogeneous sample elements; same seed, same sequence.
class Sampler {
 public:
  Sampler(const GeneratorTable& t, std::uint64_t seed, const Rational& max_weight, std::size_t max_len = 3);
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  // 1 to 3 monomials of one bigrade class with small nonzero integer coefficients.
  VElement next(const Vsa& v);
  // Restricts draws to monomials passing the filter.
  template <class Pred>
  void keep_if(Pred p) {
    std::vector<Monomial> kept;
    for (auto& m : pool_)
      if (p(m)) kept.push_back(m);
    pool_ = std::move(kept);
  }
  bool empty() const { return pool_.empty(); }

 private:
  std::mt19937_64 rng_;
  std::vector<Monomial> pool_;
};

}  // namespace twzhu
