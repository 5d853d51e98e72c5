#include "twzhu/sampling.hpp"

#include <algorithm>

namespace twzhu {

namespace {

void extend(const GeneratorTable& t, const Rational& max_weight, std::size_t max_len, std::vector<Field>& cur,
            const Rational& w, std::vector<Monomial>& out) {
  if (w <= max_weight) out.push_back(Monomial(cur));
  if (cur.size() == max_len) return;
  // Remaining factors can lower the weight only through generators of negative weight.
  Rational floor_w;
  for (const auto& g : t.generators())
    if (g.weight.sign() < 0) floor_w += g.weight * Rational(static_cast<long>(max_len));
  for (std::uint32_t g = cur.empty() ? 0 : cur.back().gen; g < t.size(); ++g) {
    std::uint32_t k0 = (!cur.empty() && cur.back().gen == g) ? cur.back().order : 0;
    for (std::uint32_t k = k0;; ++k) {
      Field f{g, k};
      if (!cur.empty() && f == cur.back() && t.gen(g).odd) continue;
      Rational nw = w + t.gen(g).weight + Rational(static_cast<long>(k));
      if (nw + floor_w > max_weight) break;
      cur.push_back(f);
      extend(t, max_weight, max_len, cur, nw, out);
      cur.pop_back();
    }
  }
}

}  // namespace

std::vector<Monomial> enumerate_monomials(const GeneratorTable& t, const Rational& max_weight, std::size_t max_len) {
  std::vector<Monomial> out;
  std::vector<Field> cur;
  extend(t, max_weight, max_len, cur, Rational(0), out);
  std::sort(out.begin(), out.end());
  return out;
}

Sampler::Sampler(const GeneratorTable& t, std::uint64_t seed, const Rational& max_weight, std::size_t max_len)
    : rng_(seed), pool_(enumerate_monomials(t, max_weight, max_len)) {}

VElement Sampler::next(const Vsa& v) {
  if (pool_.empty()) return VElement();
  const Monomial& lead = pool_[below(pool_.size())];
  Bigrade g = v.monomial_grade(lead);
  std::vector<const Monomial*> same;
  for (const auto& m : pool_) {
    Bigrade h = v.monomial_grade(m);
    if (h.gamma_bar == g.gamma_bar && h.weight == g.weight && h.odd == g.odd) same.push_back(&m);
  }
  VElement out;
  std::size_t count = 1 + below(3);
  auto coef = [&] {
    long c = static_cast<long>(below(6)) - 3;
    return c >= 0 ? c + 1 : c;
  };
  out.add(lead, Scalar(coef()));
  for (std::size_t i = 1; i < count; ++i) out.add(*same[below(same.size())], Scalar(coef()));
  if (out.is_zero()) out.add(lead, Scalar(1));
  return out;
}

}  // namespace twzhu
