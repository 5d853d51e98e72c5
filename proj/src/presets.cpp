#include "twzhu/presets.hpp"

#include "twzhu/linalg.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace twzhu {

namespace {

void add_to(LieVec& v, std::size_t i, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = v.emplace(i, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) v.erase(it);
  }
}

void add_scaled(LieVec& v, const LieVec& w, const Rational& c) {
  for (const auto& [i, x] : w) add_to(v, i, x * c);
}

int sgn_parity(bool a, bool b) { return (a && b) ? -1 : 1; }

bool vec_odd(const LieSuperData& d, const LieVec& v, bool& mixed) {
  bool seen_even = false, seen_odd = false;
  for (const auto& [i, c] : v) (d.odd[i] ? seen_odd : seen_even) = true;
  mixed = seen_even && seen_odd;
  return seen_odd;
}

}  // namespace

LieVec unit(std::size_t i, const Rational& c) {
  LieVec v;
  if (!c.is_zero()) v[i] = c;
  return v;
}

std::optional<std::size_t> LieSuperData::index_of(const std::string& n) const {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i] == n) return i;
  return std::nullopt;
}

LieVec LieSuperData::bracket(const LieVec& a, const LieVec& b) const {
  LieVec out;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) add_scaled(out, br[i][j], x * y);
  return out;
}

Rational LieSuperData::pair(const LieVec& a, const LieVec& b) const {
  Rational s;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) s += x * y * form[i][j];
  return s;
}

std::vector<Rational> LieSuperData::grades() const {
  std::vector<Rational> g(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    LieVec v = bracket(x, unit(i));
    for (const auto& [j, c] : v) {
      if (j != i) throw ValidationError("ad x is not diagonal on " + basis[i]);
      g[i] = c;
    }
  }
  return g;
}

Rational LieSuperData::killing(const LieVec& a, const LieVec& b, bool grade_zero_only) const {
  std::vector<Rational> g;
  if (grade_zero_only) g = grades();
  Rational s;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (grade_zero_only && !g[i].is_zero()) continue;
    LieVec v = bracket(a, bracket(b, unit(i)));
    auto it = v.find(i);
    if (it == v.end()) continue;
    s += odd[i] ? -it->second : it->second;
  }
  return s;
}

std::vector<std::string> LieSuperData::validate() const {
  std::vector<std::string> errs;
  const std::size_t n = dim();
  if (odd.size() != n || br.size() != n || form.size() != n) {
    errs.push_back("table sizes do not match the basis");
    return errs;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (br[i].size() != n || form[i].size() != n) {
      errs.push_back("table sizes do not match the basis");
      return errs;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::string pr = "(" + basis[i] + ", " + basis[j] + ")";
      // parity of the bracket
      for (const auto& [k, c] : br[i][j])
        if (odd[k] != (odd[i] != odd[j])) errs.push_back("bracket parity " + pr);
      LieVec sum = br[i][j];
      add_scaled(sum, br[j][i], Rational(sgn_parity(odd[i], odd[j])));
      if (!sum.empty()) errs.push_back("antisupersymmetry " + pr);
      if (!form[i][j].is_zero() && odd[i] != odd[j]) errs.push_back("form not even " + pr);
      if (form[i][j] != form[j][i] * Rational(sgn_parity(odd[i], odd[j])))
        errs.push_back("form not supersymmetric " + pr);
      for (std::size_t k = 0; k < n; ++k) {
        // [a,[b,c]] = [[a,b],c] + (-1)^{ab}[b,[a,c]]
        LieVec lhs = bracket(unit(i), br[j][k]);
        add_scaled(lhs, bracket(br[i][j], unit(k)), Rational(-1));
        add_scaled(lhs, bracket(unit(j), br[i][k]), Rational(-sgn_parity(odd[i], odd[j])));
        if (!lhs.empty()) errs.push_back("Jacobi (" + basis[i] + ", " + basis[j] + ", " + basis[k] + ")");
        if (pair(br[i][j], unit(k)) != pair(unit(i), br[j][k]))
          errs.push_back("form not invariant (" + basis[i] + ", " + basis[j] + ", " + basis[k] + ")");
      }
    }
  std::vector<std::vector<Rational>> rows = form;
  std::vector<SparseVec<std::size_t, Rational>> vecs;
  for (const auto& r : rows) {
    SparseVec<std::size_t, Rational> v;
    for (std::size_t j = 0; j < r.size(); ++j)
      if (!r[j].is_zero()) v[j] = r[j];
    vecs.push_back(v);
  }
  if (rank_of(vecs) != n) errs.push_back("form degenerate");
  for (const auto& [i, c] : x)
    if (odd[i]) errs.push_back("x has an odd component");
  try {
    (void)grades();
  } catch (const ValidationError& e) {
    errs.push_back(e.what());
  }
  return errs;
}

std::vector<std::string> LieSuperData::validate_good_pair() const {
  std::vector<std::string> errs;
  if (!f) {
    errs.push_back("no nilpotent f supplied");
    return errs;
  }
  bool mixed = false;
  if (vec_odd(*this, *f, mixed) || mixed) errs.push_back("f is not even");
  std::vector<Rational> g = grades();
  for (std::size_t i = 0; i < dim(); ++i)
    if (!(g[i] * Rational(2)).is_integer()) errs.push_back("grade of " + basis[i] + " not in (1/2)Z");
  LieVec xf = bracket(x, *f);
  LieVec expect = *f;
  for (auto& [i, c] : expect) c = -c;
  if (xf != expect) errs.push_back("f does not have grade -1");
  // ad f : g_j -> g_{j-1}; injective for j >= 1/2, surjective for j <= -1/2
  std::map<Rational, std::vector<std::size_t>> by_grade;
  for (std::size_t i = 0; i < dim(); ++i) by_grade[g[i]].push_back(i);
  auto rank_from = [&](const Rational& j) {
    std::vector<SparseVec<std::size_t, Rational>> img;
    if (auto it = by_grade.find(j); it != by_grade.end())
      for (std::size_t i : it->second) img.push_back(bracket(*f, unit(i)));
    return rank_of(img);
  };
  for (const auto& [j, idx] : by_grade) {
    if (j >= Rational(1, 2) && rank_from(j) != idx.size())
      errs.push_back("ad f not injective on grade " + j.to_string());
    // target grade j is reached from j + 1
    if (j + Rational(1) <= Rational(1, 2) && rank_from(j + Rational(1)) != idx.size())
      errs.push_back("ad f not surjective onto grade " + j.to_string());
  }
  return errs;
}

LieSuperData sl2_data() {
  LieSuperData d;
  d.name = "sl2";
  d.basis = {"e", "h", "f"};
  d.odd = {false, false, false};
  d.br.assign(3, std::vector<LieVec>(3));
  auto set = [&](std::size_t i, std::size_t j, LieVec v) {
    d.br[i][j] = v;
    for (auto& [k, c] : v) c = -c;
    d.br[j][i] = v;
  };
  set(0, 2, unit(1));
  set(1, 0, unit(0, 2));
  set(1, 2, unit(2, -2));
  d.form.assign(3, std::vector<Rational>(3));
  d.form[0][2] = d.form[2][0] = 1;
  d.form[1][1] = 2;
  d.dual_coxeter = 2;
  d.f = unit(2);
  return d;
}

LieSuperData osp12_data() {
  LieSuperData d;
  d.name = "osp1|2";
  d.basis = {"e", "E", "h", "F", "f"};
  d.odd = {false, true, false, true, false};
  d.br.assign(5, std::vector<LieVec>(5));
  enum { e, E, h, F, f };
  auto set = [&](std::size_t i, std::size_t j, LieVec v) {
    d.br[i][j] = v;
    Rational s(-sgn_parity(d.odd[i], d.odd[j]));
    for (auto& [k, c] : v) c *= s;
    d.br[j][i] = v;
  };
  set(e, f, unit(h));
  set(h, e, unit(e, 2));
  set(h, f, unit(f, -2));
  set(h, E, unit(E));
  set(h, F, unit(F, -1));
  set(e, F, unit(E, -1));
  set(f, E, unit(F, -1));
  set(E, E, unit(e, 2));
  set(F, F, unit(f, -2));
  set(E, F, unit(h));
  d.form.assign(5, std::vector<Rational>(5));
  d.form[e][f] = d.form[f][e] = 1;
  d.form[h][h] = 2;
  d.form[E][F] = 2;
  d.form[F][E] = -2;
  d.dual_coxeter = Rational(3, 2);
  d.f = unit(f);
  return d;
}

LieVec parse_lie_element(const LieSuperData& d, const std::string& text) {
  LieVec out;
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("empty element");
  std::size_t pos = 0;
  while (pos < s.size()) {
    Rational sign(1);
    if (s[pos] == '+' || s[pos] == '-') {
      if (s[pos] == '-') sign = -1;
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    if (term.empty()) throw std::invalid_argument("malformed element: " + text);
    pos = end;
    Rational coef(1);
    std::string name = term;
    if (auto star = term.find('*'); star != std::string::npos) {
      coef = Rational::parse(term.substr(0, star));
      name = term.substr(star + 1);
    }
    if (auto slash = name.find('/'); slash != std::string::npos) {
      coef /= Rational::parse(name.substr(slash + 1));
      name = name.substr(0, slash);
    }
    if (!name.empty() && (std::isdigit(static_cast<unsigned char>(name[0])))) {
      Rational c = Rational::parse(name) * coef * sign;
      if (!c.is_zero()) throw std::invalid_argument("constant term in element: " + text);
      continue;
    }
    auto idx = d.index_of(name);
    if (!idx) throw std::invalid_argument("unknown basis element: " + name);
    add_to(out, *idx, coef * sign);
  }
  return out;
}

AutomorphismReport validate_automorphism(const LieSuperData& d, const std::vector<Phase>& phases, bool check_f) {
  AutomorphismReport r;
  if (phases.size() != d.dim()) throw ValidationError("phase count does not match the basis");
  auto finish = [&](AutomorphismCheck c) {
    c.pass = c.skipped || c.offending.empty();
    r.pass = r.pass && c.pass;
    r.checks.push_back(std::move(c));
  };
  AutomorphismCheck cx{"fixes x", true, false, {}};
  for (const auto& [i, c] : d.x)
    if (!phases[i].is_zero()) cx.offending.push_back(d.basis[i]);
  finish(cx);
  AutomorphismCheck cf{"fixes f", true, false, {}};
  cf.skipped = !check_f || !d.f;
  if (!cf.skipped)
    for (const auto& [i, c] : *d.f)
      if (!phases[i].is_zero()) cf.offending.push_back(d.basis[i]);
  finish(cf);
  AutomorphismCheck cform{"form invariance", true, false, {}};
  for (std::size_t i = 0; i < d.dim(); ++i)
    for (std::size_t j = i; j < d.dim(); ++j)
      if (!d.form[i][j].is_zero() && !(phases[i] + phases[j]).is_zero())
        cform.offending.push_back("(" + d.basis[i] + ", " + d.basis[j] + ")");
  finish(cform);
  AutomorphismCheck cbr{"bracket equivariance", true, false, {}};
  for (std::size_t i = 0; i < d.dim(); ++i)
    for (std::size_t j = i; j < d.dim(); ++j)
      for (const auto& [k, c] : d.br[i][j])
        if (phases[i] + phases[j] != phases[k])
          cbr.offending.push_back("(" + d.basis[i] + ", " + d.basis[j] + ") -> " + d.basis[k]);
  finish(cbr);
  return r;
}

namespace {

std::vector<Phase> phases_or_zero(const LieSuperData& d, const std::vector<Phase>& p) {
  if (p.empty()) return std::vector<Phase>(d.dim());
  if (p.size() != d.dim()) throw ValidationError("phase count does not match the basis");
  return p;
}

void check_data(const LieSuperData& d) {
  auto errs = d.validate();
  if (!errs.empty()) {
    std::string msg = "invalid Lie superalgebra data:";
    for (const auto& e : errs) msg += " " + e + ";";
    throw ValidationError(msg);
  }
}

// Appends the affine part to t; returns generator index per basis element.
std::vector<std::uint32_t> add_affine(GeneratorTable& t, const LieSuperData& d, const Scalar& level,
                                      const std::vector<Phase>& ph) {
  auto g = d.grades();
  std::vector<std::uint32_t> idx;
  for (std::size_t i = 0; i < d.dim(); ++i)
    idx.push_back(t.add_generator({d.basis[i], d.odd[i], Rational(1) - g[i], ph[i], Rational(1)}));
  for (std::size_t i = 0; i < d.dim(); ++i)
    for (std::size_t j = i; j < d.dim(); ++j) {
      LambdaPoly p;
      p.coeffs.resize(2);
      for (const auto& [k, c] : d.br[i][j]) p.coeffs[0].add(Monomial::single(idx[k]), Scalar(c));
      if (!d.form[i][j].is_zero()) p.coeffs[1].add(Monomial(), level * Scalar(d.form[i][j]));
      p.trim();
      if (!p.is_zero()) t.set_bracket(idx[i], idx[j], p);
    }
  return idx;
}

std::vector<std::size_t> half_indices(const LieSuperData& d) {
  std::vector<std::size_t> out;
  auto g = d.grades();
  for (std::size_t i = 0; i < d.dim(); ++i)
    if (g[i] == Rational(1, 2)) out.push_back(i);
  return out;
}

std::vector<std::size_t> positive_indices(const LieSuperData& d) {
  std::vector<std::size_t> out;
  auto g = d.grades();
  for (std::size_t i = 0; i < d.dim(); ++i)
    if (g[i].sign() > 0) out.push_back(i);
  return out;
}

std::map<std::size_t, std::uint32_t> add_neutral(GeneratorTable& t, const LieSuperData& d, const std::vector<Phase>& ph) {
  std::map<std::size_t, std::uint32_t> idx;
  if (!d.f) throw ValidationError("neutral fermions need a nilpotent f");
  for (std::size_t i : half_indices(d))
    idx[i] = t.add_generator({"Phi_" + d.basis[i], d.odd[i], Rational(1, 2), ph[i], Rational(1)});
  for (const auto& [i, a] : idx)
    for (const auto& [j, b] : idx) {
      if (a > b) continue;
      Rational c = d.pair(*d.f, d.bracket(unit(i), unit(j)));
      if (c.is_zero()) continue;
      LambdaPoly p;
      p.coeffs.resize(1);
      p.coeffs[0].add(Monomial(), Scalar(c));
      t.set_bracket(a, b, p);
    }
  return idx;
}

void add_charged(GeneratorTable& t, const LieSuperData& d, const std::vector<Phase>& ph,
                 std::map<std::size_t, std::uint32_t>& lower, std::map<std::size_t, std::uint32_t>& upper) {
  auto g = d.grades();
  auto pos = positive_indices(d);
  for (std::size_t i : pos)
    lower[i] = t.add_generator({"phi_" + d.basis[i], !d.odd[i], Rational(1) - g[i], ph[i], Rational(1)});
  for (std::size_t i : pos)
    upper[i] = t.add_generator({"phi^" + d.basis[i], !d.odd[i], g[i], -ph[i], Rational(1)});
  for (std::size_t i : pos) {
    LambdaPoly p;
    p.coeffs.resize(1);
    p.coeffs[0].add(Monomial(), Scalar(1));
    t.set_bracket(lower[i], upper[i], p);
  }
}

}  // namespace

GeneratorTable affine(const LieSuperData& d, const Scalar& level, const std::vector<Phase>& phases) {
  check_data(d);
  GeneratorTable t;
  add_affine(t, d, level, phases_or_zero(d, phases));
  t.validate();
  return t;
}

GeneratorTable virasoro(const Scalar& c) {
  GeneratorTable t;
  auto L = t.add_generator({"L", false, Rational(2), Phase(), Rational(1)});
  LambdaPoly p;
  p.coeffs.resize(4);
  p.coeffs[0] = VElement::generator(L, 1);
  p.coeffs[1] = Scalar(2) * VElement::generator(L);
  p.coeffs[3] = (c / Scalar(12)) * VElement::vacuum();
  p.trim();
  t.set_bracket(L, L, p);
  t.validate();
  return t;
}

GeneratorTable free_fermion(const Phase& phase) {
  GeneratorTable t;
  auto psi = t.add_generator({"Psi", true, Rational(1, 2), phase, Rational(1)});
  LambdaPoly p;
  p.coeffs.push_back(VElement::vacuum());
  t.set_bracket(psi, psi, p);
  t.validate();
  return t;
}

GeneratorTable neutral_fermions(const LieSuperData& d, const std::vector<Phase>& phases) {
  check_data(d);
  GeneratorTable t;
  add_neutral(t, d, phases_or_zero(d, phases));
  t.validate();
  return t;
}

GeneratorTable charged_fermions(const LieSuperData& d, const std::vector<Phase>& phases) {
  check_data(d);
  GeneratorTable t;
  std::map<std::size_t, std::uint32_t> lo, up;
  add_charged(t, d, phases_or_zero(d, phases), lo, up);
  t.validate();
  return t;
}

std::vector<Phase> theta_phases(const GeneratorTable& t) {
  std::vector<Phase> out;
  for (const auto& g : t.generators()) out.push_back(Phase(g.weight));
  return out;
}

GeneratorTable with_phases(GeneratorTable t, const std::vector<Phase>& phases) {
  if (phases.size() != t.size()) throw ValidationError("phase count does not match the generators");
  for (std::uint32_t i = 0; i < t.size(); ++i) t.set_phase(i, phases[i]);
  t.validate();
  return t;
}

VElement BrstComplex::current(Vsa& v, std::size_t a) const {
  VElement out = VElement::generator(affine_gen.at(a));
  for (std::size_t b : positive)
    for (std::size_t c : positive) {
      auto it = data.br[a][b].find(c);
      if (it == data.br[a][b].end()) continue;
      Rational coef = data.odd[c] ? -it->second : it->second;
      out.add_scaled(v.normal_order(VElement::generator(ghost_lower.at(c)), VElement::generator(ghost_upper.at(b))),
                     Scalar(coef));
    }
  return out;
}

Scalar BrstComplex::nu(std::size_t a, std::size_t b) const {
  LieVec ua = unit(a), ub = unit(b);
  return level * Scalar(data.form[a][b]) + Scalar(data.killing(ua, ub) / Rational(2)) -
         Scalar(data.killing(ua, ub, true) / Rational(2));
}

int BrstComplex::charge_of(const Monomial& m) const {
  int s = 0;
  for (const auto& f : m.fields()) s += charge.at(f.gen);
  return s;
}

BrstComplex brst_complex(const LieSuperData& d, const Scalar& level, const std::vector<Phase>& phases) {
  check_data(d);
  auto gp = d.validate_good_pair();
  if (!gp.empty()) {
    std::string msg = "not a good pair:";
    for (const auto& e : gp) msg += " " + e + ";";
    throw ValidationError(msg);
  }
  auto ph = phases_or_zero(d, phases);
  {
    auto rep = validate_automorphism(d, ph, true);
    if (!rep.pass) throw ValidationError("phases do not define an admissible automorphism");
  }
  if (auto lv = level.is_rational() ? std::optional<Rational>(level.to_rational()) : std::nullopt;
      lv && *lv == -d.dual_coxeter)
    throw ValidationError("critical level");
  BrstComplex c;
  c.data = d;
  c.level = level;
  c.grades = d.grades();
  c.positive = positive_indices(d);
  c.half = half_indices(d);
  auto aff = add_affine(c.table, d, level, ph);
  for (std::size_t i = 0; i < d.dim(); ++i) c.affine_gen[i] = aff[i];
  c.neutral_gen = add_neutral(c.table, d, ph);
  add_charged(c.table, d, ph, c.ghost_lower, c.ghost_upper);
  c.table.validate();
  c.charge.assign(c.table.size(), 0);
  for (const auto& [i, g] : c.ghost_lower) c.charge[g] = -1;
  for (const auto& [i, g] : c.ghost_upper) c.charge[g] = 1;

  Vsa v(c.table);
  VElement q;
  auto gen = [](std::uint32_t g) { return VElement::generator(g); };
  for (std::size_t a : c.positive) {
    Scalar s(d.odd[a] ? -1 : 1);
    q.add_scaled(v.normal_order(gen(aff[a]), gen(c.ghost_upper[a])), s);
    Rational fe = d.pair(*d.f, unit(a));
    if (!fe.is_zero()) q.add_scaled(gen(c.ghost_upper[a]), Scalar(fe));
  }
  for (std::size_t a : c.positive)
    for (std::size_t b : c.positive)
      for (const auto& [g, coef] : d.br[a][b]) {
        if (!c.ghost_lower.count(g)) continue;
        Rational s = coef * Rational(-1, 2) * Rational(sgn_parity(d.odd[a], d.odd[g]));
        VElement inner = v.normal_order(gen(c.ghost_upper[a]), gen(c.ghost_upper[b]));
        q.add_scaled(v.normal_order(gen(c.ghost_lower[g]), inner), Scalar(s));
      }
  for (std::size_t a : c.half) q.add_scaled(v.normal_order(gen(c.neutral_gen[a]), gen(c.ghost_upper[a])), Scalar(1));
  c.q = q;
  return c;
}

}  // namespace twzhu
