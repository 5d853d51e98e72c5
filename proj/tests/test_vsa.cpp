#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twzhu/presets.hpp"
#include "twzhu/sampling.hpp"
#include "twzhu/spec_io.hpp"

#include <functional>

using namespace twzhu;

namespace {

VElement gen(std::uint32_t i, std::uint32_t k = 0) { return VElement::generator(i, k); }

// Independent mode algebra for the affine sl2 vacuum module at x = 0.
// A state is a sorted word of creation modes a_{-1-k}, keyed like the field (a, k).
struct ModeAlgebra {
  LieSuperData d = sl2_data();
  Scalar k = Scalar::level();
  using Word = std::vector<Field>;
  using State = std::map<Word, Scalar>;

  static void add(State& s, const Word& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = s.emplace(w, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) s.erase(it);
    }
  }

  // a_m acting on a normally ordered word.
  State apply(std::uint32_t a, long m, const Word& w) {
    State out;
    if (w.empty()) {
      if (m <= -1) add(out, {Field{a, static_cast<std::uint32_t>(-1 - m)}}, Scalar(1));
      return out;
    }
    const Field b = w.front();
    const long n = -1 - static_cast<long>(b.order);
    Word rest(w.begin() + 1, w.end());
    if (m <= -1 && Field{a, static_cast<std::uint32_t>(-1 - m)} <= b) {
      Word nw = w;
      nw.insert(nw.begin(), Field{a, static_cast<std::uint32_t>(-1 - m)});
      add(out, nw, Scalar(1));
      return out;
    }
    // a_m b_n R = b_n (a_m R) + [a,b]_{m+n} R + m k (a|b) delta_{m+n,0} R
    for (const auto& [w2, c2] : apply(a, m, rest))
      for (const auto& [w3, c3] : apply(b.gen, n, w2)) add(out, w3, c2 * c3);
    for (const auto& [g, c] : d.br[a][b.gen])
      for (const auto& [w2, c2] : apply(static_cast<std::uint32_t>(g), m + n, rest)) add(out, w2, Scalar(c) * c2);
    if (m + n == 0 && !d.form[a][b.gen].is_zero()) add(out, rest, Scalar(m) * k * Scalar(d.form[a][b.gen]));
    return out;
  }

  VElement to_element(const State& s) {
    VElement v;
    for (const auto& [w, c] : s) v.add(Monomial(w), c);
    return v;
  }
};

std::vector<GeneratorTable> all_presets() {
  std::vector<GeneratorTable> out;
  auto sl2 = sl2_data();
  out.push_back(affine(sl2, Scalar::level()));
  sl2.x = parse_lie_element(sl2, "h/2");
  out.push_back(affine(sl2, Scalar::level()));
  out.push_back(affine(osp12_data(), Scalar::level()));
  out.push_back(virasoro(Scalar::level()));
  out.push_back(free_fermion());
  auto o = osp12_data();
  o.x = parse_lie_element(o, "h/2");
  out.push_back(brst_complex(sl2, Scalar::level()).table);
  out.push_back(brst_complex(o, Scalar::level()).table);
  return out;
}

}  // namespace

TEST_CASE("translation uses divided powers and the Leibniz rule") {
  Vsa v(affine(sl2_data(), Scalar::level()));
  CHECK(v.translate(VElement::vacuum()).is_zero());
  CHECK(v.translate(gen(0, 2)) == Scalar(3) * gen(0, 3));
  VElement ef = v.normal_order(gen(0), gen(2));
  CHECK(v.translate(ef) == v.normal_order(gen(0, 1), gen(2)) + v.normal_order(gen(0), gen(2, 1)));
  CHECK(v.derivative(gen(1), 3) == gen(1, 3));
}

TEST_CASE("affine sl2 lambda brackets") {
  Vsa v(affine(sl2_data(), Scalar::level()));
  LambdaPoly p = v.lambda_bracket(gen(0), gen(2));
  REQUIRE(p.coeffs.size() == 2);
  CHECK(p.coeffs[0] == gen(1));
  CHECK(p.coeffs[1] == Scalar::level() * VElement::vacuum());
  CHECK(v.lambda_bracket(gen(0), VElement::vacuum()).is_zero());
  CHECK(v.lambda_bracket(VElement::vacuum(), gen(0)).is_zero());
  LambdaPoly q = v.lambda_bracket(gen(1), v.normal_order(gen(0), gen(2)));
  REQUIRE(q.coeffs.size() == 3);
  CHECK(q.coeffs[0].is_zero());
  CHECK(q.coeffs[1] == Scalar(2) * gen(1));
  CHECK(q.coeffs[2] == Scalar::level() * VElement::vacuum());
}

TEST_CASE("normal ordering examples") {
  Vsa v(affine(sl2_data(), Scalar::level()));
  CHECK(v.normal_order(VElement::vacuum(), gen(1)) == gen(1));
  CHECK(v.normal_order(gen(1), VElement::vacuum()) == gen(1));
  CHECK(v.normal_order(gen(2), gen(0)) == v.normal_order(gen(0), gen(2)) - gen(1, 1));
  Vsa w(free_fermion());
  CHECK(w.normal_order(gen(0), gen(0)).is_zero());
  CHECK(w.normal_order(gen(0, 1), gen(0)) == -w.normal_order(gen(0), gen(0, 1)));
}

TEST_CASE("nth products") {
  Vsa v(affine(sl2_data(), Scalar::level()));
  CHECK(v.nth_product(gen(0), gen(2), 1) == Scalar::level() * VElement::vacuum());
  CHECK(v.nth_product(gen(0), gen(2), 0) == gen(1));
  CHECK(v.nth_product(gen(0), gen(2), -2) == VElement::from(Monomial({Field{0, 1}, Field{2, 0}})));
  CHECK(v.nth_product(gen(0), gen(2), 5).is_zero());
  Vsa vir(virasoro(Scalar::level()));
  CHECK(vir.nth_product(gen(0), gen(0), 1) == Scalar(2) * gen(0));
  CHECK(vir.nth_product(gen(0), gen(0), 3) == (Scalar::level() / Scalar(2)) * VElement::vacuum());
  Vsa vir0(virasoro(Scalar(0)));
  CHECK(vir0.lambda_bracket(gen(0), gen(0)).coeffs.size() == 2);
}

TEST_CASE("engine agrees with the mode algebra on affine sl2") {
  ModeAlgebra ma;
  Vsa v(affine(sl2_data(), Scalar::level()));
  auto monos = enumerate_monomials(v.table(), Rational(3), 3);
  CHECK(monos.size() > 20);
  for (const auto& m : monos) {
    for (std::uint32_t a = 0; a < 3; ++a)
      for (long n = -3; n <= 3; ++n) {
        VElement lhs = v.nth_product(gen(a), VElement::from(m), n);
        VElement rhs = ma.to_element(ma.apply(a, n, m.fields()));
        CHECK_MESSAGE(lhs == rhs, render(v.table(), gen(a)), " (", n, ") ", render_monomial(v.table(), m));
      }
    // from_word of an unsorted word is the composite of creation modes
    std::vector<Field> rev(m.fields().rbegin(), m.fields().rend());
    ModeAlgebra::State st;
    st[{}] = Scalar(1);
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
      ModeAlgebra::State next;
      for (const auto& [w, c] : st)
        for (const auto& [w2, c2] : ma.apply(it->gen, -1 - static_cast<long>(it->order), w)) ModeAlgebra::add(next, w2, c * c2);
      st = next;
    }
    CHECK(v.from_word(rev) == ma.to_element(st));
  }
}

TEST_CASE("quasi-associativity: two reduction routes agree") {
  for (const auto& t : all_presets()) {
    Vsa v(t);
    const auto n = static_cast<std::uint32_t>(t.size());
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        for (std::uint32_t c = 0; c < n; ++c) {
          VElement A = gen(a), B = gen(b), C = gen(c);
          VElement lhs = v.normal_order(v.normal_order(A, B), C);
          VElement rhs = v.normal_order(A, v.normal_order(B, C));
          int sign = (t.gen(a).odd && t.gen(b).odd) ? -1 : 1;
          auto pbc = v.products(B, C), pac = v.products(A, C);
          for (std::size_t j = 0; j < pbc.size(); ++j)
            rhs += v.normal_order(v.derivative(A, static_cast<unsigned>(j + 1)), pbc[j]);
          for (std::size_t j = 0; j < pac.size(); ++j)
            rhs += Scalar(sign) * v.normal_order(v.derivative(B, static_cast<unsigned>(j + 1)), pac[j]);
          CHECK(lhs == rhs);
        }
  }
}

TEST_CASE("bigrade") {
  auto d = sl2_data();
  d.x = parse_lie_element(d, "h/2");
  Vsa v(affine(d, Scalar::level()));
  auto g = v.bigrade(VElement::vacuum());
  REQUIRE(g);
  CHECK(g->weight == Rational(0));
  CHECK(g->zeta == Rational(0));
  CHECK(g->gamma_bar.is_zero());
  CHECK(v.bigrade(gen(0))->weight == Rational(0));
  CHECK(v.bigrade(gen(2))->weight == Rational(2));
  CHECK_FALSE(v.bigrade(gen(0) + gen(1)));
  Vsa w(free_fermion());
  CHECK(w.bigrade(gen(0))->mu_bar == Phase(Rational(1, 2)));
}

TEST_CASE("skew-symmetry and Jacobi on generator tuples of every preset") {
  for (const auto& t : all_presets()) {
    Vsa v(t);
    const auto n = static_cast<std::uint32_t>(t.size());
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b) {
        CHECK(v.check_skew(gen(a), gen(b)));
        for (std::uint32_t c = 0; c < n; ++c) CHECK(v.check_jacobi(gen(a), gen(b), gen(c)));
      }
  }
}

TEST_CASE("grading additivity and pregrade bound on samples") {
  for (const auto& t : all_presets()) {
    Vsa v(t);
    Sampler s(t, 11, Rational(3), 2);
    for (int i = 0; i < 30; ++i) {
      VElement a = s.next(v), b = s.next(v);
      auto ga = v.bigrade(a), gb = v.bigrade(b);
      REQUIRE(ga);
      REQUIRE(gb);
      CHECK(v.check_skew(a, b));
      auto prods = v.products(a, b);
      for (long n = -2; n < static_cast<long>(prods.size()); ++n) {
        VElement p = v.nth_product(a, b, n);
        if (p.is_zero()) continue;
        auto gp = v.bigrade(p);
        REQUIRE(gp);
        CHECK(gp->weight == ga->weight + gb->weight - Rational(n) - Rational(1));
        CHECK(gp->gamma_bar == ga->gamma_bar + gb->gamma_bar);
        CHECK(gp->odd == (ga->odd != gb->odd));
        if (n >= 0) CHECK(gp->zeta <= ga->zeta + gb->zeta - t.zeta_unit());
      }
    }
  }
}

TEST_CASE("Jacobi on composite samples") {
  for (const auto& t : all_presets()) {
    Vsa v(t);
    Sampler s(t, 5, Rational(2), 2);
    for (int i = 0; i < 8; ++i) CHECK(v.check_jacobi(s.next(v), s.next(v), s.next(v)));
  }
}

TEST_CASE("table validation rejects broken tables") {
  GeneratorTable t;
  auto a = t.add_generator({"a", false, Rational(1), Phase(), Rational(1)});
  LambdaPoly p;
  p.coeffs.push_back(Scalar(1) * VElement::from(Monomial({Field{a, 0}, Field{a, 0}})));
  t.set_bracket(a, a, p);
  CHECK_THROWS_AS(t.validate(), ValidationError);
  GeneratorTable u;
  auto b = u.add_generator({"b", true, Rational(1, 2), Phase(), Rational(1)});
  LambdaPoly q;
  q.coeffs.push_back(VElement::generator(b));
  u.set_bracket(b, b, q);
  CHECK_THROWS_AS(u.validate(), ValidationError);
}

TEST_CASE("spec JSON round trip and text rendering") {
  for (const auto& t : all_presets()) {
    std::string once = emit_table(t);
    GeneratorTable back = load_table(once);
    CHECK(back == t);
    CHECK(emit_table(back) == once);
  }
  CHECK_THROWS_AS(load_table("{\"generators\": [}"), ParseError);
  CHECK_THROWS_AS(load_table("{\"generators\": [], \"brackets\": [], \"extra\": 1}"), ParseError);
  Vsa v(affine(sl2_data(), Scalar::level()));
  CHECK(render(v.table(), VElement::from(Monomial({Field{0, 2}, Field{2, 0}}))) == ":D2(e) f:");
  CHECK(render(v.table(), v.normal_order(gen(2), gen(0))) == ":e f: - D(h)");
  CHECK(render(v.table(), VElement::vacuum()) == "|0>");
  CHECK(parse_element(v, ":f e:") == v.normal_order(gen(2), gen(0)));
  CHECK(parse_element(v, "2*D(e) - k*|0>") == Scalar(2) * gen(0, 1) - Scalar::level() * VElement::vacuum());
  CHECK(parse_element(v, "(k+1)/2*:e D2(f):") == (Scalar::parse("(k+1)/2")) * VElement::from(Monomial({Field{0, 0}, Field{2, 2}})));
  CHECK_THROWS_AS(parse_element(v, "x"), ParseError);
  CHECK_THROWS_AS(parse_element(v, ":e f"), ParseError);
  CHECK(render(v.table(), v.lambda_bracket(gen(0), gen(2))) == "h + (k*|0>)*l");
}
