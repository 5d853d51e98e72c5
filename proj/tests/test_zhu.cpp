#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twzhu/presets.hpp"
#include "twzhu/sampling.hpp"
#include "twzhu/spec_io.hpp"
#include "twzhu/zhu.hpp"

using namespace twzhu;

namespace {

VElement gen(std::uint32_t i, std::uint32_t k = 0) { return VElement::generator(i, k); }
ZhuElement letter(std::uint32_t i) { return ZhuElement::word({i}); }

LieSuperData with_x(LieSuperData d, const std::string& x) {
  d.x = parse_lie_element(d, x);
  return d;
}

struct Case {
  std::string name;
  GeneratorTable table;
};

std::vector<Case> cases() {
  Scalar k = Scalar::level();
  std::vector<Case> out;
  out.push_back({"sl2", affine(sl2_data(), k)});
  auto sh = affine(with_x(sl2_data(), "h/2"), k);
  out.push_back({"sl2 x=h/2", sh});
  out.push_back({"sl2 x=h/2 theta", with_phases(sh, theta_phases(sh))});
  out.push_back({"sl2 x=-h/4", affine(with_x(sl2_data(), "-h/4"), k)});
  out.push_back({"osp", affine(osp12_data(), k)});
  auto oh = affine(with_x(osp12_data(), "h/2"), k);
  out.push_back({"osp x=h/2 theta", with_phases(oh, theta_phases(oh))});
  out.push_back({"virasoro", virasoro(k)});
  out.push_back({"fermion NS", free_fermion()});
  out.push_back({"fermion R", free_fermion(Phase(Rational(1, 2)))});
  return out;
}

// Fixed homogeneous samples; empty when the preset has none beyond the vacuum.
struct FixedSampler {
  Sampler s;
  FixedSampler(Zhu& z, std::uint64_t seed, const Rational& w) : s(z.table(), seed, w, 2) {
    s.keep_if([&](const Monomial& m) { return z.is_fixed(m) && !m.empty(); });
  }
};

}  // namespace

TEST_CASE("fixed elements") {
  Vsa ns(free_fermion());
  Twisted tns(ns);
  Zhu zns(tns);
  CHECK(zns.is_fixed(VElement::vacuum()));
  CHECK_FALSE(zns.is_fixed(gen(0)));
  CHECK_THROWS_AS(zns.tau(gen(0)), std::invalid_argument);
  Vsa r(free_fermion(Phase(Rational(1, 2))));
  Twisted tr(r);
  Zhu zr(tr);
  CHECK(zr.is_fixed(gen(0)));
}

TEST_CASE("tau examples on affine sl2, x = 0") {
  Vsa v(affine(sl2_data(), Scalar::level()));
  Twisted tw(v);
  Zhu z(tw);
  const std::uint32_t e = 0, h = 1, f = 2;
  CHECK(z.tau(gen(e, 1)) == Scalar(-1) * letter(e));
  CHECK(z.tau(VElement::vacuum()) == ZhuElement::one());
  CHECK(z.tau(v.normal_order(gen(e), gen(f))) == ZhuElement::word({e, f}) - letter(h));
  // same answer through the other ordering: :fe: = :ef: - D(h)
  VElement fe = v.normal_order(gen(f), gen(e));
  CHECK(z.tau(fe) == ZhuElement::word({e, f}) - letter(h) - z.tau(gen(h, 1)));
  CHECK(z.tau(tw.circ(gen(e), gen(f))).is_zero());
  CHECK_FALSE(z.j_contains(gen(e)));
  CHECK(z.star_form(gen(e, 2)).size() == 1);
}

TEST_CASE("Zhu products and brackets") {
  {
    Vsa v(affine(sl2_data(), Scalar::level()));
    Twisted tw(v);
    Zhu z(tw);
    CHECK(z.mul(letter(2), letter(0)) == ZhuElement::word({0, 2}) - letter(1));
    CHECK(z.bracket(letter(0), letter(2)) == letter(1));
    CHECK(z.mul(ZhuElement::one(), letter(1)) == letter(1));
    CHECK(z.bracket(letter(1), ZhuElement::one()).is_zero());
    CHECK(parse_zhu(z, "f*e + 2") == ZhuElement::word({0, 2}) - letter(1) + Scalar(2) * ZhuElement::one());
    CHECK(render(v.table(), z.mul(letter(2), letter(0))) == "e*f - h");
    CHECK_THROWS_AS(parse_zhu(z, "e*q"), ParseError);
  }
  {
    Vsa v(free_fermion(Phase(Rational(1, 2))));
    Twisted tw(v);
    Zhu z(tw);
    CHECK(z.mul(letter(0), letter(0)) == Scalar(Rational(1, 2)) * ZhuElement::one());
  }
  {
    Vsa v(virasoro(Scalar(Rational(1, 2))));
    Twisted tw(v);
    Zhu z(tw);
    CHECK(z.bracket(letter(0), letter(0)).is_zero());
    CHECK(z.tau(gen(0, 1)) == Scalar(-2) * letter(0));
  }
}

TEST_CASE("J membership") {
  for (const auto& c : cases()) {
    Vsa v(c.table);
    Twisted tw(v);
    Zhu z(tw);
    FixedSampler fs(z, 17, Rational(3));
    if (fs.s.empty()) continue;
    for (int i = 0; i < 10; ++i) {
      VElement a = fs.s.next(v), b = fs.s.next(v);
      CHECK_MESSAGE(z.j_contains(v.translate(a) + tw.h(a)), c.name);
      CHECK_MESSAGE(z.j_contains(tw.circ(a, b)), c.name);
    }
  }
  // both factors twisted with epsilon = -1/2, so chi = 1 and a*b lies in J
  Vsa ns(free_fermion());
  Twisted tw(ns);
  Zhu z(tw);
  CHECK(tw.chi(gen(0), gen(0)) == 1);
  CHECK(z.j_contains(tw.star(gen(0), gen(0))));
  CHECK(z.j_contains(tw.star(gen(0, 1), gen(0))));
}

TEST_CASE("tau is multiplicative and respects the commutator relation") {
  for (const auto& c : cases()) {
    Vsa v(c.table);
    Twisted tw(v);
    Zhu z(tw);
    FixedSampler fs(z, 23, Rational(3));
    if (fs.s.empty()) continue;
    for (int i = 0; i < 12; ++i) {
      VElement a = fs.s.next(v), b = fs.s.next(v);
      CHECK_MESSAGE(z.tau(tw.star(a, b)) == z.mul(z.tau(a), z.tau(b)), c.name);
      bool both_odd = v.bigrade(a)->odd && v.bigrade(b)->odd;
      VElement rel = tw.star(a, b);
      rel.add_scaled(tw.star(b, a), Scalar(both_odd ? 1 : -1));
      rel.add_scaled(tw.star_bracket(a, b), Scalar(tw.chi(a, b) - 1));
      CHECK_MESSAGE(z.tau(rel).is_zero(), c.name);
    }
  }
}

TEST_CASE("straightening is associative") {
  for (const auto& c : cases()) {
    Vsa v(c.table);
    Twisted tw(v);
    Zhu z(tw);
    auto words = pbw_words(z, Rational(3));
    Sampler s(c.table, 5, Rational(0), 1);
    auto pick = [&] {
      ZhuElement x;
      for (int j = 0; j < 2; ++j) x.add(words[s.below(words.size())], Scalar(static_cast<long>(s.below(5)) - 2));
      return x;
    };
    for (int i = 0; i < 100; ++i) {
      ZhuElement x = pick(), y = pick(), w = pick();
      CHECK_MESSAGE(z.mul(z.mul(x, y), w) == z.mul(x, z.mul(y, w)), c.name);
    }
  }
}

TEST_CASE("straightened words are canonical") {
  Vsa v(affine(osp12_data(), Scalar::level()));
  Twisted tw(v);
  Zhu z(tw);
  for (const auto& [w, c] : z.normalize({4, 3, 2, 1, 0, 3}).terms()) CHECK(z.canonical(w));
  CHECK_FALSE(z.canonical({1, 1}));  // E is odd
  CHECK(z.canonical({0, 0, 2}));
}

TEST_CASE("PBW census") {
  {
    Vsa v(affine(sl2_data(), Scalar::level()));
    Twisted tw(v);
    Zhu z(tw);
    auto r = pbw_census(z, Rational(2));
    CHECK(r.pass);
    CHECK(r.rows.back().expected == 10);
    CHECK(r.rows.back().computed == 10);
  }
  {
    Vsa v(free_fermion());
    Twisted tw(v);
    Zhu z(tw);
    auto r = pbw_census(z, Rational(3));
    CHECK(r.pass);
    for (const auto& row : r.rows) CHECK(row.computed == 1);
  }
  {
    Vsa v(affine(osp12_data(), Scalar::level()));
    Twisted tw(v);
    Zhu z(tw);
    auto r = pbw_census(z, Rational(1));
    CHECK(r.rows.back().computed == 6);
  }
  for (const auto& c : cases()) {
    Vsa v(c.table);
    Twisted tw(v);
    Zhu z(tw);
    CHECK_MESSAGE(pbw_census(z, Rational(4)).pass, c.name);
    CHECK_MESSAGE(zhu_r_check(z).pass, c.name);
  }
}

TEST_CASE("graded dimensions against the free supercommutative algebra") {
  {
    Vsa v(virasoro(Scalar::level()));
    Twisted tw(v);
    Zhu z(tw);
    auto r = theorem_e_dims(z, Rational(3));
    REQUIRE(r.rows.size() == 4);
    std::vector<std::size_t> dims;
    for (const auto& row : r.rows) dims.push_back(row.zhu);
    CHECK(dims == std::vector<std::size_t>{1, 0, 1, 0});
    CHECK(r.pass);
  }
  {
    Vsa v(free_fermion(Phase(Rational(1, 2))));
    Twisted tw(v);
    Zhu z(tw);
    auto r = theorem_e_dims(z, Rational(3));
    std::size_t total = 0;
    for (const auto& row : r.rows) total += row.zhu;
    CHECK(total == 2);
    CHECK(r.pass);
  }
  for (const auto& c : cases()) {
    Vsa v(c.table);
    Twisted tw(v);
    Zhu z(tw);
    CHECK_MESSAGE(theorem_e_dims(z, Rational(3)).pass, c.name);
  }
}

TEST_CASE("affine Zhu algebras are enveloping algebras of fixed subalgebras") {
  auto sl2 = sl2_data();
  auto c0 = theorem_c_check(sl2);
  CHECK(c0.pass);
  CHECK(c0.fixed.size() == 3);
  auto ch = theorem_c_check(with_x(sl2, "h/2"));
  CHECK(ch.pass);
  CHECK_FALSE(ch.commutative);
  // every positive root at a grade in (-1, 0): only the Cartan survives
  auto cq = theorem_c_check(with_x(sl2, "-h/4"));
  CHECK(cq.pass);
  CHECK(cq.commutative);
  CHECK(cq.fixed == std::vector<std::string>{"h"});
  auto inner = theorem_c_check(sl2, {Phase(Rational(1, 2)), Phase(), Phase(Rational(1, 2))});
  CHECK(inner.pass);
  CHECK(inner.fixed == std::vector<std::string>{"h"});
  auto osp = osp12_data();
  CHECK(theorem_c_check(osp).pass);
  auto osph = with_x(osp, "h/2");
  CHECK(theorem_c_check(osph).pass);
  Vsa ov(affine(osph, Scalar::level()));
  auto ot = theorem_c_check(osph, theta_phases(ov.table()));
  CHECK(ot.pass);
  CHECK(ot.fixed.size() == 5);
  for (const auto& e : ch.entries)
    if (e.a == "e~" && e.b == "f~") CHECK(e.computed == "h~");
}
