#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twzhu/presets.hpp"
#include "twzhu/sampling.hpp"
#include "twzhu/spec_io.hpp"
#include "twzhu/twisted.hpp"

using namespace twzhu;

namespace {

VElement gen(std::uint32_t i, std::uint32_t k = 0) { return VElement::generator(i, k); }

LieSuperData with_x(LieSuperData d, const std::string& x) {
  d.x = parse_lie_element(d, x);
  return d;
}

struct Case {
  std::string name;
  GeneratorTable table;
};

std::vector<Case> cases() {
  std::vector<Case> out;
  out.push_back({"sl2", affine(sl2_data(), Scalar::level())});
  auto sh = affine(with_x(sl2_data(), "h/2"), Scalar::level());
  out.push_back({"sl2 x=h/2", sh});
  out.push_back({"sl2 x=h/2 theta", with_phases(sh, theta_phases(sh))});
  out.push_back({"sl2 inner", affine(sl2_data(), Scalar::level(), {Phase(Rational(1, 2)), Phase(), Phase(Rational(1, 2))})});
  auto oh = affine(with_x(osp12_data(), "h/2"), Scalar::level());
  out.push_back({"osp x=h/2 theta", with_phases(oh, theta_phases(oh))});
  out.push_back({"virasoro", virasoro(Scalar::level())});
  out.push_back({"fermion NS", free_fermion()});
  out.push_back({"fermion R", free_fermion(Phase(Rational(1, 2)))});
  return out;
}

std::string show(const GeneratorTable& t, const IdentityResult& r) {
  return "lhs = " + render(t, r.lhs) + " ; rhs = " + render(t, r.rhs);
}

}  // namespace

TEST_CASE("gamma data") {
  Vsa v(free_fermion());
  Twisted tw(v);
  CHECK(tw.gamma_data(gen(0)).epsilon == Rational(-1, 2));
  CHECK(tw.gamma_data(gen(0)).gamma == Rational(0));
  CHECK(tw.chi(gen(0), gen(0)) == 1);
  Vsa r(free_fermion(Phase(Rational(1, 2))));
  Twisted twr(r);
  CHECK(twr.gamma_data(gen(0)).gamma == Rational(1, 2));
  CHECK(twr.chi(gen(0), gen(0)) == 0);
  CHECK_THROWS(tw.gamma_data(VElement()));
}

TEST_CASE("star products: worked examples") {
  {
    Vsa v(affine(with_x(sl2_data(), "h/2"), Scalar::level()));
    Twisted tw(v);
    CHECK(tw.gamma_data(gen(0)).gamma == Rational(0));
    CHECK(tw.star(gen(0), gen(2)) == v.nth_product(gen(0), gen(2), -1));
  }
  {
    Vsa v(free_fermion(Phase(Rational(1, 2))));
    Twisted tw(v);
    CHECK(tw.star(gen(0), gen(0)) == Scalar(Rational(1, 2)) * VElement::vacuum());
    CHECK(tw.star_bracket(gen(0), gen(0)) == VElement::vacuum());
  }
  {
    Vsa v(affine(sl2_data(), Scalar::level()));
    Twisted tw(v);
    CHECK(tw.star(gen(0), gen(2)) == v.normal_order(gen(0), gen(2)) + gen(1));
    CHECK(tw.star_bracket(gen(0), VElement::vacuum()).is_zero());
    CHECK(tw.circ(VElement::vacuum(), gen(1)).is_zero());
    CHECK(tw.star(VElement::vacuum(), gen(1)) == gen(1));
    CHECK(tw.star(gen(1), VElement::vacuum()) == gen(1));
  }
  {
    Vsa v(virasoro(Scalar::level()));
    Twisted tw(v);
    CHECK(tw.star_bracket(gen(0), gen(0)) == gen(0, 1) + Scalar(2) * gen(0));
  }
}

TEST_CASE("circ equals the star product with (D + H_g)a") {
  for (const auto& c : cases()) {
    Vsa v(c.table);
    Twisted tw(v);
    Sampler s(c.table, 3, Rational(2), 2);
    for (int i = 0; i < 10; ++i) {
      VElement a = s.next(v), b = s.next(v);
      CHECK(tw.circ(a, b) == tw.star(v.translate(a) + tw.h_g(a), b));
    }
  }
}

TEST_CASE("star_n with n >= 0 lowers the pregrade") {
  for (const auto& c : cases()) {
    Vsa v(c.table);
    Twisted tw(v);
    Sampler s(c.table, 9, Rational(2), 2);
    for (int i = 0; i < 10; ++i) {
      VElement a = s.next(v), b = s.next(v);
      for (long n = 0; n < 3; ++n) {
        VElement p = tw.star_n(a, b, n);
        if (p.is_zero()) continue;
        // star products mix weights, so bigrade() does not apply
        Rational top{0};
        for (const auto& [m, coeff] : p.terms()) top = std::max(top, c.table.zeta(m));
        CHECK(top <= v.bigrade(a)->zeta + v.bigrade(b)->zeta - c.table.zeta_unit());
      }
    }
  }
}

TEST_CASE("named identity examples") {
  {
    Vsa v(affine(sl2_data(), Scalar::level()));
    Twisted tw(v);
    CHECK(verify_identity(tw, "quasi-asso", {gen(0), gen(2), gen(1)}).pass);
  }
  {
    Vsa v(virasoro(Scalar::level()));
    Twisted tw(v);
    CHECK(verify_identity(tw, "trans-1(1)", {gen(0), gen(0)}, {0, 0, 0}).pass);
  }
  {
    Vsa v(free_fermion(Phase(Rational(1, 2))));
    Twisted tw(v);
    CHECK(verify_identity(tw, "A*Bcomm", {gen(0), gen(0)}).pass);
  }
  Vsa v(free_fermion());
  Twisted tw(v);
  CHECK_THROWS_AS(verify_identity(tw, "no-such", {gen(0), gen(0)}), std::invalid_argument);
  CHECK_THROWS_AS(verify_identity(tw, "quasi-asso", {gen(0), gen(0)}), std::invalid_argument);
  CHECK_THROWS_AS(verify_identity(tw, "*-property", {gen(0), gen(0)}, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("every identity on every generator tuple") {
  for (const auto& c : cases()) {
    Vsa v(c.table);
    Twisted tw(v);
    const auto n = static_cast<std::uint32_t>(c.table.size());
    for (const auto& info : identities()) {
      const long lo = -2, hi = 2;
      for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
          for (std::uint32_t cc = 0; cc < (info.arity == 3 ? n : 1u); ++cc) {
            std::vector<VElement> args{gen(a), gen(b)};
            if (info.arity == 3) args.push_back(gen(cc));
            for (long m = info.uses_m ? lo : 0; m <= (info.uses_m ? hi : 0); ++m)
              for (long nn = info.uses_n ? lo : 0; nn <= (info.uses_n ? hi : 0); ++nn)
                for (long k = info.uses_k ? std::max(lo, info.k_min) : 0; k <= (info.uses_k ? hi : 0); ++k) {
                  auto r = verify_identity(tw, info.name, args, {m, nn, k});
                  CHECK_MESSAGE(r.pass, c.name, " ", info.name, " ", show(c.table, r));
                }
          }
    }
  }
}

TEST_CASE("identities on seeded composite samples") {
  for (const auto& c : cases()) {
    Vsa v(c.table);
    Twisted tw(v);
    Sampler s(c.table, 42, Rational(2), 2);
    for (const auto& info : identities()) {
      for (int i = 0; i < 3; ++i) {
        std::vector<VElement> args;
        for (int j = 0; j < info.arity; ++j) args.push_back(s.next(v));
        IdentityParams p{static_cast<long>(s.below(5)) - 2, static_cast<long>(s.below(5)) - 2,
                         std::max(info.k_min, static_cast<long>(s.below(5)) - 2)};
        auto r = verify_identity(tw, info.name, args, p);
        CHECK_MESSAGE(r.pass, c.name, " ", info.name, " ", show(c.table, r));
      }
    }
  }
}

TEST_CASE("trans-id(3) on samples") {
  for (const auto& c : cases()) {
    Vsa v(c.table);
    Twisted tw(v);
    Sampler s(c.table, 8, Rational(3), 2);
    for (int i = 0; i < 10; ++i) CHECK(verify_identity(tw, "trans-id(3)", {s.next(v), s.next(v)}).pass);
  }
}
