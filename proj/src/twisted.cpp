#include "twzhu/twisted.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

namespace twzhu {

GammaData Twisted::gamma_data(const Monomial& m) const {
  const auto& t = v_.table();
  Rational w = t.weight(m);
  Rational e = epsilon(t.phase(m), w);
  return {e, e + w};
}

GammaData Twisted::gamma_data(const VElement& a) const {
  if (a.is_zero()) throw std::invalid_argument("gamma of zero element");
  auto g = v_.bigrade(a);
  if (!g) throw std::invalid_argument("inhomogeneous element");
  Rational e = epsilon(g->gamma_bar, g->weight);
  return {e, e + g->weight};
}

int Twisted::chi(const VElement& a, const VElement& b) const {
  return twzhu::chi(gamma_data(a).epsilon, gamma_data(b).epsilon);
}

long Twisted::star_bound(const VElement& a, const VElement& b) {
  return static_cast<long>(v_.products(a, b).size());
}

VElement Twisted::star_n(const VElement& a, const VElement& b, long n) {
  VElement out;
  if (b.is_zero()) return out;
  for (const auto& part : split(a)) {
    Rational g = gamma_data(part).gamma;
    long top = static_cast<long>(v_.products(part, b).size());
    for (long idx = n; idx < top; ++idx) {
      Rational c = gen_binom(g, static_cast<unsigned>(idx - n));
      if (c.is_zero()) continue;
      out.add_scaled(v_.nth_product(part, b, idx), Scalar(c));
    }
  }
  return out;
}

VElement Twisted::star_bracket(const VElement& a, const VElement& b) {
  VElement out;
  if (b.is_zero()) return out;
  for (const auto& part : split(a)) {
    Rational g = gamma_data(part).gamma - Rational(1);
    auto prods = v_.products(part, b);
    for (std::size_t j = 0; j < prods.size(); ++j) out.add_scaled(prods[j], Scalar(gen_binom(g, static_cast<unsigned>(j))));
  }
  return out;
}

VElement Twisted::h_g(const VElement& a) const {
  VElement out;
  for (const auto& [m, c] : a.terms()) out.add(m, c * Scalar(gamma_data(m).gamma));
  return out;
}

VElement Twisted::h(const VElement& a) const {
  VElement out;
  for (const auto& [m, c] : a.terms()) out.add(m, c * Scalar(v_.table().weight(m)));
  return out;
}

const std::vector<IdentityInfo>& identities() {
  static const std::vector<IdentityInfo> list = {
      {"trans-1(1)", 2, false, true, false, 0},
      {"trans-1(2)", 2, false, true, false, 0},
      {"a(-k-1)b-ind", 2, false, false, true, 0},
      {"trans-id(1)", 2, false, false, false, 0},
      {"trans-id(2)", 2, false, false, false, 0},
      {"trans-id(3)", 2, false, false, false, 0},
      {"n-th prod", 3, false, true, true, LONG_MIN},
      {"Borcherds-id", 3, false, true, true, LONG_MIN},
      {"Cor Borcherds-id", 3, true, true, true, LONG_MIN},
      {"quasi-asso", 3, false, false, false, 0},
      {"AcircB*C", 3, false, false, false, 0},
      {"A*Bcomm", 2, false, false, false, 0},
      {"brA*B*nC", 3, false, true, false, 0},
      {"*-property", 2, false, false, true, 1},
  };
  return list;
}

const IdentityInfo& identity_info(const std::string& name) {
  for (const auto& i : identities())
    if (i.name == name) return i;
  throw std::invalid_argument("unknown identity: " + name);
}

namespace {

int parity_sign(const Vsa& v, const VElement& a, const VElement& b) {
  auto ga = v.bigrade(a), gb = v.bigrade(b);
  return (ga && gb && ga->odd && gb->odd) ? -1 : 1;
}

Scalar sc(const Rational& r) { return Scalar(r); }

}  // namespace

IdentityResult verify_identity(Twisted& tw, const std::string& name, const std::vector<VElement>& args,
                               const IdentityParams& p) {
  const IdentityInfo& info = identity_info(name);
  if (static_cast<int>(args.size()) != info.arity) throw std::invalid_argument(name + ": wrong number of arguments");
  if (info.uses_k && p.k < info.k_min) throw std::invalid_argument(name + ": k out of range");
  Vsa& v = tw.engine();
  for (const auto& x : args)
    if (x.is_zero() || !v.bigrade(x)) throw std::invalid_argument(name + ": arguments must be nonzero and homogeneous");
  const VElement& a = args[0];
  const VElement& b = args[1];
  const VElement* c = args.size() > 2 ? &args[2] : nullptr;
  const GammaData ga = tw.gamma_data(a);
  const Rational gam = ga.gamma;
  auto D = [&](const VElement& x, unsigned k = 1) { return v.derivative(x, k); };
  IdentityResult r;

  if (name == "trans-1(1)") {
    r.lhs = tw.star_n(D(a) + sc(Rational(p.n + 1) + gam) * a, b, p.n);
    r.rhs = Scalar(-p.n) * tw.star_n(a, b, p.n - 1);
  } else if (name == "trans-1(2)") {
    r.lhs = v.translate(tw.star_n(a, b, p.n));
    VElement da = D(a);
    long top = tw.star_bound(da, b);
    for (long j = 0; p.n + j < top; ++j) r.rhs.add_scaled(tw.star_n(da, b, p.n + j), Scalar(j % 2 ? -1 : 1));
    r.rhs += tw.star_n(a, D(b), p.n);
  } else if (name == "a(-k-1)b-ind") {
    r.lhs = tw.star_n(a, b, -p.k - 1);
    for (long j = 0; j <= p.k; ++j)
      r.rhs.add_scaled(tw.star(D(a, static_cast<unsigned>(j)), b), sc(gen_binom(gam, static_cast<unsigned>(p.k - j))));
  } else if (name == "trans-id(1)") {
    r.lhs = tw.circ(a, b);
    r.rhs = tw.star(D(a) + tw.h_g(a), b);
  } else if (name == "trans-id(2)") {
    r.lhs = tw.star_bracket(D(a) + tw.h_g(a), b);
  } else if (name == "trans-id(3)") {
    VElement br = tw.star_bracket(a, b);
    r.lhs = v.translate(br) + tw.h_g(br) - Scalar(tw.chi(a, b)) * br;
    r.rhs = tw.star_bracket(a, D(b) + tw.h_g(b));
  } else if (name == "n-th prod") {
    // coefficient form of the n-th product of twisted fields, applied to c
    const long n = p.n, K = p.k;
    const int chi = tw.chi(a, b), sab = parity_sign(v, a, b);
    VElement anb = tw.star_n(a, b, n);
    if (!anb.is_zero()) {
      long top = tw.star_bound(anb, *c);
      for (long i = 0; K + i < top; ++i)
        r.lhs.add_scaled(tw.star_n(anb, *c, K + i), sc(gen_binom(Rational(n + 1 - chi), static_cast<unsigned>(i))));
    }
    long tb = tw.star_bound(b, *c), ta = tw.star_bound(a, *c);
    long jmax = std::max(tb - K, ta);
    for (long j = 0; j < jmax; ++j) {
      Rational bin = gen_binom(Rational(n), static_cast<unsigned>(j)) * Rational(j % 2 ? -1 : 1);
      if (bin.is_zero()) continue;
      VElement t1 = tw.star_n(a, tw.star_n(b, *c, K + j), n - j);
      VElement t2 = tw.star_n(b, tw.star_n(a, *c, j), n + K - j);
      Scalar s2(sab * ((n % 2 != 0) ? -1 : 1));
      r.rhs.add_scaled(t1 - s2 * t2, sc(bin));
    }
  } else if (name == "Borcherds-id" || name == "Cor Borcherds-id") {
    const long m = name == "Borcherds-id" ? 0 : p.m, n = p.n, k = p.k;
    const int chi = tw.chi(a, b), sab = parity_sign(v, a, b);
    Scalar s2(sab * ((n % 2 != 0) ? -1 : 1));
    long tb = tw.star_bound(b, *c), ta = tw.star_bound(a, *c);
    // first term needs k+j+i < tb, second needs m+j < ta
    long jmax = std::max(tb - k, ta - m);
    VElement sum;
    for (long j = 0; j < jmax; ++j) {
      Rational bj = gen_binom(Rational(n), static_cast<unsigned>(j)) * Rational(j % 2 ? -1 : 1);
      if (bj.is_zero()) continue;
      VElement acj = tw.star_n(a, *c, m + j);
      long tbac = acj.is_zero() ? 0 : tw.star_bound(b, acj);
      long imax = std::max(tb - k - j, tbac - (k + n - j));
      for (long i = 0; i < imax; ++i) {
        Rational bi = gen_binom(Rational(-n - 1 + chi), static_cast<unsigned>(i));
        if (bi.is_zero()) continue;
        VElement t1 = tw.star_n(a, tw.star_n(b, *c, k + j + i), m + n - j);
        VElement t2 = acj.is_zero() ? VElement() : tw.star_n(b, acj, k + n - j + i);
        sum.add_scaled(t1 - s2 * t2, sc(bj * bi));
      }
    }
    VElement rhs;
    long tab = tw.star_bound(a, b);
    for (long j = 0; n + j < tab; ++j) {
      Rational bm = gen_binom(Rational(m), static_cast<unsigned>(j));
      if (bm.is_zero()) continue;
      VElement ab = tw.star_n(a, b, n + j);
      if (ab.is_zero()) continue;
      for (long i = 0; i <= j; ++i)
        rhs.add_scaled(tw.star_n(ab, *c, k + m - j + i), sc(bm * gen_binom(Rational(j), static_cast<unsigned>(i))));
    }
    if (name == "Borcherds-id") {
      r.lhs = rhs;
      r.rhs = sum;
    } else {
      r.lhs = sum;
      r.rhs = rhs;
    }
  } else if (name == "quasi-asso" || name == "AcircB*C") {
    const int chi = tw.chi(a, b), sab = parity_sign(v, a, b);
    auto tail = [&](const VElement& x) {
      // sum_j (x*_{-j-2} + chi x*_{-j-1})(b*_j c) + (-1)^{ab}(b*_{-j-2} + chi b*_{-j-1})(x*_j c)
      VElement s;
      long tb = tw.star_bound(b, *c), tx = tw.star_bound(x, *c);
      for (long j = 0; j < tb; ++j) {
        VElement bc = tw.star_n(b, *c, j);
        s += tw.star_n(x, bc, -j - 2) + Scalar(chi) * tw.star_n(x, bc, -j - 1);
      }
      for (long j = 0; j < tx; ++j) {
        VElement xc = tw.star_n(x, *c, j);
        s.add_scaled(tw.star_n(b, xc, -j - 2) + Scalar(chi) * tw.star_n(b, xc, -j - 1), Scalar(sab));
      }
      return s;
    };
    if (name == "quasi-asso") {
      r.lhs = tw.star(tw.star(a, b), *c) - tw.star(a, tw.star(b, *c));
      r.rhs = tail(a);
    } else {
      r.lhs = tw.star(tw.circ(a, b), *c);
      r.rhs = tw.circ(a, tw.star(b, *c)) + tail(D(a)) + sc(gam) * tail(a);
    }
  } else if (name == "A*Bcomm") {
    const int chi = tw.chi(a, b), sab = parity_sign(v, a, b);
    const Rational gb = tw.gamma_data(b).gamma;
    r.lhs = tw.star(a, b) - Scalar(sab) * tw.star(b, a) - Scalar(1 - chi) * tw.star_bracket(a, b);
    auto prods = v.products(a, b);
    for (long n = 1; n <= static_cast<long>(prods.size()); ++n) {
      const VElement& x = prods[n - 1];
      if (x.is_zero()) continue;
      Rational gx = gam + gb - Rational(n - 1) - Rational(1) + Rational(chi);
      for (long l = 1; l <= n; ++l) {
        Rational coef = gen_binom(gb, static_cast<unsigned>(n - l)) * Rational((n + 1) % 2 ? -1 : 1);
        if (coef.is_zero()) continue;
        r.rhs.add_scaled(D(x, static_cast<unsigned>(l)) - sc(gen_binom(-gx, static_cast<unsigned>(l))) * x, sc(coef));
      }
    }
  } else if (name == "brA*B*nC") {
    const int chi = tw.chi(a, b), sab = parity_sign(v, a, b);
    r.lhs = tw.star_bracket(a, tw.star_n(b, *c, p.n));
    VElement ab = tw.star_bracket(a, b);
    r.rhs = tw.star_n(ab, *c, p.n) + Scalar(sab) * tw.star_n(b, tw.star_bracket(a, *c), p.n);
    if (chi && !ab.is_zero()) {
      long top = tw.star_bound(ab, *c);
      for (long j = 1; p.n + j < top; ++j) r.rhs.add_scaled(tw.star_n(ab, *c, p.n + j), Scalar(j % 2 ? -1 : 1));
    }
  } else if (name == "*-property") {
    r.lhs = tw.star_n(a, b, -p.k - 1);
    VElement ab = tw.star(a, b);
    for (long j = 1; j <= p.k; ++j)
      r.rhs.add_scaled(tw.star(D(a, static_cast<unsigned>(j)), b) - sc(gen_binom(-gam, static_cast<unsigned>(j))) * ab,
                       sc(gen_binom(gam, static_cast<unsigned>(p.k - j))));
  }
  r.pass = r.lhs == r.rhs;
  return r;
}

}  // namespace twzhu
