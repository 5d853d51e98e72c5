// Acceptance run: one PASS/FAIL line per criterion.  Argument: path of the twzhu binary.

#include "twzhu/cohomology.hpp"
#include "twzhu/presets.hpp"
#include "twzhu/sampling.hpp"
#include "twzhu/spec_io.hpp"
#include "twzhu/twisted.hpp"
#include "twzhu/zhu.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <unistd.h>

using namespace twzhu;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Named {
  std::string name;
  GeneratorTable table;
};

LieSuperData with_x(LieSuperData d, const std::string& x) {
  d.x = parse_lie_element(d, x);
  return d;
}

VElement gen(std::uint32_t i) { return VElement::generator(i); }

std::vector<Named> axiom_presets() {
  Scalar k = Scalar::level();
  return {{"affine sl2 x=0", affine(sl2_data(), k)},
          {"affine sl2 x=h/2", affine(with_x(sl2_data(), "h/2"), k)},
          {"affine osp(1|2)", affine(osp12_data(), k)},
          {"virasoro", virasoro(k)},
          {"fermion NS", free_fermion()},
          {"fermion R", free_fermion(Phase(Rational(1, 2)))},
          {"neutral fermions osp(1|2)", neutral_fermions(with_x(osp12_data(), "h/2"))},
          {"charged fermions sl2", charged_fermions(with_x(sl2_data(), "h/2"))},
          {"charged fermions osp(1|2)", charged_fermions(with_x(osp12_data(), "h/2"))}};
}

// Presets with their automorphisms, for the twisted criteria.
std::vector<Named> twisted_presets() {
  Scalar k = Scalar::level();
  auto sh = affine(with_x(sl2_data(), "h/2"), k);
  auto oh = affine(with_x(osp12_data(), "h/2"), k);
  return {{"affine sl2 x=0", affine(sl2_data(), k)},
          {"affine sl2 x=h/2", sh},
          {"affine sl2 x=h/2 theta", with_phases(sh, theta_phases(sh))},
          {"affine sl2 x=-h/4", affine(with_x(sl2_data(), "-h/4"), k)},
          {"affine osp(1|2) x=0", affine(osp12_data(), k)},
          {"affine osp(1|2) x=h/2 theta", with_phases(oh, theta_phases(oh))},
          {"virasoro", virasoro(k)},
          {"fermion NS", free_fermion()},
          {"fermion R", free_fermion(Phase(Rational(1, 2)))}};
}

void fail(Outcome& o, const std::string& what) {
  if (o.pass) o.detail.clear();
  else o.detail += "; ";
  o.pass = false;
  o.detail += what;
}

Outcome criterion1() {
  Outcome o;
  std::size_t pairs = 0, triples = 0, samples = 0;
  for (const auto& p : axiom_presets()) {
    Vsa v(p.table);
    auto n = static_cast<std::uint32_t>(p.table.size());
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b) {
        ++pairs;
        if (!v.check_skew(gen(a), gen(b))) fail(o, p.name + ": skew on generators");
        for (std::uint32_t c = 0; c < n; ++c) {
          ++triples;
          if (!v.check_jacobi(gen(a), gen(b), gen(c))) fail(o, p.name + ": Jacobi on generators");
        }
      }
    Sampler s(p.table, 20240601, Rational(4), 2);
    for (int i = 0; i < 200; ++i) {
      VElement x = s.next(v), y = s.next(v), z = s.next(v);
      ++samples;
      if (!v.check_skew(x, y)) fail(o, p.name + ": skew on sample " + std::to_string(i));
      if (!v.check_jacobi(x, y, z)) fail(o, p.name + ": Jacobi on sample " + std::to_string(i));
    }
  }
  if (o.pass)
    o.detail = std::to_string(pairs) + " generator pairs, " + std::to_string(triples) + " triples, " +
               std::to_string(samples) + " weight<=4 samples over 9 presets";
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& p : twisted_presets()) {
    Vsa v(p.table);
    Twisted tw(v);
    auto n = static_cast<std::uint32_t>(p.table.size());
    Sampler s(p.table, 7, Rational(2), 2);
    for (const auto& info : identities()) {
      auto run = [&](const std::vector<VElement>& args, const IdentityParams& q) {
        ++checked;
        if (!verify_identity(tw, info.name, args, q).pass) fail(o, p.name + ": " + info.name);
      };
      for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
          for (std::uint32_t c = 0; c < (info.arity == 3 ? n : 1u); ++c) {
            std::vector<VElement> args{gen(a), gen(b)};
            if (info.arity == 3) args.push_back(gen(c));
            for (long m = info.uses_m ? -2 : 0; m <= (info.uses_m ? 2 : 0); ++m)
              for (long nn = info.uses_n ? -2 : 0; nn <= (info.uses_n ? 2 : 0); ++nn)
                for (long k = info.uses_k ? std::max(-2L, info.k_min) : 0; k <= (info.uses_k ? 2 : 0); ++k)
                  run(args, {m, nn, k});
          }
      for (int i = 0; i < 100; ++i) {
        std::vector<VElement> args;
        for (int j = 0; j < info.arity; ++j) args.push_back(s.next(v));
        IdentityParams q{static_cast<long>(s.below(5)) - 2, static_cast<long>(s.below(5)) - 2,
                         std::max(info.k_min, static_cast<long>(s.below(5)) - 2)};
        run(args, q);
      }
    }
  }
  if (o.pass)
    o.detail = std::to_string(identities().size()) + " identities, " + std::to_string(checked) +
               " exhaustive and sampled cases over 9 presets";
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::vector<std::string> notes;
  auto check = [&](const std::string& label, const LieSuperData& d, const std::vector<Phase>& ph) {
    auto r = theorem_c_check(d, ph);
    if (!r.pass) fail(o, label + ": structure constants differ");
    return r;
  };
  auto sl2 = sl2_data(), osp = osp12_data();
  for (const auto& [label, d] : std::vector<std::pair<std::string, LieSuperData>>{{"sl2", sl2}, {"osp(1|2)", osp}}) {
    check(label + " (1, 0)", d, {});
    check(label + " (1, h/2)", with_x(d, "h/2"), {});
    auto dh = with_x(d, "h/2");
    check(label + " (theta, h/2)", dh, theta_phases(affine(dh, Scalar::level())));
    // inner phase exp(2 pi i ad h/4) on the simple root vectors
    std::vector<Phase> inner;
    LieSuperData d0 = with_x(d, "h/4");
    auto g4 = d0.grades();
    for (std::size_t i = 0; i < d.dim(); ++i) inner.push_back(Phase(g4[i]));
    check(label + " inner", d, inner);
  }
  // the criterion's literal claim: sl2 at (1, h/2) has a commutative Zhu algebra of one generator
  auto sh = theorem_c_check(with_x(sl2, "h/2"));
  if (!sh.commutative || sh.fixed.size() != 1) {
    std::string br;
    for (const auto& e : sh.entries)
      if (e.a == "e~" && e.b == "f~") br = e.computed;
    fail(o, "sl2 at (1, h/2): all " + std::to_string(sh.fixed.size()) + " generators are fixed and [e~, f~] = " + br +
                ", so the Zhu algebra is U(sl2), not commutative (see decisions ledger)");
  }
  auto cq = theorem_c_check(with_x(sl2, "-h/4"));
  notes.push_back(std::string("Cartan case at x=-h/4: ") + (cq.commutative && cq.fixed.size() == 1 ? "commutative C[h~]" : "not commutative"));
  if (o.pass) o.detail = "8 configurations match; " + notes[0];
  else o.detail += "; structure constants match on all 8 configurations; " + notes[0];
  return o;
}

Outcome criterion4() {
  Outcome o;
  {
    Vsa v(free_fermion(Phase(Rational(1, 2))));
    Twisted tw(v);
    Zhu z(tw);
    ZhuElement psi = ZhuElement::word({0});
    ZhuElement sq = z.mul(psi, psi);
    if (!(sq == Rational(1, 2) * ZhuElement::one()))
      fail(o, "Ramond: Psi.Psi = " + render(v.table(), sq));
  }
  Vsa v(free_fermion());
  Twisted tw(v);
  Zhu z(tw);
  auto words = pbw_words(z, Rational(10));
  auto census = pbw_census(z, Rational(10));
  std::size_t total = census.rows.empty() ? 0 : census.rows.back().computed;
  if (words.size() != 1 || total != 1) fail(o, "NS: Zhu dimension " + std::to_string(total));
  if (o.pass) o.detail = "Ramond Psi.Psi = 1/2; NS Zhu algebra has dimension 1";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::size_t rows = 0;
  auto list = twisted_presets();
  list.push_back({"neutral fermions osp(1|2)", neutral_fermions(with_x(osp12_data(), "h/2"))});
  list.push_back({"charged fermions sl2", charged_fermions(with_x(sl2_data(), "h/2"))});
  for (const auto& p : list) {
    Vsa v(p.table);
    Twisted tw(v);
    Zhu z(tw);
    auto c = pbw_census(z, Rational(6));
    rows += c.rows.size();
    if (!c.pass) fail(o, p.name + ": census");
    if (!zhu_r_check(z, 6).pass) fail(o, p.name + ": derivative kernel");
  }
  if (o.pass) o.detail = std::to_string(list.size()) + " presets, " + std::to_string(rows) + " census rows up to zeta 6, kernel check k<=6";
  return o;
}

Outcome criterion6() {
  Outcome o;
  auto list = twisted_presets();
  list.push_back({"neutral fermions osp(1|2)", neutral_fermions(with_x(osp12_data(), "h/2"))});
  list.push_back({"charged fermions sl2", charged_fermions(with_x(sl2_data(), "h/2"))});
  for (const auto& p : list) {
    Vsa v(p.table);
    Twisted tw(v);
    Zhu z(tw);
    if (!theorem_e_dims(z, Rational(4)).pass) fail(o, p.name);
  }
  if (o.pass) o.detail = std::to_string(list.size()) + " presets up to weight 4";
  return o;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + ")";
}

Outcome criterion7() {
  Outcome o;
  auto d = with_x(sl2_data(), "h/2");
  {
    auto sym = brst_complex(d, Scalar::level());
    Vsa v(sym.table);
    if (!v.lambda_bracket(sym.q, sym.q).is_zero()) fail(o, "[Q_lambda Q] != 0 in Q(k)");
  }
  auto c = brst_complex(d, Scalar(Rational(7, 3)));
  Vsa v(c.table);
  VertexCohomology vc(v, brst_plus(c));
  auto rep = vc.compute(Rational(4));
  if (!rep.higher_vanish) fail(o, "H^n != 0 for some n != 0");
  if (!rep.euler) fail(o, "Euler characteristic mismatch");
  if (rep.h0_dims != std::vector<std::size_t>{1, 0, 1, 1, 2}) fail(o, "H^0 dims " + join(rep.h0_dims));
  if (o.pass) o.detail = "[Q_lambda Q] = 0 in Q(k); H^0 dims " + join(rep.h0_dims) + " for weight 0..4; H^n = 0 otherwise";
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto d = with_x(sl2_data(), "h/2");
  auto c = brst_complex(d, Scalar(Rational(7, 3)));
  std::vector<std::size_t> want{1, 1, 2, 2, 3, 3, 4};
  {
    Vsa v(c.table);
    Twisted tw(v);
    Zhu z(tw);
    auto b = theorem_b_check(v, z, brst_plus(c), Rational(6));
    if (!b.pass) fail(o, "Theorem B check failed");
    if (!b.commutative) fail(o, "not commutative");
    if (b.generators.size() != 1 || b.zetas.empty() || b.zetas[0] != Rational(2))
      fail(o, "expected one generator of degree 2");
    if (b.zhu_of_h != want || b.h_of_zhu != want) fail(o, "dims " + join(b.zhu_of_h) + " vs " + join(b.h_of_zhu));
  }
  auto td = theorem_d_check(c, Rational(6));
  if (!td.pass) fail(o, "Theorem D check failed");
  auto sym = brst_complex(d, Scalar::level());
  Vsa vs(sym.table);
  VertexCohomology vc(vs, brst_plus(sym));
  auto rows = specialization_check(vc, Rational(4), {Rational(7, 3), Rational(5, 2), Rational(-1, 5)});
  for (const auto& r : rows)
    if (!r.pass) fail(o, "specialization differs at weight " + r.weight.to_string());
  if (o.pass)
    o.detail = "both sides " + join(want) + ", one commutative generator of degree 2; Theorem D passes; " +
               std::to_string(rows.size()) + " blocks agree at k = 7/3, 5/2, -1/5";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion9(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    fail(o, "no CLI path given");
    return o;
  }
  fs::path dir = fs::temp_directory_path() / ("twzhu_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto sh = [&](const std::string& args) {
    std::string cmd = "env -u TWZHU_CACHE_DIR " + cli + " " + args + " 2>/dev/null";
    return std::system(cmd.c_str());
  };
  std::string spec = (dir / "sl2.json").string(), spech = (dir / "sl2h.json").string();
  sh("preset affine-sl2 --out " + spec);
  sh("preset affine-sl2 --x h/2 --theta --out " + spech);
  std::vector<std::pair<std::string, std::string>> runs = {
      {"verify-identity", "verify-identity --algebra " + spech + " --identity all --samples 20 --seed 99"},
      {"zhu-census", "zhu-census --algebra " + spec + " --zmax 4"},
      {"theorem-e-check", "theorem-e-check --algebra " + spech + " --dmax 3"},
      {"theorem-c-check", "theorem-c-check --lie osp12 --x h/2 --theta"},
      {"cohomology", "cohomology --lie sl2 --dmax 4"},
      {"zhu-h0", "zhu-h0 --lie sl2 --seed 5 --samples 50"},
      {"theorem-d-check", "theorem-d-check --lie sl2"}};
  for (const auto& [name, args] : runs) {
    auto a = dir / (name + ".1.json"), b = dir / (name + ".2.json");
    int ra = sh(args + " --no-cache --out " + a.string());
    int rb = sh(args + " --no-cache --out " + b.string());
    std::string ta = slurp(a), tb = slurp(b);
    if (ta.empty() || ta != tb || ra != rb) fail(o, name + " not byte-identical");
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = std::to_string(runs.size()) + " CLI reports byte-identical across two runs";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  // optional second argument: comma-separated criterion numbers to run
  std::set<std::size_t> only;
  if (argc > 2) {
    std::stringstream ss(argv[2]);
    for (std::string tok; std::getline(ss, tok, ',');) only.insert(std::stoul(tok));
  }
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"axiom suite", criterion1},
      {"twisted identity suite", criterion2},
      {"affine Zhu algebras", criterion3},
      {"fermion Zhu algebras", criterion4},
      {"PBW census and derivative kernel", criterion5},
      {"graded Zhu algebra", criterion6},
      {"sl2 principal reduction", criterion7},
      {"cohomology and Zhu commute at sl2 principal", criterion8},
      {"determinism", [&] { return criterion9(cli); }}};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", secs);
    std::cout << "criterion " << i + 1 << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL") << " ("
              << buf << ") " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
