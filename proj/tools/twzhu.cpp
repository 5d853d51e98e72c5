// Batch front end: reads algebra specs, runs one verb, writes a JSON report.
// Exit codes: 0 all checks pass, 1 a check failed, 2 parse error, 3 validation error.

#include "twzhu/cohomology.hpp"
#include "twzhu/presets.hpp"
#include "twzhu/sampling.hpp"
#include "twzhu/spec_io.hpp"
#include "twzhu/twisted.hpp"
#include "twzhu/zhu.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

using namespace twzhu;
namespace fs = std::filesystem;

namespace {

constexpr int kCheckFailed = 1;
constexpr int kParse = 2;
constexpr int kValidation = 3;
constexpr const char* kCacheEnv = "TWZHU_CACHE_DIR";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": malformed JSON: " + e.what());
  }
}

void write_atomic(const std::string& path, const std::string& text) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string str(const Rational& r) { return r.to_string(); }

Json rationals(const std::vector<Rational>& v) {
  Json j = Json::array();
  for (const auto& r : v) j.push_back(str(r));
  return j;
}

Rational parse_rational(const std::string& text, const std::string& what) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(what + ": " + e.what());
  }
}

Scalar parse_level(const std::string& text) {
  if (text == "symbolic" || text == "k") return Scalar::level();
  return Scalar(parse_rational(text, "--level"));
}

// Reports are cached under $TWZHU_CACHE_DIR keyed by a hash of command and inputs.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::optional<fs::path> cache_path(const Json& header) {
  const char* dir = std::getenv(kCacheEnv);
  if (!dir || !*dir) return std::nullopt;
  std::ostringstream name;
  name << std::hex << fnv1a(header.dump()) << ".json";
  return fs::path(dir) / name.str();
}

struct Output {
  std::string path;
  bool use_cache = false;
};

class Report {
 public:
  Report(const std::string& command, Json inputs) {
    j_["command"] = command;
    j_["inputs"] = std::move(inputs);
  }
  void seed(std::uint64_t s) {
    j_["rng"] = "mt19937_64";
    j_["seed"] = s;
  }
  Json& operator[](const char* key) { return j_[key]; }

  // Returns the exit code of a cached run, if any.
  std::optional<int> replay(const Output& out) {
    if (!out.use_cache) return std::nullopt;
    auto p = cache_path(j_);
    if (!p || !fs::exists(*p)) return std::nullopt;
    Json cached = parse_json(read_file(p->string()), "cache entry");
    if (!cached.contains("pass")) return std::nullopt;
    emit(cached.dump(2) + "\n", out);
    return cached["pass"].get<bool>() ? 0 : kCheckFailed;
  }

  int finish(bool pass, const Output& out) {
    Json header = j_;
    j_["pass"] = pass;
    std::string text = j_.dump(2) + "\n";
    if (out.use_cache)
      if (auto p = cache_path(header)) {
        fs::create_directories(p->parent_path());
        write_atomic(p->string(), text);
      }
    emit(text, out);
    return pass ? 0 : kCheckFailed;
  }

 private:
  static void emit(const std::string& text, const Output& out) {
    if (out.path.empty()) std::cout << text << std::flush;
    else write_atomic(out.path, text);
  }
  Json j_;
};

// Algebra input shared by the algebra verbs.
struct AlgebraArgs {
  std::string spec;
  std::string phases;
  bool theta = false;
};

void add_algebra_options(CLI::App* sub, AlgebraArgs& a) {
  sub->add_option("--algebra", a.spec, "algebra spec JSON")->required();
  sub->add_option("--phases", a.phases, "JSON object mapping generator names to phases");
  sub->add_flag("--theta", a.theta, "compose the automorphism with exp(2 pi i H)");
}

Json phase_file(const std::string& path) {
  Json j = parse_json(read_file(path), path);
  if (!j.is_object()) throw ParseError(path + ": expected an object of name -> phase");
  return j;
}

GeneratorTable load_algebra(const AlgebraArgs& a, Json& inputs) {
  GeneratorTable t = load_table(read_file(a.spec));
  std::vector<Phase> ph;
  for (const auto& g : t.generators()) ph.push_back(g.phase);
  if (!a.phases.empty()) {
    for (const auto& [name, val] : phase_file(a.phases).items()) {
      auto i = t.index_of(name);
      if (!i) throw ParseError(a.phases + ": unknown generator \"" + name + "\"");
      if (!val.is_string()) throw ParseError(a.phases + ": phases must be strings");
      ph[*i] = Phase(parse_rational(val.get<std::string>(), a.phases));
    }
  }
  if (a.theta)
    for (std::uint32_t i = 0; i < t.size(); ++i) ph[i] = ph[i] + Phase(t.gen(i).weight);
  t = with_phases(t, ph);
  inputs["algebra_file"] = a.spec;
  if (!a.phases.empty()) inputs["phase_file"] = a.phases;
  inputs["theta"] = a.theta;
  inputs["algebra"] = table_to_json(t);
  return t;
}

// Lie data input shared by the reduction verbs and theorem-c-check.
struct LieArgs {
  std::string lie = "sl2";
  std::string x, f, phases;
  bool theta = false;
};

void add_lie_options(CLI::App* sub, LieArgs& a, const std::string& x_default) {
  sub->add_option("--lie", a.lie, "sl2, osp12, or a Lie data JSON file")->capture_default_str();
  sub->add_option("--x", a.x, "grading element, e.g. h/2 (default " + x_default + ")");
  sub->add_option("--f", a.f, "nilpotent element (default f)");
  sub->add_option("--phases", a.phases, "JSON object mapping basis names to phases");
  sub->add_flag("--theta", a.theta, "compose the automorphism with exp(2 pi i H)");
}

LieSuperData load_lie_args(const LieArgs& a, const std::string& x_default, Json& inputs) {
  LieSuperData d;
  bool preset = a.lie == "sl2" || a.lie == "osp12";
  if (a.lie == "sl2") d = sl2_data();
  else if (a.lie == "osp12") d = osp12_data();
  else d = load_lie(read_file(a.lie));
  std::string x = a.x.empty() && preset ? x_default : a.x;
  try {
    if (!x.empty()) d.x = parse_lie_element(d, x);
    if (!a.f.empty()) d.f = parse_lie_element(d, a.f);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("--x/--f: ") + e.what());
  }
  inputs["lie_source"] = a.lie;
  inputs["lie"] = lie_to_json(d);
  return d;
}

std::vector<Phase> lie_phases(const LieSuperData& d, const LieArgs& a, Json& inputs) {
  std::vector<Phase> ph(d.dim());
  if (!a.phases.empty()) {
    for (const auto& [name, val] : phase_file(a.phases).items()) {
      auto i = d.index_of(name);
      if (!i) throw ParseError(a.phases + ": unknown basis element \"" + name + "\"");
      if (!val.is_string()) throw ParseError(a.phases + ": phases must be strings");
      ph[*i] = Phase(parse_rational(val.get<std::string>(), a.phases));
    }
  }
  if (a.theta) {
    auto g = d.grades();
    for (std::size_t i = 0; i < d.dim(); ++i) ph[i] = ph[i] + Phase(Rational(1) - g[i]);
  }
  bool trivial = std::all_of(ph.begin(), ph.end(), [](const Phase& p) { return p.is_zero(); });
  Json pj = Json::object();
  for (std::size_t i = 0; i < d.dim(); ++i) pj[d.basis[i]] = ph[i].to_string();
  inputs["phases"] = pj;
  return trivial ? std::vector<Phase>{} : ph;
}

// ---- verbs ----

int cmd_preset(const std::string& name, const std::string& x, const std::string& level, const std::string& c,
               bool theta, bool ramond, const Output& out) {
  auto lie_for = [&](LieSuperData d) {
    if (!x.empty()) d.x = parse_lie_element(d, x);
    return d;
  };
  std::string text;
  GeneratorTable t;
  bool is_table = true;
  if (name == "affine-sl2") t = affine(lie_for(sl2_data()), parse_level(level));
  else if (name == "affine-osp12") t = affine(lie_for(osp12_data()), parse_level(level));
  else if (name == "virasoro") t = virasoro(parse_level(c));
  else if (name == "fermion") t = free_fermion(ramond ? Phase(Rational(1, 2)) : Phase());
  else if (name == "neutral-fermions-osp12") t = neutral_fermions(lie_for(osp12_data()));
  else if (name == "charged-fermions-sl2") t = charged_fermions(lie_for(sl2_data()));
  else if (name == "charged-fermions-osp12") t = charged_fermions(lie_for(osp12_data()));
  else if (name == "brst-sl2" || name == "brst-osp12") {
    LieSuperData d = name == "brst-sl2" ? sl2_data() : osp12_data();
    d.x = parse_lie_element(d, x.empty() ? "h/2" : x);
    t = brst_complex(d, parse_level(level)).table;
  } else if (name == "lie-sl2" || name == "lie-osp12") {
    text = emit_lie(lie_for(name == "lie-sl2" ? sl2_data() : osp12_data()));
    is_table = false;
  } else {
    throw ValidationError("unknown preset \"" + name + "\"");
  }
  if (is_table) {
    if (theta) t = with_phases(t, theta_phases(t));
    text = emit_table(t);
  }
  if (out.path.empty()) std::cout << text;
  else write_atomic(out.path, text);
  return 0;
}

int cmd_ope(const AlgebraArgs& aa, const std::string& a_text, const std::string& b_text, std::optional<long> n,
            const Output& out) {
  Json inputs;
  GeneratorTable t = load_algebra(aa, inputs);
  inputs["a"] = a_text;
  inputs["b"] = b_text;
  if (n) inputs["n"] = *n;
  Report rep("ope", inputs);
  Vsa v(t);
  VElement a = parse_element(v, a_text), b = parse_element(v, b_text);
  if (n) {
    rep["product"] = render(t, v.nth_product(a, b, *n));
  } else {
    rep["lambda_bracket"] = render(t, v.lambda_bracket(a, b));
    Json ps = Json::array();
    auto prods = v.products(a, b);
    for (std::size_t i = 0; i < prods.size(); ++i) ps.push_back({{"n", i}, {"value", render(t, prods[i])}});
    rep["products"] = ps;
    rep["normal_order"] = render(t, v.normal_order(a, b));
  }
  return rep.finish(true, out);
}

int cmd_verify_identity(const AlgebraArgs& aa, const std::string& identity, std::size_t samples,
                        std::uint64_t seed, bool exhaustive, long bound, const std::string& max_weight,
                        std::size_t max_len, const Output& out) {
  Json inputs;
  GeneratorTable t = load_algebra(aa, inputs);
  std::vector<IdentityInfo> list;
  if (identity == "all") list = identities();
  else list.push_back(identity_info(identity));
  Rational mw = parse_rational(max_weight, "--max-weight");
  inputs["identity"] = identity;
  inputs["samples"] = samples;
  inputs["exhaustive"] = exhaustive;
  inputs["index_bound"] = bound;
  inputs["max_weight"] = str(mw);
  inputs["max_len"] = max_len;
  Report rep("verify-identity", inputs);
  rep.seed(seed);
  if (auto code = rep.replay(out)) return *code;

  Vsa v(t);
  Twisted tw(v);
  Sampler s(t, seed, mw, max_len);
  bool all = true;
  Json results = Json::array();
  for (const auto& info : list) {
    std::size_t tried = 0, failed = 0;
    Json failures = Json::array();
    auto run = [&](const std::vector<VElement>& args, const IdentityParams& p) {
      ++tried;
      auto r = verify_identity(tw, info.name, args, p);
      if (r.pass) return;
      ++failed;
      Json fj;
      fj["args"] = Json::array();
      for (const auto& x : args) fj["args"].push_back(render(t, x));
      fj["m"] = p.m;
      fj["n"] = p.n;
      fj["k"] = p.k;
      fj["lhs"] = render(t, r.lhs);
      fj["rhs"] = render(t, r.rhs);
      std::cerr << info.name << " failed on";
      for (const auto& x : fj["args"]) std::cerr << " [" << x.get<std::string>() << "]";
      std::cerr << " m=" << p.m << " n=" << p.n << " k=" << p.k << "\n  lhs: " << fj["lhs"].get<std::string>()
                << "\n  rhs: " << fj["rhs"].get<std::string>() << "\n";
      if (failures.size() < 20) failures.push_back(fj);
    };
    std::size_t exhaustive_count = 0;
    if (exhaustive) {
      auto n = static_cast<std::uint32_t>(t.size());
      for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
          for (std::uint32_t c = 0; c < (info.arity == 3 ? n : 1u); ++c) {
            std::vector<VElement> args{VElement::generator(a), VElement::generator(b)};
            if (info.arity == 3) args.push_back(VElement::generator(c));
            for (long m = info.uses_m ? -bound : 0; m <= (info.uses_m ? bound : 0); ++m)
              for (long nn = info.uses_n ? -bound : 0; nn <= (info.uses_n ? bound : 0); ++nn)
                for (long k = info.uses_k ? std::max(-bound, info.k_min) : 0; k <= (info.uses_k ? bound : 0); ++k) {
                  run(args, {m, nn, k});
                  ++exhaustive_count;
                }
          }
    }
    for (std::size_t i = 0; i < samples; ++i) {
      std::vector<VElement> args;
      for (int j = 0; j < info.arity; ++j) args.push_back(s.next(v));
      auto draw = [&] { return static_cast<long>(s.below(2 * bound + 1)) - bound; };
      IdentityParams p;
      p.m = draw();
      p.n = draw();
      p.k = std::max(info.k_min, draw());
      run(args, p);
    }
    Json rj;
    rj["identity"] = info.name;
    rj["exhaustive_cases"] = exhaustive_count;
    rj["sampled_cases"] = samples;
    rj["checked"] = tried;
    rj["failed"] = failed;
    rj["failures"] = failures;
    results.push_back(rj);
    all = all && failed == 0;
  }
  rep["results"] = results;
  return rep.finish(all, out);
}

int cmd_zhu_project(const AlgebraArgs& aa, const std::string& element, const Output& out) {
  Json inputs;
  GeneratorTable t = load_algebra(aa, inputs);
  inputs["element"] = element;
  Report rep("zhu-project", inputs);
  Vsa v(t);
  Twisted tw(v);
  Zhu z(tw);
  VElement a = parse_element(v, element);
  Json fixed = Json::array();
  for (auto g : z.fixed_generators()) fixed.push_back(t.gen(g).name);
  rep["fixed_generators"] = fixed;
  rep["fixed"] = z.is_fixed(a);
  if (!z.is_fixed(a)) throw ValidationError("element is not fixed by the automorphism: " + render(t, a));
  rep["projection"] = render(t, z.tau(a));
  return rep.finish(true, out);
}

int cmd_zhu_mul(const AlgebraArgs& aa, const std::string& a_text, const std::string& b_text, const Output& out) {
  Json inputs;
  GeneratorTable t = load_algebra(aa, inputs);
  inputs["a"] = a_text;
  inputs["b"] = b_text;
  Report rep("zhu-mul", inputs);
  Vsa v(t);
  Twisted tw(v);
  Zhu z(tw);
  ZhuElement a = parse_zhu(z, a_text), b = parse_zhu(z, b_text);
  rep["a"] = render(t, a);
  rep["b"] = render(t, b);
  rep["product"] = render(t, z.mul(a, b));
  rep["bracket"] = render(t, z.bracket(a, b));
  return rep.finish(true, out);
}

int cmd_zhu_census(const AlgebraArgs& aa, const std::string& zmax_text, unsigned kmax, const Output& out) {
  Json inputs;
  GeneratorTable t = load_algebra(aa, inputs);
  Rational zmax = parse_rational(zmax_text, "--zmax");
  inputs["zmax"] = str(zmax);
  inputs["kmax"] = kmax;
  Report rep("zhu-census", inputs);
  if (auto code = rep.replay(out)) return *code;
  Vsa v(t);
  Twisted tw(v);
  Zhu z(tw);
  auto census = pbw_census(z, zmax);
  Json rows = Json::array();
  for (const auto& r : census.rows)
    rows.push_back({{"zeta", str(r.zeta)}, {"expected", r.expected}, {"computed", r.computed}});
  Json fixed = Json::array();
  for (auto g : z.fixed_generators()) fixed.push_back(t.gen(g).name);
  rep["fixed_generators"] = fixed;
  rep["census"] = {{"rows", rows}, {"pass", census.pass}};
  auto r = zhu_r_check(z, kmax);
  rep["derivative_relations"] = {{"generators", r.generators},
                                 {"kernel_dim", r.kernel_dim},
                                 {"expected_kernel", r.expected_kernel},
                                 {"relations_hold", r.relations_hold},
                                 {"pass", r.pass}};
  return rep.finish(census.pass && r.pass, out);
}

int cmd_theorem_e(const AlgebraArgs& aa, const std::string& dmax_text, const std::string& cap_text, const Output& out) {
  Json inputs;
  GeneratorTable t = load_algebra(aa, inputs);
  Rational dmax = parse_rational(dmax_text, "--dmax");
  std::optional<Rational> cap;
  if (!cap_text.empty()) cap = parse_rational(cap_text, "--zeta-cap");
  inputs["dmax"] = str(dmax);
  if (cap) inputs["zeta_cap"] = str(*cap);
  Report rep("theorem-e-check", inputs);
  if (auto code = rep.replay(out)) return *code;
  Vsa v(t);
  Twisted tw(v);
  Zhu z(tw);
  auto e = theorem_e_dims(z, dmax, cap);
  Json rows = Json::array();
  for (const auto& r : e.rows) rows.push_back({{"weight", str(r.weight)}, {"zhu", r.zhu}, {"free", r.free}});
  rep["zeta_cap"] = str(e.zeta_cap);
  rep["rows"] = rows;
  return rep.finish(e.pass, out);
}

int cmd_theorem_c(const LieArgs& la, const Output& out) {
  Json inputs;
  LieSuperData d = load_lie_args(la, "0", inputs);
  auto ph = lie_phases(d, la, inputs);
  Report rep("theorem-c-check", inputs);
  if (auto code = rep.replay(out)) return *code;
  auto c = theorem_c_check(d, ph);
  rep["fixed"] = c.fixed;
  rep["closed"] = c.closed;
  rep["commutative"] = c.commutative;
  Json entries = Json::array();
  for (const auto& e : c.entries)
    entries.push_back({{"a", e.a}, {"b", e.b}, {"computed", e.computed}, {"expected", e.expected}, {"pass", e.pass}});
  rep["entries"] = entries;
  return rep.finish(c.pass, out);
}

// ---- reduction verbs ----

struct ReductionArgs {
  LieArgs lie;
  std::string level = "7/3";
  std::string dmax = "4";
  std::string zmax = "6";
};

void add_reduction_options(CLI::App* sub, ReductionArgs& r) {
  add_lie_options(sub, r.lie, "h/2");
  sub->add_option("--level", r.level, "p/q or symbolic")->capture_default_str();
}

BrstComplex load_reduction(const ReductionArgs& r, Json& inputs) {
  LieSuperData d = load_lie_args(r.lie, "h/2", inputs);
  auto ph = lie_phases(d, r.lie, inputs);
  Scalar k = parse_level(r.level);
  inputs["level"] = k.to_string();
  return brst_complex(d, k, ph);
}

Json block_rows(const CohomologyReport& c) {
  Json rows = Json::array();
  for (const auto& b : c.blocks)
    rows.push_back({{"weight", str(b.weight)}, {"charge", b.charge}, {"dim", b.dim}, {"rank", b.rank},
                    {"kernel", b.kernel}, {"image", b.image}, {"cohomology", b.cohomology}});
  return rows;
}

std::vector<Rational> sample_levels(const Scalar& k) {
  std::vector<Rational> out;
  if (k.is_rational()) out.push_back(k.to_rational());
  for (auto r : {Rational(7, 3), Rational(5, 2), Rational(-1, 5)})
    if (out.size() < 3 && std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  return out;
}

int cmd_cohomology(const ReductionArgs& r, const Output& out) {
  Json inputs;
  BrstComplex c = load_reduction(r, inputs);
  Rational dmax = parse_rational(r.dmax, "--dmax");
  inputs["dmax"] = str(dmax);
  Report rep("cohomology", inputs);
  if (auto code = rep.replay(out)) return *code;
  Complex cp = brst_plus(c);
  Vsa v(c.table);
  VertexCohomology vc(v, cp);
  auto res = vc.compute(dmax);
  Json gens = Json::array();
  for (const auto& g : cp.gens)
    gens.push_back({{"name", g.name}, {"weight", str(g.weight)}, {"charge", g.charge}, {"value", render(c.table, g.value)}});
  rep["subcomplex_generators"] = gens;
  rep["blocks"] = block_rows(res);
  rep["weights"] = rationals(res.weights);
  rep["h0_dims"] = res.h0_dims;
  Json reps = Json::object();
  for (const auto& [w, list] : res.h0_reps) reps[str(w)] = list;
  rep["h0_representatives"] = reps;
  rep["higher_vanish"] = res.higher_vanish;
  rep["euler"] = res.euler;

  // symbolic cross-checks
  BrstComplex sym = brst_complex(c.data, Scalar::level(), {});
  Vsa vs(sym.table);
  bool q2 = vs.lambda_bracket(sym.q, sym.q).is_zero();
  rep["q_squared_zero_symbolic"] = q2;
  VertexCohomology vcs(vs, brst_plus(sym));
  auto levels = sample_levels(c.level);
  auto spec = specialization_check(vcs, dmax, levels);
  Json srows = Json::array();
  bool spec_ok = true;
  for (const auto& s : spec) {
    srows.push_back({{"weight", str(s.weight)}, {"charge", s.charge}, {"dim", s.dim},
                     {"symbolic_rank", s.symbolic_rank}, {"ranks", s.ranks}, {"pass", s.pass}});
    spec_ok = spec_ok && s.pass;
  }
  rep["specialization"] = {{"levels", rationals(levels)}, {"blocks", srows}, {"pass", spec_ok}};
  return rep.finish(res.higher_vanish && res.euler && q2 && spec_ok, out);
}

int cmd_zhu_h0(const ReductionArgs& r, std::optional<std::uint64_t> seed, std::size_t samples, const Output& out) {
  Json inputs;
  BrstComplex c = load_reduction(r, inputs);
  Rational zmax = parse_rational(r.zmax, "--zmax");
  inputs["zmax"] = str(zmax);
  if (seed) inputs["samples"] = samples;
  Report rep("zhu-h0", inputs);
  if (seed) rep.seed(*seed);
  if (auto code = rep.replay(out)) return *code;
  Complex cp = brst_plus(c);
  Vsa v(c.table);
  Twisted tw(v);
  Zhu z(tw);
  ZhuCohomology zc(z, cp);
  auto res = zc.compute(zmax);
  rep["letters"] = res.letters;
  rep["q_bar"] = render(c.table, zc.q_bar());
  Json rows = Json::array();
  for (const auto& row : res.rows) {
    Json dims = Json::object(), coh = Json::object();
    for (const auto& [n, d] : row.dim) dims[std::to_string(n)] = d;
    for (const auto& [n, d] : row.cohomology) coh[std::to_string(n)] = d;
    rows.push_back({{"zeta", str(row.zeta)}, {"dim", dims}, {"cohomology", coh}});
  }
  rep["rows"] = rows;
  rep["h0_dims"] = res.h0_dims;
  rep["h0_representatives"] = res.h0_reps;
  rep["filtration_preserved"] = res.filtration_preserved;
  rep["higher_vanish"] = res.higher_vanish;
  bool ok = res.filtration_preserved && res.higher_vanish;
  if (seed) {
    // tau(d x) = dbar(tau x) on fixed samples
    Sampler s(c.table, *seed, Rational(2), 3);
    s.keep_if([&](const Monomial& m) { return z.is_fixed(m); });
    std::size_t failed = 0;
    for (std::size_t i = 0; i < samples && !s.empty(); ++i) {
      VElement x = s.next(v);
      if (!(z.tau(v.nth_product(c.q, x, 0)) == zc.dbar(z.tau(x)))) ++failed;
    }
    rep["chain_map"] = {{"samples", samples}, {"failed", failed}};
    ok = ok && failed == 0;
  }
  return rep.finish(ok, out);
}

Json theorem_b_json(const TheoremBReport& b) {
  Json checks = Json::array();
  for (const auto& c : b.checks) checks.push_back({{"check", c.what}, {"pass", c.pass}});
  return {{"generators", b.generators}, {"generator_zetas", rationals(b.zetas)},
          {"zhu_of_cohomology", b.zhu_of_h}, {"cohomology_of_zhu", b.h_of_zhu},
          {"commutative", b.commutative}, {"inconclusive", b.inconclusive}, {"checks", checks}, {"pass", b.pass}};
}

int cmd_theorem_b(const ReductionArgs& r, const Output& out) {
  Json inputs;
  BrstComplex c = load_reduction(r, inputs);
  Rational zmax = parse_rational(r.zmax, "--zmax");
  inputs["zmax"] = str(zmax);
  Report rep("theorem-b-check", inputs);
  if (auto code = rep.replay(out)) return *code;
  Vsa v(c.table);
  Twisted tw(v);
  Zhu z(tw);
  ZhuCohomology zc(z, brst_plus(c));
  auto b = theorem_b_check(v, z, brst_plus(c), zmax);
  Json grid = Json::array();
  for (Rational cut(0); cut <= zmax; cut += zc.step()) grid.push_back(str(cut));
  rep["zeta_grid"] = grid;
  rep["result"] = theorem_b_json(b);
  return rep.finish(b.pass, out);
}

int cmd_theorem_d(const ReductionArgs& r, const Output& out) {
  Json inputs;
  BrstComplex c = load_reduction(r, inputs);
  Rational zmax = parse_rational(r.zmax, "--zmax");
  inputs["zmax"] = str(zmax);
  Report rep("theorem-d-check", inputs);
  if (auto code = rep.replay(out)) return *code;
  auto d = theorem_d_check(c, zmax);
  rep["centralizer"] = d.centralizer;
  rep["expected_dims"] = d.expected;
  rep["leading_term_nonzero"] = d.leading_term_nonzero;
  rep["theorem_b"] = theorem_b_json(d.b);
  return rep.finish(d.pass, out);
}

void fail_json(const char* kind, const std::string& msg) {
  Json j;
  j["error"] = kind;
  j["message"] = msg;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twisted Zhu algebra and reduction calculator"};
  app.require_subcommand(1);
  Output out;
  bool no_cache = false;
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out.path, "report path (default stdout); written atomically");
    sub->add_flag("--no-cache", no_cache, std::string("ignore $") + kCacheEnv);
  };
  std::function<int()> action;

  // preset
  std::string p_name, p_x, p_level = "symbolic", p_c = "symbolic";
  bool p_theta = false, p_ramond = false;
  auto* preset = app.add_subcommand("preset", "emit the spec JSON of a built-in table");
  preset->add_option("name", p_name,
                     "affine-sl2, affine-osp12, virasoro, fermion, neutral-fermions-osp12, charged-fermions-sl2, "
                     "charged-fermions-osp12, brst-sl2, brst-osp12, lie-sl2, lie-osp12")
      ->required();
  preset->add_option("--x", p_x, "grading element");
  preset->add_option("--level", p_level, "p/q or symbolic")->capture_default_str();
  preset->add_option("--c", p_c, "central charge, p/q or symbolic")->capture_default_str();
  preset->add_flag("--theta", p_theta, "set phases to exp(2 pi i H)");
  preset->add_flag("--ramond", p_ramond, "fermion with phase 1/2");
  preset->add_option("--out", out.path, "output path");
  preset->callback([&] { action = [&] { return cmd_preset(p_name, p_x, p_level, p_c, p_theta, p_ramond, out); }; });

  // ope
  AlgebraArgs o_alg;
  std::string o_a, o_b;
  std::optional<long> o_n;
  auto* ope = app.add_subcommand("ope", "lambda-bracket or n-th product of two expressions");
  add_algebra_options(ope, o_alg);
  ope->add_option("--a", o_a)->required();
  ope->add_option("--b", o_b)->required();
  ope->add_option("--n", o_n, "single n-th product");
  add_out(ope);
  ope->callback([&] { action = [&] { return cmd_ope(o_alg, o_a, o_b, o_n, out); }; });

  // verify-identity
  AlgebraArgs v_alg;
  std::string v_id, v_mw = "2";
  std::size_t v_samples = 100, v_len = 2;
  std::uint64_t v_seed = 0;
  long v_bound = 2;
  bool v_exh = false;
  auto* ver = app.add_subcommand("verify-identity", "check a twisted-product identity on samples");
  add_algebra_options(ver, v_alg);
  ver->add_option("--identity", v_id, "identity name or all")->required();
  ver->add_option("--samples", v_samples)->capture_default_str();
  ver->add_option("--seed", v_seed)->required();
  ver->add_flag("--exhaustive", v_exh, "also run every generator tuple");
  ver->add_option("--index-bound", v_bound, "bound on |m|, |n|, |k|")->capture_default_str();
  ver->add_option("--max-weight", v_mw, "sample weight bound")->capture_default_str();
  ver->add_option("--max-len", v_len, "sample monomial length bound")->capture_default_str();
  add_out(ver);
  ver->callback([&] {
    action = [&] { return cmd_verify_identity(v_alg, v_id, v_samples, v_seed, v_exh, v_bound, v_mw, v_len, out); };
  });

  // zhu-project
  AlgebraArgs zp_alg;
  std::string zp_el;
  auto* zp = app.add_subcommand("zhu-project", "image of a fixed element in the Zhu algebra");
  add_algebra_options(zp, zp_alg);
  zp->add_option("--element", zp_el)->required();
  add_out(zp);
  zp->callback([&] { action = [&] { return cmd_zhu_project(zp_alg, zp_el, out); }; });

  // zhu-mul
  AlgebraArgs zm_alg;
  std::string zm_a, zm_b;
  auto* zm = app.add_subcommand("zhu-mul", "product and bracket in the Zhu algebra");
  add_algebra_options(zm, zm_alg);
  zm->add_option("--a", zm_a)->required();
  zm->add_option("--b", zm_b)->required();
  add_out(zm);
  zm->callback([&] { action = [&] { return cmd_zhu_mul(zm_alg, zm_a, zm_b, out); }; });

  // zhu-census
  AlgebraArgs zc_alg;
  std::string zc_zmax = "6";
  unsigned zc_kmax = 6;
  auto* zc = app.add_subcommand("zhu-census", "PBW census of the Zhu algebra");
  add_algebra_options(zc, zc_alg);
  zc->add_option("--zmax", zc_zmax)->capture_default_str();
  zc->add_option("--kmax", zc_kmax)->capture_default_str();
  add_out(zc);
  zc->callback([&] { action = [&] { return cmd_zhu_census(zc_alg, zc_zmax, zc_kmax, out); }; });

  // theorem-e-check
  AlgebraArgs te_alg;
  std::string te_dmax = "4", te_cap;
  auto* te = app.add_subcommand("theorem-e-check", "graded Zhu algebra against the free algebra");
  add_algebra_options(te, te_alg);
  te->add_option("--dmax", te_dmax)->capture_default_str();
  te->add_option("--zeta-cap", te_cap, "pregrade bound (needed when some weight is <= 0)");
  add_out(te);
  te->callback([&] { action = [&] { return cmd_theorem_e(te_alg, te_dmax, te_cap, out); }; });

  // theorem-c-check
  LieArgs tc_lie;
  auto* tc = app.add_subcommand("theorem-c-check", "Zhu algebra of an affine algebra against the fixed subalgebra");
  add_lie_options(tc, tc_lie, "0");
  add_out(tc);
  tc->callback([&] { action = [&] { return cmd_theorem_c(tc_lie, out); }; });

  // reduction verbs
  ReductionArgs co_r, zh_r, tb_r, td_r;
  auto* co = app.add_subcommand("cohomology", "vertex-side BRST cohomology by weight and charge");
  add_reduction_options(co, co_r);
  co->add_option("--dmax", co_r.dmax)->capture_default_str();
  add_out(co);
  co->callback([&] { action = [&] { return cmd_cohomology(co_r, out); }; });

  std::optional<std::uint64_t> zh_seed;
  std::size_t zh_samples = 100;
  auto* zh = app.add_subcommand("zhu-h0", "filtered cohomology of the Zhu algebra of the complex");
  add_reduction_options(zh, zh_r);
  zh->add_option("--zmax", zh_r.zmax)->capture_default_str();
  zh->add_option("--seed", zh_seed, "run the sampled chain-map check");
  zh->add_option("--samples", zh_samples)->capture_default_str();
  add_out(zh);
  zh->callback([&] { action = [&] { return cmd_zhu_h0(zh_r, zh_seed, zh_samples, out); }; });

  auto* tb = app.add_subcommand("theorem-b-check", "Zhu of cohomology against cohomology of Zhu");
  add_reduction_options(tb, tb_r);
  tb->add_option("--zmax", tb_r.zmax)->capture_default_str();
  add_out(tb);
  tb->callback([&] { action = [&] { return cmd_theorem_b(tb_r, out); }; });

  auto* td = app.add_subcommand("theorem-d-check", "Zhu of the W-algebra against the finite W-algebra");
  add_reduction_options(td, td_r);
  td->add_option("--zmax", td_r.zmax)->capture_default_str();
  add_out(td);
  td->callback([&] { action = [&] { return cmd_theorem_d(td_r, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail_json("parse", e.what());
    return kParse;
  }
  out.use_cache = !no_cache;
  try {
    return action();
  } catch (const ParseError& e) {
    fail_json("parse", e.what());
    return kParse;
  } catch (const ValidationError& e) {
    fail_json("validation", e.what());
    return kValidation;
  } catch (const std::invalid_argument& e) {
    fail_json("validation", e.what());
    return kValidation;
  }
}
