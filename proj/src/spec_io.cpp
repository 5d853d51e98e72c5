#include "twzhu/spec_io.hpp"

#include <cctype>
#include <set>

namespace twzhu {

namespace {

void only_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ParseError(where + ": unknown field \"" + k + "\"");
  for (const char* k : keys)
    if (!j.contains(k)) throw ParseError(where + ": missing field \"" + std::string(k) + "\"");
}

std::string get_string(const Json& j, const char* key, const std::string& where) {
  if (!j.at(key).is_string()) throw ParseError(where + ": field \"" + key + "\" must be a string");
  return j.at(key).get<std::string>();
}

Rational get_rational(const Json& j, const char* key, const std::string& where) {
  try {
    return Rational::parse(get_string(j, key, where));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": field \"" + key + "\": " + e.what());
  }
}

bool valid_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])))) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '^')) return false;
  return true;
}

}  // namespace

Json table_to_json(const GeneratorTable& t) {
  Json j;
  j["generators"] = Json::array();
  for (const auto& g : t.generators()) {
    Json gj;
    gj["name"] = g.name;
    gj["parity"] = g.odd ? "odd" : "even";
    gj["weight"] = g.weight.to_string();
    gj["phase"] = g.phase.to_string();
    gj["zeta"] = g.zeta.to_string();
    j["generators"].push_back(gj);
  }
  j["brackets"] = Json::array();
  for (const auto& [key, p] : t.brackets()) {
    Json bj;
    bj["left"] = t.gen(key.first).name;
    bj["right"] = t.gen(key.second).name;
    bj["terms"] = Json::array();
    for (std::size_t n = 0; n < p.coeffs.size(); ++n)
      for (const auto& [m, c] : p.coeffs[n].terms()) {
        Json tj;
        tj["lambda_power"] = n;
        tj["coeff"] = c.to_string();
        Json mj = Json::array();
        for (const auto& f : m.fields()) mj.push_back(Json::array({t.gen(f.gen).name, f.order}));
        tj["monomial"] = mj;
        bj["terms"].push_back(tj);
      }
    j["brackets"].push_back(bj);
  }
  return j;
}

GeneratorTable table_from_json(const Json& j) {
  only_keys(j, {"generators", "brackets"}, "spec");
  if (!j["generators"].is_array()) throw ParseError("spec: \"generators\" must be an array");
  if (!j["brackets"].is_array()) throw ParseError("spec: \"brackets\" must be an array");
  GeneratorTable t;
  std::size_t i = 0;
  for (const auto& gj : j["generators"]) {
    std::string where = "generators[" + std::to_string(i++) + "]";
    only_keys(gj, {"name", "parity", "weight", "phase", "zeta"}, where);
    Generator g;
    g.name = get_string(gj, "name", where);
    if (!valid_name(g.name)) throw ParseError(where + ": invalid name \"" + g.name + "\"");
    std::string par = get_string(gj, "parity", where);
    if (par != "even" && par != "odd") throw ParseError(where + ": parity must be \"even\" or \"odd\"");
    g.odd = par == "odd";
    g.weight = get_rational(gj, "weight", where);
    g.phase = Phase(get_rational(gj, "phase", where));
    g.zeta = get_rational(gj, "zeta", where);
    if (t.index_of(g.name)) throw ValidationError(where + ": duplicate name \"" + g.name + "\"");
    t.add_generator(g);
  }
  auto lookup = [&](const std::string& n, const std::string& where) {
    auto idx = t.index_of(n);
    if (!idx) throw ParseError(where + ": unknown generator \"" + n + "\"");
    return *idx;
  };
  i = 0;
  for (const auto& bj : j["brackets"]) {
    std::string where = "brackets[" + std::to_string(i++) + "]";
    only_keys(bj, {"left", "right", "terms"}, where);
    auto a = lookup(get_string(bj, "left", where), where);
    auto b = lookup(get_string(bj, "right", where), where);
    if (a > b) throw ValidationError(where + ": pairs must be listed with left <= right in declaration order");
    if (t.bracket(a, b)) throw ValidationError(where + ": duplicate pair");
    if (!bj["terms"].is_array()) throw ParseError(where + ": \"terms\" must be an array");
    LambdaPoly p;
    std::size_t ti = 0;
    for (const auto& tj : bj["terms"]) {
      std::string tw = where + ".terms[" + std::to_string(ti++) + "]";
      only_keys(tj, {"lambda_power", "coeff", "monomial"}, tw);
      if (!tj["lambda_power"].is_number_unsigned()) throw ParseError(tw + ": lambda_power must be a nonnegative integer");
      std::size_t n = tj["lambda_power"].get<std::size_t>();
      Scalar c;
      try {
        c = Scalar::parse(get_string(tj, "coeff", tw));
      } catch (const std::invalid_argument& e) {
        throw ParseError(tw + ": coeff: " + e.what());
      }
      if (!tj["monomial"].is_array()) throw ParseError(tw + ": monomial must be an array");
      std::vector<Field> fs;
      for (const auto& fj : tj["monomial"]) {
        if (!fj.is_array() || fj.size() != 2 || !fj[0].is_string() || !fj[1].is_number_unsigned())
          throw ParseError(tw + ": monomial entries are [name, order]");
        fs.push_back({lookup(fj[0].get<std::string>(), tw), fj[1].get<std::uint32_t>()});
      }
      for (std::size_t k = 1; k < fs.size(); ++k) {
        if (fs[k] < fs[k - 1]) throw ValidationError(tw + ": monomial not in PBW order");
        if (fs[k] == fs[k - 1] && t.gen(fs[k].gen).odd) throw ValidationError(tw + ": repeated odd factor");
      }
      if (p.coeffs.size() <= n) p.coeffs.resize(n + 1);
      p.coeffs[n].add(Monomial(fs), c);
    }
    p.trim();
    if (!p.is_zero()) t.set_bracket(a, b, p);
  }
  t.validate();
  return t;
}

std::string emit_table(const GeneratorTable& t) { return table_to_json(t).dump(2) + "\n"; }

GeneratorTable load_table(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return table_from_json(j);
}

namespace {

Json lievec_to_json(const LieSuperData& d, const LieVec& v) {
  Json j = Json::object();
  for (const auto& [i, c] : v)
    if (!c.is_zero()) j[d.basis[i]] = c.to_string();
  return j;
}

LieVec lievec_from_json(const LieSuperData& d, const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object of basis coefficients");
  LieVec v;
  for (const auto& [name, c] : j.items()) {
    auto i = d.index_of(name);
    if (!i) throw ParseError(where + ": unknown basis element \"" + name + "\"");
    if (!c.is_string()) throw ParseError(where + ": coefficients must be strings");
    Rational r;
    try {
      r = Rational::parse(c.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!r.is_zero()) v[*i] = r;
  }
  return v;
}

}  // namespace

Json lie_to_json(const LieSuperData& d) {
  Json j;
  j["name"] = d.name;
  j["basis"] = Json::array();
  for (std::size_t i = 0; i < d.dim(); ++i) j["basis"].push_back({{"name", d.basis[i]}, {"parity", d.odd[i] ? "odd" : "even"}});
  j["brackets"] = Json::array();
  j["form"] = Json::array();
  for (std::size_t a = 0; a < d.dim(); ++a)
    for (std::size_t b = a; b < d.dim(); ++b) {
      Json v = lievec_to_json(d, d.br[a][b]);
      if (!v.empty()) j["brackets"].push_back({{"left", d.basis[a]}, {"right", d.basis[b]}, {"value", v}});
      if (!d.form[a][b].is_zero())
        j["form"].push_back({{"left", d.basis[a]}, {"right", d.basis[b]}, {"value", d.form[a][b].to_string()}});
    }
  j["dual_coxeter"] = d.dual_coxeter.to_string();
  j["x"] = lievec_to_json(d, d.x);
  j["f"] = d.f ? lievec_to_json(d, *d.f) : Json(nullptr);
  return j;
}

LieSuperData lie_from_json(const Json& j) {
  only_keys(j, {"name", "basis", "brackets", "form", "dual_coxeter", "x", "f"}, "lie");
  LieSuperData d;
  d.name = get_string(j, "name", "lie");
  if (!j["basis"].is_array() || !j["brackets"].is_array() || !j["form"].is_array())
    throw ParseError("lie: \"basis\", \"brackets\" and \"form\" must be arrays");
  std::size_t i = 0;
  for (const auto& bj : j["basis"]) {
    std::string where = "basis[" + std::to_string(i++) + "]";
    only_keys(bj, {"name", "parity"}, where);
    std::string n = get_string(bj, "name", where);
    if (!valid_name(n)) throw ParseError(where + ": invalid name \"" + n + "\"");
    if (d.index_of(n)) throw ValidationError(where + ": duplicate name \"" + n + "\"");
    std::string par = get_string(bj, "parity", where);
    if (par != "even" && par != "odd") throw ParseError(where + ": parity must be \"even\" or \"odd\"");
    d.basis.push_back(n);
    d.odd.push_back(par == "odd");
  }
  std::size_t n = d.dim();
  d.br.assign(n, std::vector<LieVec>(n));
  d.form.assign(n, std::vector<Rational>(n));
  auto pair_of = [&](const Json& e, const std::string& where) {
    auto a = d.index_of(get_string(e, "left", where));
    auto b = d.index_of(get_string(e, "right", where));
    if (!a || !b) throw ParseError(where + ": unknown basis element");
    if (*a > *b) throw ValidationError(where + ": pairs must be listed with left <= right in basis order");
    return std::make_pair(*a, *b);
  };
  std::set<std::pair<std::size_t, std::size_t>> seen;
  i = 0;
  for (const auto& e : j["brackets"]) {
    std::string where = "brackets[" + std::to_string(i++) + "]";
    only_keys(e, {"left", "right", "value"}, where);
    auto [a, b] = pair_of(e, where);
    if (!seen.insert({a, b}).second) throw ValidationError(where + ": duplicate pair");
    LieVec v = lievec_from_json(d, e["value"], where);
    d.br[a][b] = v;
    // [b, a] = -(-1)^{p(a)p(b)} [a, b]
    Rational s(d.odd[a] && d.odd[b] ? 1 : -1);
    for (auto& [k, c] : v) c *= s;
    d.br[b][a] = v;
  }
  seen.clear();
  i = 0;
  for (const auto& e : j["form"]) {
    std::string where = "form[" + std::to_string(i++) + "]";
    only_keys(e, {"left", "right", "value"}, where);
    auto [a, b] = pair_of(e, where);
    if (!seen.insert({a, b}).second) throw ValidationError(where + ": duplicate pair");
    Rational r = get_rational(e, "value", where);
    d.form[a][b] = r;
    d.form[b][a] = d.odd[a] && d.odd[b] ? -r : r;
  }
  d.dual_coxeter = get_rational(j, "dual_coxeter", "lie");
  d.x = lievec_from_json(d, j["x"], "lie.x");
  if (!j["f"].is_null()) d.f = lievec_from_json(d, j["f"], "lie.f");
  auto problems = d.validate();
  if (!problems.empty()) throw ValidationError("lie: " + problems.front());
  return d;
}

std::string emit_lie(const LieSuperData& d) { return lie_to_json(d).dump(2) + "\n"; }

LieSuperData load_lie(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return lie_from_json(j);
}

std::string render_scalar_coeff(const Scalar& c) {
  if (c.is_rational()) return c.to_rational().to_string();
  std::string s = c.to_string();
  bool simple = s.find_first_of("+-/()", 1) == std::string::npos;
  return simple ? s : "(" + s + ")";
}

std::string render_monomial(const GeneratorTable& t, const Monomial& m) {
  if (m.empty()) return "|0>";
  std::string out;
  for (const auto& f : m.fields()) {
    if (!out.empty()) out += " ";
    const std::string& n = t.gen(f.gen).name;
    if (f.order == 0) out += n;
    else if (f.order == 1) out += "D(" + n + ")";
    else out += "D" + std::to_string(f.order) + "(" + n + ")";
  }
  return m.size() == 1 ? out : ":" + out + ":";
}

std::string render(const GeneratorTable& t, const VElement& v) {
  if (v.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : v.terms()) {
    bool neg = c.is_rational() && c.to_rational().sign() < 0;
    Scalar mag = neg ? -c : c;
    if (first) out += neg ? "-" : "";
    else out += neg ? " - " : " + ";
    first = false;
    if (mag.is_one()) out += render_monomial(t, m);
    else out += render_scalar_coeff(mag) + "*" + render_monomial(t, m);
  }
  return out;
}

std::string render(const GeneratorTable& t, const LambdaPoly& p) {
  std::string out;
  for (std::size_t n = 0; n < p.coeffs.size(); ++n) {
    if (p.coeffs[n].is_zero()) continue;
    if (!out.empty()) out += " + ";
    std::string body = render(t, p.coeffs[n]);
    if (n == 0) out += p.coeffs[n].size() > 1 ? "(" + body + ")" : body;
    else out += "(" + body + ")*l" + (n > 1 ? "^" + std::to_string(n) : "");
  }
  return out.empty() ? "0" : out;
}

namespace {

class ExprParser {
 public:
  ExprParser(Vsa& v, const std::string& s) : v_(v), s_(s) {}

  VElement parse() {
    VElement r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("expression: " + what + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  static bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '^'; }

  VElement expr() {
    VElement acc;
    bool first = true;
    while (true) {
      Scalar sign(1);
      if (peek('+') || peek('-')) {
        if (s_[pos_] == '-') sign = Scalar(-1);
        ++pos_;
      } else if (!first) {
        break;
      }
      first = false;
      acc.add_scaled(term(), sign);
      skip();
      if (!(peek('+') || peek('-'))) break;
    }
    return acc;
  }

  // A coefficient is recognised only when followed by '*'.
  VElement term() {
    skip();
    std::size_t save = pos_;
    std::size_t end = scan_coeff();
    if (end != std::string::npos) {
      std::string txt = s_.substr(save, end - save);
      pos_ = end;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        Scalar c;
        try {
          c = Scalar::parse(txt);
        } catch (const std::invalid_argument& e) {
          pos_ = save;
          fail(std::string("bad coefficient (") + e.what() + ")");
        }
        return c * term();
      }
      pos_ = save;
    }
    return atom();
  }

  // Extent of a coefficient: numbers, "k" and parenthesised groups joined by '/' or '^'.
  std::size_t scan_coeff() {
    std::size_t p = scan_unit(pos_);
    while (p != std::string::npos && p < s_.size() && (s_[p] == '/' || s_[p] == '^')) {
      std::size_t q = scan_unit(p + 1);
      if (q == std::string::npos) return std::string::npos;
      p = q;
    }
    return p;
  }

  std::size_t scan_unit(std::size_t p) {
    if (p >= s_.size()) return std::string::npos;
    if (s_[p] == '(') {
      int depth = 0;
      for (; p < s_.size(); ++p) {
        if (s_[p] == '(') ++depth;
        if (s_[p] == ')' && --depth == 0) return p + 1;
        if (s_[p] == ':' || s_[p] == '|') return std::string::npos;
      }
      return std::string::npos;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[p]))) {
      while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
      return p;
    }
    if (s_[p] == 'k' && (p + 1 >= s_.size() || !name_char(s_[p + 1])) && !v_.table().index_of("k")) return p + 1;
    return std::string::npos;
  }

  VElement atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '|') {
      if (s_.compare(pos_, 3, "|0>") != 0) fail("expected |0>");
      pos_ += 3;
      return VElement::vacuum();
    }
    if (c == '(') {
      ++pos_;
      VElement r = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return r;
    }
    if (c == ':') {
      ++pos_;
      std::vector<VElement> parts;
      while (!peek(':')) {
        if (pos_ >= s_.size()) fail("unterminated normal ordering");
        parts.push_back(atom());
      }
      ++pos_;
      if (parts.empty()) fail("empty normal ordering");
      VElement r = parts.back();
      for (std::size_t i = parts.size() - 1; i-- > 0;) r = v_.normal_order(parts[i], r);
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) fail("coefficient must be followed by '*'");
    std::size_t start = pos_;
    while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (name.empty()) fail("expected a term");
    if (name[0] == 'D' && pos_ < s_.size() && s_[pos_] == '(' && !v_.table().index_of(name)) {
      std::string digits = name.substr(1);
      unsigned order = 1;
      if (!digits.empty()) {
        for (char d : digits)
          if (!std::isdigit(static_cast<unsigned char>(d))) fail("bad derivative order");
        order = static_cast<unsigned>(std::stoul(digits));
      }
      ++pos_;
      VElement inner = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return v_.derivative(inner, order);
    }
    auto idx = v_.table().index_of(name);
    if (!idx) {
      pos_ = start;
      fail("unknown generator \"" + name + "\"");
    }
    return VElement::generator(*idx);
  }

  Vsa& v_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

VElement parse_element(Vsa& v, const std::string& text) { return ExprParser(v, text).parse(); }

}  // namespace twzhu
