#pragma once

#include "twzhu/presets.hpp"
#include "twzhu/vsa.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace twzhu {

using Json = nlohmann::ordered_json;

// Malformed input text; carries a human-readable position when known.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json table_to_json(const GeneratorTable& t);
// Strict: unknown keys, bad scalars and unknown names raise ParseError;
// table invariants raise ValidationError.
GeneratorTable table_from_json(const Json& j);
std::string emit_table(const GeneratorTable& t);  // canonical, two-space indent, trailing newline
GeneratorTable load_table(const std::string& text);

// Lie superalgebra data: basis with parities, brackets and form for pairs left <= right
// (the rest by supersymmetry), dual Coxeter number, optional grading element and nilpotent.
Json lie_to_json(const LieSuperData& d);
LieSuperData lie_from_json(const Json& j);  // validates the algebra and the form
std::string emit_lie(const LieSuperData& d);
LieSuperData load_lie(const std::string& text);

std::string render_scalar_coeff(const Scalar& c);
std::string render_monomial(const GeneratorTable& t, const Monomial& m);
std::string render(const GeneratorTable& t, const VElement& v);
std::string render(const GeneratorTable& t, const LambdaPoly& p);

// Expressions: sums of [scalar*]atom; atoms are names, |0>, D(x), Dn(x),
// :x y ...: (right-nested normal ordering) and parentheses.
VElement parse_element(Vsa& v, const std::string& text);

}  // namespace twzhu
