#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "valcalc/bodies.hpp"
#include "valcalc/contact.hpp"
#include "valcalc/kinematic.hpp"
#include "valcalc/valuation.hpp"

namespace valcalc {

using Json = nlohmann::ordered_json;

/// Malformed input; the message starts with the JSON pointer of the offending value.
class ParseError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// {"0": "1/2", "-1": "3"}: power of pi -> rational string.
Json to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j, const std::string& where = "");

/// {dim, terms: [{dx: [..], dv: [..], poly: [{exp: [..], coeff: {..}}]}]}.
/// Indices are 0-based; unsorted index lists are sorted with the matching sign.
Json to_json(const InvariantForm& w);
InvariantForm form_from_json(const Json& j, const std::string& where = "");

/// {dim, terms: [{dx: [..], coeff: {..}}]}.
Json to_json(const BaseForm& phi);
BaseForm base_form_from_json(const Json& j, const std::string& where = "");

/// {dim, omega: form, phi: base form}, or a builtin:
/// {"builtin": "intrinsic_volume", "dim": n, "k": k} (also "chi", "vol")
/// {"builtin": "Z", "u": ["a", "b", "c"]}.
Json to_json(const ValuationRep& mu);
ValuationRep valuation_from_json(const Json& j, const std::string& where = "");

/// Tagged union on "type": ball {center, radius}; box {center, half_extents,
/// rotation?}; simplex {vertices}; polygon {frame, vertices | regular+radius, base?}.
Json to_json(const ConvexBody& K);
ConvexBody body_from_json(const Json& j, const std::string& where = "");

Json to_json(const RuminResult& r);
Json to_json(const MCReport& r);

/// Reads and parses a JSON file; parse errors carry the file name and byte offset.
Json read_json_file(const std::string& path);

/// Direction "a,b,c" of rationals.
ImDirection parse_direction(const std::string& text);

/// 12 significant digits.
std::string format_double(double x);

}  // namespace valcalc
