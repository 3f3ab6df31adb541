#include "valcalc/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "valcalc/su2.hpp"

namespace valcalc {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError((where.empty() ? std::string("/") : where) + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

int int_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) fail(where + "/" + key, "expected an integer");
  return v.get<int>();
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

Vec vec_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  Vec v;
  for (size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], where + "/" + std::to_string(i)));
  return v;
}

int check_dim(int dim, const std::string& where) {
  if (dim < 1 || dim > kMaxDim) fail(where + "/dim", "dimension must be between 1 and 4");
  return dim;
}

// Sorted bit mask of an index list and the sign of the sorting permutation.
std::pair<uint8_t, int> index_mask(const Json& j, int dim, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of indices");
  std::vector<int> idx;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) fail(where + "/" + std::to_string(i), "expected an integer index");
    const int k = j[i].get<int>();
    if (k < 0 || k >= dim) fail(where + "/" + std::to_string(i), "index out of range");
    idx.push_back(k);
  }
  int sign = 1;
  uint8_t mask = 0;
  for (size_t a = 0; a < idx.size(); ++a) {
    if (mask & (1u << idx[a])) fail(where, "repeated index");
    mask |= uint8_t(1u << idx[a]);
    for (size_t b = a + 1; b < idx.size(); ++b)
      if (idx[a] > idx[b]) sign = -sign;
  }
  return {mask, sign};
}

Json mask_indices(uint8_t mask) {
  Json a = Json::array();
  for (int i = 0; i < 8; ++i)
    if (mask & (1u << i)) a.push_back(i);
  return a;
}

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

Json to_json(const Scalar& s) {
  Json o = Json::object();
  for (const auto& [k, q] : s.terms()) o[std::to_string(k)] = rational_string(q);
  return o;
}

Scalar scalar_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return Scalar::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(where, e.what());
    }
  }
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (!j.is_object()) fail(where, "expected {pi_pow: rational}");
  Scalar s;
  for (const auto& [k, v] : j.items()) {
    int power = 0;
    try {
      size_t used = 0;
      power = std::stoi(k, &used);
      if (used != k.size()) throw std::invalid_argument(k);
    } catch (const std::exception&) {
      fail(where, "pi power '" + k + "' is not an integer");
    }
    if (!v.is_string()) fail(where + "/" + k, "expected a rational string");
    try {
      s.add_term(power, parse_rational(v.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      fail(where + "/" + k, e.what());
    }
  }
  return s;
}

Json to_json(const InvariantForm& w) {
  Json terms = Json::array();
  for (const auto& [key, p] : w.terms()) {
    Json poly = Json::array();
    for (const auto& [m, c] : p.terms()) {
      Json e = Json::array();
      for (int i = 0; i < w.dim(); ++i) e.push_back(m.exp(i));
      poly.push_back(Json{{"exp", e}, {"coeff", to_json(c)}});
    }
    terms.push_back(Json{{"dx", mask_indices(key.dx())}, {"dv", mask_indices(key.dv())}, {"poly", poly}});
  }
  return Json{{"dim", w.dim()}, {"terms", terms}};
}

InvariantForm form_from_json(const Json& j, const std::string& where) {
  const int dim = check_dim(int_field(j, "dim", where), where);
  const Json& terms = field(j, "terms", where);
  if (!terms.is_array()) fail(where + "/terms", "expected an array");
  InvariantForm::Terms raw;
  for (size_t t = 0; t < terms.size(); ++t) {
    const std::string at = where + "/terms/" + std::to_string(t);
    const auto [dx, sx] = index_mask(field(terms[t], "dx", at), dim, at + "/dx");
    const auto [dv, sv] = index_mask(field(terms[t], "dv", at), dim, at + "/dv");
    const Json& poly = field(terms[t], "poly", at);
    if (!poly.is_array()) fail(at + "/poly", "expected an array");
    Poly p;
    for (size_t m = 0; m < poly.size(); ++m) {
      const std::string pm = at + "/poly/" + std::to_string(m);
      const Json& e = field(poly[m], "exp", pm);
      if (!e.is_array() || int(e.size()) > dim) fail(pm + "/exp", "expected at most dim exponents");
      std::vector<int> exps(kMaxDim, 0);
      for (size_t i = 0; i < e.size(); ++i) {
        if (!e[i].is_number_integer() || e[i].get<int>() < 0 || e[i].get<int>() > 60)
          fail(pm + "/exp/" + std::to_string(i), "expected a small nonnegative integer");
        exps[i] = e[i].get<int>();
      }
      p.add_term(Monomial::from_exponents(exps), scalar_from_json(field(poly[m], "coeff", pm), pm + "/coeff"));
    }
    raw[FormKey::make(dx, dv)] += p * Scalar(sx * sv);
  }
  return InvariantForm::from_ambient(dim, raw);
}

Json to_json(const BaseForm& phi) {
  Json terms = Json::array();
  for (const auto& [mask, c] : phi.terms()) terms.push_back(Json{{"dx", mask_indices(mask)}, {"coeff", to_json(c)}});
  return Json{{"dim", phi.dim()}, {"terms", terms}};
}

BaseForm base_form_from_json(const Json& j, const std::string& where) {
  const int dim = check_dim(int_field(j, "dim", where), where);
  const Json& terms = field(j, "terms", where);
  if (!terms.is_array()) fail(where + "/terms", "expected an array");
  BaseForm phi(dim);
  for (size_t t = 0; t < terms.size(); ++t) {
    const std::string at = where + "/terms/" + std::to_string(t);
    const auto [dx, s] = index_mask(field(terms[t], "dx", at), dim, at + "/dx");
    phi.add_term(dx, scalar_from_json(field(terms[t], "coeff", at), at + "/coeff") * Scalar(s));
  }
  return phi;
}

Json to_json(const ValuationRep& mu) {
  return Json{{"dim", mu.dim()}, {"omega", to_json(mu.omega)}, {"phi", to_json(mu.phi)}};
}

ImDirection parse_direction(const std::string& text) {
  std::vector<Rational> c;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) c.push_back(parse_rational(part));
  if (c.size() != 3) throw std::invalid_argument("direction needs three components a,b,c");
  if (c[0] == 0 && c[1] == 0 && c[2] == 0) throw std::invalid_argument("direction must be nonzero");
  return ImDirection::along(c[0], c[1], c[2]);
}

ValuationRep valuation_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  if (j.contains("builtin")) {
    const Json& b = j["builtin"];
    if (!b.is_string()) fail(where + "/builtin", "expected a string");
    const std::string name = b.get<std::string>();
    if (name == "Z") {
      const Json& u = field(j, "u", where);
      if (!u.is_array() || u.size() != 3) fail(where + "/u", "expected three rational strings");
      std::string text;
      for (size_t i = 0; i < 3; ++i) {
        if (!u[i].is_string() && !u[i].is_number_integer()) fail(where + "/u/" + std::to_string(i), "expected a rational");
        text += (i ? "," : "") + (u[i].is_string() ? u[i].get<std::string>() : std::to_string(u[i].get<long>()));
      }
      try {
        return z_rep(parse_direction(text));
      } catch (const std::invalid_argument& e) {
        fail(where + "/u", e.what());
      }
    }
    const int dim = j.contains("dim") ? check_dim(int_field(j, "dim", where), where) : 4;
    if (name == "chi") return euler_characteristic_rep(dim);
    if (name == "vol") return volume_rep(dim);
    if (name == "intrinsic_volume") {
      const int k = int_field(j, "k", where);
      if (k < 0 || k > dim) fail(where + "/k", "degree out of range");
      return intrinsic_volume_rep(dim, k);
    }
    fail(where + "/builtin", "unknown builtin '" + name + "'");
  }
  InvariantForm omega = form_from_json(field(j, "omega", where), where + "/omega");
  BaseForm phi = j.contains("phi") ? base_form_from_json(j["phi"], where + "/phi") : BaseForm(omega.dim());
  if (phi.dim() != omega.dim()) fail(where + "/phi", "dimension differs from omega");
  if (omega.degree() != -1 && omega.degree() != omega.dim() - 1) fail(where + "/omega", "omega must be an (n-1)-form");
  for (const auto& [mask, c] : phi.terms())
    if (__builtin_popcount(mask) != phi.dim()) fail(where + "/phi", "phi must be an n-form");
  return ValuationRep(std::move(omega), std::move(phi));
}

Json to_json(const ConvexBody& K) {
  return std::visit(
      [](const auto& b) -> Json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return Json{{"type", "ball"}, {"center", vec_json(b.center)}, {"radius", b.radius}};
        } else if constexpr (std::is_same_v<T, Box>) {
          return Json{{"type", "box"},
                      {"center", vec_json(b.center)},
                      {"half_extents", vec_json(b.half_extents)},
                      {"rotation", vec_json(b.rotation)}};
        } else if constexpr (std::is_same_v<T, Simplex>) {
          Json v = Json::array();
          for (const auto& p : b.vertices) v.push_back(vec_json(p));
          return Json{{"type", "simplex"}, {"vertices", v}};
        } else {
          Json v = Json::array();
          for (const auto& p : b.vertices) v.push_back(Json::array({p[0], p[1]}));
          return Json{{"type", "polygon"},
                      {"frame", Json::array({vec_json(b.frame[0]), vec_json(b.frame[1])})},
                      {"vertices", v},
                      {"base", vec_json(b.base)}};
        }
      },
      K);
}

ConvexBody body_from_json(const Json& j, const std::string& where) {
  const Json& type = field(j, "type", where);
  if (!type.is_string()) fail(where + "/type", "expected a string");
  const std::string t = type.get<std::string>();
  ConvexBody K;
  if (t == "ball") {
    K = Ball{vec_from_json(field(j, "center", where), where + "/center"),
             number(field(j, "radius", where), where + "/radius")};
  } else if (t == "box") {
    Vec c = vec_from_json(field(j, "center", where), where + "/center");
    Vec h = vec_from_json(field(j, "half_extents", where), where + "/half_extents");
    if (j.contains("rotation"))
      K = make_box(std::move(c), std::move(h), vec_from_json(j["rotation"], where + "/rotation"));
    else
      K = make_box(std::move(c), std::move(h));
  } else if (t == "simplex") {
    const Json& v = field(j, "vertices", where);
    if (!v.is_array()) fail(where + "/vertices", "expected an array");
    Simplex s;
    for (size_t i = 0; i < v.size(); ++i) s.vertices.push_back(vec_from_json(v[i], where + "/vertices/" + std::to_string(i)));
    K = s;
  } else if (t == "polygon") {
    const Json& f = field(j, "frame", where);
    if (!f.is_array() || f.size() != 2) fail(where + "/frame", "expected two vectors");
    std::array<Vec, 2> frame{vec_from_json(f[0], where + "/frame/0"), vec_from_json(f[1], where + "/frame/1")};
    Vec base = j.contains("base") ? vec_from_json(j["base"], where + "/base") : Vec(frame[0].size(), 0.0);
    if (j.contains("regular")) {
      const int m = int_field(j, "regular", where);
      if (m < 3) fail(where + "/regular", "need at least 3 vertices");
      const double r = j.contains("radius") ? number(j["radius"], where + "/radius") : 1.0;
      K = regular_polygon(frame, m, r, base);
    } else {
      const Json& v = field(j, "vertices", where);
      if (!v.is_array()) fail(where + "/vertices", "expected an array");
      PlanarPolygon P{frame, {}, base};
      for (size_t i = 0; i < v.size(); ++i) {
        const Vec p = vec_from_json(v[i], where + "/vertices/" + std::to_string(i));
        if (p.size() != 2) fail(where + "/vertices/" + std::to_string(i), "expected plane coordinates [x, y]");
        P.vertices.push_back({p[0], p[1]});
      }
      K = P;
    }
  } else {
    fail(where + "/type", "unknown body type '" + t + "'");
  }
  if (std::holds_alternative<Box>(K)) {
    const auto& b = std::get<Box>(K);
    if (b.half_extents.size() != b.center.size()) fail(where + "/half_extents", "size differs from center");
    if (b.rotation.size() != b.center.size() * b.center.size()) fail(where + "/rotation", "expected n*n entries");
  }
  if (const auto* P = std::get_if<PlanarPolygon>(&K); P && P->base.size() != P->frame[0].size())
    fail(where + "/base", "dimension differs from frame");
  try {
    validate(K);
  } catch (const InvalidBody& e) {
    fail(where, e.what());
  }
  return K;
}

Json to_json(const RuminResult& r) {
  return Json{{"D_omega", to_json(r.D_omega)}, {"xi", to_json(r.xi)}, {"ansatz_degree", r.ansatz_degree}};
}

Json to_json(const MCReport& r) {
  return Json{{"estimate", r.estimate}, {"standard_error", r.standard_error}, {"samples", r.samples},
              {"seed", r.seed},         {"exact", r.exact},                   {"z_score", r.z_score},
              {"rejected", r.rejected}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

std::string format_double(double x) {
  char buf[64];
  const double a = std::abs(x);
  if (a == 0 || (a >= 1e-4 && a < 1e9))
    std::snprintf(buf, sizeof buf, "%.12f", x);
  else
    std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

}  // namespace valcalc
