#include "valcalc/scalar.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace valcalc {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (!s.empty() && s[0] == '+') s = s.substr(1);
  if (s.empty()) throw std::invalid_argument("empty rational");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-'))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string rational_string(const Rational& q) { return q.get_str(); }

Scalar::Scalar(long v) {
  if (v != 0) terms_.emplace(0, Rational(v));
}

Scalar::Scalar(const Rational& q) {
  if (q != 0) terms_.emplace(0, q).first->second.canonicalize();
}

Scalar::Scalar(const Rational& q, int pi_power) {
  if (q != 0) terms_.emplace(pi_power, q).first->second.canonicalize();
}

Rational Scalar::rational_part() const { return coeff(0); }

Rational Scalar::coeff(int pi_power) const {
  auto it = terms_.find(pi_power);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Scalar::add_term(int pi_power, const Rational& q) {
  if (q == 0) return;
  auto [it, inserted] = terms_.emplace(pi_power, q);
  if (inserted) it->second.canonicalize();
  if (!inserted) {
    it->second += q;
    if (it->second == 0) terms_.erase(it);
  }
}

Scalar& Scalar::operator+=(const Scalar& o) {
  for (const auto& [k, q] : o.terms_) add_term(k, q);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  for (const auto& [k, q] : o.terms_) add_term(k, -q);
  return *this;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar r;
  for (const auto& [ka, qa] : a.terms_)
    for (const auto& [kb, qb] : b.terms_) r.add_term(ka + kb, qa * qb);
  return r;
}

Scalar& Scalar::operator*=(const Scalar& o) { return *this = *this * o; }

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& [k, q] : r.terms_) q = -q;
  return r;
}

Scalar Scalar::inverse() const {
  if (!is_unit()) throw std::domain_error("Scalar " + to_string() + " is not a unit of Q[pi,1/pi]");
  const auto& [k, q] = *terms_.begin();
  return Scalar(Rational(1) / q, -k);
}

double Scalar::to_double() const {
  double sum = 0.0;
  for (const auto& [k, q] : terms_) sum += q.get_d() * std::pow(std::numbers::pi, k);
  return sum;
}

std::string Scalar::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, q] : terms_) {
    Rational mag = abs(q);
    if (first) {
      if (q < 0) os << "-";
    } else {
      os << (q < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0) {
      os << mag.get_str();
    } else {
      os << mag.get_str() << "*pi";
      if (k != 1) os << "^" << k;
    }
  }
  return os.str();
}

namespace {

Scalar parse_term(std::string_view term, bool negative, std::string_view whole) {
  auto fail = [&](const std::string& why) {
    return std::invalid_argument("malformed scalar '" + std::string(whole) + "': " + why);
  };
  std::string t(term);
  auto star = t.find('*');
  std::string num = t;
  int power = 0;
  if (star != std::string::npos) {
    num = t.substr(0, star);
    std::string rest = t.substr(star + 1);
    if (rest.rfind("pi", 0) != 0) throw fail("expected 'pi' after '*'");
    rest = rest.substr(2);
    if (rest.empty()) {
      power = 1;
    } else {
      if (rest[0] != '^') throw fail("expected '^' after 'pi'");
      try {
        size_t used = 0;
        power = std::stoi(rest.substr(1), &used);
        if (used != rest.size() - 1) throw fail("trailing characters in exponent");
      } catch (const std::logic_error&) {
        throw fail("bad exponent");
      }
    }
  } else if (t == "pi") {
    num = "1";
    power = 1;
  }
  Rational q;
  try {
    q = parse_rational(num);
  } catch (const std::invalid_argument&) {
    throw fail("bad coefficient '" + num + "'");
  }
  if (negative) q = -q;
  return Scalar(q, power);
}

}  // namespace

Scalar Scalar::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty scalar");
  Scalar result;
  size_t i = 0;
  while (i < s.size()) {
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
      negative = s[i] == '-';
      ++i;
    }
    size_t j = i;
    // A term ends at the next +/- that is not an exponent sign.
    while (j < s.size() && !((s[j] == '+' || s[j] == '-') && j > i && s[j - 1] != '^')) ++j;
    if (j == i) throw std::invalid_argument("malformed scalar '" + std::string(text) + "'");
    result += parse_term(std::string_view(s).substr(i, j - i), negative, text);
    i = j;
  }
  return result;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace valcalc
