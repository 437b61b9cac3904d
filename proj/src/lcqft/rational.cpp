#include "lcqft/rational.hpp"

#include <cmath>

namespace lcqft {

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::string s = text;
  // mpq_class accepts "p/q" directly but aborts on malformed input, so vet it.
  size_t slash = s.find('/');
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!is_int(s)) return std::nullopt;
    Rational r(s);
    r.canonicalize();
    return r;
  }
  std::string num = s.substr(0, slash);
  std::string den = s.substr(slash + 1);
  if (!is_int(num) || !is_int(den)) return std::nullopt;
  if (mpz_class(den) == 0) return std::nullopt;
  Rational r(s);
  r.canonicalize();
  return r;
}

std::string to_string(const RC& c) {
  if (sgn(c.im) == 0) return to_string(c.re);
  if (sgn(c.re) == 0) return to_string(c.im) + "*i";
  return to_string(c.re) + (sgn(c.im) > 0 ? "+" : "") + to_string(c.im) + "*i";
}

double abs_double(const RC& c) {
  double x = to_double(c.re);
  double y = to_double(c.im);
  return std::sqrt(x * x + y * y);
}

}  // namespace lcqft
