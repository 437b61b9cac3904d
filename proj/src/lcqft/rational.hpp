#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace lcqft {

// Exact rational scalar. All algebraic checks in the library are performed in
// this type; doubles appear only in the optional float performance mode and
// in report fields.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

inline double to_double(const Rational& r) { return r.get_d(); }

std::string to_string(const Rational& r);

// Accepts "p", "p/q" and plain JSON integers routed through strings.
std::optional<Rational> parse_rational(const std::string& text);

// Complex number with exact rational components. The observable algebra
// needs i for the canonical commutation rule.
struct RC {
  Rational re;
  Rational im;

  RC() : re(0), im(0) {}
  RC(Rational r) : re(std::move(r)), im(0) {}
  RC(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  static RC i_times(const Rational& r) { return RC(Rational(0), r); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  RC conj() const { return RC(re, -im); }

  RC operator+(const RC& o) const { return RC(re + o.re, im + o.im); }
  RC operator-(const RC& o) const { return RC(re - o.re, im - o.im); }
  RC operator-() const { return RC(-re, -im); }
  RC operator*(const RC& o) const {
    return RC(re * o.re - im * o.im, re * o.im + im * o.re);
  }
  RC& operator+=(const RC& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  RC& operator*=(const RC& o) {
    *this = *this * o;
    return *this;
  }
  bool operator==(const RC& o) const { return re == o.re && im == o.im; }
};

std::string to_string(const RC& c);

double abs_double(const RC& c);

}  // namespace lcqft
