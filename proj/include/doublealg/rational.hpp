#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace doublealg {

/// Exact rational scalar. GMP keeps the value reduced with a positive
/// denominator once canonicalized; every constructor path below does so.
using Rational = mpq_class;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw Error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses `p`, `-p` or `p/q`.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error("empty rational literal");
  Rational r;
  if (r.set_str(s, 10) != 0) throw Error("bad rational literal '" + s + "'");
  if (r.get_den() == 0) throw Error("rational with zero denominator");
  r.canonicalize();
  return r;
}

/// Prints `p` or `p/q` in lowest terms.
inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

}  // namespace doublealg
