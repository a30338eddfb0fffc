#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace qform {

using Int = boost::multiprecision::cpp_int;

inline Int abs_value(const Int& x) { return x < 0 ? Int(-x) : x; }

inline int sign(const Int& x) { return x < 0 ? -1 : (x > 0 ? 1 : 0); }

// Quotient rounded toward negative infinity.
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  Int r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

// Representative of a modulo |m| in [0, |m|).
inline Int mod_floor(const Int& a, const Int& m) {
  Int mm = abs_value(m);
  Int r = a % mm;
  if (r < 0) r += mm;
  return r;
}

inline Int gcd(const Int& a, const Int& b) {
  return boost::multiprecision::gcd(abs_value(a), abs_value(b));
}

struct ExtendedGcd {
  Int g;  // non-negative
  Int x;
  Int y;  // a*x + b*y == g
};

inline ExtendedGcd extended_gcd(const Int& a, const Int& b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

inline bool fits_int64(const Int& x) {
  return x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max();
}

inline std::int64_t to_int64(const Int& x) {
  if (!fits_int64(x)) throw std::overflow_error("integer does not fit in 64 bits: " + x.str());
  return x.convert_to<std::int64_t>();
}

}  // namespace qform
