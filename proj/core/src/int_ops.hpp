#pragma once

// Uniform integer helpers so the counting kernels can run on int64,
// __int128 or GMP integers with identical code.

#include <cmath>
#include <cstdint>

#include "cbcount/arith.hpp"

namespace cbcount::detail {

using i128 = __int128;

template <class T>
T from_int(const Int& v);

template <>
inline long long from_int<long long>(const Int& v) {
  return v.get_si();
}

template <>
inline i128 from_int<i128>(const Int& v) {
  const Int a = abs(v);
  const Int hi = a >> 64;
  const Int lo = a - (hi << 64);
  unsigned long long l = 0, h = 0;
  mpz_export(&l, nullptr, -1, sizeof(l), 0, 0, lo.get_mpz_t());
  mpz_export(&h, nullptr, -1, sizeof(h), 0, 0, hi.get_mpz_t());
  const i128 r = static_cast<i128>((static_cast<unsigned __int128>(h) << 64) | l);
  return v < 0 ? -r : r;
}

template <>
inline Int from_int<Int>(const Int& v) {
  return v;
}

inline Int to_int(long long v) { return Int(static_cast<long>(v)); }
inline Int to_int(const Int& v) { return v; }
inline Int to_int(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  const unsigned long long lo = static_cast<unsigned long long>(u);
  const unsigned long long hi = static_cast<unsigned long long>(u >> 64);
  Int r = Int(static_cast<unsigned long>(hi));
  r <<= 64;
  r += Int(static_cast<unsigned long>(lo));
  return neg ? Int(-r) : r;
}

template <class T>
inline T tabs(const T& v) {
  return v < 0 ? T(-v) : v;
}
inline Int tabs(const Int& v) { return abs(v); }

inline long long tgcd(long long a, long long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const long long r = a % b;
    a = b;
    b = r;
  }
  return a;
}

inline i128 tgcd(i128 a, i128 b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const i128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

inline Int tgcd(const Int& a, const Int& b) { return gcd(a, b); }

/// True iff n >= 0 is a perfect square; root in r.
inline bool tsquare(long long n, long long& r) {
  if (n < 0) return false;
  long long s = static_cast<long long>(std::sqrt(static_cast<long double>(n)));
  while (s > 0 && s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  r = s;
  return s * s == n;
}

inline bool tsquare(i128 n, i128& r) {
  if (n < 0) return false;
  i128 s = static_cast<i128>(std::sqrt(static_cast<long double>(n)));
  while (s > 0 && s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  r = s;
  return s * s == n;
}

inline bool tsquare(const Int& n, Int& r) {
  if (n < 0) return false;
  return is_square(n, &r);
}

/// Largest |value| the type may hold safely in the kernels.
template <class T>
inline bool fits(const Int& bound);

template <>
inline bool fits<long long>(const Int& bound) {
  static const Int lim = Int(1) << 62;
  return bound < lim;
}

template <>
inline bool fits<i128>(const Int& bound) {
  static const Int lim = Int(1) << 125;
  return bound < lim;
}

template <>
inline bool fits<Int>(const Int&) {
  return true;
}

}  // namespace cbcount::detail
