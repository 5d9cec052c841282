#pragma once

// Shared fixtures and brute-force oracles for the test programs.

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "cbcount/arith.hpp"
#include "cbcount/bundle.hpp"
#include "cbcount/poly.hpp"
#include "cbcount/projgeo.hpp"
#include "cbcount/ternary_form.hpp"

namespace cbtest {

using cbcount::Int;
using cbcount::Rat;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed2024ULL);
  return gen;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline cbcount::MultiPoly poly(const char* text, unsigned nvars = 2) { return cbcount::parse_poly(text, nvars, 'y'); }

/// f_ij given as strings in y0, y1.
inline cbcount::ConicBundleSurface surface(std::array<long, 3> a, long e, const std::array<std::array<const char*, 3>, 3>& g) {
  cbcount::ConicBundleSurface s;
  s.n = 1;
  s.a = a;
  s.e = e;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) s.gram[i][j] = poly(g[i][j]);
  }
  return s;
}

/// diag(y0, y1, y0^3 + y1^3) in F_1(0,0,1) with e = 1.
inline cbcount::ConicBundleSurface cubic_surface() {
  return surface({0, 0, 1}, 1, {{{"y0", "0", "0"}, {"0", "y1", "0"}, {"0", "0", "y0^3 + y1^3"}}});
}

/// A non-diagonal sample in F_1(0,0,0), e = 1.
inline cbcount::ConicBundleSurface mixed_surface() {
  return surface({0, 0, 0}, 1, {{{"y0", "y1", "0"}, {"y1", "2*y0 + y1", "y0"}, {"0", "y0", "3*y1 - y0"}}});
}

inline cbcount::ProjPoint random_base_point(long bound) {
  for (;;) {
    const long a = uniform(-bound, bound), b = uniform(-bound, bound);
    if (a == 0 && b == 0) continue;
    return cbcount::ProjPoint::from_integers({a, b});
  }
}

/// #{x mod m : x not all divisible by p, x^T G x = 0 mod m}, by exhaustion (m = p^n).
inline std::uint64_t brute_count_mod(const cbcount::Gram3& g, long p, long m) {
  long gm[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Int r;
      mpz_fdiv_r_ui(r.get_mpz_t(), g[i][j].get_mpz_t(), static_cast<unsigned long>(m));
      gm[i][j] = r.get_si();
    }
  }
  std::uint64_t count = 0;
  for (long a = 0; a < m; ++a) {
    for (long b = 0; b < m; ++b) {
      for (long c = 0; c < m; ++c) {
        if (a % p == 0 && b % p == 0 && c % p == 0) continue;
        const long x[3] = {a, b, c};
        long v = 0;
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) v = (v + gm[i][j] * x[i] % m * x[j]) % m;
        }
        if (v % m == 0) ++count;
      }
    }
  }
  return count;
}

/// Canonical zeros with |x_j| <= box[j] and x2 != 0, by exhaustion.
inline std::uint64_t brute_count_box(const cbcount::Gram3& g, const std::array<long, 3>& box) {
  std::uint64_t count = 0;
  for (long x0 = -box[0]; x0 <= box[0]; ++x0) {
    for (long x1 = -box[1]; x1 <= box[1]; ++x1) {
      for (long x2 = 1; x2 <= box[2]; ++x2) {  // x2 != 0 and the sign normalized on x2
        if (std::gcd(std::gcd(x0, x1), x2) != 1) continue;
        const cbcount::Vec3 x{Int(x0), Int(x1), Int(x2)};
        if (cbcount::evaluate(g, x) == 0) ++count;
      }
    }
  }
  return count;
}

}  // namespace cbtest
