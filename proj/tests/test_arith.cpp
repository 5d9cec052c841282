#include <doctest.h>

#include "cbcount/arith.hpp"
#include "cbcount/errors.hpp"
#include "cbcount/lattice.hpp"
#include "support.hpp"

using namespace cbcount;

namespace {

// Euler's criterion, computed without the library.
int euler_legendre(long a, long p) {
  long r = ((a % p) + p) % p;
  if (r == 0) return 0;
  long acc = 1, base = r, e = (p - 1) / 2;
  while (e > 0) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return acc == 1 ? 1 : -1;
}

// (a, b)_p for odd p from the unit/valuation formula.
int hilbert_odd_oracle(long a, long b, long p) {
  int alpha = 0, beta = 0;
  while (a % p == 0) {
    a /= p;
    ++alpha;
  }
  while (b % p == 0) {
    b /= p;
    ++beta;
  }
  const int eps = ((p - 1) / 2) % 2;
  int s = ((alpha * beta * eps) % 2) ? -1 : 1;
  if (beta % 2) s *= euler_legendre(a, p);
  if (alpha % 2) s *= euler_legendre(b, p);
  return s;
}

// (a, b)_2 by searching for a primitive solution of z^2 = a x^2 + b y^2 mod 2^k;
// for squarefree-ish small a, b a solution mod 2^6 with a unit coordinate lifts.
int hilbert_two_oracle(long a, long b) {
  const long m = 1L << 7;
  for (long x = 0; x < m; ++x) {
    for (long y = 0; y < m; ++y) {
      for (long z = 0; z < m; ++z) {
        if (x % 2 == 0 && y % 2 == 0 && z % 2 == 0) continue;
        const long v = ((a * x % m) * x + (b * y % m) * y - z * z) % m;
        if (v == 0) return 1;
      }
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("integer roots against exhaustive search") {
  for (long n = 0; n < 2000; ++n) {
    long r = 0;
    while ((r + 1) * (r + 1) <= n) ++r;
    CHECK(isqrt(Int(n)) == r);
    Int root;
    CHECK(is_square(Int(n), &root) == (r * r == n));
    long c = 0;
    while ((c + 1) * (c + 1) * (c + 1) <= n) ++c;
    CHECK(iroot(Int(n), 3) == c);
  }
  CHECK(iroot(Int(1000000), 3) == 100);
  CHECK(iroot(Int(999999), 3) == 99);
  CHECK(ipow(Int(3), 40) == Int("12157665459056928801"));
}

TEST_CASE("factorization multiplies back and divisors are complete") {
  for (long n = 1; n < 3000; ++n) {
    const Factorization f = factor(Int(n));
    Int prod = 1;
    for (const auto& pp : f) {
      CHECK(is_prime(pp.prime));
      prod *= ipow(pp.prime, pp.exponent);
    }
    CHECK(prod == n);
    const auto d = divisors(f);
    long brute = 0;
    for (long k = 1; k <= n; ++k) brute += (n % k == 0);
    CHECK(static_cast<long>(d.size()) == brute);
    CHECK(divisor_count(Int(n)) == brute);
    bool sqf = true;
    for (long k = 2; k * k <= n; ++k) sqf = sqf && (n % (k * k) != 0);
    CHECK(is_squarefree(Int(n)) == sqf);
  }
  CHECK(factor(Int(-12)).size() == 2);
  const Int big = Int("1000000007") * Int("998244353") * 4;
  const auto fb = factor(big);
  REQUIRE(fb.size() == 3);
  CHECK(fb[0].prime == 2);
  CHECK(fb[0].exponent == 2);
}

TEST_CASE("valuations") {
  CHECK(valuation(Int(48), Int(2)) == 4);
  CHECK(valuation(Int(-75), Int(5)) == 2);
  CHECK(valuation(Int(7), Int(3)) == 0);
}

TEST_CASE("Legendre symbol matches Euler's criterion") {
  for (long p : {3L, 5L, 7L, 11L, 13L, 101L, 211L}) {
    for (long a = -50; a <= 50; ++a) CHECK(legendre(Int(a), Int(p)) == euler_legendre(a, p));
  }
}

TEST_CASE("Hilbert symbols against independent oracles") {
  for (long p : {3L, 5L, 7L, 13L}) {
    for (long a = -12; a <= 12; ++a) {
      for (long b = -12; b <= 12; ++b) {
        if (a == 0 || b == 0) continue;
        CHECK(hilbert_symbol(Int(a), Int(b), Int(p)) == hilbert_odd_oracle(a, b, p));
      }
    }
  }
  for (long a : {-7L, -6L, -5L, -3L, -2L, -1L, 1L, 2L, 3L, 5L, 6L, 7L}) {
    for (long b : {-7L, -6L, -5L, -3L, -2L, -1L, 1L, 2L, 3L, 5L, 6L, 7L}) {
      CHECK(hilbert_symbol(Int(a), Int(b), Int(2)) == hilbert_two_oracle(a, b));
    }
  }
  CHECK(hilbert_symbol_real(Int(-1), Int(-1)) == -1);
  CHECK(hilbert_symbol_real(Int(-1), Int(3)) == 1);
}

TEST_CASE("Hilbert symbol is symmetric and bimultiplicative") {
  for (int trial = 0; trial < 300; ++trial) {
    long a = cbtest::uniform(-200, 200), b = cbtest::uniform(-200, 200), c = cbtest::uniform(-200, 200);
    if (a == 0 || b == 0 || c == 0) continue;
    for (long p : {2L, 3L, 5L, 7L}) {
      const Int P(p);
      CHECK(hilbert_symbol(Int(a), Int(b), P) == hilbert_symbol(Int(b), Int(a), P));
      CHECK(hilbert_symbol(Int(a * c), Int(b), P) == hilbert_symbol(Int(a), Int(b), P) * hilbert_symbol(Int(c), Int(b), P));
    }
  }
}

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/6") == Rat(1, 2));
  CHECK(parse_rational("-4") == Rat(-4));
  CHECK(to_string(Rat(6, 4)) == "3/2");
  CHECK(to_string(Rat(5)) == "5");
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("x"), InputError);
  CHECK(floor_rat(Rat(-7, 2)) == -4);
  CHECK(floor_rat(Rat(7, 2)) == 3);
}

TEST_CASE("unimodular completion") {
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Int> v(3);
    for (auto& c : v) c = cbtest::uniform(-30, 30);
    if (v[0] == 0 && v[1] == 0 && v[2] == 0) continue;
    const auto uc = unimodular_completion({v}, 3);
    CHECK(uc.rank == 1);
    // basis * inverse = I
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        Int s = 0;
        for (int k = 0; k < 3; ++k) s += uc.basis[i][k] * uc.inverse[k][j];
        CHECK(s == (i == j ? 1 : 0));
      }
    }
    // the first column is the primitive vector on the line through v
    Int g = gcd(gcd(v[0], v[1]), v[2]);
    for (int i = 0; i < 3; ++i) CHECK(abs(uc.basis[i][0]) == abs(v[i] / g));
  }
  Int x, y;
  CHECK(extended_gcd(Int(240), Int(46), x, y) == 2);
  CHECK(240 * x + 46 * y == 2);
}
