#pragma once

// Exact integer and rational helpers on top of GMP.

#include <gmpxx.h>

#include <string>
#include <vector>

namespace cbcount {

using Int = mpz_class;
using Rat = mpq_class;

struct PrimePower {
  Int prime;
  unsigned exponent = 0;
};

/// Prime factorization sorted by increasing prime.
using Factorization = std::vector<PrimePower>;

/// floor(sqrt(n)) for n >= 0.
Int isqrt(const Int& n);

/// True iff n >= 0 is a perfect square; stores the root when requested.
bool is_square(const Int& n, Int* root = nullptr);

/// floor(n^(1/k)) for n >= 0, k >= 1.
Int iroot(const Int& n, unsigned long k);

Int ipow(const Int& base, unsigned long e);

/// p-adic valuation of a nonzero integer.
unsigned valuation(const Int& n, const Int& p);

bool is_prime(const Int& n);

/// Factorization of |n|; n must be nonzero. factor(1) is empty.
Factorization factor(const Int& n);

/// All positive divisors, ascending.
std::vector<Int> divisors(const Factorization& f);

/// Number of positive divisors of |n|.
Int divisor_count(const Int& n);

bool is_squarefree(const Int& n);

/// Legendre symbol (a/p) for an odd prime p.
int legendre(const Int& a, const Int& p);

/// Hilbert symbol (a, b)_p for a prime p; a, b nonzero.
int hilbert_symbol(const Int& a, const Int& b, const Int& p);

/// Hilbert symbol at the real place.
int hilbert_symbol_real(const Int& a, const Int& b);

Int floor_rat(const Rat& q);

/// Parses "p", "-p", "p/q" exactly; throws InputError otherwise.
Rat parse_rational(const std::string& text);

/// Canonical decimal form: "p" or "p/q".
std::string to_string(const Rat& q);
std::string to_string(const Int& n);

/// Approximate conversion labelled as such at call sites.
double to_double(const Rat& q);

}  // namespace cbcount
