#include "cbcount/arith.hpp"

#include <algorithm>
#include <cctype>

#include "cbcount/errors.hpp"

namespace cbcount {

Int isqrt(const Int& n) {
  if (n < 0) throw InputError("isqrt of negative integer");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Int& n, Int* root) {
  if (n < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  if (root != nullptr) mpz_sqrt(root->get_mpz_t(), n.get_mpz_t());
  return true;
}

Int iroot(const Int& n, unsigned long k) {
  if (n < 0) throw InputError("iroot of negative integer");
  if (k == 0) throw InputError("iroot with k = 0");
  Int r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

Int ipow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

unsigned valuation(const Int& n, const Int& p) {
  if (n == 0) throw InputError("valuation of zero");
  Int m = abs(n);
  unsigned v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t()) != 0) {
    m /= p;
    ++v;
  }
  return v;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

namespace {

// Brent's variant of Pollard rho; n composite, odd, not a perfect power of a small prime.
Int pollard_brent(const Int& n) {
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, q = 1, g = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto step = [&](const Int& v) {
      Int w = v * v + c;
      mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
      return w;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = step(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          Int d = abs(x - y);
          q = (q * d) % n;
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const Int& n, std::vector<Int>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  Int root;
  if (is_square(n, &root)) {
    factor_into(root, primes);
    factor_into(root, primes);
    return;
  }
  Int d = pollard_brent(n);
  factor_into(d, primes);
  factor_into(n / d, primes);
}

}  // namespace

Factorization factor(const Int& n) {
  if (n == 0) throw InputError("cannot factor zero");
  Int m = abs(n);
  std::vector<Int> primes;
  for (unsigned long p = 2; p < 4096 && m > 1; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
      primes.emplace_back(p);
      m /= p;
    }
    if (Int(p) * p > m) break;
  }
  if (m > 1) factor_into(m, primes);
  std::sort(primes.begin(), primes.end());
  Factorization out;
  for (const auto& p : primes) {
    if (!out.empty() && out.back().prime == p) {
      ++out.back().exponent;
    } else {
      out.push_back({p, 1});
    }
  }
  return out;
}

std::vector<Int> divisors(const Factorization& f) {
  std::vector<Int> out{Int(1)};
  for (const auto& [p, e] : f) {
    const std::size_t base = out.size();
    Int pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Int divisor_count(const Int& n) {
  Int c = 1;
  for (const auto& pp : factor(n)) c *= pp.exponent + 1;
  return c;
}

bool is_squarefree(const Int& n) {
  if (n == 0) return false;
  for (const auto& pp : factor(n)) {
    if (pp.exponent > 1) return false;
  }
  return true;
}

int legendre(const Int& a, const Int& p) {
  Int r = a % p;
  if (r < 0) r += p;
  return mpz_legendre(r.get_mpz_t(), p.get_mpz_t());
}

namespace {

int mod8(const Int& u) {
  Int r = u % 8;
  if (r < 0) r += 8;
  return static_cast<int>(r.get_si());
}

}  // namespace

int hilbert_symbol(const Int& a, const Int& b, const Int& p) {
  if (a == 0 || b == 0) throw InputError("Hilbert symbol of zero");
  const unsigned alpha = valuation(a, p);
  const unsigned beta = valuation(b, p);
  Int u = a, v = b;
  for (unsigned i = 0; i < alpha; ++i) u /= p;
  for (unsigned i = 0; i < beta; ++i) v /= p;
  if (p == 2) {
    const int u8 = mod8(u), v8 = mod8(v);
    const int eps_u = ((u8 - 1) / 2) & 1, eps_v = ((v8 - 1) / 2) & 1;
    const int om_u = ((u8 * u8 - 1) / 8) & 1, om_v = ((v8 * v8 - 1) / 8) & 1;
    const int e = eps_u * eps_v + static_cast<int>(alpha) * om_v + static_cast<int>(beta) * om_u;
    return (e & 1) != 0 ? -1 : 1;
  }
  int s = 1;
  const Int half = (p - 1) / 2;
  if ((alpha & 1) != 0 && (beta & 1) != 0 && (half % 2) != 0) s = -s;
  if ((beta & 1) != 0) s *= legendre(u, p);
  if ((alpha & 1) != 0) s *= legendre(v, p);
  return s;
}

int hilbert_symbol_real(const Int& a, const Int& b) { return (a < 0 && b < 0) ? -1 : 1; }

Int floor_rat(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rat parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) == 0) s.push_back(c);
  }
  const auto slash = s.find('/');
  auto parse_int = [&](const std::string& part) {
    std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i == part.size()) throw InputError("not an exact rational: '" + text + "'");
    for (std::size_t j = i; j < part.size(); ++j) {
      if (std::isdigit(static_cast<unsigned char>(part[j])) == 0) {
        throw InputError("not an exact rational: '" + text + "'");
      }
    }
    return Int(part[0] == '+' ? part.substr(1) : part);
  };
  if (slash == std::string::npos) return Rat(parse_int(s));
  const Int num = parse_int(s.substr(0, slash));
  const Int den = parse_int(s.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator in '" + text + "'");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rat& q) {
  Rat c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const Int& n) { return n.get_str(); }

double to_double(const Rat& q) { return q.get_d(); }

}  // namespace cbcount
