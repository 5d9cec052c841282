#include <doctest.h>

#include <cmath>

#include "cbcount/errors.hpp"
#include "cbcount/localdata.hpp"
#include "support.hpp"

using namespace cbcount;

namespace {

Gram3 random_gram(long c, long scale_p = 1) {
  for (;;) {
    Gram3 g;
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        g[i][j] = cbtest::uniform(-c, c);
        // sprinkle extra factors of p to reach deeper Jordan blocks
        if (scale_p > 1 && cbtest::uniform(0, 2) == 0) g[i][j] *= scale_p;
        g[j][i] = g[i][j];
      }
    }
    if (determinant(g) != 0) return g;
  }
}

// Real density of diag(1, 1, -t) by polar integration on the nappe x2 > 0.
double polar_density(double t, const std::array<double, 3>& w) {
  const int N = 400000;
  double sum = 0;
  for (int k = 0; k < N; ++k) {
    const double phi = 2.0 * M_PI * (k + 0.5) / N;
    const double h = std::max({w[0] * std::fabs(std::cos(phi)), w[1] * std::fabs(std::sin(phi)), w[2] / std::sqrt(t)});
    sum += 1.0 / h;
  }
  return sum * (2.0 * M_PI / N) / (2.0 * std::sqrt(t));
}

}  // namespace

TEST_CASE("N(p^n) by lifting matches exhaustion") {
  for (int trial = 0; trial < 40; ++trial) {
    const Gram3 g = random_gram(10, 2);
    const TernaryForm f(g);
    for (auto [p, n] : {std::pair{2L, 1u}, {2L, 2u}, {2L, 3u}, {2L, 4u}, {2L, 5u}, {3L, 1u}, {3L, 2u}, {3L, 3u}, {5L, 2u}, {7L, 2u}}) {
      long m = 1;
      for (unsigned k = 0; k < n; ++k) m *= p;
      CHECK(count_mod_prime_power(f, Int(p), n) == cbtest::brute_count_mod(g, p, m));
    }
  }
}

TEST_CASE("N(8) = 64 for t = 1, 5 mod 8") {
  for (long t : {1L, 5L, 13L, 17L, 21L, 29L}) {
    const TernaryForm f = TernaryForm::diagonal(Int(1), Int(1), Int(-t));
    CHECK(count_mod_prime_power(f, Int(2), 3) == 64);
    CHECK(cbtest::brute_count_mod(f.gram(), 2, 8) == 64);
    CHECK(sigma_p(f, Int(2)) == 1);
  }
}

TEST_CASE("sigma_p closed values on x0^2 + x1^2 = t x2^2") {
  for (long t : {5L, 13L, 65L, 1105L}) {
    const TernaryForm f = TernaryForm::diagonal(Int(1), Int(1), Int(-t));
    for (long p : {5L, 13L, 17L}) {
      if (t % p != 0) continue;
      CHECK(sigma_p(f, Int(p)) == Rat(2 * (p - 1), p));
    }
    for (long p : {3L, 7L, 11L, 19L, 23L, 211L, 1009L}) {
      CHECK(sigma_p(f, Int(p)) == Rat(p * p - 1, p * p));
    }
  }
  // t = 3: no 3-adic points
  CHECK(sigma_p(TernaryForm::diagonal(Int(1), Int(1), Int(-3)), Int(3)) == 0);
}

TEST_CASE("lift and Jordan evaluations agree for odd primes") {
  for (long p : {3L, 5L, 7L, 11L}) {
    for (int trial = 0; trial < 60; ++trial) {
      const TernaryForm f(random_gram(30, p * (cbtest::uniform(0, 1) ? p : 1)));
      const SigmaP a = sigma_p_lift(f, Int(p));
      const SigmaP b = sigma_p_jordan(f, Int(p));
      CHECK(a.value == b.value);
      CHECK(a.method == "lift");
      CHECK(b.method == "jordan");
    }
  }
  CHECK_THROWS_AS(sigma_p_jordan(TernaryForm::diagonal(Int(1), Int(1), Int(-1)), Int(2)), InputError);
}

TEST_CASE("good primes have density 1 - 1/p^2") {
  for (int trial = 0; trial < 50; ++trial) {
    const TernaryForm f(random_gram(50));
    for (long p : {3L, 5L, 7L, 11L, 13L, 223L, 10007L}) {
      if (f.det() % p == 0) continue;
      CHECK(sigma_p(f, Int(p)) == Rat(p * p - 1, p * p));
    }
  }
}

TEST_CASE("Hensel stability of the point counts") {
  for (int trial = 0; trial < 20; ++trial) {
    const TernaryForm f(random_gram(20, 3));
    const SigmaP s = sigma_p_lift(f, Int(3));
    const Int a = count_mod_prime_power(f, Int(3), s.level + 1);
    const Int b = count_mod_prime_power(f, Int(3), s.level + 3);
    CHECK(b == 81 * a);
    Rat ratio(a, ipow(Int(3), 2 * (s.level + 1)));
    ratio.canonicalize();
    CHECK(ratio == s.value);
  }
}

TEST_CASE("local density vanishes exactly at non-soluble places") {
  for (int trial = 0; trial < 80; ++trial) {
    const TernaryForm f(random_gram(15));
    for (long p : {2L, 3L, 5L, 7L}) {
      CHECK((sigma_p(f, Int(p)) == 0) == !local_solubility(f, Place::prime(Int(p))));
    }
  }
}

TEST_CASE("sigma_inf = pi / t^(2 + alpha)") {
  const auto s = sum_of_two_squares_surface();
  const HeightModel m = HeightModel::for_surface(s, Rat(1));
  for (long t : {1L, 2L, 5L, 13L}) {
    const RealDensity rd = sigma_inf(s, m, ProjPoint::from_integers({1, t}), 1e-10);
    CHECK(std::fabs(rd.value / (M_PI / std::pow(t, 3.0)) - 1.0) < 1e-8);
  }
  // definite fibre
  CHECK(sigma_inf(s, m, ProjPoint::from_integers({1, -2})).value == 0.0);
}

TEST_CASE("real density against polar integration with kinked weights") {
  for (int trial = 0; trial < 6; ++trial) {
    const double t = static_cast<double>(cbtest::uniform(1, 30));
    const std::array<double, 3> w{0.5 + cbtest::uniform(0, 100) / 50.0, 0.5 + cbtest::uniform(0, 100) / 50.0,
                                  0.5 + cbtest::uniform(0, 100) / 50.0};
    const Gram3 g = TernaryForm::diagonal(Int(1), Int(1), Int(-static_cast<long>(t))).gram();
    const RealDensity rd = real_density(g, w, 1e-10);
    CHECK(std::fabs(rd.value / polar_density(t, w) - 1.0) < 1e-7);
  }
}

TEST_CASE("fibre report and Tamagawa number for t = 5") {
  const auto s = sum_of_two_squares_surface();
  const HeightModel m = HeightModel::for_surface(s, Rat(1));
  const FibreReport r = fibre_report(s, m, ProjPoint::from_integers({1, 5}));
  CHECK(r.soluble);
  CHECK(r.sigma_p.at(Int(5)) == Rat(8, 5));
  CHECK(r.sigma_p.at(Int(2)) == 1);
  // tau * 5^3 / pi = (8/5) prod_{p != 2, 5} (1 - p^-2) = (8/5) (6/pi^2) / ((3/4)(24/25))
  const double expected = M_PI / 125.0 * (8.0 / 5.0) * (6.0 / (M_PI * M_PI)) / (0.75 * 24.0 / 25.0);
  CHECK(std::fabs(r.tamagawa / expected - 1.0) < 1e-9);
  CHECK(r.peyre == doctest::Approx(kConicAlpha * r.tamagawa).epsilon(1e-15));
  const FibreReport r3 = fibre_report(s, m, ProjPoint::from_integers({1, 3}));
  CHECK_FALSE(r3.soluble);
  CHECK(r3.peyre == 0.0);
  CHECK_THROWS_AS(fibre_report(s, m, ProjPoint::from_integers({1, 0})), InputError);
}
