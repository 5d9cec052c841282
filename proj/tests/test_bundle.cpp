#include <doctest.h>

#include "cbcount/bundle.hpp"
#include "cbcount/errors.hpp"
#include "support.hpp"

using namespace cbcount;

namespace {

bool has_check(const ValidationReport& r, const std::string& name, CheckStatus st) {
  for (const auto& c : r.checks) {
    if (c.name == name && c.status == st) return true;
  }
  return false;
}

// Cofactor expansion along the first row, evaluated numerically at y.
Int det_at(const ConicBundleSurface& s, const std::vector<Int>& y) {
  Int m[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = s.gram[i][j].eval(y);
  }
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

TEST_CASE("the sum-of-two-squares surface validates") {
  const auto s = sum_of_two_squares_surface();
  const auto r = validate(s);
  CHECK(r.ok());
  CHECK(has_check(r, "discriminant squarefree", CheckStatus::pass));
  CHECK(discriminant(s) == cbtest::poly("-y0*y1"));
  CHECK(s.discriminant_degree() == 2);
}

TEST_CASE("sample surfaces validate") {
  CHECK(validate(cbtest::cubic_surface()).ok());
  CHECK(validate(cbtest::mixed_surface()).ok());
}

TEST_CASE("wrong entry degree is reported with the entry and expected degree") {
  auto s = sum_of_two_squares_surface();
  s.gram[2][2] = cbtest::poly("-y0*y1^2");
  const auto r = validate(s);
  CHECK_FALSE(r.ok());
  const std::string msg = r.first_failure();
  CHECK(msg.find("f22") != std::string::npos);
  CHECK(msg.find("2") != std::string::npos);
  CHECK_THROWS_AS(require_valid(s), InputError);
}

TEST_CASE("asymmetric and degenerate surfaces are rejected") {
  auto s = sum_of_two_squares_surface();
  s.gram[0][1] = cbtest::poly("0");
  s.gram[1][0] = cbtest::poly("1");
  CHECK_FALSE(validate(s).ok());
  auto d = sum_of_two_squares_surface();
  d.gram[2][2] = cbtest::poly("-y0*y0");
  CHECK(has_check(validate(d), "discriminant squarefree", CheckStatus::fail));
}

TEST_CASE("discriminant matches cofactor expansion at random points") {
  for (const auto& s : {sum_of_two_squares_surface(), cbtest::cubic_surface(), cbtest::mixed_surface()}) {
    const MultiPoly disc = discriminant(s);
    CHECK(disc.is_homogeneous());
    CHECK(disc.degree() == static_cast<unsigned>(s.discriminant_degree()));
    for (int trial = 0; trial < 100; ++trial) {
      const std::vector<Int> y{Int(cbtest::uniform(-50, 50)), Int(cbtest::uniform(-50, 50))};
      CHECK(disc.eval(y) == det_at(s, y));
    }
  }
}

TEST_CASE("Delta0^3 divides Delta^2 on random fibres") {
  for (const auto& s : {sum_of_two_squares_surface(), cbtest::cubic_surface(), cbtest::mixed_surface()}) {
    for (int trial = 0; trial < 300; ++trial) {
      const FibreClass fc = fibre_class(s, cbtest::random_base_point(500));
      if (fc.singular()) continue;
      const Int d0 = fc.minors_gcd;
      REQUIRE(d0 != 0);
      CHECK(fc.disc * fc.disc % (d0 * d0 * d0) == 0);
      CHECK(fc.disc == determinant(fc.form));
    }
  }
}

TEST_CASE("fibre classification on the sum-of-two-squares surface") {
  const auto s = sum_of_two_squares_surface();
  CHECK(fibre_class(s, ProjPoint::from_integers({0, 1})).singular());
  CHECK(fibre_class(s, ProjPoint::from_integers({1, 0})).singular());
  const auto fc = fibre_class(s, ProjPoint::from_integers({1, 5}));
  CHECK(fc.disc == -5);
  CHECK(fc.minors_gcd == 1);
  CHECK(fc.form[2][2] == -5);
}

TEST_CASE("cubic surface with a line imports to the expected bundle") {
  const MultiPoly cubic = parse_poly("z0^2*z2 + z1^2*z3 + z2^3 + z3^3", 4, 'z');
  const auto s = import_cubic_with_line(cubic, ProjPoint::from_integers({1, 0, 0, 0}), ProjPoint::from_integers({0, 1, 0, 0}));
  CHECK(s.n == 1);
  CHECK(s.a == std::array<long, 3>{0, 0, 1});
  CHECK(s.e == 1);
  CHECK(s.gram[0][0] == cbtest::poly("y0"));
  CHECK(s.gram[1][1] == cbtest::poly("y1"));
  CHECK(s.gram[2][2] == cbtest::poly("y0^3 + y1^3"));
  CHECK(s.gram[0][1].is_zero());
  CHECK(s.gram[0][2].is_zero());
  CHECK(s.gram[1][2].is_zero());
  const auto r = validate(s);
  CHECK(r.ok());
  CHECK(discriminant(s) == cbtest::poly("y0*y1*(y0^3 + y1^3)"));
  CHECK(discriminant(s).degree() == 5u);
}

TEST_CASE("cubic import: strict transform oracle on a mixed cubic") {
  // substitute z = (x0, x1, y0 x2, y1 x2) into the cubic and divide by x2
  const MultiPoly cubic = parse_poly("z0^2*z2 + z0*z1*z3 + 3*z1^2*z2 - z2^2*z3 + z3^3 + z0*z2*z3", 4, 'z');
  const auto s = import_cubic_with_line(cubic, ProjPoint::from_integers({1, 0, 0, 0}), ProjPoint::from_integers({0, 1, 0, 0}));
  // x^T G x must reproduce the strict transform (up to the documented global factor)
  for (int trial = 0; trial < 50; ++trial) {
    const long y0 = cbtest::uniform(-9, 9), y1 = cbtest::uniform(-9, 9);
    const long x0 = cbtest::uniform(-9, 9), x1 = cbtest::uniform(-9, 9), x2 = cbtest::uniform(1, 9);
    const std::vector<Int> z{Int(x0), Int(x1), Int(y0 * x2), Int(y1 * x2)};
    const Int lhs = cubic.eval(z);
    const std::vector<Int> y{Int(y0), Int(y1)};
    Int q = 0;
    const long x[3] = {x0, x1, x2};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) q += s.gram[i][j].eval(y) * x[i] * x[j];
    }
    // odd cross coefficients force the doubled Gram matrix
    CHECK(q * x2 == 2 * lhs);
  }
}

TEST_CASE("cubic import errors") {
  const MultiPoly cubic = parse_poly("z0^2*z2 + z1^2*z3 + z2^3 + z3^3", 4, 'z');
  CHECK_THROWS_AS(import_cubic_with_line(cubic, ProjPoint::from_integers({1, 0, 0, 0}), ProjPoint::from_integers({2, 0, 0, 0})),
                  InputError);
  CHECK_THROWS_AS(import_cubic_with_line(cubic, ProjPoint::from_integers({0, 0, 1, 0}), ProjPoint::from_integers({0, 0, 0, 1})),
                  InputError);
}
