#include <doctest.h>

#include "cbcount/errors.hpp"
#include "cbcount/poly.hpp"
#include "support.hpp"

using namespace cbcount;

TEST_CASE("parse and evaluate") {
  const MultiPoly f = parse_poly("y0^3 + 2*y0*y1 - (y0 - y1)^2", 2, 'y');
  CHECK(f.nvars() == 2);
  for (long a = -5; a <= 5; ++a) {
    for (long b = -5; b <= 5; ++b) {
      const std::vector<Int> pt{Int(a), Int(b)};
      CHECK(f.eval(pt) == a * a * a + 2 * a * b - (a - b) * (a - b));
    }
  }
  CHECK_FALSE(f.is_homogeneous());
  CHECK(parse_poly("y0*y1 - 3*y1^2", 2, 'y').is_homogeneous());
  CHECK(parse_poly("y0*y1 - 3*y1^2", 2, 'y').degree() == 2u);
  CHECK_THROWS_AS(parse_poly("y0 + y7", 2, 'y'), InputError);
  CHECK_THROWS_AS(parse_poly("y0 + * y1", 2, 'y'), InputError);
}

TEST_CASE("printing round-trips through the parser") {
  for (int trial = 0; trial < 100; ++trial) {
    MultiPoly f(3);
    for (int k = 0; k < 4; ++k) {
      f.add_term(Int(cbtest::uniform(-9, 9)), Exponents{static_cast<unsigned>(cbtest::uniform(0, 3)),
                                                        static_cast<unsigned>(cbtest::uniform(0, 3)),
                                                        static_cast<unsigned>(cbtest::uniform(0, 3))});
    }
    CHECK(parse_poly(f.to_string('z'), 3, 'z') == f);
  }
}

TEST_CASE("ring identities and derivatives") {
  const MultiPoly a = parse_poly("y0^2 - y1", 2, 'y');
  const MultiPoly b = parse_poly("3*y0 + y1^2", 2, 'y');
  CHECK(a * b == b * a);
  CHECK((a + b) * (a + b) == a * a + a * b * Int(2) + b * b);
  CHECK(a.pow(3) == a * a * a);
  CHECK(a.derivative(0) == parse_poly("2*y0", 2, 'y'));
  const MultiPoly images[2] = {parse_poly("y0 + y1", 2, 'y'), parse_poly("y1", 2, 'y')};
  CHECK(a.compose(images) == parse_poly("(y0 + y1)^2 - y1", 2, 'y'));
}

TEST_CASE("squarefree test for binary forms") {
  CHECK(squarefree_binary_form(parse_poly("y0*y1*(y0^3 + y1^3)", 2, 'y')).squarefree);
  CHECK_FALSE(squarefree_binary_form(parse_poly("y0^2*y1", 2, 'y')).squarefree);
  CHECK_FALSE(squarefree_binary_form(parse_poly("(y0 - y1)^2*(y0 + 2*y1)", 2, 'y')).squarefree);
  CHECK(squarefree_binary_form(parse_poly("y0^2 + y1^2", 2, 'y')).squarefree);
}
