#include "cbcount/heights.hpp"

#include <cmath>

#include "cbcount/errors.hpp"

namespace cbcount {

namespace {

/// x^k for integer k of either sign (x != 0 when k < 0).
Rat rpow(const Rat& x, long k) {
  if (k >= 0) {
    Rat r(ipow(x.get_num(), static_cast<unsigned long>(k)), ipow(x.get_den(), static_cast<unsigned long>(k)));
    r.canonicalize();
    return r;
  }
  return 1 / rpow(x, -k);
}

long to_long_checked(const Rat& r) {
  if (r.get_den() != 1 || !r.get_num().fits_slong_p()) throw InternalError("exponent is not a small integer");
  return r.get_num().get_si();
}

}  // namespace

Rat HeightModel::threshold(unsigned n, std::array<long, 3> a, long e) {
  if (n == 1) return Rat(a[0] + a[1] + e);
  Rat t(2 * (a[0] + a[1] + a[2]), 3);
  t.canonicalize();
  return t + e;
}

HeightModel HeightModel::make(unsigned n, std::array<long, 3> a, long e, const Rat& alpha) {
  HeightModel m;
  m.n_ = n;
  m.a_ = a;
  m.e_ = e;
  m.alpha_ = alpha;
  m.alpha_.canonicalize();
  const Rat thr = threshold(n, a, e);
  if (!(m.alpha_ > thr)) {
    throw InputError("alpha = " + to_string(m.alpha_) + " must exceed the threshold " + to_string(thr) +
                     (n == 1 ? " (a0 + a1 + e)" : " (e + 2(a0 + a1 + a2)/3)"));
  }
  m.A_ = Rat(static_cast<long>(n) + 1) + m.alpha_ - Rat(a[0] + a[1] + a[2] + e);
  if (!(m.A_ + a[2] > 0)) throw InputError("A + a2 must be positive, got " + to_string(m.A_ + a[2]));
  if (!m.alpha_.get_den().fits_ulong_p()) throw InputError("alpha denominator too large");
  m.q_ = m.alpha_.get_den().get_ui();
  return m;
}

long HeightModel::scaled_exponent(int j) const { return to_long_checked(exponent(j) * Rat(q_)); }
long HeightModel::scaled_A() const { return to_long_checked(A_ * Rat(q_)); }

std::optional<Rat> StandardHeight::exact() const {
  if (A.get_den() != 1) return std::nullopt;
  return rpow(Rat(base_height), A.get_num().get_si()) * max_term;
}

double StandardHeight::approx() const {
  if (max_term == 0) return 0.0;
  const double lh = std::log(base_height.get_d());
  const double lm = std::log(max_term.get_num().get_d()) - std::log(max_term.get_den().get_d());
  return std::exp(A.get_d() * lh + lm);
}

int StandardHeight::compare(const Rat& B) const {
  // H*^q = H^{qA} * M^q against B^q.
  const long qa = to_long_checked(A * Rat(q));
  const Rat lhs = rpow(Rat(base_height), qa) * rpow(max_term, static_cast<long>(q));
  const Rat rhs = rpow(B, static_cast<long>(q));
  return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
}

std::string StandardHeight::to_string() const {
  if (auto v = exact()) return cbcount::to_string(*v);
  return base_height.get_str() + "^(" + cbcount::to_string(A) + ")*" + cbcount::to_string(max_term);
}

StandardHeight standard_height(const HeightModel& model, const ProjPoint& y, const Vec3& x) {
  if (!is_canonical(x)) throw InputError("representation error: x must be primitive with first nonzero entry positive");
  if (y.dimension() != model.n()) throw InputError("representation error: base point has wrong dimension");
  StandardHeight h;
  h.base_height = height(y);
  h.A = model.A();
  h.q = model.q();
  Rat best = 0;
  for (int j = 0; j < 3; ++j) {
    const Rat term = rpow(Rat(h.base_height), model.weights()[j]) * Rat(abs(x[j]));
    if (term > best) best = term;
  }
  h.max_term = best;
  return h;
}

Box3 fibre_box(const HeightModel& model, const Int& base_height, const Rat& B) {
  Box3 out{0, 0, 0};
  if (B <= 0 || base_height < 1) return out;
  const unsigned long q = model.q();
  const Int bn = ipow(B.get_num(), q);
  const Int bd = ipow(B.get_den(), q);
  for (int j = 0; j < 3; ++j) {
    // b^q <= B^q / H^{q(A + a_j)}
    const long u = model.scaled_exponent(j);
    Int num = bn;
    Int den = bd;
    if (u >= 0) {
      den *= ipow(base_height, static_cast<unsigned long>(u));
    } else {
      num *= ipow(base_height, static_cast<unsigned long>(-u));
    }
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out[j] = iroot(fl, q);
  }
  if (out[2] == 0) return Box3{0, 0, 0};
  return out;
}

Int base_bound(const HeightModel& model, const Rat& B) {
  if (B < 1) return 0;
  const long u = model.scaled_exponent(2);  // q(A + a2) > 0
  Int fl;
  const Int bn = ipow(B.get_num(), model.q());
  const Int bd = ipow(B.get_den(), model.q());
  mpz_fdiv_q(fl.get_mpz_t(), bn.get_mpz_t(), bd.get_mpz_t());
  return iroot(fl, static_cast<unsigned long>(u));
}

}  // namespace cbcount
