#include "cbcount/quadrature.hpp"

#include <cmath>
#include <vector>

#include "cbcount/errors.hpp"

namespace cbcount {

namespace {

struct Panel {
  double a, b, fa, fm, fb, whole;
  int depth;
};

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, int panels,
                           long max_evaluations) {
  QuadratureResult res;
  if (panels < 1) panels = 1;
  auto eval = [&](double x) {
    ++res.evaluations;
    return f(x);
  };

  std::vector<Panel> work;
  const double h = (b - a) / panels;
  double coarse = 0;
  double prev_f = eval(a);
  for (int i = 0; i < panels; ++i) {
    const double pa = a + h * i;
    const double pb = (i + 1 == panels) ? b : a + h * (i + 1);
    const double pm = 0.5 * (pa + pb);
    const double fm = eval(pm);
    const double fb = eval(pb);
    const double s = simpson(pa, pb, prev_f, fm, fb);
    work.push_back({pa, pb, prev_f, fm, fb, s, 0});
    coarse += s;
    prev_f = fb;
  }
  if (coarse == 0.0) {
    // the integrand vanished on every node; treat as an absolute tolerance
    coarse = 1.0;
  }
  const double abs_tol = rel_tol * std::fabs(coarse);
  const double total_len = b - a;

  double sum = 0, err = 0;
  bool failed = false;
  while (!work.empty()) {
    const Panel p = work.back();
    work.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
    const double flm = eval(lm), frm = eval(rm);
    const double left = simpson(p.a, m, p.fa, flm, p.fm);
    const double right = simpson(m, p.b, p.fm, frm, p.fb);
    const double refined = left + right;
    const double delta = refined - p.whole;
    const double local_tol = abs_tol * (p.b - p.a) / total_len;
    if (std::fabs(delta) <= 15.0 * local_tol || p.depth >= 48 || res.evaluations > max_evaluations) {
      if (std::fabs(delta) > 15.0 * local_tol) failed = true;
      sum += refined + delta / 15.0;
      err += std::fabs(delta) / 15.0;
      continue;
    }
    work.push_back({p.a, m, p.fa, flm, p.fm, left, p.depth + 1});
    work.push_back({m, p.b, p.fm, frm, p.fb, right, p.depth + 1});
  }
  res.value = sum;
  res.error = err;
  if (failed && err > rel_tol * std::fabs(sum)) {
    throw ToleranceError("quadrature did not reach the requested tolerance", sum,
                         sum != 0.0 ? err / std::fabs(sum) : err);
  }
  return res;
}

}  // namespace cbcount
