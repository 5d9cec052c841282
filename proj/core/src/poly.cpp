#include "cbcount/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "cbcount/errors.hpp"

namespace cbcount {

MultiPoly MultiPoly::constant(unsigned nvars, const Int& c) {
  MultiPoly p(nvars);
  p.add_term(c, Exponents(nvars, 0));
  return p;
}

MultiPoly MultiPoly::variable(unsigned nvars, unsigned index) {
  Exponents e(nvars, 0);
  e.at(index) = 1;
  MultiPoly p(nvars);
  p.add_term(1, e);
  return p;
}

MultiPoly MultiPoly::monomial(const Int& coefficient, Exponents exps) {
  MultiPoly p(static_cast<unsigned>(exps.size()));
  p.add_term(coefficient, exps);
  return p;
}

std::optional<unsigned> MultiPoly::degree() const {
  if (terms_.empty()) return std::nullopt;
  const auto& e = terms_.begin()->first;
  return std::accumulate(e.begin(), e.end(), 0u);
}

bool MultiPoly::is_homogeneous() const {
  const auto d = degree();
  if (!d) return true;
  for (const auto& [e, c] : terms_) {
    if (std::accumulate(e.begin(), e.end(), 0u) != *d) return false;
  }
  return true;
}

void MultiPoly::add_term(const Int& c, const Exponents& exps) {
  if (exps.size() != nvars_) throw InputError("monomial has wrong number of variables");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Int MultiPoly::eval(std::span<const Int> point) const {
  if (point.size() != nvars_) throw InputError("evaluation point has wrong dimension");
  Int total = 0;
  for (const auto& [e, c] : terms_) {
    Int t = c;
    for (unsigned i = 0; i < nvars_; ++i) {
      if (e[i] != 0) t *= ipow(point[i], e[i]);
    }
    total += t;
  }
  return total;
}

MultiPoly MultiPoly::derivative(unsigned var) const {
  MultiPoly d(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents f = e;
    --f[var];
    d.add_term(c * e[var], f);
  }
  return d;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (o.nvars_ != nvars_) throw InputError("adding polynomials in different rings");
  for (const auto& [e, c] : o.terms_) add_term(c, e);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (o.nvars_ != nvars_) throw InputError("subtracting polynomials in different rings");
  for (const auto& [e, c] : o.terms_) add_term(-c, e);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Int& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars_ != b.nvars_) throw InputError("multiplying polynomials in different rings");
  MultiPoly r(a.nvars_);
  Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (unsigned i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(ca * cb, e);
    }
  }
  return r;
}

MultiPoly MultiPoly::pow(unsigned k) const {
  MultiPoly r = constant(nvars_, 1);
  MultiPoly base = *this;
  while (k != 0) {
    if ((k & 1u) != 0) r = r * base;
    k >>= 1;
    if (k != 0) base = base * base;
  }
  return r;
}

MultiPoly MultiPoly::compose(std::span<const MultiPoly> images) const {
  if (images.size() != nvars_) throw InputError("composition needs one image per variable");
  const unsigned target = images.empty() ? 0 : images[0].nvars();
  MultiPoly r(target);
  for (const auto& [e, c] : terms_) {
    MultiPoly t = constant(target, c);
    for (unsigned i = 0; i < nvars_; ++i) {
      if (e[i] != 0) t = t * images[i].pow(e[i]);
    }
    r += t;
  }
  return r;
}

std::string MultiPoly::to_string(char prefix) const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest exponent of the first variable first reads most naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const bool is_const = std::all_of(e.begin(), e.end(), [](unsigned k) { return k == 0; });
    Int mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    bool need_star = false;
    if (mag != 1 || is_const) {
      out += mag.get_str();
      need_star = true;
    }
    for (unsigned i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (need_star) out += "*";
      out += prefix;
      out += std::to_string(i);
      if (e[i] > 1) out += "^" + std::to_string(e[i]);
      need_star = true;
    }
  }
  return out;
}

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& text, unsigned nvars, char prefix)
      : s_(text), nvars_(nvars), prefix_(prefix) {}

  MultiPoly parse() {
    MultiPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("polynomial '" + s_ + "': " + msg + " at column " + std::to_string(pos_ + 1));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Int number() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
    if (start == pos_) fail("expected a number");
    return Int(s_.substr(start, pos_ - start));
  }

  MultiPoly expr() {
    skip();
    MultiPoly acc(nvars_);
    bool negate = false;
    if (eat('-')) {
      negate = true;
    } else {
      eat('+');
    }
    MultiPoly t = term();
    acc = negate ? -t : t;
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MultiPoly term() {
    MultiPoly acc = factor();
    for (;;) {
      skip();
      if (eat('*')) {
        acc = acc * factor();
      } else if (pos_ < s_.size() && (s_[pos_] == '(' || s_[pos_] == prefix_ ||
                                      std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0)) {
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  MultiPoly factor() {
    MultiPoly base = atom();
    if (eat('^')) {
      const Int k = number();
      if (k > 64) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(k.get_ui()));
    }
    return base;
  }

  MultiPoly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) return MultiPoly::constant(nvars_, number());
    if (c == prefix_) {
      ++pos_;
      const Int idx = number();
      if (idx >= nvars_) fail("variable index out of range");
      return MultiPoly::variable(nvars_, static_cast<unsigned>(idx.get_ui()));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string s_;
  unsigned nvars_;
  char prefix_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(const std::string& text, unsigned nvars, char prefix) {
  return PolyParser(text, nvars, prefix).parse();
}

void trim(UniPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

UniPoly derivative(const UniPoly& f) {
  UniPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<unsigned long>(i));
  trim(d);
  return d;
}

namespace {

UniPoly poly_rem(UniPoly a, const UniPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rat q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
    trim(a);
  }
  return a;
}

}  // namespace

UniPoly poly_gcd(UniPoly a, UniPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UniPoly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Rat lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

BinaryFormSquarefree squarefree_binary_form(const MultiPoly& f) {
  if (f.nvars() != 2) throw InputError("binary form expected");
  if (f.is_zero()) throw InputError("zero form has no squarefree decomposition");
  const unsigned D = *f.degree();
  UniPoly g(D + 1);
  for (const auto& [e, c] : f.terms()) g[e[1]] += Rat(c);
  trim(g);
  BinaryFormSquarefree out;
  out.degree_drop = D - static_cast<unsigned>(g.size() - 1);
  const UniPoly h = poly_gcd(g, derivative(g));
  out.affine_gcd_degree = h.empty() ? 0 : static_cast<unsigned>(h.size() - 1);
  out.squarefree = out.degree_drop <= 1 && out.affine_gcd_degree == 0;
  return out;
}

}  // namespace cbcount
