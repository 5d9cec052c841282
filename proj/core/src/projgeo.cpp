#include "cbcount/projgeo.hpp"

#include <numeric>

#include "cbcount/errors.hpp"

namespace cbcount {

ProjPoint ProjPoint::canonicalize(std::span<const Rat> raw) {
  if (raw.empty()) throw InputError("projective point with no coordinates");
  Int den = 1;
  for (const auto& q : raw) den = lcm(den, Rat(q).get_den());
  std::vector<Int> v;
  v.reserve(raw.size());
  for (const auto& q : raw) {
    Rat s = q * den;
    s.canonicalize();
    v.push_back(s.get_num());
  }
  return from_integers(v);
}

ProjPoint ProjPoint::from_integers(std::span<const Int> raw) {
  if (raw.empty()) throw InputError("projective point with no coordinates");
  Int g = 0;
  for (const auto& c : raw) g = gcd(g, c);
  if (g == 0) throw InputError("the zero vector is not a projective point");
  std::vector<Int> v(raw.begin(), raw.end());
  for (auto& c : v) c /= g;
  for (const auto& c : v) {
    if (c != 0) {
      if (c < 0) {
        for (auto& d : v) d = -d;
      }
      break;
    }
  }
  return ProjPoint(std::move(v));
}

ProjPoint ProjPoint::from_integers(std::initializer_list<long> raw) {
  std::vector<Int> v;
  for (long c : raw) v.emplace_back(c);
  return from_integers(v);
}

std::string ProjPoint::key() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i != 0) out += ':';
    out += coords_[i].get_str();
  }
  return out;
}

std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b) {
  if (a.coords_.size() != b.coords_.size()) return a.coords_.size() <=> b.coords_.size();
  for (std::size_t i = 0; i < a.coords_.size(); ++i) {
    const int c = cmp(a.coords_[i], b.coords_[i]);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

bool is_canonical_vector(std::span<const Int> v) {
  Int g = 0;
  for (const auto& c : v) g = gcd(g, c);
  if (g != 1) return false;
  for (const auto& c : v) {
    if (c != 0) return c > 0;
  }
  return false;
}

Int height(const ProjPoint& y) {
  Int h = 0;
  for (const auto& c : y.coords()) {
    if (abs(c) > h) h = abs(c);
  }
  return h;
}

namespace {

struct ShellWalker {
  unsigned len;
  std::int64_t h;
  std::vector<std::int64_t> cur;
  std::vector<ProjPoint>* out;

  void walk(unsigned pos, bool leading_zero, bool reached, std::int64_t g) {
    if (pos == len) {
      if (reached && g == 1) {
        std::vector<Int> v(cur.begin(), cur.end());
        out->push_back(ProjPoint::from_integers(v));
      }
      return;
    }
    const bool last = pos + 1 == len;
    const std::int64_t lo = leading_zero ? 0 : -h;
    for (std::int64_t c = lo; c <= h; ++c) {
      const bool hits = c == h || c == -h;
      if (last && !reached && !hits) {
        // jump straight to the only admissible values
        if (c < h) {
          c = h - 1;
          continue;
        }
      }
      cur[pos] = c;
      walk(pos + 1, leading_zero && c == 0, reached || hits,
           std::gcd(g, c < 0 ? -c : c));
    }
  }
};

}  // namespace

std::vector<ProjPoint> enumerate_shell(unsigned n, std::uint64_t h) {
  std::vector<ProjPoint> out;
  if (h == 0) return out;
  ShellWalker w{n + 1, static_cast<std::int64_t>(h), std::vector<std::int64_t>(n + 1, 0), &out};
  w.walk(0, true, false, 0);
  return out;
}

void for_each_base_point(unsigned n, std::uint64_t T,
                         const std::function<void(const ProjPoint&)>& visit) {
  for (std::uint64_t h = 1; h <= T; ++h) {
    for (const auto& y : enumerate_shell(n, h)) visit(y);
  }
}

std::vector<ProjPoint> enumerate_base(unsigned n, std::uint64_t T) {
  std::vector<ProjPoint> out;
  for_each_base_point(n, T, [&](const ProjPoint& y) { out.push_back(y); });
  return out;
}

std::uint64_t count_p1_points(std::uint64_t T) {
  if (T == 0) return 0;
  std::vector<std::uint64_t> phi(T + 1);
  std::iota(phi.begin(), phi.end(), 0);
  for (std::uint64_t p = 2; p <= T; ++p) {
    if (phi[p] != p) continue;
    for (std::uint64_t k = p; k <= T; k += p) phi[k] -= phi[k] / p;
  }
  // (0:1), (1:0) and for each q >= 2 the 2*phi(q) points (a:q), (q:a) up to
  // sign with |a| < q, plus (1:1), (1:-1) for q = 1.
  std::uint64_t total = 4;
  for (std::uint64_t q = 2; q <= T; ++q) total += 4 * phi[q];
  return total;
}

}  // namespace cbcount
