#include "cbcount/lattice.hpp"

#include "cbcount/errors.hpp"

namespace cbcount {

IntMatrix identity_matrix(std::size_t dim) {
  IntMatrix m(dim, std::vector<Int>(dim, 0));
  for (std::size_t i = 0; i < dim; ++i) m[i][i] = 1;
  return m;
}

Int extended_gcd(const Int& a, const Int& b, Int& x, Int& y) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

UnimodularCompletion unimodular_completion(const std::vector<std::vector<Int>>& vectors, std::size_t dim) {
  if (vectors.size() > dim) throw InputError("more vectors than the ambient dimension");
  // A holds the vectors as columns; we apply unimodular row operations U
  // (tracked in V = U, and V^{-1} via the inverse column operations) until A
  // is upper triangular. Then vectors = V^{-1} A, so the leading columns of
  // V^{-1} span the saturated lattice.
  const std::size_t k = vectors.size();
  IntMatrix a(dim, std::vector<Int>(k, 0));
  for (std::size_t c = 0; c < k; ++c) {
    if (vectors[c].size() != dim) throw InputError("vector of wrong length");
    for (std::size_t r = 0; r < dim; ++r) a[r][c] = vectors[c][r];
  }
  IntMatrix v = identity_matrix(dim);
  IntMatrix vinv = identity_matrix(dim);

  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < k && pivot_row < dim; ++c) {
    for (std::size_t r = pivot_row + 1; r < dim; ++r) {
      if (a[r][c] == 0) continue;
      Int s, t;
      const Int g = extended_gcd(a[pivot_row][c], a[r][c], s, t);
      const Int ap = a[pivot_row][c] / g;
      const Int bp = a[r][c] / g;
      // rows (p, r) <- [[s, t], [-bp, ap]] * rows (p, r); det = 1
      auto mix_rows = [&](IntMatrix& m) {
        for (std::size_t j = 0; j < m[0].size(); ++j) {
          const Int x = m[pivot_row][j];
          const Int y = m[r][j];
          m[pivot_row][j] = s * x + t * y;
          m[r][j] = ap * y - bp * x;
        }
      };
      mix_rows(a);
      mix_rows(v);
      // inverse acts on columns: cols (p, r) <- cols (p, r) * [[ap, -t], [bp, s]]
      for (std::size_t i = 0; i < dim; ++i) {
        const Int x = vinv[i][pivot_row];
        const Int y = vinv[i][r];
        vinv[i][pivot_row] = ap * x + bp * y;
        vinv[i][r] = s * y - t * x;
      }
    }
    if (a[pivot_row][c] != 0) ++pivot_row;
  }
  UnimodularCompletion out;
  out.basis = std::move(vinv);
  out.inverse = std::move(v);
  out.rank = static_cast<unsigned>(pivot_row);
  return out;
}

}  // namespace cbcount
