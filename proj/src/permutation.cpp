#include <numeric>

#include "pavuc/error.hpp"
#include "pavuc/types.hpp"

namespace pavuc {

Permutation identity_permutation(std::size_t n) {
  Permutation perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  return perm;
}

bool is_bijection(const Permutation& perm) {
  std::vector<char> seen(perm.size(), 0);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) return false;
    seen[p] = 1;
  }
  return true;
}

Permutation inverse(const Permutation& perm) {
  if (!is_bijection(perm)) throw InvalidArgument("inverse: not a bijection");
  Permutation inv(perm.size());
  for (std::size_t s = 0; s < perm.size(); ++s) inv[perm[s]] = s;
  return inv;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw ShapeError("compose: length mismatch");
  Permutation out(b.size());
  for (std::size_t s = 0; s < b.size(); ++s) out[s] = a[b[s]];
  return out;
}

Matrix permute_columns(const Matrix& x, const Permutation& perm) {
  if (static_cast<Eigen::Index>(perm.size()) != x.cols())
    throw ShapeError("permute_columns: permutation length != column count");
  Matrix out(x.rows(), x.cols());
  for (std::size_t s = 0; s < perm.size(); ++s)
    out.col(static_cast<Eigen::Index>(s)) = x.col(static_cast<Eigen::Index>(perm[s]));
  return out;
}

}  // namespace pavuc
