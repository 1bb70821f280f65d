#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace pavuc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Vectorized permutation matrix, 0-based: (X * Pi).col(s) == X.col(perm[s]).
using Permutation = std::vector<std::size_t>;

/// Cluster / class ids. Produced labels are 1-based.
using Labels = std::vector<int>;

Permutation identity_permutation(std::size_t n);
bool is_bijection(const Permutation& perm);
Permutation inverse(const Permutation& perm);

/// Vector of the product Pi_a * Pi_b, i.e. (X Pi_a Pi_b).col(s) == X.col(a[b[s]]).
Permutation compose(const Permutation& a, const Permutation& b);

/// Returns X * Pi as column reindexing.
Matrix permute_columns(const Matrix& x, const Permutation& perm);

}  // namespace pavuc
