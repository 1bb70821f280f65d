#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pavuc/types.hpp"

namespace pavuc {

/// x = left * diag(singular) * right^T, singular values non-increasing.
///
/// Each singular pair is sign-normalized so that the largest-magnitude entry
/// of the left vector is positive (first such entry on ties).
struct SvdFactors {
  Matrix left;
  Vector singular;
  Matrix right;

  Matrix reconstruct() const;
};

/// Thin SVD with min(rows, cols) factors. Throws InvalidArgument on non-finite input.
SvdFactors thin_svd(const Matrix& x);

/// Top-k singular triplets of thin_svd(x); requires 1 <= k <= min(rows, cols).
SvdFactors truncated_svd(const Matrix& x, std::size_t k);

/// Maximizer of Tr(Y^T B) over p x q matrices with orthonormal columns (p >= q),
/// given by U V^T of the thin SVD of B.
Matrix procrustes_maximizer(const Matrix& b);

/// Orthonormal basis for the column space of a full-column-rank matrix (thin QR).
Matrix orthonormalize_columns(const Matrix& x);

/// Euclidean projection onto {g >= 0, sum(g) = 1}.
///
/// When no coordinate clips, the result is exactly h + eta * 1 with
/// eta = (1 - sum(h)) / m; otherwise the sort-based threshold is used.
Vector simplex_project(const Vector& h);

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
};

struct KMeansResult {
  Labels labels;      // 1-based
  Matrix centers;     // k x dim
  double inertia = 0; // within-cluster sum of squares
  std::size_t restart = 0;
  // Inertia after each assignment and each update step of the winning restart.
  std::vector<double> history;
};

/// k-means++ seeded Lloyd iterations over the rows of `points`.
/// Best of `options.restarts` runs by (inertia, restart index).
KMeansResult kmeans_fit(const Matrix& points, std::size_t k, std::uint64_t seed,
                        const KMeansOptions& options = {});

inline Labels kmeans(const Matrix& points, std::size_t k, std::uint64_t seed) {
  return kmeans_fit(points, k, seed).labels;
}

/// Hungarian algorithm. Returns perm with row i assigned to column perm[i],
/// minimizing the total cost.
Permutation optimal_assignment(const Matrix& cost);

/// Deterministic 64-bit seed derivation (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace pavuc
