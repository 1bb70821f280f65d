#include "pavuc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "pavuc/error.hpp"

namespace pavuc {

namespace {

using Index = Eigen::Index;

// Largest-magnitude entry of each left vector made positive.
void normalize_signs(SvdFactors& f) {
  for (Index c = 0; c < f.left.cols(); ++c) {
    Index arg = 0;
    double best = -1.0;
    for (Index r = 0; r < f.left.rows(); ++r) {
      const double mag = std::abs(f.left(r, c));
      if (mag > best) {
        best = mag;
        arg = r;
      }
    }
    if (f.left(arg, c) < 0.0) {
      f.left.col(c) *= -1.0;
      f.right.col(c) *= -1.0;
    }
  }
}

double squared_distance(const Matrix& points, Index row, const Matrix& centers, Index c) {
  return (points.row(row) - centers.row(c)).squaredNorm();
}

struct LloydRun {
  std::vector<Index> assign;
  Matrix centers;
  double inertia = 0.0;
  std::vector<double> history;
};

double assign_points(const Matrix& points, const Matrix& centers, std::vector<Index>& assign) {
  double inertia = 0.0;
  for (Index p = 0; p < points.rows(); ++p) {
    Index best_c = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < centers.rows(); ++c) {
      const double d = squared_distance(points, p, centers, c);
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    assign[static_cast<std::size_t>(p)] = best_c;
    inertia += best;
  }
  return inertia;
}

double inertia_of(const Matrix& points, const Matrix& centers, const std::vector<Index>& assign) {
  double inertia = 0.0;
  for (Index p = 0; p < points.rows(); ++p)
    inertia += squared_distance(points, p, centers, assign[static_cast<std::size_t>(p)]);
  return inertia;
}

Matrix seed_plus_plus(const Matrix& points, std::size_t k, std::mt19937_64& rng) {
  const Index n = points.rows();
  Matrix centers(static_cast<Index>(k), points.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centers.row(0) = points.row(pick(rng));

  std::vector<double> nearest(static_cast<std::size_t>(n));
  for (Index p = 0; p < n; ++p) nearest[static_cast<std::size_t>(p)] = squared_distance(points, p, centers, 0);

  for (std::size_t c = 1; c < k; ++c) {
    const double total = std::accumulate(nearest.begin(), nearest.end(), 0.0);
    Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> unif(0.0, total);
      const double target = unif(rng);
      double acc = 0.0;
      chosen = n - 1;
      for (Index p = 0; p < n; ++p) {
        acc += nearest[static_cast<std::size_t>(p)];
        if (acc > target && nearest[static_cast<std::size_t>(p)] > 0.0) {
          chosen = p;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centers.row(static_cast<Index>(c)) = points.row(chosen);
    for (Index p = 0; p < n; ++p) {
      auto& d = nearest[static_cast<std::size_t>(p)];
      d = std::min(d, squared_distance(points, p, centers, static_cast<Index>(c)));
    }
  }
  return centers;
}

LloydRun lloyd(const Matrix& points, Matrix centers, std::size_t max_iter) {
  const Index n = points.rows();
  const Index k = centers.rows();
  LloydRun run;
  run.assign.assign(static_cast<std::size_t>(n), 0);
  run.inertia = assign_points(points, centers, run.assign);
  run.history.push_back(run.inertia);

  for (std::size_t it = 0; it < max_iter; ++it) {
    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index p = 0; p < n; ++p) {
      const Index c = run.assign[static_cast<std::size_t>(p)];
      sums.row(c) += points.row(p);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
    }
    // Empty clusters take the point farthest from its current center.
    for (Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Index far = 0;
      double far_d = -1.0;
      for (Index p = 0; p < n; ++p) {
        const double d = squared_distance(points, p, centers, run.assign[static_cast<std::size_t>(p)]);
        if (d > far_d) {
          far_d = d;
          far = p;
        }
      }
      centers.row(c) = points.row(far);
    }
    run.history.push_back(inertia_of(points, centers, run.assign));

    std::vector<Index> next(run.assign.size());
    run.inertia = assign_points(points, centers, next);
    run.history.push_back(run.inertia);
    const bool stable = next == run.assign;
    run.assign = std::move(next);
    if (stable) break;
  }
  run.centers = std::move(centers);
  return run;
}

}  // namespace

Matrix SvdFactors::reconstruct() const {
  return left * singular.asDiagonal() * right.transpose();
}

SvdFactors thin_svd(const Matrix& x) {
  if (x.rows() == 0 || x.cols() == 0) throw InvalidArgument("thin_svd: empty matrix");
  if (!x.allFinite()) throw InvalidArgument("thin_svd: non-finite input");
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors f{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  normalize_signs(f);
  return f;
}

SvdFactors truncated_svd(const Matrix& x, std::size_t k) {
  const auto full = static_cast<std::size_t>(std::min(x.rows(), x.cols()));
  if (k < 1 || k > full) throw InvalidArgument("truncated_svd: k must lie in [1, min(rows, cols)]");
  SvdFactors f = thin_svd(x);
  const auto kk = static_cast<Index>(k);
  return SvdFactors{f.left.leftCols(kk), f.singular.head(kk), f.right.leftCols(kk)};
}

Matrix procrustes_maximizer(const Matrix& b) {
  if (b.rows() < b.cols()) throw ShapeError("procrustes_maximizer: requires rows >= cols");
  const SvdFactors f = thin_svd(b);
  return f.left * f.right.transpose();
}

Matrix orthonormalize_columns(const Matrix& x) {
  if (x.rows() < x.cols()) throw ShapeError("orthonormalize_columns: requires rows >= cols");
  Eigen::HouseholderQR<Matrix> qr(x);
  Matrix q = qr.householderQ() * Matrix::Identity(x.rows(), x.cols());
  const Matrix& r = qr.matrixQR();
  for (Index c = 0; c < x.cols(); ++c) {
    if (r(c, c) < 0.0) q.col(c) *= -1.0;
  }
  return q;
}

Vector simplex_project(const Vector& h) {
  const Index m = h.size();
  if (m == 0) throw InvalidArgument("simplex_project: empty vector");
  if (!h.allFinite()) throw InvalidArgument("simplex_project: non-finite input");

  const double eta = (1.0 - h.sum()) / static_cast<double>(m);
  Vector shifted = h.array() + eta;
  if ((shifted.array() >= 0.0).all()) return shifted;

  std::vector<double> u(h.data(), h.data() + m);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Index j = 0; j < m; ++j) {
    cumsum += u[static_cast<std::size_t>(j)];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - candidate > 0.0) theta = candidate;
  }
  return (h.array() - theta).max(0.0);
}

KMeansResult kmeans_fit(const Matrix& points, std::size_t k, std::uint64_t seed,
                        const KMeansOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k < 1) throw InvalidArgument("kmeans: k must be >= 1");
  if (k > n) throw InvalidArgument("kmeans: k exceeds number of points");
  if (!points.allFinite()) throw InvalidArgument("kmeans: non-finite input");
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);

  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(derive_seed(seed, r));
    LloydRun run = lloyd(points, seed_plus_plus(points, k, rng), options.max_iter);
    if (run.inertia < best.inertia) {
      best.inertia = run.inertia;
      best.centers = std::move(run.centers);
      best.restart = r;
      best.history = std::move(run.history);
      best.labels.resize(n);
      for (std::size_t p = 0; p < n; ++p) best.labels[p] = static_cast<int>(run.assign[p]) + 1;
    }
  }
  return best;
}

Permutation optimal_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw ShapeError("optimal_assignment: cost matrix must be square");
  if (!cost.allFinite()) throw InvalidArgument("optimal_assignment: non-finite cost");
  const auto n = static_cast<std::size_t>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // Potentials u (rows), v (cols); p[j] = row matched to column j (1-based, 0 = none).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Index>(i0 - 1), static_cast<Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Permutation rows_to_cols(n);
  for (std::size_t j = 1; j <= n; ++j) rows_to_cols[p[j] - 1] = j - 1;
  return rows_to_cols;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace pavuc
