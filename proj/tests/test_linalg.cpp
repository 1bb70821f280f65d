#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "pavuc/error.hpp"
#include "pavuc/linalg.hpp"

using namespace pavuc;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = nd(rng);
  return m;
}

// Projection by enumerating every support set.
Vector simplex_oracle(const Vector& h) {
  const auto m = h.size();
  Vector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    double sum = 0.0;
    int size = 0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (mask & (1u << i)) sum += h[i], ++size;
    const double shift = (1.0 - sum) / size;
    Vector g = Vector::Zero(m);
    bool ok = true;
    for (Eigen::Index i = 0; i < m; ++i)
      if (mask & (1u << i)) {
        g[i] = h[i] + shift;
        if (g[i] < 0) ok = false;
      }
    if (!ok) continue;
    const double d = (g - h).squaredNorm();
    if (d < best_dist) best_dist = d, best = g;
  }
  return best;
}

double assignment_brute(const Matrix& cost) {
  std::vector<std::size_t> p(static_cast<std::size_t>(cost.rows()));
  std::iota(p.begin(), p.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p[i]));
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

}  // namespace

TEST_CASE("permutation helpers") {
  const Permutation p{2, 0, 1};
  CHECK(is_bijection(p));
  CHECK_FALSE(is_bijection({0, 0, 1}));
  CHECK_FALSE(is_bijection({0, 3, 1}));
  CHECK(compose(p, inverse(p)) == identity_permutation(3));
  CHECK(compose(inverse(p), p) == identity_permutation(3));
  CHECK(compose(p, p) == Permutation{1, 2, 0});
  CHECK_THROWS_AS(inverse({1, 1}), InvalidArgument);

  Matrix x(1, 3);
  x << 10, 20, 30;
  const Matrix y = permute_columns(x, p);
  CHECK(y(0, 0) == 30);
  CHECK(y(0, 1) == 10);
  CHECK(y(0, 2) == 20);
}

TEST_CASE("thin svd reconstructs and orders singular values") {
  std::mt19937_64 rng(1);
  for (auto [r, c] : {std::pair{6, 4}, std::pair{3, 7}, std::pair{5, 5}}) {
    const Matrix x = random_matrix(r, c, rng);
    const SvdFactors f = thin_svd(x);
    const auto k = std::min(r, c);
    CHECK(f.left.cols() == k);
    CHECK(f.right.cols() == k);
    CHECK((f.reconstruct() - x).norm() < 1e-10);
    CHECK((f.left.transpose() * f.left - Matrix::Identity(k, k)).norm() < 1e-10);
    CHECK((f.right.transpose() * f.right - Matrix::Identity(k, k)).norm() < 1e-10);
    for (Eigen::Index i = 1; i < k; ++i) CHECK(f.singular[i] <= f.singular[i - 1]);
    for (Eigen::Index j = 0; j < k; ++j) {
      Eigen::Index arg = 0;
      f.left.col(j).cwiseAbs().maxCoeff(&arg);
      CHECK(f.left(arg, j) > 0);
    }
  }
}

TEST_CASE("thin svd rejects bad input") {
  CHECK_THROWS_AS(thin_svd(Matrix(0, 3)), InvalidArgument);
  Matrix x = Matrix::Ones(2, 2);
  x(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(thin_svd(x), InvalidArgument);
}

TEST_CASE("truncated svd keeps the leading triplets") {
  std::mt19937_64 rng(2);
  const Matrix x = random_matrix(5, 8, rng);
  const SvdFactors full = thin_svd(x);
  const SvdFactors top = truncated_svd(x, 2);
  CHECK(top.singular.size() == 2);
  CHECK((top.singular - full.singular.head(2)).norm() < 1e-12);
  CHECK((top.left - full.left.leftCols(2)).norm() < 1e-12);
  CHECK_THROWS_AS(truncated_svd(x, 0), InvalidArgument);
  CHECK_THROWS_AS(truncated_svd(x, 6), InvalidArgument);
}

TEST_CASE("procrustes maximizer") {
  std::mt19937_64 rng(3);
  SUBCASE("identity input") {
    CHECK((procrustes_maximizer(Matrix::Identity(4, 4)) - Matrix::Identity(4, 4)).norm() < 1e-12);
  }
  SUBCASE("orthonormal and unbeaten by random samples") {
    for (int t = 0; t < 20; ++t) {
      const Matrix b = random_matrix(6, 3, rng);
      const Matrix y = procrustes_maximizer(b);
      CHECK((y.transpose() * y - Matrix::Identity(3, 3)).norm() < 1e-8);
      const double best = (y.transpose() * b).trace();
      for (int s = 0; s < 500; ++s) {
        const Matrix z = orthonormalize_columns(random_matrix(6, 3, rng));
        CHECK((z.transpose() * b).trace() <= best + 1e-12);
      }
    }
  }
  SUBCASE("wide input is rejected") { CHECK_THROWS_AS(procrustes_maximizer(Matrix::Ones(2, 3)), ShapeError); }
}

TEST_CASE("orthonormalize columns spans the input") {
  std::mt19937_64 rng(4);
  const Matrix x = random_matrix(7, 3, rng);
  const Matrix q = orthonormalize_columns(x);
  CHECK((q.transpose() * q - Matrix::Identity(3, 3)).norm() < 1e-12);
  CHECK((q * (q.transpose() * x) - x).norm() < 1e-10);
}

TEST_CASE("simplex projection") {
  SUBCASE("already on the simplex") {
    Vector h(3);
    h << 0.2, 0.3, 0.5;
    CHECK((simplex_project(h) - h).norm() < 1e-15);
  }
  SUBCASE("closed form when nothing clips") {
    Vector h(4);
    h << 0.4, 0.3, 0.2, 0.3;
    const Vector g = simplex_project(h);
    const double eta = (1.0 - h.sum()) / 4.0;
    CHECK((g - (h.array() + eta).matrix()).norm() < 1e-15);
  }
  SUBCASE("clipped entry") {
    Vector h(3);
    h << 0.9, -0.5, 0.2;
    const Vector g = simplex_project(h);
    CHECK((g - simplex_oracle(h)).norm() < 1e-12);
    CHECK(g[1] == 0.0);
    CHECK(g[0] == doctest::Approx(0.85));
    CHECK(g[2] == doctest::Approx(0.15));
  }
  SUBCASE("random inputs against the active-set oracle") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd(0.0, 2.0);
    for (int t = 0; t < 300; ++t) {
      Vector h(5);
      for (auto& x : h) x = nd(rng);
      const Vector g = simplex_project(h);
      CHECK((g - simplex_oracle(h)).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(g.minCoeff() >= 0.0);
      CHECK(std::abs(g.sum() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("kmeans separates distant groups") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd(0.0, 0.3);
  Matrix pts(60, 2);
  Labels truth(60);
  for (int i = 0; i < 60; ++i) {
    const int c = i % 3;
    truth[static_cast<std::size_t>(i)] = c;
    pts(i, 0) = 10.0 * c + nd(rng);
    pts(i, 1) = (c == 1 ? 10.0 : 0.0) + nd(rng);
  }
  const KMeansResult r = kmeans_fit(pts, 3, 11);
  // Every true group maps to a single predicted label and the labels differ.
  std::vector<int> seen(3, 0);
  for (int i = 0; i < 60; ++i) {
    const auto c = static_cast<std::size_t>(truth[static_cast<std::size_t>(i)]);
    const int l = r.labels[static_cast<std::size_t>(i)];
    CHECK(l >= 1);
    CHECK(l <= 3);
    if (seen[c] == 0) seen[c] = l;
    CHECK(seen[c] == l);
  }
  CHECK(seen[0] != seen[1]);
  CHECK(seen[1] != seen[2]);
  CHECK(seen[0] != seen[2]);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1] + 1e-9);
  CHECK(kmeans(pts, 3, 11) == r.labels);
}

TEST_CASE("kmeans with one cluster") {
  Matrix pts(4, 1);
  pts << 1, 2, 3, 4;
  const KMeansResult r = kmeans_fit(pts, 1, 0);
  CHECK(r.labels == Labels{1, 1, 1, 1});
  CHECK(r.centers(0, 0) == doctest::Approx(2.5));
  CHECK(r.inertia == doctest::Approx(5.0));
}

TEST_CASE("optimal assignment matches brute force") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<Eigen::Index>(1 + t % 6);
    Matrix cost(n, n);
    for (auto& x : cost.reshaped()) x = std::round(u(rng));
    const Permutation p = optimal_assignment(cost);
    REQUIRE(is_bijection(p));
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i) s += cost(i, static_cast<Eigen::Index>(p[static_cast<std::size_t>(i)]));
    CHECK(s == doctest::Approx(assignment_brute(cost)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(optimal_assignment(Matrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("derive_seed is deterministic and spreads streams") {
  CHECK(derive_seed(5, 1) == derive_seed(5, 1));
  CHECK(derive_seed(5, 1) != derive_seed(5, 2));
  CHECK(derive_seed(5, 1) != derive_seed(6, 1));
}
