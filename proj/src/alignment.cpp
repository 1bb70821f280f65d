#include "pavuc/alignment.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "pavuc/error.hpp"

namespace pavuc {

using Index = Eigen::Index;

InitialStateProbs initial_state_probs(const Matrix& x, double eps_guard) {
  const Index n = x.cols();
  if (n < 1) throw InvalidArgument("initial_state_probs: no samples");
  const Vector means = x.colwise().mean().transpose();
  Vector var(n);
  for (Index j = 0; j < n; ++j)
    var(j) = (x.col(j).array() - means(j)).square().sum() / static_cast<double>(x.rows());

  if ((var.array() <= eps_guard).all()) return {Vector::Constant(n, 1.0 / static_cast<double>(n))};
  return {var / var.sum()};
}

AlignmentPlan plan_alignment(std::size_t view, const InitialStateProbs& probs, std::size_t aligned_count) {
  const auto n = static_cast<std::size_t>(probs.probs.size());
  if (aligned_count > n) throw InvalidArgument("plan_alignment: aligned_count exceeds sample count");
  AlignmentPlan plan;
  plan.view = view;
  plan.order.resize(n - aligned_count);
  std::iota(plan.order.begin(), plan.order.end(), aligned_count);
  plan.candidates = plan.order;
  std::stable_sort(plan.order.begin(), plan.order.end(), [&](std::size_t a, std::size_t b) {
    return probs.probs(static_cast<Index>(a)) > probs.probs(static_cast<Index>(b));
  });
  return plan;
}

double two_step_score(const Vector& g_i_col, const Vector& g_t_col, double p0) {
  if (g_i_col.size() != g_t_col.size()) throw ShapeError("two_step_score: column lengths differ");
  double total = 0.0;
  for (Index h = 0; h < g_i_col.size(); ++h) total += p0 * g_i_col(h) * g_t_col(h);
  return total;
}

Permutation derive_permutation(const Matrix& g_i, const Matrix& g_t, const InitialStateProbs& probs,
                               std::size_t aligned_count) {
  const auto n = static_cast<std::size_t>(g_i.cols());
  if (g_t.cols() != g_i.cols() || g_t.rows() != g_i.rows())
    throw ShapeError("derive_permutation: graph shapes differ");
  if (static_cast<std::size_t>(probs.probs.size()) != n)
    throw ShapeError("derive_permutation: probability vector length differs from sample count");

  Permutation pi = identity_permutation(n);
  const AlignmentPlan plan = plan_alignment(0, probs, aligned_count);
  const std::size_t nu = plan.candidates.size();
  if (nu == 0) return pi;

  // Two-step scores between unaligned blocks, stored transposed so each source
  // column's candidates are contiguous. The initial-state probability of a
  // source column scales all of its scores, so the argmax uses G_t^T G_i.
  const auto a = static_cast<Index>(aligned_count);
  const auto u = static_cast<Index>(nu);
  const Matrix scores = g_t.middleCols(a, u).transpose() * g_i.middleCols(a, u);

  std::vector<char> taken(nu, 0);
  for (std::size_t j : plan.order) {
    const Index row = static_cast<Index>(j - aligned_count);
    Index best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Index s = 0; s < u; ++s) {
      if (taken[static_cast<std::size_t>(s)]) continue;
      const double score = scores(s, row);
      if (best < 0 || score > best_score) {
        best_score = score;
        best = s;
      }
    }
    taken[static_cast<std::size_t>(best)] = 1;
    pi[aligned_count + static_cast<std::size_t>(best)] = j;
  }
  return pi;
}

std::size_t select_template(const Vector& phi) {
  if (phi.size() == 0) throw InvalidArgument("select_template: empty weight vector");
  Index best = 0;
  for (Index i = 1; i < phi.size(); ++i)
    if (phi(i) > phi(best)) best = i;
  return static_cast<std::size_t>(best);
}

double matching_score(const Matrix& g_i, const Matrix& g_t, const Permutation& pi) {
  double total = 0.0;
  for (Index s = 0; s < g_t.cols(); ++s) total += g_i.col(static_cast<Index>(pi[static_cast<std::size_t>(s)])).dot(g_t.col(s));
  return total;
}

}  // namespace pavuc
