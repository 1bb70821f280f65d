#pragma once

#include <cstddef>
#include <vector>

#include "pavuc/types.hpp"

namespace pavuc {

/// Probability of starting a two-hop walk at each sample of a view.
struct InitialStateProbs {
  Vector probs;
};

/// probs[j] = Var(x_j) / sum_h Var(x_h) with population variance over the
/// features of column j; uniform when every variance is <= eps_guard.
InitialStateProbs initial_state_probs(const Matrix& x, double eps_guard = 1e-8);

/// Order in which the unaligned columns of one view are matched.
struct AlignmentPlan {
  std::size_t view = 0;
  std::vector<std::size_t> order;       // unaligned view columns, descending probability
  std::vector<std::size_t> candidates;  // unaligned template columns
};

/// Ties in probability keep the lower column index first.
AlignmentPlan plan_alignment(std::size_t view, const InitialStateProbs& probs, std::size_t aligned_count);

/// Probability of the walk sample -> anchor -> sample, summed over anchors:
/// sum_h p0 * g_i[h] * g_t[h].
double two_step_score(const Vector& g_i_col, const Vector& g_t_col, double p0);

/// Greedy masked matching of the unaligned columns of g_i to those of g_t.
///
/// Columns are visited in plan order; each takes the still-unmatched template
/// column with the highest two-step score, which is then masked. Returns the
/// vectorized permutation with (g_i Pi).col(s) == g_i.col(pi[s]); the first
/// aligned_count indices are fixed.
Permutation derive_permutation(const Matrix& g_i, const Matrix& g_t, const InitialStateProbs& probs,
                               std::size_t aligned_count);

/// Smallest index attaining max phi.
std::size_t select_template(const Vector& phi);

/// sum_s g_i.col(pi[s]) . g_t.col(s), the quantity the matching maximizes.
double matching_score(const Matrix& g_i, const Matrix& g_t, const Permutation& pi);

}  // namespace pavuc
