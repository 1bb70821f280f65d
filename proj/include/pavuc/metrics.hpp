#pragma once

#include <cstddef>
#include <vector>

#include "pavuc/types.hpp"

namespace pavuc {

struct EvaluationReport {
  double acc = 0.0;
  double nmi = 0.0;
  double fscore = 0.0;
  std::vector<double> perm_recovery;  // one per view
  double wall_time_seconds = 0.0;
};

/// Best fraction of matches over bijections between the two label sets
/// (Hungarian on the zero-padded square contingency table).
double accuracy(const Labels& truth, const Labels& pred);

/// Mutual information over the geometric mean of the two entropies; 0 when
/// either entropy is zero.
double nmi(const Labels& truth, const Labels& pred);

/// F-measure of same-cluster precision and recall over unordered sample pairs.
double pairwise_fscore(const Labels& truth, const Labels& pred);

/// Fraction of indices j >= aligned_count with est[j] == truth[j]; 1 when there are none.
double permutation_recovery(const Permutation& est, const Permutation& truth, std::size_t aligned_count);

}  // namespace pavuc
