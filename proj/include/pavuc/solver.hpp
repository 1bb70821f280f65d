#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "pavuc/alignment.hpp"
#include "pavuc/data.hpp"
#include "pavuc/model.hpp"

namespace pavuc {

struct IterationRecord {
  std::size_t iteration = 0;  // 1-based
  double objective = 0.0;
  std::vector<double> residuals;  // per-view l2,1 reconstruction error
  Vector phi;
  std::size_t template_view = 0;
  double seconds = 0.0;  // since fit() started
};

struct IterationTrace {
  std::vector<IterationRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

struct ClusteringResult {
  Matrix fused_graph;        // m x n, template column order
  Matrix embedding;          // n x k, template column order
  Labels labels;             // 1-based, view-1 column order
  Labels template_labels;    // 1-based, template column order
  ModelState state;
  IterationTrace trace;
  double initial_objective = 0.0;
  bool converged = false;
};

/// Called after every completed iteration with the state the record describes.
using IterationObserver = std::function<void(const ModelState&, const IterationRecord&)>;

/// Alternating minimization: Q, A, G, Lambda, Pi, phi, then template selection,
/// until the relative objective decrease drops below rel_tol or max_iter is hit.
/// Then fuses the aligned graphs and clusters their spectral embedding.
ClusteringResult fit(const MultiViewDataset& dataset, const SolverConfig& config,
                     const IterationObserver& observer = {});

/// Permutation step for every non-template view. A derived permutation replaces
/// the current one only if it does not lower the matching score.
void update_permutations(ModelState& state, const MultiViewDataset& dataset,
                         const std::vector<InitialStateProbs>& probs);

/// Re-selects the template from phi. A switch re-expresses every permutation
/// relative to the new template, re-derives them when `align` is set, and is
/// kept only if it does not increase the objective. Returns true on a switch.
bool update_template(ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config,
                     const std::vector<InitialStateProbs>& probs);

/// (1/v) sum_i G_i Pi_i.
Matrix fuse_graphs(const ModelState& state);

struct SpectralClustering {
  Matrix embedding;  // n x k sample-side singular vectors
  Labels labels;     // 1-based
};

/// Rank-k truncated SVD of the fused graph, then k-means on the sample-side factor.
SpectralClustering embed_and_cluster(const Matrix& fused, std::size_t k, std::uint64_t seed);

/// c[j] = view-1 column matched to column j of `view` (same convention as truth_perms).
Permutation estimated_correspondence(const ModelState& state, std::size_t view);

/// Re-indexes labels given in template column order into view-1 column order.
Labels to_reference_order(const ModelState& state, const Labels& template_labels);

}  // namespace pavuc
