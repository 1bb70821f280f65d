#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pavuc/data.hpp"
#include "pavuc/types.hpp"

namespace pavuc {

struct SolverConfig {
  std::size_t clusters = 0;    // k
  double alpha = 1.5;          // view-weight exponent, > 1
  double mu = 1e-2;            // alignment trade-off, > 0
  std::size_t anchors = 0;     // m; 0 means m = k
  std::size_t latent_dim = 0;  // d_l; 0 means the smallest view dimension
  std::size_t max_iter = 60;
  double rel_tol = 1e-7;
  double eps_guard = 1e-8;
  std::uint64_t seed = 0;
  bool align = true;  // false pins every permutation to the identity

  std::size_t anchor_count() const { return anchors ? anchors : clusters; }
  std::size_t latent_count(std::size_t min_view_dim) const { return latent_dim ? latent_dim : min_view_dim; }
};

/// Smallest row count over the views.
std::size_t min_view_dim(const MultiViewDataset& dataset);

/// Throws ConfigError unless alpha > 1, mu > 0 and k <= m <= d_l <= min_i d_i.
void validate(const SolverConfig& config, const MultiViewDataset& dataset);

/// Optimization variables. Views and the template are 0-based.
struct ModelState {
  std::vector<Matrix> q;        // d_l x d_i, orthonormal rows
  Matrix a;                     // d_l x m, orthonormal columns
  std::vector<Matrix> g;        // m x n, simplex columns
  std::vector<Vector> lam;      // diagonal of the l2,1 reweighting matrix, length n
  std::vector<Permutation> pi;  // (G_i Pi_i).col(s) == G_i.col(pi[i][s])
  Vector phi;                   // view weights on the simplex
  std::size_t template_view = 0;
};

ModelState init_state(const MultiViewDataset& dataset, const SolverConfig& config);

/// Q_i X_i - A G_i.
Matrix residual(const ModelState& state, const MultiViewDataset& dataset, std::size_t view);

/// Column norms of residual(); their sum is the l2,1 reconstruction error.
Vector residual_norms(const ModelState& state, const MultiViewDataset& dataset, std::size_t view);

/// Tr(E_i Lambda_i E_i^T) with the reweighting vector currently held in the state.
double weighted_residual(const ModelState& state, const MultiViewDataset& dataset, std::size_t view);

/// X_i Lambda_i G_i^T A^T (d_i x d_l).
Matrix q_coupling(const ModelState& state, const MultiViewDataset& dataset, std::size_t view);

/// New Q_i. Takes Q_i^T = procrustes_maximizer(X_i Lambda_i G_i^T A^T). When
/// d_l < d_i that candidate can increase Tr(E_i Lambda_i E_i^T); it is then
/// replaced by majorize-minimize Procrustes steps that never increase it.
Matrix update_q(const ModelState& state, const MultiViewDataset& dataset, std::size_t view);

/// New A from procrustes_maximizer of sum_i phi_i^alpha Q_i X_i Lambda_i G_i^T.
Matrix update_a(const ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config);

/// Column-wise closed form for G_i, i != template.
Matrix update_g_nontemplate(const ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config,
                            std::size_t view);

/// Column-wise closed form for the template graph.
Matrix update_g_template(const ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config);

/// lam[j] = 1 / (2 max(||residual column j||, eps_guard)).
Vector update_lambda(const ModelState& state, const MultiViewDataset& dataset, std::size_t view, double eps_guard);

/// phi_i proportional to eps_i^(1/(1-alpha)); views with eps_i <= eps_guard share all weight.
Vector phi_from_residuals(const Vector& residuals, double alpha, double eps_guard);

Vector update_phi(const ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config);

/// ||G_i Pi_i - G_t||_F^2 for the current template t.
double alignment_cost(const ModelState& state, std::size_t view);

/// sum_i phi_i^alpha ||Q_i X_i - A G_i||_{2,1} + mu sum_{i != t} ||G_i Pi_i - G_t||_F^2
double objective(const ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config);

}  // namespace pavuc
