#include "pavuc/solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "pavuc/error.hpp"
#include "pavuc/linalg.hpp"

namespace pavuc {

using Index = Eigen::Index;

void update_permutations(ModelState& state, const MultiViewDataset& dataset,
                         const std::vector<InitialStateProbs>& probs) {
  const std::size_t t = state.template_view;
  const std::size_t aligned = dataset.aligned_count();
  for (std::size_t i = 0; i < dataset.view_count(); ++i) {
    if (i == t) continue;
    Permutation next = derive_permutation(state.g[i], state.g[t], probs[i], aligned);
    if (matching_score(state.g[i], state.g[t], next) >= matching_score(state.g[i], state.g[t], state.pi[i]))
      state.pi[i] = std::move(next);
  }
}

bool update_template(ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config,
                     const std::vector<InitialStateProbs>& probs) {
  const std::size_t next = select_template(state.phi);
  if (next == state.template_view) return false;

  ModelState trial = state;
  const Permutation to_next = inverse(state.pi[next]);
  for (auto& p : trial.pi) p = compose(p, to_next);
  trial.template_view = next;
  if (config.align) update_permutations(trial, dataset, probs);

  if (objective(trial, dataset, config) > objective(state, dataset, config)) return false;
  state = std::move(trial);
  return true;
}

Matrix fuse_graphs(const ModelState& state) {
  Matrix fused = Matrix::Zero(state.g.front().rows(), state.g.front().cols());
  for (std::size_t i = 0; i < state.g.size(); ++i) fused += permute_columns(state.g[i], state.pi[i]);
  return fused / static_cast<double>(state.g.size());
}

SpectralClustering embed_and_cluster(const Matrix& fused, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > static_cast<std::size_t>(std::min(fused.rows(), fused.cols())))
    throw InvalidArgument("embed_and_cluster: k must lie in [1, min(m, n)]");
  SvdFactors f = truncated_svd(fused, k);
  SpectralClustering out;
  out.embedding = std::move(f.right);
  out.labels = kmeans(out.embedding, k, seed);
  return out;
}

Permutation estimated_correspondence(const ModelState& state, std::size_t view) {
  const Permutation& ref = state.pi.front();
  const Permutation& own = state.pi[view];
  Permutation c(own.size());
  for (std::size_t s = 0; s < own.size(); ++s) c[own[s]] = ref[s];
  return c;
}

Labels to_reference_order(const ModelState& state, const Labels& template_labels) {
  const Permutation& ref = state.pi.front();
  Labels out(template_labels.size());
  for (std::size_t s = 0; s < ref.size(); ++s) out[ref[s]] = template_labels[s];
  return out;
}

ClusteringResult fit(const MultiViewDataset& dataset, const SolverConfig& config, const IterationObserver& observer) {
  validate(config, dataset);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t v = dataset.view_count();

  ClusteringResult result;
  ModelState& state = result.state;
  state = init_state(dataset, config);

  std::vector<InitialStateProbs> probs;
  for (const auto& x : dataset.views) probs.push_back(initial_state_probs(x, config.eps_guard));

  result.initial_objective = objective(state, dataset, config);
  double previous = result.initial_objective;
  for (std::size_t iter = 1; iter <= config.max_iter; ++iter) {
    for (std::size_t i = 0; i < v; ++i) state.q[i] = update_q(state, dataset, i);
    state.a = update_a(state, dataset, config);
    for (std::size_t i = 0; i < v; ++i)
      if (i != state.template_view) state.g[i] = update_g_nontemplate(state, dataset, config, i);
    state.g[state.template_view] = update_g_template(state, dataset, config);
    for (std::size_t i = 0; i < v; ++i) state.lam[i] = update_lambda(state, dataset, i, config.eps_guard);
    if (config.align) update_permutations(state, dataset, probs);
    state.phi = update_phi(state, dataset, config);
    update_template(state, dataset, config, probs);

    const double obj = objective(state, dataset, config);
    if (!std::isfinite(obj))
      throw NumericalFailure(iter, "objective became non-finite at iteration " + std::to_string(iter));

    IterationRecord rec;
    rec.iteration = iter;
    rec.objective = obj;
    for (std::size_t i = 0; i < v; ++i) rec.residuals.push_back(residual_norms(state, dataset, i).sum());
    rec.phi = state.phi;
    rec.template_view = state.template_view;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.records.push_back(rec);
    if (observer) observer(state, rec);

    // The first iteration starts from Lambda = I, which does not majorize the
    // initial objective, so the ratio test starts at the second iteration.
    if (iter >= 2 && (obj == 0.0 || (previous - obj) / obj < config.rel_tol)) {
      result.converged = true;
      break;
    }
    previous = obj;
  }

  result.fused_graph = fuse_graphs(state);
  SpectralClustering sc = embed_and_cluster(result.fused_graph, config.clusters, config.seed);
  result.embedding = std::move(sc.embedding);
  result.template_labels = std::move(sc.labels);
  result.labels = to_reference_order(state, result.template_labels);
  return result;
}

}  // namespace pavuc
