#include "pavuc/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pavuc/error.hpp"
#include "pavuc/linalg.hpp"

namespace pavuc {

using Index = Eigen::Index;

namespace {

Matrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = normal(rng);
  return m;
}

double weighted_sq_residual(const Matrix& q, const Matrix& x, const Matrix& a, const Matrix& g, const Vector& lam) {
  const Matrix e = q * x - a * g;
  return e.colwise().squaredNorm().dot(lam.transpose());
}

constexpr int kMaxMajorizeSteps = 50;

}  // namespace

std::size_t min_view_dim(const MultiViewDataset& dataset) {
  std::size_t min_d = 0;
  for (const auto& x : dataset.views) {
    const auto d = static_cast<std::size_t>(x.rows());
    if (min_d == 0 || d < min_d) min_d = d;
  }
  return min_d;
}

void validate(const SolverConfig& config, const MultiViewDataset& dataset) {
  if (!(config.alpha > 1.0) || !std::isfinite(config.alpha)) throw ConfigError("alpha must exceed 1");
  if (!(config.mu > 0.0) || !std::isfinite(config.mu)) throw ConfigError("mu must be positive");
  if (!(config.rel_tol >= 0.0)) throw ConfigError("rel_tol must be non-negative");
  if (!(config.eps_guard > 0.0)) throw ConfigError("eps_guard must be positive");
  if (config.clusters < 1) throw ConfigError("number of clusters must be at least 1");
  try {
    validate(dataset);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid dataset: ") + e.what());
  }
  const std::size_t m = config.anchor_count();
  const std::size_t min_d = min_view_dim(dataset);
  const std::size_t dl = config.latent_count(min_d);
  if (config.clusters > m) throw ConfigError("anchors must be at least the number of clusters");
  if (m > dl) throw ConfigError("latent dimension must be at least the number of anchors");
  if (dl > min_d) throw ConfigError("latent dimension must not exceed the smallest view dimension");
  if (config.clusters > dataset.sample_count()) throw ConfigError("more clusters than samples");
}

ModelState init_state(const MultiViewDataset& dataset, const SolverConfig& config) {
  validate(config, dataset);
  const auto m = static_cast<Index>(config.anchor_count());
  const auto dl = static_cast<Index>(config.latent_count(min_view_dim(dataset)));
  const std::size_t v = dataset.view_count();
  const std::size_t n = dataset.sample_count();

  ModelState s;
  std::mt19937_64 rng(derive_seed(config.seed, 0));
  s.a = orthonormalize_columns(gaussian(dl, m, rng));

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < v; ++i) {
    std::mt19937_64 view_rng(derive_seed(config.seed, i + 1));
    s.q.push_back(orthonormalize_columns(gaussian(dataset.views[i].rows(), dl, view_rng)).transpose());
    Matrix g(m, static_cast<Index>(n));
    for (Index j = 0; j < g.cols(); ++j) {
      for (Index h = 0; h < m; ++h) {
        double u = 0.0;
        while (u <= 0.0) u = unif(view_rng);
        g(h, j) = u;
      }
      g.col(j) /= g.col(j).sum();
    }
    s.g.push_back(std::move(g));
    s.lam.push_back(Vector::Ones(static_cast<Index>(n)));
    s.pi.push_back(identity_permutation(n));
  }
  s.phi = Vector::Constant(static_cast<Index>(v), 1.0 / static_cast<double>(v));
  s.template_view = 0;
  return s;
}

Matrix residual(const ModelState& state, const MultiViewDataset& dataset, std::size_t view) {
  return state.q[view] * dataset.views[view] - state.a * state.g[view];
}

Vector residual_norms(const ModelState& state, const MultiViewDataset& dataset, std::size_t view) {
  return residual(state, dataset, view).colwise().norm().transpose();
}

double weighted_residual(const ModelState& state, const MultiViewDataset& dataset, std::size_t view) {
  return weighted_sq_residual(state.q[view], dataset.views[view], state.a, state.g[view], state.lam[view]);
}

Matrix q_coupling(const ModelState& state, const MultiViewDataset& dataset, std::size_t view) {
  const Matrix weighted_g = state.g[view] * state.lam[view].asDiagonal();  // G_i Lambda_i
  return dataset.views[view] * (weighted_g.transpose() * state.a.transpose());
}

Matrix update_q(const ModelState& state, const MultiViewDataset& dataset, std::size_t view) {
  const Matrix& x = dataset.views[view];
  const Matrix b = q_coupling(state, dataset, view);
  Matrix candidate = procrustes_maximizer(b).transpose();
  if (x.rows() == state.a.rows()) return candidate;

  const Matrix& q_old = state.q[view];
  const Vector& lam = state.lam[view];
  const double before = weighted_sq_residual(q_old, x, state.a, state.g[view], lam);
  if (weighted_sq_residual(candidate, x, state.a, state.g[view], lam) <= before) return candidate;

  // Tr(Q M Q^T) is not constant when d_l < d_i. Linearizing its concave part
  // -Tr(Q (sI - M) Q^T) at the current Q gives a Procrustes majorizer.
  const Matrix xl = x * lam.asDiagonal();
  const Matrix gram = xl * x.transpose();
  const double top = Eigen::SelfAdjointEigenSolver<Matrix>(gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  const Matrix shift = top * Matrix::Identity(gram.rows(), gram.cols()) - gram;

  Matrix q = q_old;
  double value = before;
  for (int step = 0; step < kMaxMajorizeSteps; ++step) {
    Matrix next = procrustes_maximizer(b + shift * q.transpose()).transpose();
    const double next_value = weighted_sq_residual(next, x, state.a, state.g[view], lam);
    if (!(next_value < value)) break;
    const double drop = value - next_value;
    q = std::move(next);
    value = next_value;
    if (drop <= 1e-12 * std::max(1.0, std::abs(value))) break;
  }
  return q;
}

Matrix update_a(const ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config) {
  Matrix coupling = Matrix::Zero(state.a.rows(), state.a.cols());  // C^T, d_l x m
  for (std::size_t i = 0; i < dataset.view_count(); ++i) {
    const double w = std::pow(state.phi(static_cast<Index>(i)), config.alpha);
    if (w == 0.0) continue;
    const Matrix latent = state.q[i] * dataset.views[i];  // d_l x n
    coupling += w * (latent * state.lam[i].asDiagonal() * state.g[i].transpose());
  }
  return procrustes_maximizer(coupling);
}

Matrix update_g_nontemplate(const ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config,
                            std::size_t view) {
  if (view == state.template_view) throw InvalidArgument("update_g_nontemplate: view is the template");
  const Matrix z = state.a.transpose() * (state.q[view] * dataset.views[view]);
  const Matrix& gt = state.g[state.template_view];
  const Permutation inv = inverse(state.pi[view]);
  const double w = std::pow(state.phi(static_cast<Index>(view)), config.alpha);

  Matrix g(z.rows(), z.cols());
  for (Index j = 0; j < z.cols(); ++j) {
    const double gamma = w * state.lam[view](j);
    const Vector h = (gamma * z.col(j) + config.mu * gt.col(static_cast<Index>(inv[static_cast<std::size_t>(j)]))) /
                     (gamma + config.mu);
    g.col(j) = simplex_project(h);
  }
  return g;
}

Matrix update_g_template(const ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config) {
  const std::size_t t = state.template_view;
  const std::size_t v = dataset.view_count();
  const Matrix z = state.a.transpose() * (state.q[t] * dataset.views[t]);
  Matrix pulled = Matrix::Zero(z.rows(), z.cols());
  for (std::size_t i = 0; i < v; ++i) {
    if (i == t) continue;
    pulled += permute_columns(state.g[i], state.pi[i]);
  }
  const double w = std::pow(state.phi(static_cast<Index>(t)), config.alpha);
  const double others = config.mu * static_cast<double>(v - 1);

  Matrix g(z.rows(), z.cols());
  for (Index j = 0; j < z.cols(); ++j) {
    const double gamma = w * state.lam[t](j);
    const Vector h = (gamma * z.col(j) + config.mu * pulled.col(j)) / (gamma + others);
    g.col(j) = simplex_project(h);
  }
  return g;
}

Vector update_lambda(const ModelState& state, const MultiViewDataset& dataset, std::size_t view, double eps_guard) {
  const Vector norms = residual_norms(state, dataset, view);
  return norms.unaryExpr([eps_guard](double r) { return 1.0 / (2.0 * std::max(r, eps_guard)); });
}

Vector phi_from_residuals(const Vector& residuals, double alpha, double eps_guard) {
  const Index v = residuals.size();
  Vector phi = Vector::Zero(v);
  const Index exact = (residuals.array() <= eps_guard).count();
  if (exact > 0) {
    for (Index i = 0; i < v; ++i)
      if (residuals(i) <= eps_guard) phi(i) = 1.0 / static_cast<double>(exact);
    return phi;
  }
  // log-space to avoid under/overflow of eps^(1/(1-alpha))
  const Vector logw = residuals.array().log() / (1.0 - alpha);
  phi = (logw.array() - logw.maxCoeff()).exp();
  return phi / phi.sum();
}

Vector update_phi(const ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config) {
  Vector eps(static_cast<Index>(dataset.view_count()));
  for (std::size_t i = 0; i < dataset.view_count(); ++i)
    eps(static_cast<Index>(i)) = residual_norms(state, dataset, i).sum();
  return phi_from_residuals(eps, config.alpha, config.eps_guard);
}

double alignment_cost(const ModelState& state, std::size_t view) {
  const Matrix& gi = state.g[view];
  const Matrix& gt = state.g[state.template_view];
  const Permutation& p = state.pi[view];
  double cost = 0.0;
  for (Index s = 0; s < gt.cols(); ++s)
    cost += (gi.col(static_cast<Index>(p[static_cast<std::size_t>(s)])) - gt.col(s)).squaredNorm();
  return cost;
}

double objective(const ModelState& state, const MultiViewDataset& dataset, const SolverConfig& config) {
  double total = 0.0;
  for (std::size_t i = 0; i < dataset.view_count(); ++i) {
    const double w = std::pow(state.phi(static_cast<Index>(i)), config.alpha);
    total += w * residual_norms(state, dataset, i).sum();
  }
  double align = 0.0;
  for (std::size_t i = 0; i < dataset.view_count(); ++i)
    if (i != state.template_view) align += alignment_cost(state, i);
  return total + config.mu * align;
}

}  // namespace pavuc
