#include "pavuc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "pavuc/error.hpp"
#include "pavuc/linalg.hpp"

namespace pavuc {

namespace {

// Dense ids 0..c-1 in order of first appearance.
std::vector<std::size_t> dense_ids(const Labels& labels, std::size_t& count) {
  std::map<int, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (int l : labels) {
    auto [it, inserted] = ids.emplace(l, ids.size());
    out.push_back(it->second);
  }
  count = ids.size();
  return out;
}

struct Contingency {
  Matrix counts;  // truth x pred
  std::size_t n = 0;
};

Contingency contingency(const Labels& truth, const Labels& pred, const char* who) {
  if (truth.size() != pred.size()) throw InvalidArgument(std::string(who) + ": label vectors differ in length");
  std::size_t kt = 0, kp = 0;
  const auto t = dense_ids(truth, kt);
  const auto p = dense_ids(pred, kp);
  Contingency c;
  c.n = truth.size();
  c.counts = Matrix::Zero(static_cast<Eigen::Index>(kt), static_cast<Eigen::Index>(kp));
  for (std::size_t j = 0; j < t.size(); ++j)
    c.counts(static_cast<Eigen::Index>(t[j]), static_cast<Eigen::Index>(p[j])) += 1.0;
  return c;
}

double pairs(double x) { return x * (x - 1.0) / 2.0; }

double entropy(const Vector& marginal, double n) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < marginal.size(); ++i) {
    if (marginal(i) > 0.0) {
      const double p = marginal(i) / n;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace

double accuracy(const Labels& truth, const Labels& pred) {
  const Contingency c = contingency(truth, pred, "accuracy");
  if (c.n == 0) throw InvalidArgument("accuracy: empty labelings");
  const Eigen::Index k = std::max(c.counts.rows(), c.counts.cols());
  Matrix cost = Matrix::Zero(k, k);
  cost.topLeftCorner(c.counts.rows(), c.counts.cols()) = -c.counts;
  const Permutation match = optimal_assignment(cost);
  double hits = 0.0;
  for (Eigen::Index r = 0; r < k; ++r) hits -= cost(r, static_cast<Eigen::Index>(match[static_cast<std::size_t>(r)]));
  return hits / static_cast<double>(c.n);
}

double nmi(const Labels& truth, const Labels& pred) {
  const Contingency c = contingency(truth, pred, "nmi");
  if (c.n == 0) throw InvalidArgument("nmi: empty labelings");
  const double n = static_cast<double>(c.n);
  const Vector rows = c.counts.rowwise().sum();
  const Vector cols = c.counts.colwise().sum().transpose();
  double mi = 0.0;
  for (Eigen::Index i = 0; i < c.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.counts.cols(); ++j) {
      const double nij = c.counts(i, j);
      if (nij > 0.0) mi += (nij / n) * std::log(n * nij / (rows(i) * cols(j)));
    }
  }
  const double denom = std::sqrt(entropy(rows, n) * entropy(cols, n));
  if (denom <= 0.0) return 0.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

double pairwise_fscore(const Labels& truth, const Labels& pred) {
  const Contingency c = contingency(truth, pred, "pairwise_fscore");
  if (c.n < 2) throw InvalidArgument("pairwise_fscore: needs at least two samples");
  const double same_both = c.counts.unaryExpr(&pairs).sum();
  const double same_pred = c.counts.colwise().sum().unaryExpr(&pairs).sum();
  const double same_truth = c.counts.rowwise().sum().unaryExpr(&pairs).sum();
  const double precision = same_pred > 0.0 ? same_both / same_pred : 0.0;
  const double recall = same_truth > 0.0 ? same_both / same_truth : 0.0;
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double permutation_recovery(const Permutation& est, const Permutation& truth, std::size_t aligned_count) {
  if (est.size() != truth.size()) throw InvalidArgument("permutation_recovery: lengths differ");
  if (!is_bijection(est) || !is_bijection(truth)) throw InvalidArgument("permutation_recovery: not a bijection");
  if (aligned_count > est.size()) throw InvalidArgument("permutation_recovery: aligned_count exceeds length");
  const std::size_t unaligned = est.size() - aligned_count;
  if (unaligned == 0) return 1.0;
  std::size_t hits = 0;
  for (std::size_t j = aligned_count; j < est.size(); ++j) hits += est[j] == truth[j];
  return static_cast<double>(hits) / static_cast<double>(unaligned);
}

}  // namespace pavuc
