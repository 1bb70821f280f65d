#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pavuc/types.hpp"

namespace pavuc {

/// v views over the same n samples, each stored features x samples.
///
/// truth_perms[i][j] is the view-1 index of view-i column j. The first
/// aligned_count() entries of every truth permutation are the identity.
struct MultiViewDataset {
  std::vector<Matrix> views;
  std::optional<Labels> labels;  // view-1 sample order
  double rho = 1.0;
  std::vector<Permutation> truth_perms;
  std::size_t clusters = 0;  // 0 when unknown
  std::uint64_t seed = 0;

  std::size_t view_count() const { return views.size(); }
  std::size_t sample_count() const;
  std::size_t aligned_count() const;
};

/// ceil(rho * n), computed so that exact products are not bumped by rounding.
std::size_t aligned_count(double rho, std::size_t n);

/// Throws InvalidArgument if any dataset invariant is violated.
void validate(const MultiViewDataset& dataset);

/// Flat key=value description of a dataset directory.
struct DatasetManifest {
  std::size_t n = 0;
  std::size_t v = 0;
  std::size_t k = 0;
  double rho = 1.0;
  std::uint64_t seed = 0;
  std::vector<std::string> view_files;
  std::vector<std::size_t> view_rows;

  static DatasetManifest parse(const std::filesystem::path& file);
  void write(const std::filesystem::path& file) const;
};

/// Reads manifest.txt, view_<i>.txt and, when present, labels.txt and perm_<i>.txt.
/// Without any perm file the dataset is treated as fully aligned (rho = 1).
MultiViewDataset load_dataset(const std::filesystem::path& dir);

/// Writes the directory layout read by load_dataset. Creates `dir` if needed.
void save_dataset(const MultiViewDataset& dataset, const std::filesystem::path& dir);

/// Matrix text I/O: one row per line, space separated, 17 significant digits.
Matrix read_matrix(const std::filesystem::path& file);
void write_matrix(const Matrix& m, const std::filesystem::path& file);

/// One integer per line.
std::vector<long long> read_integers(const std::filesystem::path& file);

/// Shuffles the unaligned tail of views 2..v of a fully aligned dataset.
MultiViewDataset synthesize_unaligned(const MultiViewDataset& dataset, double rho, std::uint64_t seed);

/// k isotropic unit-variance Gaussian clusters in each view, sharing labels.
/// Cluster means are pairwise `separation` apart when dims[i] >= k, otherwise
/// spaced `separation` apart along one axis.
MultiViewDataset make_blobs(std::size_t n, std::size_t k, std::size_t v, std::span<const std::size_t> dims,
                            double separation, std::uint64_t seed);

}  // namespace pavuc
