#include "pavuc/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "pavuc/error.hpp"
#include "pavuc/linalg.hpp"

namespace pavuc {

namespace fs = std::filesystem;
using Index = Eigen::Index;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::string format_double(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string view_key(std::size_t i, const char* suffix) {
  return "view_" + std::to_string(i + 1) + "_" + suffix;
}

bool is_identity(const Permutation& p) {
  for (std::size_t j = 0; j < p.size(); ++j)
    if (p[j] != j) return false;
  return true;
}

}  // namespace

std::size_t MultiViewDataset::sample_count() const {
  return views.empty() ? 0 : static_cast<std::size_t>(views.front().cols());
}

std::size_t MultiViewDataset::aligned_count() const { return pavuc::aligned_count(rho, sample_count()); }

std::size_t aligned_count(double rho, std::size_t n) {
  const double x = rho * static_cast<double>(n);
  const double r = std::round(x);
  double c = std::abs(x - r) <= 1e-9 * std::max(1.0, static_cast<double>(n)) ? r : std::ceil(x);
  c = std::clamp(c, 0.0, static_cast<double>(n));
  return static_cast<std::size_t>(c);
}

void validate(const MultiViewDataset& ds) {
  if (ds.views.empty()) throw InvalidArgument("dataset has no views");
  const std::size_t n = ds.sample_count();
  if (n == 0) throw InvalidArgument("dataset has no samples");
  for (std::size_t i = 0; i < ds.views.size(); ++i) {
    const Matrix& x = ds.views[i];
    if (x.rows() < 1) throw InvalidArgument("view " + std::to_string(i + 1) + " has no features");
    if (static_cast<std::size_t>(x.cols()) != n)
      throw InvalidArgument("view " + std::to_string(i + 1) + " sample count differs from view 1");
    if (!x.allFinite()) throw InvalidArgument("view " + std::to_string(i + 1) + " has non-finite entries");
  }
  if (!(ds.rho >= 0.0 && ds.rho <= 1.0)) throw InvalidArgument("rho must lie in [0, 1]");
  if (ds.truth_perms.size() != ds.views.size())
    throw InvalidArgument("one truth permutation per view is required");
  const std::size_t aligned = ds.aligned_count();
  for (std::size_t i = 0; i < ds.truth_perms.size(); ++i) {
    const Permutation& p = ds.truth_perms[i];
    if (p.size() != n || !is_bijection(p))
      throw InvalidArgument("truth permutation " + std::to_string(i + 1) + " is not a bijection on n samples");
    for (std::size_t j = 0; j < aligned; ++j)
      if (p[j] != j)
        throw InvalidArgument("truth permutation " + std::to_string(i + 1) + " moves an aligned sample");
  }
  if (ds.labels && ds.labels->size() != n) throw InvalidArgument("label count differs from sample count");
}

DatasetManifest DatasetManifest::parse(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw LoadError("cannot read " + file.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw LoadError(file.string() + ": malformed line '" + line + "'");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  auto require = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw LoadError(file.string() + ": missing key '" + key + "'");
    return it->second;
  };
  auto as_count = [&](const std::string& key, const std::string& text) {
    std::size_t value = 0;
    if (!parse_number(text, value)) throw LoadError(file.string() + ": bad value for '" + key + "'");
    return value;
  };

  DatasetManifest m;
  m.n = as_count("n", require("n"));
  m.v = as_count("v", require("v"));
  if (auto it = kv.find("k"); it != kv.end()) m.k = as_count("k", it->second);
  if (auto it = kv.find("seed"); it != kv.end()) {
    if (!parse_number(it->second, m.seed)) throw LoadError(file.string() + ": bad value for 'seed'");
  }
  if (auto it = kv.find("rho"); it != kv.end()) {
    if (!parse_number(it->second, m.rho) || !(m.rho >= 0.0 && m.rho <= 1.0))
      throw LoadError(file.string() + ": rho must be a number in [0, 1]");
  }
  for (std::size_t i = 0; i < m.v; ++i) {
    m.view_files.push_back(require(view_key(i, "file")));
    m.view_rows.push_back(as_count(view_key(i, "rows"), require(view_key(i, "rows"))));
  }
  return m;
}

void DatasetManifest::write(const fs::path& file) const {
  std::ofstream out(file);
  if (!out) throw LoadError("cannot write " + file.string());
  out << "n=" << n << "\n"
      << "v=" << v << "\n"
      << "k=" << k << "\n"
      << "rho=" << format_double(rho, 17) << "\n"
      << "seed=" << seed << "\n";
  for (std::size_t i = 0; i < view_files.size(); ++i) {
    out << view_key(i, "file") << "=" << view_files[i] << "\n";
    out << view_key(i, "rows") << "=" << view_rows[i] << "\n";
  }
}

Matrix read_matrix(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw LoadError("cannot read " + file.string());
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string tok;
    std::size_t count = 0;
    while (tokens >> tok) {
      double x = 0.0;
      if (!parse_number(tok, x))
        throw LoadError(file.string() + ":" + std::to_string(line_no) + ": cannot parse '" + tok + "'");
      if (!std::isfinite(x))
        throw LoadError(file.string() + ":" + std::to_string(line_no) + ": non-finite entry");
      values.push_back(x);
      ++count;
    }
    if (count == 0) continue;
    if (rows == 0) cols = count;
    if (count != cols) throw LoadError(file.string() + ":" + std::to_string(line_no) + ": ragged row");
    ++rows;
  }
  if (rows == 0) throw LoadError(file.string() + ": empty matrix");
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = values[r * cols + c];
  return m;
}

void write_matrix(const Matrix& m, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw LoadError("cannot write " + file.string());
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(m(r, c), 17);
    }
    out << '\n';
  }
}

std::vector<long long> read_integers(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw LoadError("cannot read " + file.string());
  std::vector<long long> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    long long value = 0;
    if (!parse_number(line, value))
      throw LoadError(file.string() + ":" + std::to_string(line_no) + ": expected an integer");
    out.push_back(value);
  }
  return out;
}

MultiViewDataset load_dataset(const fs::path& dir) {
  const DatasetManifest manifest = DatasetManifest::parse(dir / "manifest.txt");
  if (manifest.v == 0) throw LoadError((dir / "manifest.txt").string() + ": v must be >= 1");
  if (manifest.n == 0) throw LoadError((dir / "manifest.txt").string() + ": n must be >= 1");

  MultiViewDataset ds;
  ds.clusters = manifest.k;
  ds.seed = manifest.seed;
  ds.rho = manifest.rho;
  for (std::size_t i = 0; i < manifest.v; ++i) {
    const fs::path file = dir / manifest.view_files[i];
    Matrix x = read_matrix(file);
    if (static_cast<std::size_t>(x.rows()) != manifest.view_rows[i] ||
        static_cast<std::size_t>(x.cols()) != manifest.n) {
      throw LoadError(file.string() + ": expected " + std::to_string(manifest.view_rows[i]) + "x" +
                      std::to_string(manifest.n) + ", found " + std::to_string(x.rows()) + "x" +
                      std::to_string(x.cols()));
    }
    ds.views.push_back(std::move(x));
  }

  if (const fs::path file = dir / "labels.txt"; fs::exists(file)) {
    const auto raw = read_integers(file);
    if (raw.size() != manifest.n)
      throw LoadError(file.string() + ": expected " + std::to_string(manifest.n) + " labels");
    ds.labels = Labels(raw.begin(), raw.end());
  }

  bool any_perm = false;
  for (std::size_t i = 0; i < manifest.v; ++i) {
    const fs::path file = dir / ("perm_" + std::to_string(i + 1) + ".txt");
    if (!fs::exists(file)) {
      ds.truth_perms.push_back(identity_permutation(manifest.n));
      continue;
    }
    any_perm = true;
    const auto raw = read_integers(file);
    Permutation p;
    p.reserve(raw.size());
    for (long long idx : raw) {
      if (idx < 1 || static_cast<std::size_t>(idx) > manifest.n)
        throw LoadError(file.string() + ": index out of range");
      p.push_back(static_cast<std::size_t>(idx - 1));
    }
    if (p.size() != manifest.n || !is_bijection(p))
      throw LoadError(file.string() + ": not a permutation of 1.." + std::to_string(manifest.n));
    ds.truth_perms.push_back(std::move(p));
  }
  if (!any_perm) ds.rho = 1.0;

  const std::size_t aligned = ds.aligned_count();
  for (std::size_t i = 0; i < manifest.v; ++i) {
    for (std::size_t j = 0; j < aligned; ++j) {
      if (ds.truth_perms[i][j] != j)
        throw LoadError((dir / ("perm_" + std::to_string(i + 1) + ".txt")).string() +
                        ": moves a sample inside the aligned block");
    }
  }
  return ds;
}

void save_dataset(const MultiViewDataset& ds, const fs::path& dir) {
  validate(ds);
  fs::create_directories(dir);
  DatasetManifest m;
  m.n = ds.sample_count();
  m.v = ds.view_count();
  m.k = ds.clusters;
  m.rho = ds.rho;
  m.seed = ds.seed;
  for (std::size_t i = 0; i < ds.view_count(); ++i) {
    m.view_files.push_back("view_" + std::to_string(i + 1) + ".txt");
    m.view_rows.push_back(static_cast<std::size_t>(ds.views[i].rows()));
    write_matrix(ds.views[i], dir / m.view_files.back());

    std::ofstream perm(dir / ("perm_" + std::to_string(i + 1) + ".txt"));
    if (!perm) throw LoadError("cannot write perm file in " + dir.string());
    for (std::size_t idx : ds.truth_perms[i]) perm << idx + 1 << '\n';
  }
  if (ds.labels) {
    std::ofstream out(dir / "labels.txt");
    if (!out) throw LoadError("cannot write " + (dir / "labels.txt").string());
    for (int l : *ds.labels) out << l << '\n';
  }
  m.write(dir / "manifest.txt");
}

MultiViewDataset synthesize_unaligned(const MultiViewDataset& dataset, double rho, std::uint64_t seed) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("synthesize_unaligned: rho must lie in [0, 1]");
  validate(dataset);
  for (const auto& p : dataset.truth_perms)
    if (!is_identity(p)) throw InvalidArgument("synthesize_unaligned: input dataset must be fully aligned");

  MultiViewDataset out = dataset;
  out.rho = rho;
  out.seed = seed;
  const std::size_t n = dataset.sample_count();
  const std::size_t aligned = aligned_count(rho, n);
  for (std::size_t i = 1; i < dataset.view_count(); ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    Permutation p = identity_permutation(n);
    std::shuffle(p.begin() + static_cast<std::ptrdiff_t>(aligned), p.end(), rng);
    out.views[i] = permute_columns(dataset.views[i], p);
    out.truth_perms[i] = std::move(p);
  }
  return out;
}

MultiViewDataset make_blobs(std::size_t n, std::size_t k, std::size_t v, std::span<const std::size_t> dims,
                            double separation, std::uint64_t seed) {
  if (k < 1 || n < k) throw InvalidArgument("make_blobs: requires n >= k >= 1");
  if (v < 1) throw InvalidArgument("make_blobs: requires v >= 1");
  if (dims.size() != v) throw InvalidArgument("make_blobs: dims length must equal v");
  if (std::any_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 0; }))
    throw InvalidArgument("make_blobs: every view needs at least one feature");
  if (!(separation >= 0.0) || !std::isfinite(separation))
    throw InvalidArgument("make_blobs: separation must be a finite non-negative number");

  std::mt19937_64 label_rng(derive_seed(seed, 0));
  Labels labels(n);
  for (std::size_t j = 0; j < n; ++j) labels[j] = static_cast<int>(j % k) + 1;
  std::shuffle(labels.begin(), labels.end(), label_rng);

  MultiViewDataset ds;
  ds.clusters = k;
  ds.seed = seed;
  ds.rho = 1.0;
  for (std::size_t i = 0; i < v; ++i) {
    const std::size_t d = dims[i];
    Matrix means = Matrix::Zero(static_cast<Index>(d), static_cast<Index>(k));
    for (std::size_t c = 0; c < k; ++c) {
      if (d >= k) {
        means(static_cast<Index>((c + i) % d), static_cast<Index>(c)) = separation / std::sqrt(2.0);
      } else {
        means(static_cast<Index>(i % d), static_cast<Index>(c)) = separation * static_cast<double>(c);
      }
    }
    std::mt19937_64 rng(derive_seed(seed, 1000 + i));
    std::normal_distribution<double> noise(0.0, 1.0);
    Matrix x(static_cast<Index>(d), static_cast<Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      const auto c = static_cast<Index>(labels[j] - 1);
      for (std::size_t r = 0; r < d; ++r)
        x(static_cast<Index>(r), static_cast<Index>(j)) = means(static_cast<Index>(r), c) + noise(rng);
    }
    ds.views.push_back(std::move(x));
    ds.truth_perms.push_back(identity_permutation(n));
  }
  ds.labels = std::move(labels);
  return ds;
}

}  // namespace pavuc
