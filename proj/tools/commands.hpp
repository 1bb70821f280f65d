#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pavuc/data.hpp"
#include "pavuc/model.hpp"
#include "report_io.hpp"

namespace pavuc::cli {

/// Bad flags or flag combinations; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed `--blobs n=300,k=3,v=3,dims=5:5:5,sep=20`. Missing dims default to 5 per view.
struct BlobSpec {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t v = 2;
  std::vector<std::size_t> dims;
  double separation = 20.0;
};

BlobSpec parse_blob_spec(const std::string& text);

struct SynthOptions {
  std::optional<BlobSpec> blobs;
  std::optional<std::filesystem::path> input;
  double rho = 1.0;
  std::uint64_t seed = 0;
  std::filesystem::path out;
};

struct RunOptions {
  std::filesystem::path data;
  std::filesystem::path out;
  SolverConfig config;  // clusters == 0 takes k from the manifest
  std::size_t restarts = 1;
};

struct EvalOptions {
  std::filesystem::path data;
  std::filesystem::path pred;
  std::filesystem::path out;
};

/// Builds the dataset and writes it to options.out.
MultiViewDataset cmd_synth(const SynthOptions& options);

/// Best of `restarts` fits by final objective (restart r uses seed + r).
/// Writes report.txt, trace.csv and labels.txt into options.out.
RunReport cmd_run(const RunOptions& options);

/// Scores a label file against the dataset labels; writes report.txt into options.out.
RunReport cmd_eval(const EvalOptions& options);

/// Full command line: 0 success, 1 runtime or numerical failure, 2 usage error.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pavuc::cli
