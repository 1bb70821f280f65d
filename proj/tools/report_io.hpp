#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pavuc/metrics.hpp"
#include "pavuc/solver.hpp"

namespace pavuc::cli {

/// Contents of report.txt. Label metrics are absent when the dataset has no
/// truth labels; objective and iterations are absent for `eval`.
struct RunReport {
  std::optional<double> acc;
  std::optional<double> nmi;
  std::optional<double> fscore;
  std::vector<double> perm_recovery;  // perm_recovery_1 .. perm_recovery_v
  std::optional<double> objective;
  std::optional<std::size_t> iterations;
  std::optional<double> seconds;

  EvaluationReport evaluation() const;
};

/// key=value lines, reals with 9 significant digits.
std::string format_report(const RunReport& report);
RunReport parse_report(std::istream& in);

void write_report(const RunReport& report, const std::filesystem::path& file);
RunReport read_report(const std::filesystem::path& file);

/// Header `iter,objective,template,phi_1..phi_v`; template is 1-based.
std::string format_trace(const IterationTrace& trace, std::size_t views);
void write_trace(const IterationTrace& trace, std::size_t views, const std::filesystem::path& file);

/// One label per line.
void write_labels(const Labels& labels, const std::filesystem::path& file);
Labels read_labels(const std::filesystem::path& file);

}  // namespace pavuc::cli
