#include "report_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pavuc/data.hpp"
#include "pavuc/error.hpp"

namespace pavuc::cli {

namespace {

std::string real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

double parse_real(const std::string& key, const std::string& text) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end) throw LoadError("report: bad value for " + key + ": " + text);
  return x;
}

void write_text(const std::string& text, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw LoadError("cannot write " + file.string());
  out << text;
  if (!out) throw LoadError("cannot write " + file.string());
}

}  // namespace

EvaluationReport RunReport::evaluation() const {
  EvaluationReport r;
  r.acc = acc.value_or(0.0);
  r.nmi = nmi.value_or(0.0);
  r.fscore = fscore.value_or(0.0);
  r.perm_recovery = perm_recovery;
  r.wall_time_seconds = seconds.value_or(0.0);
  return r;
}

std::string format_report(const RunReport& report) {
  std::string s;
  auto line = [&s](const std::string& key, const std::string& value) { s += key + "=" + value + "\n"; };
  if (report.acc) line("acc", real(*report.acc));
  if (report.nmi) line("nmi", real(*report.nmi));
  if (report.fscore) line("fscore", real(*report.fscore));
  for (std::size_t i = 0; i < report.perm_recovery.size(); ++i)
    line("perm_recovery_" + std::to_string(i + 1), real(report.perm_recovery[i]));
  if (report.objective) line("objective", real(*report.objective));
  if (report.iterations) line("iters", std::to_string(*report.iterations));
  if (report.seconds) line("seconds", real(*report.seconds));
  return s;
}

RunReport parse_report(std::istream& in) {
  RunReport r;
  std::string line;
  const std::string prefix = "perm_recovery_";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw LoadError("report: missing '=' in line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "acc") {
      r.acc = parse_real(key, value);
    } else if (key == "nmi") {
      r.nmi = parse_real(key, value);
    } else if (key == "fscore") {
      r.fscore = parse_real(key, value);
    } else if (key == "objective") {
      r.objective = parse_real(key, value);
    } else if (key == "seconds") {
      r.seconds = parse_real(key, value);
    } else if (key == "iters") {
      std::size_t it = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), it);
      if (ec != std::errc() || ptr != value.data() + value.size()) throw LoadError("report: bad iters: " + value);
      r.iterations = it;
    } else if (key.rfind(prefix, 0) == 0) {
      std::size_t idx = 0;
      const std::string digits = key.substr(prefix.size());
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
      if (ec != std::errc() || ptr != digits.data() + digits.size() || idx == 0)
        throw LoadError("report: bad key " + key);
      if (r.perm_recovery.size() < idx) r.perm_recovery.resize(idx, 0.0);
      r.perm_recovery[idx - 1] = parse_real(key, value);
    } else {
      throw LoadError("report: unknown key " + key);
    }
  }
  return r;
}

void write_report(const RunReport& report, const std::filesystem::path& file) {
  write_text(format_report(report), file);
}

RunReport read_report(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw LoadError("cannot open " + file.string());
  return parse_report(in);
}

std::string format_trace(const IterationTrace& trace, std::size_t views) {
  std::string s = "iter,objective,template";
  for (std::size_t i = 1; i <= views; ++i) s += ",phi_" + std::to_string(i);
  s += "\n";
  for (const auto& rec : trace.records) {
    s += std::to_string(rec.iteration) + "," + real(rec.objective) + "," + std::to_string(rec.template_view + 1);
    for (Eigen::Index i = 0; i < rec.phi.size(); ++i) s += "," + real(rec.phi[i]);
    s += "\n";
  }
  return s;
}

void write_trace(const IterationTrace& trace, std::size_t views, const std::filesystem::path& file) {
  write_text(format_trace(trace, views), file);
}

void write_labels(const Labels& labels, const std::filesystem::path& file) {
  std::string s;
  for (int l : labels) s += std::to_string(l) + "\n";
  write_text(s, file);
}

Labels read_labels(const std::filesystem::path& file) {
  const auto raw = read_integers(file);
  Labels out;
  out.reserve(raw.size());
  for (long long x : raw) out.push_back(static_cast<int>(x));
  return out;
}

}  // namespace pavuc::cli
