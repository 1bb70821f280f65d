#include "commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <ostream>

#include "pavuc/error.hpp"
#include "pavuc/metrics.hpp"
#include "pavuc/solver.hpp"

namespace pavuc::cli {

namespace fs = std::filesystem;

namespace {

template <typename T>
T parse_field(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw UsageError("--blobs: bad value for " + key + ": '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

double final_objective(const ClusteringResult& r) {
  return r.trace.empty() ? r.initial_objective : r.trace.records.back().objective;
}

}  // namespace

BlobSpec parse_blob_spec(const std::string& text) {
  BlobSpec spec;
  bool has_n = false;
  bool has_k = false;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--blobs: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "n") {
      spec.n = parse_field<std::size_t>(key, value);
      has_n = true;
    } else if (key == "k") {
      spec.k = parse_field<std::size_t>(key, value);
      has_k = true;
    } else if (key == "v") {
      spec.v = parse_field<std::size_t>(key, value);
    } else if (key == "sep") {
      spec.separation = parse_field<double>(key, value);
    } else if (key == "dims") {
      spec.dims.clear();
      for (const auto& d : split(value, ':')) spec.dims.push_back(parse_field<std::size_t>(key, d));
    } else {
      throw UsageError("--blobs: unknown key '" + key + "'");
    }
  }
  if (!has_n || !has_k) throw UsageError("--blobs requires n and k");
  if (spec.n == 0 || spec.k == 0 || spec.v == 0) throw UsageError("--blobs: n, k and v must be positive");
  if (spec.k > spec.n) throw UsageError("--blobs: k must not exceed n");
  if (spec.dims.empty()) spec.dims.assign(spec.v, 5);
  if (spec.dims.size() != spec.v) throw UsageError("--blobs: dims must list one size per view");
  for (auto d : spec.dims)
    if (d == 0) throw UsageError("--blobs: dims must be positive");
  if (!(spec.separation >= 0.0)) throw UsageError("--blobs: sep must be non-negative");
  return spec;
}

MultiViewDataset cmd_synth(const SynthOptions& options) {
  if (options.blobs.has_value() == options.input.has_value())
    throw UsageError("synth needs exactly one of --blobs or --input");
  if (!(options.rho >= 0.0 && options.rho <= 1.0)) throw UsageError("--rho must lie in [0, 1]");
  MultiViewDataset aligned;
  if (options.blobs) {
    const auto& b = *options.blobs;
    aligned = make_blobs(b.n, b.k, b.v, b.dims, b.separation, options.seed);
  } else {
    aligned = load_dataset(*options.input);
  }
  MultiViewDataset out = synthesize_unaligned(aligned, options.rho, options.seed);
  save_dataset(out, options.out);
  return out;
}

RunReport cmd_run(const RunOptions& options) {
  if (options.restarts < 1) throw UsageError("--restarts must be at least 1");
  const MultiViewDataset ds = load_dataset(options.data);
  SolverConfig config = options.config;
  if (config.clusters == 0) config.clusters = ds.clusters;
  if (config.clusters == 0) throw UsageError("--clusters is required when the manifest does not give k");
  validate(config, ds);

  const auto start = std::chrono::steady_clock::now();
  std::optional<ClusteringResult> best;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    SolverConfig c = config;
    c.seed = config.seed + r;
    ClusteringResult result = fit(ds, c);
    if (!best || final_objective(result) < final_objective(*best)) best = std::move(result);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RunReport report;
  if (ds.labels) {
    report.acc = accuracy(*ds.labels, best->labels);
    report.nmi = nmi(*ds.labels, best->labels);
    report.fscore = pairwise_fscore(*ds.labels, best->labels);
  }
  for (std::size_t i = 0; i < ds.view_count(); ++i)
    report.perm_recovery.push_back(
        permutation_recovery(estimated_correspondence(best->state, i), ds.truth_perms[i], ds.aligned_count()));
  report.objective = final_objective(*best);
  report.iterations = best->trace.size();
  report.seconds = seconds;

  fs::create_directories(options.out);
  write_report(report, options.out / "report.txt");
  write_trace(best->trace, ds.view_count(), options.out / "trace.csv");
  write_labels(best->labels, options.out / "labels.txt");
  return report;
}

RunReport cmd_eval(const EvalOptions& options) {
  const MultiViewDataset ds = load_dataset(options.data);
  if (!ds.labels) throw UsageError("dataset " + options.data.string() + " has no truth labels");
  const Labels pred = read_labels(options.pred);
  if (pred.size() != ds.labels->size())
    throw UsageError("prediction file has " + std::to_string(pred.size()) + " labels, dataset has " +
                     std::to_string(ds.labels->size()));
  RunReport report;
  report.acc = accuracy(*ds.labels, pred);
  report.nmi = nmi(*ds.labels, pred);
  report.fscore = pairwise_fscore(*ds.labels, pred);
  fs::create_directories(options.out);
  write_report(report, options.out / "report.txt");
  return report;
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Clustering of view-unaligned multi-view data with anchor graphs and learned alignment"};
  app.require_subcommand(1);

  SynthOptions synth;
  std::string blobs_text;
  std::string input_text;
  std::string synth_out;
  auto* s = app.add_subcommand("synth", "Write a shuffled multi-view dataset");
  s->add_option("--blobs", blobs_text, "Gaussian blobs: n=,k=,v=,dims=a:b:c,sep=");
  s->add_option("--input", input_text, "Fully aligned dataset directory to shuffle");
  s->add_option("--rho", synth.rho, "Aligned fraction in [0, 1]")->capture_default_str();
  s->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  s->add_option("--out", synth_out, "Output directory")->required();

  RunOptions run;
  std::string run_data;
  std::string run_out;
  bool no_align = false;
  auto* r = app.add_subcommand("run", "Cluster a dataset and report metrics");
  r->add_option("--data", run_data, "Dataset directory")->required();
  r->add_option("--out", run_out, "Output directory")->required();
  r->add_option("--clusters", run.config.clusters, "Number of clusters k (default: manifest k)");
  r->add_option("--alpha", run.config.alpha, "View-weight exponent, > 1")->capture_default_str();
  r->add_option("--mu", run.config.mu, "Alignment trade-off, > 0")->capture_default_str();
  r->add_option("--anchors", run.config.anchors, "Anchor count m (default: k)");
  r->add_option("--latent-dim", run.config.latent_dim, "Latent dimension (default: smallest view dimension)");
  r->add_option("--max-iter", run.config.max_iter, "Iteration cap")->capture_default_str();
  r->add_option("--rel-tol", run.config.rel_tol, "Relative objective tolerance")->capture_default_str();
  r->add_option("--eps-guard", run.config.eps_guard, "Denominator guard")->capture_default_str();
  r->add_option("--seed", run.config.seed, "Random seed")->capture_default_str();
  r->add_option("--restarts", run.restarts, "Independent fits; the lowest objective wins")->capture_default_str();
  r->add_flag("--no-align", no_align, "Keep every permutation at the identity");

  EvalOptions eval;
  std::string eval_data;
  std::string eval_pred;
  std::string eval_out;
  auto* e = app.add_subcommand("eval", "Score predicted labels against dataset labels");
  e->add_option("--data", eval_data, "Dataset directory")->required();
  e->add_option("--pred", eval_pred, "Predicted labels, one per line")->required();
  e->add_option("--out", eval_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err) == 0 ? 0 : 2;
  }

  try {
    if (s->parsed()) {
      if (!blobs_text.empty()) synth.blobs = parse_blob_spec(blobs_text);
      if (!input_text.empty()) synth.input = input_text;
      synth.out = synth_out;
      const auto ds = cmd_synth(synth);
      out << "wrote " << ds.view_count() << " views, " << ds.sample_count() << " samples to " << synth.out.string()
          << "\n";
    } else if (r->parsed()) {
      run.data = run_data;
      run.out = run_out;
      run.config.align = !no_align;
      out << format_report(cmd_run(run));
    } else {
      eval.data = eval_data;
      eval.pred = eval_pred;
      eval.out = eval_out;
      out << format_report(cmd_eval(eval));
    }
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return 2;
  } catch (const ConfigError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return 2;
  } catch (const NumericalFailure& ex) {
    err << "numerical failure at iteration " << ex.iteration() << ": " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace pavuc::cli
