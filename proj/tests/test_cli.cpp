#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "pavuc/data.hpp"
#include "pavuc/metrics.hpp"
#include "report_io.hpp"

using namespace pavuc;
using namespace pavuc::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "pavuc_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pavuc_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string make_dataset(const std::string& name, const std::string& rho, const std::string& n = "120") {
  const fs::path dir = scratch(name);
  const auto r = invoke({"synth", "--blobs", "n=" + n + ",k=3,v=3,dims=5:5:5,sep=20", "--rho", rho, "--seed", "7",
                         "--out", dir.string()});
  REQUIRE(r.code == 0);
  return dir.string();
}

}  // namespace

TEST_CASE("blobs argument parsing") {
  const auto b = parse_blob_spec("n=300,k=3,v=3,dims=5:6:7,sep=20");
  CHECK(b.n == 300);
  CHECK(b.k == 3);
  CHECK(b.v == 3);
  CHECK(b.dims == std::vector<std::size_t>{5, 6, 7});
  CHECK(b.separation == 20.0);
  CHECK(parse_blob_spec("n=10,k=2,v=4").dims == std::vector<std::size_t>{5, 5, 5, 5});
  CHECK_THROWS_AS(parse_blob_spec("n=10"), UsageError);
  CHECK_THROWS_AS(parse_blob_spec("n=10,k=2,v=2,dims=3"), UsageError);
  CHECK_THROWS_AS(parse_blob_spec("n=ten,k=2"), UsageError);
  CHECK_THROWS_AS(parse_blob_spec("n=10,k=2,bogus=1"), UsageError);
}

TEST_CASE("synth writes perm files and is reproducible") {
  const auto dir = make_dataset("synth_a", "0");
  const auto again = make_dataset("synth_b", "0");
  for (const char* f : {"manifest.txt", "view_1.txt", "view_2.txt", "view_3.txt", "perm_1.txt", "perm_2.txt",
                        "perm_3.txt", "labels.txt"}) {
    REQUIRE(fs::exists(fs::path(dir) / f));
    CHECK(slurp(fs::path(dir) / f) == slurp(fs::path(again) / f));
  }
  const auto ds = load_dataset(dir);
  CHECK(ds.truth_perms[1] != identity_permutation(120));

  const auto full = load_dataset(make_dataset("synth_c", "1"));
  for (const auto& p : full.truth_perms) CHECK(p == identity_permutation(120));
}

TEST_CASE("synth usage errors") {
  const fs::path dir = scratch("synth_bad");
  CHECK(invoke({"synth", "--blobs", "n=10,k=2", "--rho", "1.5", "--out", dir.string()}).code == 2);
  CHECK(invoke({"synth", "--rho", "0.5", "--out", dir.string()}).code == 2);
  CHECK(invoke({"synth", "--blobs", "n=10", "--out", dir.string()}).code == 2);
  CHECK(invoke({"synth", "--blobs", "n=10,k=2"}).code == 2);
  CHECK(invoke({"nonsense"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"synth", "--help"}).code == 0);
}

TEST_CASE("synth from an aligned input directory") {
  const auto src = make_dataset("synth_src", "1");
  const fs::path out = scratch("synth_from_input");
  const auto r = invoke({"synth", "--input", src, "--rho", "0.5", "--seed", "3", "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto ds = load_dataset(out);
  CHECK(ds.rho == 0.5);
  CHECK(ds.aligned_count() == 60);
  CHECK(ds.truth_perms[2] != identity_permutation(120));
}

TEST_CASE("run writes report, trace and labels deterministically") {
  const auto data = make_dataset("run_data", "1", "300");
  const fs::path a = scratch("run_a");
  const fs::path b = scratch("run_b");
  const auto ra = invoke({"run", "--data", data, "--out", a.string()});
  REQUIRE(ra.code == 0);
  REQUIRE(invoke({"run", "--data", data, "--out", b.string()}).code == 0);
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
  CHECK(slurp(a / "labels.txt") == slurp(b / "labels.txt"));

  const RunReport rep = read_report(a / "report.txt");
  REQUIRE(rep.acc);
  CHECK(*rep.acc >= 0.95);
  CHECK(rep.perm_recovery.size() == 3);
  for (double p : rep.perm_recovery) CHECK(p == 1.0);
  REQUIRE(rep.iterations);
  REQUIRE(rep.objective);
  CHECK(rep.seconds);

  const std::string trace = slurp(a / "trace.csv");
  CHECK(trace.rfind("iter,objective,template,phi_1,phi_2,phi_3\n", 0) == 0);
  const auto lines = std::count(trace.begin(), trace.end(), '\n');
  CHECK(static_cast<std::size_t>(lines) == *rep.iterations + 1);
}

TEST_CASE("restarts escape a view-inconsistent anchor assignment") {
  // Seed 0 on this dataset settles with two views disagreeing on which anchor
  // carries which cluster; a later restart reaches a lower objective.
  const auto data = make_dataset("run_restart", "1");
  const fs::path single = scratch("run_single");
  const fs::path multi = scratch("run_multi");
  REQUIRE(invoke({"run", "--data", data, "--out", single.string(), "--seed", "0"}).code == 0);
  REQUIRE(invoke({"run", "--data", data, "--out", multi.string(), "--seed", "0", "--restarts", "5"}).code == 0);
  const auto one = read_report(single / "report.txt");
  const auto best = read_report(multi / "report.txt");
  CHECK(*one.acc < 0.95);
  CHECK(*best.objective < *one.objective);
  CHECK(*best.acc == 1.0);
}

TEST_CASE("run edge cases") {
  const auto data = make_dataset("run_edge", "0");
  const fs::path out = scratch("run_edge_out");
  SUBCASE("max-iter 0 leaves a header-only trace") {
    REQUIRE(invoke({"run", "--data", data, "--out", out.string(), "--max-iter", "0"}).code == 0);
    CHECK(slurp(out / "trace.csv") == "iter,objective,template,phi_1,phi_2,phi_3\n");
  }
  SUBCASE("alpha at 1 is a usage error") {
    const auto r = invoke({"run", "--data", data, "--out", out.string(), "--alpha", "1.0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("alpha must exceed 1") != std::string::npos);
  }
  SUBCASE("zero restarts is a usage error") {
    CHECK(invoke({"run", "--data", data, "--out", out.string(), "--restarts", "0"}).code == 2);
  }
  SUBCASE("missing dataset is a runtime error") {
    CHECK(invoke({"run", "--data", (out / "nowhere").string(), "--out", out.string()}).code == 1);
  }
  SUBCASE("restarts keep the lowest objective") {
    REQUIRE(invoke({"run", "--data", data, "--out", (out / "one").string(), "--seed", "4"}).code == 0);
    REQUIRE(invoke({"run", "--data", data, "--out", (out / "two").string(), "--seed", "5"}).code == 0);
    REQUIRE(invoke({"run", "--data", data, "--out", (out / "both").string(), "--seed", "4", "--restarts", "2"})
                .code == 0);
    const double o1 = *read_report(out / "one" / "report.txt").objective;
    const double o2 = *read_report(out / "two" / "report.txt").objective;
    CHECK(*read_report(out / "both" / "report.txt").objective == std::min(o1, o2));
  }
}

TEST_CASE("eval") {
  const auto data = make_dataset("eval_data", "1");
  const auto ds = load_dataset(data);
  const fs::path out = scratch("eval_out");
  fs::create_directories(out);

  write_labels(*ds.labels, out / "same.txt");
  REQUIRE(invoke({"eval", "--data", data, "--pred", (out / "same.txt").string(), "--out", (out / "r1").string()})
              .code == 0);
  CHECK(*read_report(out / "r1" / "report.txt").acc == 1.0);

  Labels renamed = *ds.labels;
  for (int& l : renamed) l = 4 - l;
  write_labels(renamed, out / "renamed.txt");
  REQUIRE(invoke({"eval", "--data", data, "--pred", (out / "renamed.txt").string(), "--out", (out / "r2").string()})
              .code == 0);
  CHECK(*read_report(out / "r2" / "report.txt").acc == 1.0);

  // Four-sample case checked against hand-computed metric values.
  const fs::path tiny = out / "tiny";
  MultiViewDataset t;
  t.views = {Matrix::Identity(4, 4)};
  t.truth_perms = {identity_permutation(4)};
  t.labels = Labels{1, 1, 2, 2};
  t.clusters = 2;
  save_dataset(t, tiny);
  write_labels({1, 1, 1, 2}, out / "tiny_pred.txt");
  REQUIRE(invoke({"eval", "--data", tiny.string(), "--pred", (out / "tiny_pred.txt").string(), "--out",
                  (out / "r3").string()})
              .code == 0);
  const auto r3 = read_report(out / "r3" / "report.txt");
  CHECK(*r3.acc == doctest::Approx(0.75));
  CHECK(*r3.fscore == doctest::Approx(0.4));
  CHECK(*r3.nmi == doctest::Approx(nmi({1, 1, 2, 2}, {1, 1, 1, 2})).epsilon(1e-8));

  fs::remove(tiny / "labels.txt");
  CHECK(invoke({"eval", "--data", tiny.string(), "--pred", (out / "tiny_pred.txt").string(), "--out",
                (out / "r4").string()})
            .code == 2);
  write_labels({1, 2}, out / "short.txt");
  CHECK(invoke({"eval", "--data", data, "--pred", (out / "short.txt").string(), "--out", (out / "r5").string()})
            .code == 2);
}

TEST_CASE("report round trip at printed precision") {
  RunReport r;
  r.acc = 0.123456789123;
  r.nmi = 1.0 / 3.0;
  r.fscore = 0.5;
  r.perm_recovery = {1.0, 0.987654321987, 0.25};
  r.objective = 12345.6789012345;
  r.iterations = 17;
  r.seconds = 0.0421;
  std::istringstream in(format_report(r));
  const RunReport back = parse_report(in);
  CHECK(*back.acc == doctest::Approx(*r.acc).epsilon(1e-8));
  CHECK(*back.nmi == doctest::Approx(*r.nmi).epsilon(1e-8));
  CHECK(*back.fscore == *r.fscore);
  REQUIRE(back.perm_recovery.size() == 3);
  CHECK(back.perm_recovery[1] == doctest::Approx(0.987654321987).epsilon(1e-8));
  CHECK(*back.objective == doctest::Approx(*r.objective).epsilon(1e-8));
  CHECK(*back.iterations == 17);
  CHECK(format_report(back) == format_report(r));
  const auto ev = back.evaluation();
  CHECK(ev.perm_recovery.size() == 3);
  CHECK(ev.wall_time_seconds == doctest::Approx(0.0421));

  std::istringstream bad("acc=zero\n");
  CHECK_THROWS(parse_report(bad));
}
