#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks against the installed binary (path injected by CMake).

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  static int counter = 0;
  const fs::path out = fs::path("cli_scratch") / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = fs::path("cli_scratch") / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd =
      std::string("\"") + CLI_PATH + "\" " + args + " > " + out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

const char* kSmallConfig =
    "seed = 5\n"
    "class_count.Pattern1 = 8\n"
    "class_count.Pattern2 = 6\n"
    "class_count.Pattern3 = 4\n"
    "class_count.Pattern4 = 4\n"
    "class_count.Pattern5 = 4\n"
    "class_count.Other = 8\n"
    "class_count.Pattern1|Pattern2 = 2\n";

void setup_scratch() {
  fs::remove_all("cli_scratch");
  fs::create_directories("cli_scratch");
  std::ofstream cfg("cli_scratch/small.cfg", std::ios::binary);
  cfg << kSmallConfig;
}

}  // namespace

TEST_CASE("the full command pipeline runs green on a small dataset") {
  setup_scratch();

  auto gen = run("generate --config cli_scratch/small.cfg --out cli_scratch/data");
  CHECK(gen.exit_code == 0);
  CHECK(gen.out == "heads=36 labels=38\n");

  auto feat = run("features --data cli_scratch/data");
  CHECK(feat.exit_code == 0);
  CHECK(feat.out.find("rows=36 columns=256") != std::string::npos);
  CHECK(fs::exists("cli_scratch/data/features.csv"));
  CHECK(fs::exists("cli_scratch/data/catalog.txt"));

  auto base = run("baseline --data cli_scratch/data --out cli_scratch/out");
  CHECK(base.exit_code == 0);
  CHECK(base.out.find("model=rules") == 0);
  CHECK(fs::exists("cli_scratch/out/eval-rules.md"));
  CHECK(fs::exists("cli_scratch/out/eval-rules.csv"));
  CHECK(fs::exists("cli_scratch/out/eval-rules.svg"));

  auto ev = run("evaluate --seed 7 --data cli_scratch/data --out cli_scratch/out --model dt");
  CHECK(ev.exit_code == 0);
  CHECK(ev.out.find("model=ovr-dt") == 0);
  CHECK(fs::exists("cli_scratch/out/train-ovr-dt.csv"));
  CHECK(fs::exists("cli_scratch/out/model-ovr-dt.txt"));
  CHECK(fs::exists("cli_scratch/out/pipeline-ovr-dt.txt"));

  auto loo = run(
      "evaluate --seed 7 --data cli_scratch/data --out cli_scratch/out --model rf --loocv "
      "--exclude-class Other");
  CHECK(loo.exit_code == 0);
  CHECK(loo.out.find("model=ovr-rf") == 0);
  CHECK(fs::exists("cli_scratch/out/eval-ovr-rf.csv"));
  CHECK(fs::exists("cli_scratch/out/importance-ovr-rf.md"));

  auto tune = run(
      "tune --seed 7 --data cli_scratch/data --out cli_scratch/out --model knn --folds 3");
  CHECK(tune.exit_code == 0);
  CHECK(tune.out.find("best=k=") == 0);
  CHECK(fs::exists("cli_scratch/out/tune-ovr-knn.md"));
  CHECK(fs::exists("cli_scratch/out/best-ovr-knn.txt"));
  CHECK(slurp("cli_scratch/out/best-ovr-knn.txt").find("knn.k = ") != std::string::npos);

  auto cmp = run("compare cli_scratch/out/eval-rules.csv cli_scratch/out/eval-ovr-rf.csv "
                 "--out cli_scratch/out");
  CHECK(cmp.exit_code == 0);
  CHECK(cmp.out.find("| Class |") != std::string::npos);
  CHECK(fs::exists("cli_scratch/out/compare-rules-vs-ovr-rf.md"));
}

TEST_CASE("artifacts are byte-identical across repeated runs") {
  setup_scratch();
  REQUIRE(run("generate --config cli_scratch/small.cfg --out cli_scratch/a").exit_code == 0);
  REQUIRE(run("generate --config cli_scratch/small.cfg --out cli_scratch/b").exit_code == 0);
  CHECK(slurp("cli_scratch/a/logs.tsv") == slurp("cli_scratch/b/logs.tsv"));
  CHECK(slurp("cli_scratch/a/manifest.csv") == slurp("cli_scratch/b/manifest.csv"));

  REQUIRE(run("features --data cli_scratch/a").exit_code == 0);
  REQUIRE(run("features --data cli_scratch/b").exit_code == 0);
  CHECK(slurp("cli_scratch/a/features.csv") == slurp("cli_scratch/b/features.csv"));

  REQUIRE(run("baseline --data cli_scratch/a --out cli_scratch/oa").exit_code == 0);
  REQUIRE(run("baseline --data cli_scratch/b --out cli_scratch/ob").exit_code == 0);
  for (const char* stem : {"eval-rules.md", "eval-rules.csv", "eval-rules.svg"})
    CHECK(slurp(fs::path("cli_scratch/oa") / stem) == slurp(fs::path("cli_scratch/ob") / stem));

  REQUIRE(run("evaluate --seed 9 --data cli_scratch/a --out cli_scratch/oa --model dt").exit_code ==
          0);
  REQUIRE(run("evaluate --seed 9 --data cli_scratch/b --out cli_scratch/ob --model dt").exit_code ==
          0);
  CHECK(slurp("cli_scratch/oa/model-ovr-dt.txt") == slurp("cli_scratch/ob/model-ovr-dt.txt"));
  CHECK(slurp("cli_scratch/oa/train-ovr-dt.csv") == slurp("cli_scratch/ob/train-ovr-dt.csv"));
}

TEST_CASE("user mistakes exit with code 2 and a pointed message") {
  setup_scratch();

  auto noseed = run("generate --out cli_scratch/data");
  CHECK(noseed.exit_code == 2);
  CHECK(noseed.err.find("seed") != std::string::npos);

  auto nodata = run("features --data cli_scratch/missing");
  CHECK(nodata.exit_code == 2);

  REQUIRE(run("generate --config cli_scratch/small.cfg --out cli_scratch/data").exit_code == 0);
  REQUIRE(run("features --data cli_scratch/data").exit_code == 0);

  auto badmodel =
      run("evaluate --seed 1 --data cli_scratch/data --out cli_scratch/out --model svm");
  CHECK(badmodel.exit_code == 2);
  CHECK(badmodel.err.find("unknown model") != std::string::npos);

  auto badflag = run("evaluate --seed 1 --frobnicate");
  CHECK(badflag.exit_code == 2);

  auto badgrid = run(
      "tune --seed 1 --data cli_scratch/data --out cli_scratch/out --model dt --grid exotic");
  CHECK(badgrid.exit_code == 2);

  // Corrupt one log line: the error must cite it.
  {
    std::ifstream in("cli_scratch/data/logs.tsv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    std::size_t pos = 0;
    for (int line = 1; line < 3; ++line) pos = text.find('\n', pos) + 1;
    text.replace(pos, text.find('\n', pos) - pos, "garbage");
    std::ofstream out("cli_scratch/data/logs.tsv", std::ios::binary);
    out << text;
  }
  auto corrupt = run("features --data cli_scratch/data");
  CHECK(corrupt.exit_code == 2);
  CHECK(corrupt.err.find("line 3") != std::string::npos);

  auto mismatch = run("compare cli_scratch/missing.csv cli_scratch/missing2.csv");
  CHECK(mismatch.exit_code == 2);

  auto help = run("--help");
  CHECK(help.exit_code == 0);
}
