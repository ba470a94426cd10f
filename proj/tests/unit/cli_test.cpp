#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "unsafe_audit/cli.hpp"
#include "unsafe_audit/report.hpp"

using namespace unsafe_audit;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& rel) { return (ua_test::fixtures() / rel).string(); }

int binary_exit(const std::string& args) {
  const std::string cmd = std::string(UA_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("lint exit codes") {
  CHECK(run_cli({"lint", fx("lint/strbytes")}).code == 1);
  CHECK(run_cli({"lint", fx("lint/safe")}).code == 0);
  CHECK(run_cli({"lint", fx("lint/does-not-exist")}).code == 2);
  CHECK(run_cli({"lint", "--format", "tree", fx("lint/safe")}).code == 2);
}

TEST_CASE("lint output names the pass, one line per diagnostic") {
  const Result r = run_cli({"lint", fx("lint/strbytes")});
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
  CHECK(r.out.find("[sliceheader]") != std::string::npos);
  CHECK(r.out.find("conv.go:10:17:") != std::string::npos);
  const Result j = run_cli({"lint", "--format", "json", fx("lint/strbytes")});
  CHECK(j.out.rfind("[", 0) == 0);
}

TEST_CASE("structcast-flat changes the counting rule") {
  const Result deep = run_cli({"lint", fx("lint/nested")});
  const Result flat = run_cli({"lint", "--structcast-flat", fx("lint/nested")});
  CHECK(deep.code == 1);
  CHECK(flat.code == 1);
  CHECK(deep.out.find("1 vs 4") != std::string::npos);
  CHECK(flat.out.find("0 vs 4") != std::string::npos);
}

TEST_CASE("lint --deps covers resolved dependencies") {
  const std::string mc = fx("modcache");
  const Result plain = run_cli({"lint", "--module-cache", mc, fx("stats/alpha")});
  CHECK(plain.code == 0);
  const Result deps = run_cli({"lint", "--deps", "--module-cache", mc, fx("census/corpus/...")});
  CHECK(deps.code == 1);
}

TEST_CASE("census CSV of a package without findings is the header") {
  const Result r = run_cli({"census", "--format", "csv", fx("census/corpus/immune")});
  CHECK(r.code == 0);
  CHECK(r.out == std::string(kCensusCsvHeader) + "\n");
}

TEST_CASE("census exits 0 despite findings and unresolved imports") {
  const Result r = run_cli({"census", fx("census/corpus/policyconv")});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("example.com/corpus/policyconv [local 1 | cumulative 1]", 0) == 0);
  CHECK(r.err.find("unresolved import k8s.io/apiserver/pkg/apis/audit") != std::string::npos);
}

TEST_CASE("census CSV parses back and is sorted") {
  const Result r = run_cli({"census", "--format", "csv", "--module-cache", fx("modcache"),
                            fx("census/corpus/...")});
  const auto findings = parse_census_csv(r.out);
  CHECK(findings.size() == 39);
  CHECK(std::is_sorted(findings.begin(), findings.end(), finding_less));
}

TEST_CASE("census output is identical across worker counts") {
  const std::vector<std::string> base = {"census", "--module-cache", fx("modcache"),
                                         fx("census/corpus/...")};
  for (const char* fmt : {"csv", "json", "tree"}) {
    auto one = base;
    one.insert(one.end(), {"--format", fmt, "--jobs", "1"});
    auto eight = base;
    eight.insert(eight.end(), {"--format", fmt, "--jobs", "8"});
    CHECK(run_cli(one).out == run_cli(eight).out);
  }
}

TEST_CASE("census tree options") {
  const std::string mc = fx("modcache");
  const Result shallow = run_cli({"census", "--module-cache", mc, "--max-depth", "1",
                                  fx("census/corpus/cmd/app")});
  CHECK(shallow.out.find("github.com/BurntSushi/toml") == std::string::npos);
  CHECK(shallow.out.find("example.com/corpus/usetoml") != std::string::npos);
  const Result code = run_cli({"census", "--module-cache", mc, "--show-code",
                               fx("census/corpus/noescape")});
  CHECK(code.out.find("UnsafePointer/Parameter") != std::string::npos);
}

TEST_CASE("--include-tests adds _test.go files") {
  const Result off = run_cli({"census", "--format", "csv", fx("census/corpus/clean")});
  const Result on =
      run_cli({"census", "--format", "csv", "--include-tests", fx("census/corpus/clean")});
  CHECK(std::count(off.out.begin(), off.out.end(), '\n') == 1);
  CHECK(std::count(on.out.begin(), on.out.end(), '\n') == 2);
}

TEST_CASE("module cache falls back to the environment") {
  ::setenv("UNSAFE_AUDIT_MODCACHE", fx("modcache").c_str(), 1);
  const Result r = run_cli({"census", fx("census/corpus/usetoml")});
  ::unsetenv("UNSAFE_AUDIT_MODCACHE");
  CHECK(r.out.find("github.com/BurntSushi/toml@v1.0.0 [local 3") != std::string::npos);
}

TEST_CASE("stats usage errors") {
  const Result r = run_cli({"stats"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"census", "--max-depth", "x"}).code == 2);
  CHECK(run_cli({"stats", fx("nowhere")}).code == 2);
}

TEST_CASE("stats over the three-project corpus") {
  const Result r = run_cli({"stats", "--module-cache", fx("modcache"), fx("stats/alpha"),
                            fx("stats/beta"), fx("stats/gamma")});
  REQUIRE(r.code == 0);
  const CorpusStats s = parse_stats_json(r.out);
  CHECK(s.project_count == 3);
  CHECK(s.direct_unsafe_share == 1.0 / 3.0);
  CHECK(s.transitive_unsafe_share == 1.0);
  CHECK(s.first_level_share == 0.75);
  const Result csv = run_cli({"stats", "--format", "csv", "--module-cache", fx("modcache"),
                              fx("stats/alpha"), fx("stats/beta"), fx("stats/gamma")});
  CHECK(csv.out == "depth,packages\n1,3\n2,1\n");
}

TEST_CASE("--output writes the report atomically") {
  const auto dir = std::filesystem::temp_directory_path() / "ua_cli_output_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "report.csv";
  const Result r = run_cli({"census", "--format", "csv", "--output", file.string(),
                            fx("census/corpus/policyconv")});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(file);
  std::string first;
  std::getline(in, first);
  CHECK(first == kCensusCsvHeader);
  CHECK_FALSE(std::filesystem::exists(file.string() + ".partial"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("help exits 0") { CHECK(run_cli({"--help"}).code == 0); }

TEST_CASE("the installed binary honours the exit-code contract") {
  CHECK(binary_exit("lint " + fx("lint/strbytes")) == 1);
  CHECK(binary_exit("lint " + fx("lint/safe")) == 0);
  CHECK(binary_exit("lint " + fx("lint/no-such-package")) == 2);
  CHECK(binary_exit("stats") == 2);
  CHECK(binary_exit("census " + fx("census/corpus/immune")) == 0);
}

TEST_CASE("target expansion") {
  const auto all = expand_target(fx("census/corpus/..."));
  CHECK(all.size() == 12);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(expand_target(fx("census/corpus/alias")).size() == 1);
  CHECK_THROWS_AS((void)expand_target(fx("missing/...")), IoError);
}

}  // TEST_SUITE
