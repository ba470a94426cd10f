#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "unsafe_audit/report.hpp"

using namespace unsafe_audit;

namespace {

UnsafeFinding finding(std::string file, std::uint32_t line, std::string snippet) {
  UnsafeFinding f;
  f.module_path = "example.com/m";
  f.module_version = "v1.0.0";
  f.package_path = "example.com/m/p";
  f.file = std::move(file);
  f.line = line;
  f.column = 3;
  f.token = TokenKind::UnsafePointer;
  f.context = ContextKind::Assignment;
  f.snippet = std::move(snippet);
  return f;
}

// Hand-built graph: root -> {b, c}, b -> d, c -> d, d -> e
DepGraph diamond() {
  DepGraph g;
  auto root = std::make_shared<ModuleInfo>();
  root->module_path = "root";
  auto dep = std::make_shared<ModuleInfo>();
  dep->module_path = "x";
  dep->version = "v1.0.0";
  const char* names[] = {"root", "x/b", "x/c", "x/d", "x/e"};
  const std::uint64_t local[] = {2, 0, 1, 3, 4};
  for (int i = 0; i < 5; ++i) {
    PackageNode n;
    n.package_path = names[i];
    n.module = i == 0 ? root : dep;
    n.local_counts[TokenKind::UnsafePointer] = local[i];
    g.nodes.push_back(n);
  }
  g.nodes[0].children = {1, 2};
  g.nodes[1].children = {3};
  g.nodes[2].children = {3};
  g.nodes[3].children = {4};
  g.nodes[0].depth = 0;
  g.nodes[1].depth = g.nodes[2].depth = 1;
  g.nodes[3].depth = 2;
  g.nodes[4].depth = 3;
  g.roots = {0};
  g.root_module = root;
  compute_cumulative_serial(g);
  return g;
}

CorpusProjectSummary project(std::string name, bool direct, bool transitive,
                             std::map<int, std::uint64_t> hist) {
  CorpusProjectSummary p;
  p.project = std::move(name);
  p.has_direct_unsafe = direct;
  p.has_transitive_nonstd_unsafe = transitive;
  p.depth_histogram = std::move(hist);
  return p;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("census CSV: header only when empty") {
  CHECK(emit_census_csv({}) == std::string(kCensusCsvHeader) + "\n");
}

TEST_CASE("census CSV: RFC 4180 quoting") {
  const auto text = emit_census_csv({finding("a.go", 1, "f(a, b)"), finding("b.go", 2, "say \"hi\"")});
  CHECK(text.find("\"f(a, b)\"") != std::string::npos);
  CHECK(text.find("\"say \"\"hi\"\"\"") != std::string::npos);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a\nb") == "\"a\nb\"");
}

TEST_CASE("census CSV round trip") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pick(0, 5);
  const char* snippets[] = {"x := 1", "a, b", "q\"q", "", "tab\there", "multi\nline"};
  std::vector<UnsafeFinding> fs;
  for (std::uint32_t i = 0; i < 50; ++i) {
    auto f = finding("f" + std::to_string(i % 4) + ".go", i, snippets[pick(rng)]);
    f.token = kAllTokenKinds[i % kTokenKindCount];
    f.context = kAllContextKinds[i % kContextKindCount];
    fs.push_back(f);
  }
  std::sort(fs.begin(), fs.end(), finding_less);
  CHECK(parse_census_csv(emit_census_csv(fs)) == fs);
}

TEST_CASE("census CSV parser rejects malformed input") {
  CHECK_THROWS_AS((void)parse_census_csv("bad,header\n"), AuditError);
  CHECK_THROWS_AS((void)parse_census_csv(std::string(kCensusCsvHeader) + "\na,b\n"), AuditError);
  CHECK_THROWS_AS((void)parse_csv("\"open"), AuditError);
  CHECK(parse_csv("a,b\r\nc,\"d,e\"\n") ==
        std::vector<std::vector<std::string>>{{"a", "b"}, {"c", "d,e"}});
}

TEST_CASE("tree: single root") {
  DepGraph g;
  PackageNode n;
  n.package_path = "root";
  n.local_counts[TokenKind::Uintptr] = 2;
  n.cumulative_counts = n.local_counts;
  g.nodes.push_back(n);
  g.roots = {0};
  CHECK(render_tree(g) == "root [local 2 | cumulative 2]\n");
}

TEST_CASE("tree: shared node expanded once, elsewhere a back-reference") {
  const DepGraph g = diamond();
  const std::string expected =
      "root [local 2 | cumulative 10]\n"
      "  x/b@v1.0.0 [local 0 | cumulative 7]\n"
      "    x/d@v1.0.0 [local 3 | cumulative 7]\n"
      "      x/e@v1.0.0 [local 4 | cumulative 4]\n"
      "  x/c@v1.0.0 [local 1 | cumulative 8]\n"
      "    x/d@v1.0.0 (*)\n";
  CHECK(render_tree(g) == expected);
}

TEST_CASE("tree: max depth keeps cumulative counts") {
  const DepGraph g = diamond();
  TreeOptions opts;
  opts.max_depth = 1;
  const std::string expected =
      "root [local 2 | cumulative 10]\n"
      "  x/b@v1.0.0 [local 0 | cumulative 7]\n"
      "  x/c@v1.0.0 [local 1 | cumulative 8]\n";
  CHECK(render_tree(g, opts) == expected);
}

TEST_CASE("tree: printed cumulative counts equal the graph values") {
  const DepGraph g = diamond();
  const std::string text = render_tree(g);
  for (const auto& n : g.nodes) {
    const std::string needle = "| cumulative " + std::to_string(n.cumulative_counts.total()) + "]";
    CHECK(text.find(needle) != std::string::npos);
  }
}

TEST_CASE("tree: std nodes hidden unless requested") {
  DepGraph g = diamond();
  g.nodes[4].is_std = true;
  CHECK(render_tree(g).find("x/e") == std::string::npos);
  TreeOptions opts;
  opts.show_std = true;
  CHECK(render_tree(g, opts).find("x/e") != std::string::npos);
}

TEST_CASE("census JSON has stable keys") {
  const std::string a = emit_census_json(diamond());
  const std::string b = emit_census_json(diamond());
  CHECK(a == b);
  CHECK(a.find("\"root_module\": \"root\"") < a.find("\"packages\""));
}

TEST_CASE("depth moments: {1,3,3,5}") {
  auto [mean, sd] = depth_moments({{1, 1}, {3, 2}, {5, 1}});
  CHECK(mean == 3.0);
  CHECK(std::abs(sd - std::sqrt(2.0)) < 1e-9);
  auto [m0, s0] = depth_moments({});
  CHECK(m0 == 0.0);
  CHECK(s0 == 0.0);
}

TEST_CASE("stats: shares over three projects") {
  std::vector<CorpusProjectSummary> ps = {
      project("a", true, true, {{1, 1}}),
      project("b", false, true, {{3, 2}}),
      project("c", false, true, {{5, 1}}),
  };
  ps[0].first_level_dep_count = 3;
  ps[0].first_level_unsafe_dep_count = 1;
  ps[1].first_level_dep_count = 1;
  const CorpusStats s = compute_stats(ps);
  CHECK(s.project_count == 3);
  CHECK(s.direct_unsafe_share == 1.0 / 3.0);
  CHECK(s.transitive_unsafe_share == 1.0);
  CHECK(s.first_level_share == 0.25);
  CHECK(s.depth_mean == 3.0);
  CHECK(std::abs(s.depth_sd - std::sqrt(2.0)) < 1e-9);
}

TEST_CASE("stats: single project without unsafe") {
  const CorpusStats s = compute_stats({project("solo", false, false, {})});
  CHECK(s.direct_unsafe_share == 0.0);
  CHECK(s.transitive_unsafe_share == 0.0);
  CHECK(s.depth_histogram.empty());
}

TEST_CASE("stats: empty corpus is an error") {
  CHECK_THROWS_AS((void)compute_stats({}), EmptyCorpus);
}

TEST_CASE("stats: package-version grouping counts shared packages once") {
  auto a = project("a", false, true, {});
  auto b = project("b", false, true, {});
  PackageSummary shared;
  shared.package_path = "x/shared";
  shared.version = "v1.0.0";
  shared.tokens[TokenKind::UnsafePointer] = 2;
  a.packages.push_back(shared);
  b.packages.push_back(shared);
  const CorpusStats s = compute_stats({a, b});
  CHECK(s.tokens_per_project[TokenKind::UnsafePointer] == 4);
  CHECK(s.tokens_per_package_version[TokenKind::UnsafePointer] == 2);
}

TEST_CASE("stats JSON round trip") {
  auto a = project("a", true, true, {{1, 3}, {2, 1}});
  PackageSummary p;
  p.package_path = "x";
  p.tokens[TokenKind::Uintptr] = 7;
  p.contexts[ContextKind::Call] = 7;
  a.packages.push_back(p);
  const CorpusStats s = compute_stats({a, project("b", false, false, {})});
  const std::string json = emit_stats_json(s, {a});
  CHECK(parse_stats_json(json) == s);
  CHECK(json.find("\"depth_sd_kind\": \"population\"") != std::string::npos);
  CHECK_THROWS_AS((void)parse_stats_json("{"), AuditError);
}

TEST_CASE("plot-ready CSV tables") {
  auto a = project("a", true, true, {{1, 3}, {2, 1}});
  const CorpusStats s = compute_stats({a});
  CHECK(emit_histogram_csv(s) == "depth,packages\n1,3\n2,1\n");
  const std::string dist = emit_token_distribution_csv(s);
  CHECK(dist.rfind("grouping,token,count\n", 0) == 0);
  CHECK(std::count(dist.begin(), dist.end(), '\n') == 1 + 2 * static_cast<long>(kTokenKindCount));
}

TEST_CASE("diagnostics: text and JSON") {
  CHECK(emit_diagnostics({}, DiagnosticFormat::Text).empty());
  Diagnostic d;
  d.file = "p/a.go";
  d.line = 3;
  d.column = 7;
  d.message = "msg";
  CHECK(emit_diagnostics({d}, DiagnosticFormat::Text) == "p/a.go:3:7: [sliceheader] msg\n");
  d.severity = Severity::Info;
  d.pass = LintPass::Structcast;
  CHECK(emit_diagnostics({d}, DiagnosticFormat::Text) == "p/a.go:3:7: [structcast] info: msg\n");
  const std::string json = emit_diagnostics({d}, DiagnosticFormat::Json);
  CHECK(json.find("\"pass\": \"structcast\"") < json.find("\"severity\""));
  CHECK(emit_diagnostics({}, DiagnosticFormat::Json) == "[]\n");
}

TEST_CASE("diagnostics order by file, line, column, pass") {
  Diagnostic a, b, c;
  a.file = b.file = c.file = "f.go";
  a.line = 2;
  b.line = 2;
  b.pass = LintPass::Structcast;
  c.line = 1;
  std::vector<Diagnostic> ds{b, a, c};
  std::sort(ds.begin(), ds.end(), diagnostic_less);
  CHECK(ds[0].line == 1);
  CHECK(ds[1].pass == LintPass::Sliceheader);
  CHECK(ds[2].pass == LintPass::Structcast);
}

TEST_CASE("usage taxonomy vocabulary") {
  CHECK(kWhatClasses.size() == 7);
  CHECK(kPurposeClasses.size() == 11);
  CHECK(is_what_class("cast"));
  CHECK(is_purpose_class("efficiency"));
  CHECK_FALSE(is_purpose_class("speed"));
}

TEST_CASE("annotation files are validated") {
  const std::string header(kAnnotationHeader);
  CHECK(validate_annotations(header + "\na.go,3,4,cast,efficiency\n").empty());
  const auto problems =
      validate_annotations(header + "\na.go,x,4,cast,speed\nb.go,1,1,cast\n");
  CHECK(problems.size() == 3);
  CHECK_FALSE(validate_annotations("file,line\n").empty());
}

}  // TEST_SUITE
