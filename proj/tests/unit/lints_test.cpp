#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "unsafe_audit/lints.hpp"

using namespace unsafe_audit;

namespace {

const std::filesystem::path kLint = ua_test::fixtures() / "lint";

std::vector<Diagnostic> lint_fixture(const std::string& name, LintOptions opts = {}) {
  const auto pkg = ua_test::from_dir(kLint / name);
  return lint_package(pkg.ptrs(), pkg.imports, opts);
}

std::vector<Diagnostic> lint_source(const std::string& src, LintOptions opts = {}) {
  const auto pkg = ua_test::from_sources({src});
  return lint_package(pkg.ptrs(), pkg.imports, opts);
}

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_pass(const std::vector<Diagnostic>& ds, LintPass pass, Severity sev) {
  std::size_t n = 0;
  for (const auto& d : ds)
    if (d.pass == pass && d.severity == sev) ++n;
  return n;
}

Cfg cfg_of(const SyntaxTree& t, std::string_view fn_name) {
  for (NodeId f : t.functions()) {
    const NodeId name = t.child(f, Role::Name);
    if (name != kNoNode && t[name].text == fn_name) return build_cfg(t, f);
  }
  FAIL("no function " << fn_name);
  return {};
}

}  // namespace

TEST_SUITE("lints") {

TEST_CASE("cfg: straight-line code is one block") {
  const SyntaxTree t = parse_path(kLint / "safe" / "safe.go");
  const Cfg c = cfg_of(t, "Resize");
  CHECK(c.blocks.size() == 1);
  CHECK(c.edges.empty());
}

TEST_CASE("cfg: if and for add blocks and a back edge") {
  const SyntaxTree t = parse_path(kLint / "safe" / "safe.go");
  const Cfg c = cfg_of(t, "Truncate");
  CHECK(c.blocks.size() == 7);
  CHECK(c.edges.size() == 8);
  CHECK(std::is_sorted(c.edges.begin(), c.edges.end()));
  bool back = false;
  for (auto [a, b] : c.edges)
    if (b < a) back = true;
  CHECK(back);
  for (const auto& b : c.blocks) CHECK_FALSE(b.dead);
}

TEST_CASE("cfg: code after return is dead") {
  const SyntaxTree t =
      parse_file("package p\nfunc f() int {\n\treturn 1\n\tx := 2\n\t_ = x\n}\n", "p.go");
  const Cfg c = cfg_of(t, "f");
  bool any_dead = false;
  for (const auto& b : c.blocks) any_dead = any_dead || b.dead;
  CHECK(any_dead);
}

TEST_CASE("cfg: labelled break and goto") {
  const SyntaxTree t = parse_file(R"(package p
func f(xs []int) int {
outer:
	for _, x := range xs {
		for {
			if x > 0 {
				break outer
			}
			continue outer
		}
	}
	goto done
done:
	return 0
}
)",
                                  "p.go");
  CHECK_FALSE(t.had_parse_errors());
  const Cfg c = cfg_of(t, "f");
  CHECK(c.blocks.size() > 3);
  for (const auto& b : c.blocks)
    for (std::size_t s : b.succs) CHECK(s < c.blocks.size());
}

TEST_CASE("header matching: reflect types, local aliases, derived structs") {
  const auto pkg = ua_test::from_dir(kLint / "derived");
  TypeEnvironment env(pkg.ptrs(), pkg.imports);
  auto my = env.named_type("myHdr");
  REQUIRE(my.has_value());
  CHECK(header_signature_match(*my, env) == HeaderKind::SliceHeader);
  auto other = env.named_type("notHdr");
  REQUIRE(other.has_value());
  CHECK_FALSE(header_signature_match(*other, env).has_value());
}

TEST_CASE("arch-dependent field counts") {
  const auto pkg = ua_test::from_dir(kLint / "nested");
  TypeEnvironment env(pkg.ptrs(), pkg.imports);
  auto count = [&](const char* name, bool flat = false) {
    auto t = env.named_type(name);
    REQUIRE(t.has_value());
    return count_arch_dependent_fields(*t, env, flat);
  };
  CHECK(count("Outer") == ArchCount{1, false});
  CHECK(count("Outer", true) == ArchCount{0, false});
  CHECK(count("Wide") == ArchCount{4, false});
  CHECK(count("Wide", true) == ArchCount{4, false});
  CHECK(count("Flat") == ArchCount{4, false});
  CHECK(count("Foreign").incomplete);
}

TEST_CASE("sliceheader: string to bytes composite literal") {
  const auto d = lint_fixture("strbytes");
  REQUIRE(d.size() == 1);
  CHECK(d[0].pass == LintPass::Sliceheader);
  CHECK(d[0].line == 10);
  CHECK(d[0].column == 17);
  CHECK(d[0].message.find("composite literal") != std::string::npos);
}

TEST_CASE("sliceheader: zero-value declaration") {
  const auto d = lint_fixture("zerovalue");
  REQUIRE(d.size() == 1);
  CHECK(d[0].line == 10);
  CHECK(d[0].message.find("zero-value") != std::string::npos);
}

TEST_CASE("sliceheader: cast-derived headers are safe on every path") {
  CHECK(lint_fixture("safe").empty());
}

TEST_CASE("sliceheader: a helper call instead of the cast is flagged") {
  const auto d = lint_fixture("funccall");
  REQUIRE(d.size() == 2);
  CHECK(d[0].line == 14);
  CHECK(d[1].line == 15);
}

TEST_CASE("sliceheader: replacing the cast in the safe fixture reintroduces a warning") {
  std::string src = read(kLint / "safe" / "safe.go");
  const std::string cast = "h := (*reflect.SliceHeader)(unsafe.Pointer(&b))\n\th.Len = n";
  const auto at = src.find(cast);
  REQUIRE(at != std::string::npos);
  src.replace(at, cast.size(), "h := sliceHeaderOf(&b)\n\th.Len = n");
  src += "\nfunc sliceHeaderOf(b *[]byte) *reflect.SliceHeader {\n"
         "\treturn (*reflect.SliceHeader)(unsafe.Pointer(b))\n}\n";
  const auto d = lint_source(src);
  CHECK(count_pass(d, LintPass::Sliceheader, Severity::Warning) == 2);
}

TEST_CASE("sliceheader: locally derived header type") {
  const auto d = lint_fixture("derived");
  REQUIRE(d.size() == 1);
  CHECK(d[0].line == 19);
}

TEST_CASE("sliceheader: one unsafe branch is enough") {
  const auto d = lint_fixture("nested");
  std::vector<std::uint32_t> lines;
  for (const auto& x : d)
    if (x.pass == LintPass::Sliceheader) lines.push_back(x.line);
  CHECK(lines == std::vector<std::uint32_t>{42, 44});
}

TEST_CASE("sliceheader: header written through a parameter is unknown") {
  const auto d = lint_source(
      "package p\nimport \"reflect\"\nfunc f(h *reflect.SliceHeader, p uintptr) {\n\th.Data = p\n}\n");
  REQUIRE(d.size() == 1);
  CHECK(d[0].line == 4);
}

TEST_CASE("sliceheader: package-level composite literal") {
  const auto d = lint_source(
      "package p\nimport \"reflect\"\nvar h = reflect.StringHeader{Len: 1}\n");
  REQUIRE(d.size() == 1);
  CHECK(d[0].message.find("StringHeader") != std::string::npos);
}

TEST_CASE("structcast: 1 vs 0 warns in both directions") {
  const auto d = lint_fixture("structcast_mismatch");
  REQUIRE(d.size() == 2);
  CHECK(d[0].line == 16);
  CHECK(d[0].message.find("1 vs 0") != std::string::npos);
  CHECK(d[1].line == 20);
  CHECK(d[1].message.find("0 vs 1") != std::string::npos);
  for (const auto& x : d) CHECK(x.severity == Severity::Warning);
}

TEST_CASE("structcast: identical and same-count structs are silent") {
  CHECK(lint_fixture("structcast_identical").empty());
  CHECK(lint_fixture("structcast_uint").empty());
}

TEST_CASE("structcast: nested and foreign types") {
  const auto d = lint_fixture("nested");
  CHECK(count_pass(d, LintPass::Structcast, Severity::Warning) == 1);  // Outer -> Wide
  CHECK(count_pass(d, LintPass::Structcast, Severity::Info) == 1);     // Foreign -> Flat
  LintOptions flat;
  flat.structcast_flat = true;
  const auto f = lint_fixture("nested", flat);
  // flat: Outer has no top-level arch field, Wide still counts its array
  CHECK(count_pass(f, LintPass::Structcast, Severity::Warning) == 1);
}

TEST_CASE("parallel and serial runs agree") {
  LintOptions serial;
  serial.parallel = false;
  LintOptions parallel;
  parallel.workers = 8;
  for (const char* name : {"nested", "safe", "strbytes", "structcast_mismatch", "funccall"})
    CHECK(lint_fixture(name, serial) == lint_fixture(name, parallel));
}

TEST_CASE("functions with syntax errors are skipped, others still checked") {
  const auto d = lint_source(
      "package p\nimport \"reflect\"\nfunc bad( {\n}\n"
      "func good() { _ = reflect.SliceHeader{} }\n");
  REQUIRE(d.size() == 1);
  CHECK(d[0].line == 5);
}

TEST_CASE("warning_count ignores info") {
  std::vector<Diagnostic> ds(3);
  ds[1].severity = Severity::Info;
  CHECK(warning_count(ds) == 2);
}

}  // TEST_SUITE
