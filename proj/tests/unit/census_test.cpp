#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

using namespace unsafe_audit;

namespace {

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count(const std::vector<UnsafeFinding>& fs, TokenKind t, ContextKind c) {
  std::size_t n = 0;
  for (const auto& f : fs)
    if (f.token == t && f.context == c) ++n;
  return n;
}

const std::filesystem::path kCorpus = ua_test::fixtures() / "census" / "corpus";

}  // namespace

TEST_SUITE("census") {

// The single token is the unsafe.Pointer in
//   out.Items = *(*[]audit.Policy)(unsafe.Pointer(&in.Items))
// AssignStmt > Star > Call[(*[]audit.Policy)] > Call[unsafe.Pointer]: the
// inner call is the argument of a conversion, so the chain climbs to the
// dereference, whose parent is the assignment.
TEST_CASE("slice conversion through unsafe.Pointer in an assignment") {
  const auto c = ua_test::census_of(read(kCorpus / "policyconv" / "convert.go"));
  REQUIRE(c.findings.size() == 1);
  CHECK(c.findings[0].token == TokenKind::UnsafePointer);
  CHECK(c.findings[0].context == ContextKind::Assignment);
  CHECK(c.findings[0].line == 11);
  CHECK(c.findings[0].snippet == "out.Items = *(*[]audit.Policy)(unsafe.Pointer(&in.Items))");
}

// func NoEscape(p unsafe.Pointer) unsafe.Pointer   -> ParamList, ResultList
//   x := uintptr(p)                                -> AssignStmt
//   return unsafe.Pointer(x ^ 0)                   -> ReturnStmt
TEST_CASE("noescape: three UnsafePointer and one Uintptr") {
  const auto c = ua_test::census_of(read(kCorpus / "noescape" / "noescape.go"));
  CHECK(c.tokens[TokenKind::UnsafePointer] == 3);
  CHECK(c.tokens[TokenKind::Uintptr] == 1);
  CHECK(c.tokens.total() == 4);
  CHECK(c.contexts[ContextKind::Parameter] == 2);
  CHECK(c.contexts[ContextKind::Assignment] == 2);
  CHECK(count(c.findings, TokenKind::Uintptr, ContextKind::Assignment) == 1);
}

// strHeader := (*reflect.StringHeader)(unsafe.Pointer(&s))   StringHeader, Pointer
// bytesHeader := reflect.SliceHeader{...}                     SliceHeader
// return *(*[]byte)(unsafe.Pointer(&bytesHeader))             Pointer
TEST_CASE("string to bytes: two UnsafePointer and one of each header") {
  const auto c = ua_test::census_of(read(kCorpus / "strbytes" / "conv.go"));
  CHECK(c.tokens[TokenKind::UnsafePointer] == 2);
  CHECK(c.tokens[TokenKind::ReflectStringHeader] == 1);
  CHECK(c.tokens[TokenKind::ReflectSliceHeader] == 1);
  CHECK(c.tokens.total() == 4);
  CHECK(c.contexts[ContextKind::Assignment] == 4);
}

TEST_CASE("strings and comments never produce findings") {
  const auto c = ua_test::census_of(read(kCorpus / "immune" / "immune.go"));
  CHECK(c.findings.empty());
  const auto c2 = ua_test::census_of(
      "package p\nimport \"unsafe\"\n// unsafe.Pointer\nvar s = \"unsafe.Pointer\"\n"
      "var _ = unsafe.Sizeof(s)\n");
  CHECK(c2.findings.size() == 1);
}

TEST_CASE("aliased unsafe and reflect imports are recognised") {
  const auto c = ua_test::census_of(
      "package p\nimport (\n\tu \"unsafe\"\n\tr \"reflect\"\n)\n"
      "var a = u.Sizeof(0)\nvar h r.StringHeader\n");
  CHECK(c.tokens[TokenKind::UnsafeSizeof] == 1);
  CHECK(c.tokens[TokenKind::ReflectStringHeader] == 1);
}

TEST_CASE("selectors on a non-imported unsafe name are ignored") {
  const auto c = ua_test::census_of(
      "package p\ntype T struct{ Pointer int }\nfunc f(unsafe T) int { return unsafe.Pointer }\n");
  CHECK(c.findings.empty());
}

TEST_CASE("dot-imported members count without a qualifier") {
  const auto c = ua_test::census_of(read(kCorpus / "dotimport" / "dot.go"));
  CHECK(c.tokens[TokenKind::UnsafePointer] == 2);
  CHECK(c.tokens[TokenKind::UnsafeAlignof] == 1);
  CHECK(count(c.findings, TokenKind::UnsafePointer, ContextKind::Parameter) == 1);
}

TEST_CASE("shadowed uintptr is not counted") {
  const auto c = ua_test::census_of(read(kCorpus / "shadow" / "shadow.go"));
  CHECK(c.tokens[TokenKind::Uintptr] == 2);
  CHECK(c.tokens[TokenKind::UnsafePointer] == 1);
}

TEST_CASE("range variable named uintptr shadows only the body") {
  const auto c = ua_test::census_of(
      "package p\nfunc f(xs []uintptr) {\n\tfor _, uintptr := range xs {\n\t\t_ = uintptr\n\t}\n}\n");
  CHECK(c.tokens[TokenKind::Uintptr] == 1);  // the parameter type only
}

TEST_CASE("package-level redeclaration of uintptr hides it in every file") {
  auto pkg = ua_test::from_sources(
      {"package p\ntype uintptr int\n", "package p\nvar x uintptr\n"});
  const auto c = ua_test::census_of(pkg);
  CHECK(c.tokens[TokenKind::Uintptr] == 0);
}

TEST_CASE("every context kind is reachable") {
  const auto c = ua_test::census_of(read(kCorpus / "sizes" / "sizes.go"));
  CHECK(c.contexts[ContextKind::Variable] == 2);
  CHECK(c.contexts[ContextKind::Call] == 2);
  CHECK(c.contexts[ContextKind::Other] == 1);
  const auto k = ua_test::census_of(read(kCorpus / "kinds" / "kinds.go"));
  CHECK(count(k.findings, TokenKind::UnsafePointer, ContextKind::Variable) == 2);
  CHECK(count(k.findings, TokenKind::UnsafePointer, ContextKind::Parameter) == 2);
  CHECK(count(k.findings, TokenKind::UnsafePointer, ContextKind::Call) == 1);
  CHECK(count(k.findings, TokenKind::ReflectSliceHeader, ContextKind::Assignment) == 1);
}

TEST_CASE("struct field keys in a literal are not tokens") {
  const auto c = ua_test::census_of(
      "package p\ntype T struct{ uintptr int }\nvar t = T{uintptr: 1}\n");
  CHECK(c.tokens[TokenKind::Uintptr] == 0);
}

TEST_CASE("findings are sorted and carry identity") {
  const auto c = ua_test::census_of(read(kCorpus / "kinds" / "kinds.go"));
  CHECK(std::is_sorted(c.findings.begin(), c.findings.end(), finding_less));
  for (const auto& f : c.findings) {
    CHECK(f.package_path == "pkg");
    CHECK(f.module_path == "mod");
    CHECK(f.snippet.find('\n') == std::string::npos);
  }
}

TEST_CASE("snippets are truncated on a character boundary") {
  const std::string long_text(300, 'x');
  const std::string s = make_snippet(long_text);
  CHECK(s.size() == kSnippetLimit + 3);
  CHECK(s.substr(s.size() - 3) == "...");
  std::string utf;
  for (int i = 0; i < 150; ++i) utf += "\xc3\xa9";
  const std::string u = make_snippet(utf);
  CHECK(u.size() <= kSnippetLimit + 3);
  CHECK((u.size() - 3) % 2 == 0);
}

TEST_CASE("cgo and parse errors are recorded per package") {
  auto pkg = ua_test::from_sources(
      {"package p\nimport \"C\"\nvar x C.int\n", "package p\nfunc f( {\n"});
  const auto c = ua_test::census_of(pkg);
  CHECK(c.uses_cgo);
  CHECK(c.parse_errors == 1);
}

TEST_CASE("test files are excluded unless asked for") {
  CHECK(ua_test::census_of(ua_test::from_dir(kCorpus / "clean")).tokens.total() == 0);
  const auto with_tests = ua_test::census_of(ua_test::from_dir(kCorpus / "clean", true));
  CHECK(with_tests.tokens[TokenKind::UnsafeSizeof] == 1);
}

TEST_CASE("token and context names round trip") {
  for (TokenKind k : kAllTokenKinds) CHECK(parse_token_kind(to_string(k)) == k);
  for (ContextKind k : kAllContextKinds) CHECK(parse_context_kind(to_string(k)) == k);
  CHECK_FALSE(parse_token_kind("Pointer").has_value());
}

}  // TEST_SUITE
