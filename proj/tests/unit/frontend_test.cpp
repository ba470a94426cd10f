#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "unsafe_audit/lexer.hpp"

using namespace unsafe_audit;

namespace {

std::vector<Token> lex(std::string_view src) { return Lexer(src).tokenize(); }

NodeId first_of(const SyntaxTree& t, NodeKind kind) {
  for (NodeId id : t.preorder())
    if (t[id].kind == kind) return id;
  return kNoNode;
}

}  // namespace

TEST_SUITE("frontend") {

TEST_CASE("semicolons are inserted after a line-final identifier") {
  const auto toks = lex("x := y\nreturn\n");
  std::vector<LexKind> kinds;
  for (const Token& t : toks) kinds.push_back(t.kind);
  REQUIRE(kinds.size() >= 6);
  CHECK(kinds[0] == LexKind::Ident);
  CHECK(kinds[1] == LexKind::Operator);
  CHECK(kinds[2] == LexKind::Ident);
  CHECK(kinds[3] == LexKind::Semicolon);
  CHECK(toks[3].implicit);
  CHECK(kinds[4] == LexKind::Keyword);
  CHECK(kinds[5] == LexKind::Semicolon);
}

TEST_CASE("no semicolon after an operator at line end") {
  const auto toks = lex("a +\nb\n");
  CHECK(toks[1].text == "+");
  CHECK(toks[2].kind == LexKind::Ident);
}

TEST_CASE("comments and strings are single tokens") {
  const auto toks = lex("s := \"unsafe.Pointer\" // unsafe.Pointer\nr := `a\nb` /* x */\n");
  int idents = 0;
  for (const Token& t : toks)
    if (t.kind == LexKind::Ident) ++idents;
  CHECK(idents == 2);
  auto str = std::find_if(toks.begin(), toks.end(),
                          [](const Token& t) { return t.kind == LexKind::String; });
  REQUIRE(str != toks.end());
  CHECK(str->text == "\"unsafe.Pointer\"");
}

TEST_CASE("a comment spanning a newline still ends the statement") {
  const auto toks = lex("x /* a\nb */ y\n");
  CHECK(toks[1].kind == LexKind::Semicolon);
}

TEST_CASE("number and rune literals") {
  const auto toks = lex("0x1F 1_000 3.5e2 2i 'a' '\\n'");
  CHECK(toks[0].kind == LexKind::Int);
  CHECK(toks[1].kind == LexKind::Int);
  CHECK(toks[2].kind == LexKind::Float);
  CHECK(toks[3].kind == LexKind::Imag);
  CHECK(toks[4].kind == LexKind::Char);
  CHECK(toks[5].kind == LexKind::Char);
}

TEST_CASE("unterminated string is reported, not thrown") {
  Lexer lx("x := \"abc\n");
  (void)lx.tokenize();
  CHECK_FALSE(lx.errors().empty());
}

TEST_CASE("line index maps offsets to 1-based line and column") {
  LineIndex idx("ab\ncd\n\nx");
  CHECK(idx.line(0) == 1);
  CHECK(idx.column(1) == 2);
  CHECK(idx.line(3) == 2);
  CHECK(idx.column(3) == 1);
  CHECK(idx.line(7) == 4);
}

TEST_CASE("function declaration shape") {
  const SyntaxTree t = parse_file(
      "package p\n\nfunc (r *T) M(a, b int, c ...string) (n int, err error) {\n\treturn 0, nil\n}\n",
      "p.go");
  CHECK_FALSE(t.had_parse_errors());
  CHECK(t.package_name() == "p");
  const NodeId fn = first_of(t, NodeKind::FuncDecl);
  REQUIRE(fn != kNoNode);
  CHECK(t[t.child(fn, Role::Name)].text == "M");
  CHECK(t.child(fn, Role::Recv) != kNoNode);
  const NodeId params = t.child(fn, Role::Params);
  REQUIRE(params != kNoNode);
  CHECK(t[params].kind == NodeKind::ParamList);
  CHECK(t.children(params).size() == 2);  // `a, b int` is one field
  const NodeId results = t.child(fn, Role::Results);
  REQUIRE(results != kNoNode);
  CHECK(t[results].kind == NodeKind::ResultList);
  CHECK(first_of(t, NodeKind::ReturnStmt) != kNoNode);
  CHECK(t[fn].line == 3);
  CHECK(t[fn].column == 1);
}

TEST_CASE("conversion call nests callee and argument") {
  const SyntaxTree t =
      parse_file("package p\nvar x = (*int)(unsafe.Pointer(&y))\n", "p.go");
  CHECK_FALSE(t.had_parse_errors());
  const NodeId call = first_of(t, NodeKind::CallExpr);
  REQUIRE(call != kNoNode);
  const NodeId callee = t.unparen(t.child(call, Role::Callee));
  CHECK(t[callee].kind == NodeKind::StarExpr);
  const NodeId arg = t.child(call, Role::Arg);
  REQUIRE(arg != kNoNode);
  CHECK(t[arg].kind == NodeKind::CallExpr);
  CHECK(t.text_of(arg) == "unsafe.Pointer(&y)");
  CHECK(first_of(t, NodeKind::UnaryAddrExpr) != kNoNode);
}

TEST_CASE("composite literal in an if header needs parentheses") {
  const SyntaxTree t = parse_file(
      "package p\nfunc f() {\n\tif x := (T{1}); x.a > 0 {\n\t}\n\tfor _, v := range xs {\n\t\t_ = v\n\t}\n}\n",
      "p.go");
  CHECK_FALSE(t.had_parse_errors());
  CHECK(first_of(t, NodeKind::IfStmt) != kNoNode);
  CHECK(first_of(t, NodeKind::ForStmt) != kNoNode);
  CHECK(first_of(t, NodeKind::CompositeLit) != kNoNode);
}

TEST_CASE("generics, struct tags and switches parse cleanly") {
  const SyntaxTree t = parse_file(R"(package p

type List[T any] struct {
	items []T `json:"items"`
	next  *List[T]
}

func Map[T, U any](xs []T, f func(T) U) []U {
	out := make([]U, 0, len(xs))
	for _, x := range xs {
		out = append(out, f(x))
	}
	return out
}

func g(v interface{}) int {
	switch x := v.(type) {
	case int:
		return x
	default:
		return 0
	}
}

func h(c chan int) {
	select {
	case v := <-c:
		_ = v
	default:
	}
}
)",
                                  "p.go");
  CHECK_FALSE(t.had_parse_errors());
  CHECK(t.functions().size() == 3);
}

TEST_CASE("syntax errors leave a usable tree") {
  const SyntaxTree t = parse_file(
      "package p\n\nfunc broken( {\n\nfunc ok() { _ = unsafe.Sizeof(1) }\n", "p.go");
  CHECK(t.had_parse_errors());
  CHECK_FALSE(t.error_offsets().empty());
  CHECK(t.package_name() == "p");
  bool found = false;
  for (NodeId id : t.preorder())
    if (t[id].kind == NodeKind::SelectorExpr && t.text_of(id) == "unsafe.Sizeof") found = true;
  CHECK(found);
}

TEST_CASE("preorder visits parents before children") {
  const SyntaxTree t = parse_file("package p\nfunc f() { g(1, 2) }\n", "p.go");
  std::vector<int> seen(t.size(), 0);
  for (NodeId id : t.preorder()) {
    if (id != t.root()) CHECK(seen[t.parent(id)] == 1);
    seen[id] = 1;
  }
}

TEST_CASE("import table records aliases, dot and blank imports") {
  const SyntaxTree t = parse_file(R"(package p

import (
	"fmt"
	u "unsafe"
	. "reflect"
	_ "embed"
	"gopkg.in/yaml.v3"
	"github.com/x/y/v2"
)
)",
                                  "p.go");
  const ImportTable imp = resolve_imports(t);
  CHECK(imp.binds("u", "unsafe"));
  CHECK_FALSE(imp.binds("unsafe", "unsafe"));
  CHECK(imp.binds("fmt", "fmt"));
  CHECK(imp.dot_imports.count("reflect") == 1);
  CHECK(imp.blank_imports.count("embed") == 1);
  CHECK(imp.binds("yaml", "gopkg.in/yaml.v3"));
  CHECK(imp.binds("y", "github.com/x/y/v2"));
  CHECK(imp.imports_path("embed"));
  CHECK(imp.paths.size() == 6);
}

TEST_CASE("default package names drop major version suffixes") {
  CHECK(default_package_name("github.com/a/b") == "b");
  CHECK(default_package_name("github.com/a/b/v3") == "b");
  CHECK(default_package_name("gopkg.in/yaml.v2") == "yaml");
  CHECK(default_package_name("unsafe") == "unsafe");
}

TEST_CASE("enumerate_package sorts files and skips tests by default") {
  const auto dir = ua_test::fixtures() / "census" / "corpus" / "clean";
  const auto plain = enumerate_package(dir);
  REQUIRE(plain.size() == 1);
  CHECK(plain[0].filename() == "clean.go");
  const auto all = enumerate_package(dir, {true});
  REQUIRE(all.size() == 2);
  CHECK(all[0].filename() == "clean.go");
  CHECK(all[1].filename() == "clean_test.go");
}

TEST_CASE("reading a missing directory throws IoError") {
  CHECK_THROWS_AS((void)enumerate_package(ua_test::fixtures() / "no-such-dir"), IoError);
}

TEST_CASE("collapse_whitespace") {
  CHECK(collapse_whitespace("  a \n\t b  ") == "a b");
  CHECK(collapse_whitespace("") == "");
}

}  // TEST_SUITE
