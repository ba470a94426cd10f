#include "unsafe_audit/parser.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "unsafe_audit/lexer.hpp"

namespace unsafe_audit {

namespace {

// Recursive-descent parser for Go modelled on the structure of go/parser.
// Types and expressions share one grammar; composite literals in control
// clause headers are disambiguated through expr_level_ exactly as go/parser
// does.
class Parser {
 public:
  Parser(std::string_view source, std::vector<Token> tokens)
      : src_(source), toks_(std::move(tokens)) {}

  std::vector<SyntaxNode> take_nodes() { return std::move(nodes_); }
  std::vector<std::string> take_errors() { return std::move(errors_); }
  std::string package_name() const { return package_name_; }

  void parse_file() {
    NodeId file = open(NodeKind::File, Form::File, 0);
    if (is_keyword("package")) {
      NodeId clause = open(NodeKind::PackageClause, Form::PackageClause);
      next();
      NodeId name = parse_ident();
      package_name_ = nodes_[name].text;
      add(clause, name, Role::Name);
      close(clause);
      add(file, clause, Role::Decl);
      expect_semi();
    } else {
      error("expected 'package' clause");
    }
    while (!at_eof()) {
      const std::size_t before = pos_;
      if (is_keyword("import")) {
        for (NodeId spec : parse_gen_decl()) add(file, spec, Role::Decl);
      } else if (is_keyword("func")) {
        add(file, parse_func_decl(), Role::Decl);
      } else if (is_keyword("var") || is_keyword("const") ||
                 is_keyword("type")) {
        for (NodeId spec : parse_gen_decl()) add(file, spec, Role::Decl);
      } else if (tok().kind == LexKind::Semicolon) {
        next();
        continue;
      } else {
        error("expected declaration");
        sync_decl();
        continue;
      }
      if (!at_eof() && tok().kind != LexKind::Semicolon) {
        error("expected ';' after top level declaration");
        sync_decl();
      } else if (!at_eof()) {
        next();
      }
      if (pos_ == before) next();
    }
    nodes_[file].span = {0, static_cast<std::uint32_t>(src_.size())};
  }

 private:
  // ---- token helpers ----
  const Token& tok() const { return toks_[pos_]; }
  const Token& peek(std::size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool at_eof() const { return tok().kind == LexKind::Eof; }
  bool is_op(std::string_view op) const {
    return tok().kind == LexKind::Operator && tok().text == op;
  }
  bool is_keyword(std::string_view kw) const {
    return tok().kind == LexKind::Keyword && tok().text == kw;
  }
  bool is_semi() const { return tok().kind == LexKind::Semicolon; }

  void next() {
    if (at_eof()) return;
    if (tok().kind != LexKind::Semicolon || !tok().implicit)
      prev_end_ = tok().offset + tok().length;
    ++pos_;
  }

  void error(std::string message) {
    errors_.push_back("offset " + std::to_string(tok().offset) + ": " +
                      std::move(message));
  }

  bool expect_op(std::string_view op) {
    if (is_op(op)) {
      next();
      return true;
    }
    error("expected '" + std::string(op) + "'");
    return false;
  }

  void expect_semi() {
    if (is_semi()) {
      next();
    } else if (!is_op(")") && !is_op("}") && !at_eof()) {
      error("expected ';'");
      sync_stmt();
    }
  }

  // Skips to the next top-level declaration keyword.
  void sync_decl() {
    while (!at_eof()) {
      if (tok().kind == LexKind::Keyword &&
          (tok().text == "func" || tok().text == "type" ||
           tok().text == "var" || tok().text == "const" ||
           tok().text == "import")) {
        // only accept keywords that start a line
        const std::uint32_t off = tok().offset;
        if (off == 0 || src_[off - 1] == '\n') return;
      }
      next();
    }
  }

  // `func Name` or `func (` in column 1: a new declaration, so an unclosed
  // block ends here.
  bool at_top_level_func() const {
    if (!is_keyword("func")) return false;
    const std::uint32_t off = tok().offset;
    if (off != 0 && src_[off - 1] != '\n') return false;
    return peek().kind == LexKind::Ident || (peek().kind == LexKind::Operator && peek().text == "(");
  }

  // Skips to the end of the current statement, respecting nesting.
  void sync_stmt() {
    int depth = 0;
    while (!at_eof()) {
      if (at_top_level_func()) return;
      if (depth == 0 && (is_semi() || is_op("}"))) return;
      if (is_op("{") || is_op("(") || is_op("[")) ++depth;
      if (is_op("}") || is_op(")") || is_op("]")) --depth;
      next();
    }
  }

  // ---- node helpers ----
  NodeId open(NodeKind kind, Form form) { return open(kind, form, tok().offset); }

  NodeId open(NodeKind kind, Form form, std::uint32_t start) {
    SyntaxNode n;
    n.kind = kind;
    n.form = form;
    n.span.offset = start;
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  void close(NodeId id) {
    const std::uint32_t start = nodes_[id].span.offset;
    const std::uint32_t end = std::max(start, prev_end_);
    nodes_[id].span.length = end - start;
  }

  void add(NodeId parent, NodeId child, Role role) {
    if (child == kNoNode) return;
    nodes_[child].parent = parent;
    nodes_[child].role = role;
    nodes_[parent].children.push_back(child);
  }

  std::uint32_t start_of(NodeId id) const { return nodes_[id].span.offset; }

  NodeId leaf(NodeKind kind, Form form) {
    NodeId id = open(kind, form);
    nodes_[id].text = std::string(tok().text);
    next();
    close(id);
    return id;
  }

  NodeId bad_expr(std::string message) {
    error(std::move(message));
    NodeId id = open(NodeKind::OtherExpr, Form::BadExpr);
    if (!at_eof() && !is_semi() && !is_op(")") && !is_op("}") &&
        !is_op("]") && !is_op(","))
      next();
    close(id);
    return id;
  }

  NodeId parse_ident() {
    if (tok().kind == LexKind::Ident) return leaf(NodeKind::Ident, Form::Ident);
    error("expected identifier");
    NodeId id = open(NodeKind::Ident, Form::Ident);
    nodes_[id].text = "_";
    close(id);
    return id;
  }

  // ---- declarations ----
  std::vector<NodeId> parse_gen_decl() {
    const std::string kw(tok().text);
    const std::uint32_t kw_start = tok().offset;
    next();
    std::vector<NodeId> specs;
    auto one = [&](std::uint32_t start) -> NodeId {
      if (kw == "import") return parse_import_spec(start);
      if (kw == "type") return parse_type_spec(start);
      return parse_value_spec(kw == "const", start);
    };
    if (is_op("(")) {
      next();
      while (!is_op(")") && !at_eof()) {
        const std::size_t before = pos_;
        specs.push_back(one(tok().offset));
        if (!is_op(")")) expect_semi();
        if (pos_ == before) next();
      }
      expect_op(")");
    } else {
      specs.push_back(one(kw_start));
    }
    return specs;
  }

  NodeId parse_import_spec(std::uint32_t start) {
    NodeId spec = open(NodeKind::ImportDecl, Form::ImportSpec, start);
    if (tok().kind == LexKind::Ident) {
      add(spec, leaf(NodeKind::Ident, Form::Ident), Role::Name);
    } else if (is_op(".")) {
      add(spec, leaf(NodeKind::Ident, Form::Ident), Role::Name);
    }
    if (tok().kind == LexKind::String) {
      add(spec, leaf(NodeKind::BasicLit, Form::BasicLit), Role::Path);
    } else {
      error("expected import path");
    }
    close(spec);
    return spec;
  }

  NodeId parse_type_spec(std::uint32_t start) {
    NodeId spec = open(NodeKind::TypeDecl, Form::TypeSpec, start);
    add(spec, parse_ident(), Role::Name);
    if (is_op("[") && looks_like_type_params()) {
      add(spec, parse_param_list(Form::TypeParams, "[", "]"), Role::TypeParams);
    }
    if (is_op("=")) {
      nodes_[spec].form = Form::TypeAlias;
      next();
    }
    add(spec, parse_type(), Role::Type);
    close(spec);
    return spec;
  }

  // `[T any]`, `[K comparable, V any]` versus array lengths `[N]T`.
  bool looks_like_type_params() const {
    if (peek().kind != LexKind::Ident) return false;
    const Token& after = peek(2);
    if (after.kind == LexKind::Ident) return true;
    if (after.kind == LexKind::Keyword && after.text == "interface") return true;
    if (after.kind == LexKind::Operator &&
        (after.text == "," || after.text == "~" || after.text == "[" ||
         after.text == "*"))
      return after.text != "*" || peek(3).kind == LexKind::Ident;
    return false;
  }

  NodeId parse_value_spec(bool is_const, std::uint32_t start) {
    NodeId spec = open(NodeKind::VarDecl, is_const ? Form::ConstSpec : Form::VarSpec,
                       start);
    add(spec, parse_ident(), Role::Name);
    while (is_op(",")) {
      next();
      add(spec, parse_ident(), Role::Name);
    }
    if (!is_op("=") && !is_semi() && !is_op(")")) add(spec, parse_type(), Role::Type);
    if (is_op("=")) {
      next();
      for (NodeId v : parse_expr_list()) add(spec, v, Role::Value);
    }
    close(spec);
    return spec;
  }

  NodeId parse_func_decl() {
    NodeId decl = open(NodeKind::FuncDecl, Form::FuncDecl);
    next();  // func
    if (is_op("(")) add(decl, parse_param_list(Form::Receiver, "(", ")"), Role::Recv);
    add(decl, parse_ident(), Role::Name);
    if (is_op("[")) add(decl, parse_param_list(Form::TypeParams, "[", "]"), Role::TypeParams);
    parse_signature(decl);
    if (is_op("{")) {
      const int saved = expr_level_;
      expr_level_ = 0;
      add(decl, parse_block(), Role::Body);
      expr_level_ = saved;
    }
    close(decl);
    return decl;
  }

  void parse_signature(NodeId owner) {
    if (is_op("(")) {
      add(owner, parse_param_list(Form::Params, "(", ")"), Role::Params);
    } else {
      error("expected parameter list");
    }
    if (is_op("(")) {
      add(owner, parse_param_list(Form::Results, "(", ")"), Role::Results);
    } else if (starts_type()) {
      NodeId results = open(NodeKind::ResultList, Form::Results);
      NodeId field = open(NodeKind::Field, Form::Field);
      add(field, parse_type(), Role::Type);
      close(field);
      add(results, field, Role::None);
      close(results);
      add(owner, results, Role::Results);
    }
  }

  bool starts_type() const {
    if (tok().kind == LexKind::Ident) return true;
    if (tok().kind == LexKind::Keyword)
      return tok().text == "func" || tok().text == "map" ||
             tok().text == "chan" || tok().text == "struct" ||
             tok().text == "interface";
    if (tok().kind == LexKind::Operator)
      return tok().text == "*" || tok().text == "[" || tok().text == "(" ||
             tok().text == "<-";
    return false;
  }

  // One parameter entry before grouping is resolved.
  struct ParamEntry {
    NodeId name = kNoNode;  // set when the entry is `name Type`
    NodeId type = kNoNode;  // bare identifiers land here too
    std::uint32_t start = 0;
  };

  NodeId parse_param_list(Form form, std::string_view open_tok,
                          std::string_view close_tok) {
    const NodeKind kind = form == Form::Results ? NodeKind::ResultList
                                                : NodeKind::ParamList;
    NodeId list = open(kind, form);
    expect_op(open_tok);
    std::vector<ParamEntry> entries;
    while (!is_op(close_tok) && !at_eof()) {
      const std::size_t before = pos_;
      ParamEntry e;
      e.start = tok().offset;
      if (tok().kind == LexKind::Ident &&
          (peek().kind == LexKind::Ident || peek().kind == LexKind::Keyword ||
           (peek().kind == LexKind::Operator &&
            (peek().text == "*" || peek().text == "[" || peek().text == "(" ||
             peek().text == "..." || peek().text == "<-" ||
             peek().text == "~")))) {
        e.name = parse_ident();
        e.type = parse_param_type(form);
      } else {
        e.type = parse_param_type(form);
      }
      entries.push_back(e);
      if (is_op(",")) {
        next();
      } else if (!is_op(close_tok)) {
        error("expected ',' or '" + std::string(close_tok) + "'");
        sync_list(close_tok);
        if (is_op("{") || is_semi()) break;
      }
      if (pos_ == before) next();
    }
    expect_op(close_tok);

    const bool named = std::any_of(entries.begin(), entries.end(),
                                   [](const ParamEntry& e) { return e.name != kNoNode; });
    if (!named) {
      for (const ParamEntry& e : entries) {
        NodeId field = open(NodeKind::Field, Form::Field, e.start);
        add(field, e.type, Role::Type);
        nodes_[field].span.length = nodes_[e.type].span.end() - e.start;
        add(list, field, Role::None);
      }
    } else {
      // `a, b int, c string`: bare identifiers are names grouped with the
      // next typed entry.
      std::vector<NodeId> pending;
      std::uint32_t group_start = 0;
      for (const ParamEntry& e : entries) {
        if (e.name == kNoNode) {
          if (pending.empty()) group_start = e.start;
          pending.push_back(e.type);
          continue;
        }
        if (pending.empty()) group_start = e.start;
        NodeId field = open(NodeKind::Field, Form::Field, group_start);
        for (NodeId n : pending) add(field, n, Role::Name);
        add(field, e.name, Role::Name);
        add(field, e.type, Role::Type);
        nodes_[field].span.length = nodes_[e.type].span.end() - group_start;
        add(list, field, Role::None);
        pending.clear();
      }
      for (NodeId n : pending) {
        NodeId field = open(NodeKind::Field, Form::Field, start_of(n));
        add(field, n, Role::Name);
        nodes_[field].span.length = nodes_[n].span.length;
        add(list, field, Role::None);
      }
    }
    close(list);
    return list;
  }

  NodeId parse_param_type(Form form) {
    if (is_op("...")) {
      NodeId e = open(NodeKind::OtherExpr, Form::Ellipsis);
      next();
      add(e, parse_type(), Role::Elem);
      close(e);
      return e;
    }
    if (form == Form::TypeParams) return parse_constraint();
    return parse_type();
  }

  // Type parameter constraint: union of (possibly ~) terms.
  NodeId parse_constraint() {
    NodeId left = parse_constraint_term();
    while (is_op("|")) {
      NodeId bin = open(NodeKind::OtherExpr, Form::Binary, start_of(left));
      nodes_[bin].text = "|";
      next();
      add(bin, left, Role::Lhs);
      add(bin, parse_constraint_term(), Role::Rhs);
      close(bin);
      left = bin;
    }
    return left;
  }

  NodeId parse_constraint_term() {
    if (is_op("~")) {
      NodeId u = open(NodeKind::OtherExpr, Form::Unary);
      nodes_[u].text = "~";
      next();
      add(u, parse_type(), Role::Operand);
      close(u);
      return u;
    }
    return parse_type();
  }

  void sync_list(std::string_view close_tok) {
    int depth = 0;
    while (!at_eof()) {
      if (depth == 0 && (is_op(close_tok) || is_op(","))) return;
      if (depth == 0 && (is_semi() || is_op("{"))) return;
      if (is_op("(") || is_op("[") || is_op("{")) ++depth;
      if (is_op(")") || is_op("]") || is_op("}")) {
        if (depth == 0) return;
        --depth;
      }
      next();
    }
  }

  // ---- types ----
  NodeId parse_type() {
    if (tok().kind == LexKind::Ident) {
      NodeId t = leaf(NodeKind::Ident, Form::Ident);
      if (is_op(".")) {
        NodeId sel = open(NodeKind::SelectorExpr, Form::Selector, start_of(t));
        next();
        add(sel, t, Role::Operand);
        add(sel, parse_ident(), Role::Member);
        close(sel);
        t = sel;
      }
      if (is_op("[") && !(peek().kind == LexKind::Operator && peek().text == "]")) {
        // generic instantiation T[A, B]
        NodeId idx = open(NodeKind::OtherExpr, Form::Index, start_of(t));
        next();
        add(idx, t, Role::Operand);
        add(idx, parse_type(), Role::Arg);
        while (is_op(",")) {
          next();
          if (is_op("]")) break;
          add(idx, parse_type(), Role::Arg);
        }
        expect_op("]");
        close(idx);
        t = idx;
      }
      return t;
    }
    if (is_op("*")) {
      NodeId star = open(NodeKind::StarExpr, Form::Star);
      next();
      add(star, parse_type(), Role::Operand);
      close(star);
      return star;
    }
    if (is_op("(")) {
      NodeId paren = open(NodeKind::OtherExpr, Form::Paren);
      next();
      add(paren, parse_type(), Role::Operand);
      expect_op(")");
      close(paren);
      return paren;
    }
    if (is_op("[")) return parse_array_or_slice_type();
    if (is_op("<-")) return parse_chan_type();
    if (tok().kind == LexKind::Keyword) {
      if (tok().text == "struct") return parse_struct_type();
      if (tok().text == "interface") return parse_interface_type();
      if (tok().text == "map") return parse_map_type();
      if (tok().text == "chan") return parse_chan_type();
      if (tok().text == "func") {
        NodeId ft = open(NodeKind::OtherExpr, Form::FuncType);
        next();
        parse_signature(ft);
        close(ft);
        return ft;
      }
    }
    return bad_expr("expected type");
  }

  NodeId parse_array_or_slice_type() {
    const std::uint32_t start = tok().offset;
    next();  // [
    if (is_op("]")) {
      next();
      NodeId st = open(NodeKind::OtherExpr, Form::SliceType, start);
      add(st, parse_type(), Role::Elem);
      close(st);
      return st;
    }
    NodeId at = open(NodeKind::OtherExpr, Form::ArrayType, start);
    if (is_op("...")) {
      nodes_[at].text = "...";
      next();
    } else {
      const int saved = expr_level_;
      ++expr_level_;
      add(at, parse_rhs(), Role::Len);
      expr_level_ = saved;
    }
    expect_op("]");
    add(at, parse_type(), Role::Elem);
    close(at);
    return at;
  }

  NodeId parse_map_type() {
    NodeId mt = open(NodeKind::OtherExpr, Form::MapType);
    next();
    expect_op("[");
    add(mt, parse_type(), Role::Key);
    expect_op("]");
    add(mt, parse_type(), Role::Elem);
    close(mt);
    return mt;
  }

  NodeId parse_chan_type() {
    NodeId ct = open(NodeKind::OtherExpr, Form::ChanType);
    if (is_op("<-")) {
      next();
      if (!is_keyword("chan")) error("expected 'chan'");
      else next();
      nodes_[ct].text = "<-chan";
    } else {
      next();  // chan
      if (is_op("<-")) {
        next();
        nodes_[ct].text = "chan<-";
      } else {
        nodes_[ct].text = "chan";
      }
    }
    add(ct, parse_type(), Role::Elem);
    close(ct);
    return ct;
  }

  NodeId parse_struct_type() {
    NodeId st = open(NodeKind::StructType, Form::StructType);
    next();  // struct
    expect_op("{");
    while (!is_op("}") && !at_eof()) {
      const std::size_t before = pos_;
      add(st, parse_field_decl(), Role::None);
      if (!is_op("}")) expect_semi();
      if (pos_ == before) next();
    }
    expect_op("}");
    close(st);
    return st;
  }

  NodeId parse_field_decl() {
    NodeId field = open(NodeKind::Field, Form::Field);
    if (tok().kind == LexKind::Ident &&
        !(peek().kind == LexKind::Operator &&
          (peek().text == "." || peek().text == "}")) &&
        !(peek().kind == LexKind::Semicolon) &&
        peek().kind != LexKind::String) {
      add(field, parse_ident(), Role::Name);
      while (is_op(",")) {
        next();
        add(field, parse_ident(), Role::Name);
      }
      add(field, parse_type(), Role::Type);
    } else {
      add(field, parse_type(), Role::Type);  // embedded
    }
    if (tok().kind == LexKind::String)
      add(field, leaf(NodeKind::BasicLit, Form::BasicLit), Role::Tag);
    close(field);
    return field;
  }

  NodeId parse_interface_type() {
    NodeId it = open(NodeKind::OtherExpr, Form::InterfaceType);
    next();  // interface
    expect_op("{");
    while (!is_op("}") && !at_eof()) {
      const std::size_t before = pos_;
      NodeId field = open(NodeKind::Field, Form::Field);
      if (tok().kind == LexKind::Ident && peek().kind == LexKind::Operator &&
          peek().text == "(") {
        add(field, parse_ident(), Role::Name);
        NodeId ft = open(NodeKind::OtherExpr, Form::FuncType);
        parse_signature(ft);
        close(ft);
        add(field, ft, Role::Type);
      } else {
        add(field, parse_constraint(), Role::Type);
      }
      close(field);
      add(it, field, Role::None);
      if (!is_op("}")) expect_semi();
      if (pos_ == before) next();
    }
    expect_op("}");
    close(it);
    return it;
  }

  // ---- statements ----
  NodeId parse_block() {
    NodeId block = open(NodeKind::Block, Form::Block);
    expect_op("{");
    parse_stmt_list(block);
    expect_op("}");
    close(block);
    return block;
  }

  void parse_stmt_list(NodeId owner) {
    while (!is_op("}") && !at_eof() && !is_keyword("case") &&
           !is_keyword("default")) {
      const std::size_t before = pos_;
      if (at_top_level_func()) {
        error("missing '}' before declaration");
        return;
      }
      if (is_semi()) {
        next();
        continue;
      }
      for (NodeId s : parse_stmt()) add(owner, s, Role::Stmt);
      if (!is_op("}") && !is_keyword("case") && !is_keyword("default"))
        expect_semi();
      if (pos_ == before) {
        error("unexpected token");
        next();
      }
    }
  }

  std::vector<NodeId> parse_stmt() {
    if (tok().kind == LexKind::Keyword) {
      const std::string_view kw = tok().text;
      if (kw == "var" || kw == "const" || kw == "type") return parse_gen_decl();
      if (kw == "go" || kw == "defer") {
        NodeId s = open(NodeKind::OtherStmt, kw == "go" ? Form::Go : Form::Defer);
        next();
        add(s, parse_expr(), Role::Value);
        close(s);
        return {s};
      }
      if (kw == "return") {
        NodeId s = open(NodeKind::ReturnStmt, Form::Return);
        next();
        if (!is_semi() && !is_op("}"))
          for (NodeId v : parse_expr_list()) add(s, v, Role::Value);
        close(s);
        return {s};
      }
      if (kw == "break" || kw == "continue" || kw == "goto" ||
          kw == "fallthrough") {
        NodeId s = open(NodeKind::OtherStmt, Form::Branch);
        nodes_[s].text = std::string(kw);
        next();
        if (kw != "fallthrough" && tok().kind == LexKind::Ident)
          add(s, parse_ident(), Role::Operand);
        close(s);
        return {s};
      }
      if (kw == "if") return {parse_if()};
      if (kw == "switch") return {parse_switch()};
      if (kw == "select") return {parse_select()};
      if (kw == "for") return {parse_for()};
      if (kw == "func" || kw == "struct" || kw == "map" || kw == "chan" ||
          kw == "interface")
        return {parse_simple_stmt(true, false).first};
      NodeId bad = open(NodeKind::OtherStmt, Form::BadStmt);
      error("unexpected keyword '" + std::string(kw) + "'");
      sync_stmt();
      close(bad);
      return {bad};
    }
    if (is_op("{")) return {parse_block()};
    if (is_semi()) {
      NodeId s = open(NodeKind::OtherStmt, Form::EmptyStmt);
      close(s);
      return {s};
    }
    return {parse_simple_stmt(true, false).first};
  }

  // Returns the statement and, when it is a bare expression that the
  // caller may want unwrapped, the expression itself in .second.
  std::pair<NodeId, NodeId> parse_simple_stmt(bool label_ok, bool range_ok,
                                              bool wrap = true) {
    const std::uint32_t start = tok().offset;
    if (range_ok && is_keyword("range")) {
      NodeId rs = open(NodeKind::ForStmt, Form::ForRange, start);
      next();
      add(rs, parse_expr(), Role::Rhs);
      return {rs, kNoNode};
    }
    std::vector<NodeId> lhs = parse_expr_list();
    if (tok().kind == LexKind::Operator) {
      const std::string_view op = tok().text;
      if (op == ":=" || op == "=" ||
          (op.size() >= 2 && op.back() == '=' && op != "==" && op != "!=" &&
           op != "<=" && op != ">=")) {
        const std::string op_text(op);
        next();
        if (range_ok && is_keyword("range") && (op_text == ":=" || op_text == "=")) {
          NodeId rs = open(NodeKind::ForStmt, Form::ForRange, start);
          nodes_[rs].text = op_text;
          next();
          for (NodeId l : lhs) add(rs, l, Role::Lhs);
          add(rs, parse_expr(), Role::Rhs);
          return {rs, kNoNode};
        }
        const Form form = op_text == ":=" ? Form::Define
                          : op_text == "=" ? Form::Assign
                                           : Form::OpAssign;
        NodeId as = open(NodeKind::AssignStmt, form, start);
        nodes_[as].text = op_text;
        for (NodeId l : lhs) add(as, l, Role::Lhs);
        for (NodeId r : parse_expr_list()) add(as, r, Role::Rhs);
        close(as);
        return {as, kNoNode};
      }
      if (op == ":" && label_ok && lhs.size() == 1 &&
          nodes_[lhs[0]].form == Form::Ident) {
        NodeId ls = open(NodeKind::OtherStmt, Form::Labeled, start);
        next();
        add(ls, lhs[0], Role::Name);
        if (!is_op("}")) {
          std::vector<NodeId> inner = parse_stmt();
          for (NodeId s : inner) add(ls, s, Role::Stmt);
        }
        close(ls);
        return {ls, kNoNode};
      }
      if (op == "<-" && lhs.size() == 1) {
        NodeId ss = open(NodeKind::OtherStmt, Form::Send, start);
        next();
        add(ss, lhs[0], Role::Lhs);
        add(ss, parse_expr(), Role::Rhs);
        close(ss);
        return {ss, kNoNode};
      }
      if (op == "++" || op == "--") {
        NodeId is = open(NodeKind::OtherStmt, Form::IncDec, start);
        nodes_[is].text = std::string(op);
        next();
        add(is, lhs[0], Role::Operand);
        close(is);
        return {is, kNoNode};
      }
    }
    if (lhs.size() > 1) error("expected 1 expression");
    if (!wrap) return {kNoNode, lhs[0]};
    NodeId es = open(NodeKind::OtherStmt, Form::ExprStmt, start);
    for (NodeId l : lhs) add(es, l, Role::Value);
    close(es);
    return {es, lhs[0]};
  }

  NodeId parse_if() {
    NodeId s = open(NodeKind::IfStmt, Form::If);
    next();  // if
    const int saved = expr_level_;
    expr_level_ = -1;
    if (is_op("{")) {
      error("missing condition in if statement");
    } else {
      NodeId init = kNoNode;
      if (!is_semi()) {
        auto [stmt, expr] = parse_simple_stmt(false, false, false);
        if (stmt == kNoNode) {
          if (is_semi()) {
            // expression followed by ';' is an init statement
            NodeId es = open(NodeKind::OtherStmt, Form::ExprStmt, start_of(expr));
            add(es, expr, Role::Value);
            close(es);
            init = es;
          } else {
            add(s, expr, Role::Cond);
          }
        } else {
          init = stmt;
        }
      }
      if (init != kNoNode || is_semi()) {
        if (init != kNoNode) add(s, init, Role::Init);
        if (is_semi()) next();
        if (!is_op("{")) {
          add(s, parse_expr(), Role::Cond);
        } else {
          error("missing condition in if statement");
        }
      }
    }
    expr_level_ = saved;
    add(s, parse_block(), Role::Body);
    if (is_keyword("else")) {
      next();
      if (is_keyword("if")) {
        add(s, parse_if(), Role::Else);
      } else if (is_op("{")) {
        add(s, parse_block(), Role::Else);
      } else {
        error("expected if statement or block");
      }
    }
    close(s);
    return s;
  }

  static bool is_type_switch_guard(const std::vector<SyntaxNode>& nodes, NodeId n) {
    if (n == kNoNode) return false;
    const SyntaxNode& node = nodes[n];
    if (node.form == Form::TypeAssert && node.text == "type") return true;
    if (node.form == Form::Define && node.children.size() == 2) {
      const SyntaxNode& rhs = nodes[node.children[1]];
      return rhs.form == Form::TypeAssert && rhs.text == "type";
    }
    return false;
  }

  NodeId parse_switch() {
    NodeId s = open(NodeKind::SwitchStmt, Form::Switch);
    next();  // switch
    const int saved = expr_level_;
    expr_level_ = -1;
    NodeId tag = kNoNode;
    if (!is_op("{")) {
      NodeId first = kNoNode;
      if (!is_semi()) {
        auto [stmt, expr] = parse_simple_stmt(false, false, false);
        first = stmt != kNoNode ? stmt : expr;
      }
      if (is_semi()) {
        next();
        if (first != kNoNode) {
          if (nodes_[first].kind != NodeKind::AssignStmt &&
              nodes_[first].kind != NodeKind::OtherStmt) {
            NodeId es = open(NodeKind::OtherStmt, Form::ExprStmt, start_of(first));
            add(es, first, Role::Value);
            close(es);
            first = es;
          }
          add(s, first, Role::Init);
        }
        if (!is_op("{")) {
          auto [stmt, expr] = parse_simple_stmt(false, false, false);
          tag = stmt != kNoNode ? stmt : expr;
        }
      } else {
        tag = first;
      }
    }
    expr_level_ = saved;
    if (tag != kNoNode) {
      add(s, tag, Role::Cond);
      if (is_type_switch_guard(nodes_, tag)) nodes_[s].form = Form::TypeSwitch;
    }
    expect_op("{");
    while (!is_op("}") && !at_eof()) {
      const std::size_t before = pos_;
      if (is_keyword("case") || is_keyword("default")) {
        NodeId cc = open(NodeKind::OtherStmt, Form::CaseClause);
        if (is_keyword("case")) {
          next();
          for (NodeId v : parse_expr_list()) add(cc, v, Role::Value);
        } else {
          nodes_[cc].text = "default";
          next();
        }
        expect_op(":");
        parse_stmt_list(cc);
        close(cc);
        add(s, cc, Role::Body);
      } else {
        error("expected 'case' or 'default'");
        sync_stmt();
        if (is_semi()) next();
      }
      if (pos_ == before) next();
    }
    expect_op("}");
    close(s);
    return s;
  }

  NodeId parse_select() {
    NodeId s = open(NodeKind::SwitchStmt, Form::Select);
    next();
    expect_op("{");
    while (!is_op("}") && !at_eof()) {
      const std::size_t before = pos_;
      if (is_keyword("case") || is_keyword("default")) {
        NodeId cc = open(NodeKind::OtherStmt, Form::CommClause);
        if (is_keyword("case")) {
          next();
          add(cc, parse_simple_stmt(false, false).first, Role::Init);
        } else {
          nodes_[cc].text = "default";
          next();
        }
        expect_op(":");
        parse_stmt_list(cc);
        close(cc);
        add(s, cc, Role::Body);
      } else {
        error("expected 'case' or 'default'");
        sync_stmt();
        if (is_semi()) next();
      }
      if (pos_ == before) next();
    }
    expect_op("}");
    close(s);
    return s;
  }

  NodeId parse_for() {
    const std::uint32_t start = tok().offset;
    next();  // for
    const int saved = expr_level_;
    expr_level_ = -1;
    NodeId s = kNoNode;
    if (is_op("{")) {
      s = open(NodeKind::ForStmt, Form::For, start);
    } else {
      NodeId first = kNoNode;
      NodeId first_expr = kNoNode;
      if (!is_semi()) {
        auto [stmt, expr] = parse_simple_stmt(false, true, false);
        first = stmt;
        first_expr = expr;
      }
      if (first != kNoNode && nodes_[first].form == Form::ForRange) {
        s = first;
        nodes_[s].span.offset = start;
      } else if (is_semi()) {
        s = open(NodeKind::ForStmt, Form::For, start);
        if (first == kNoNode && first_expr != kNoNode) {
          NodeId es = open(NodeKind::OtherStmt, Form::ExprStmt, start_of(first_expr));
          add(es, first_expr, Role::Value);
          close(es);
          first = es;
        }
        if (first != kNoNode) add(s, first, Role::Init);
        next();
        if (!is_semi()) add(s, parse_expr(), Role::Cond);
        if (is_semi()) {
          next();
        } else {
          error("expected ';' in for clause");
        }
        if (!is_op("{")) {
          add(s, parse_simple_stmt(false, false).first, Role::Post);
        }
      } else {
        s = open(NodeKind::ForStmt, Form::For, start);
        if (first_expr != kNoNode) {
          add(s, first_expr, Role::Cond);
        } else if (first != kNoNode) {
          error("expected for loop condition");
          add(s, first, Role::Init);
        }
      }
    }
    expr_level_ = saved;
    add(s, parse_block(), Role::Body);
    close(s);
    return s;
  }

  // ---- expressions ----
  std::vector<NodeId> parse_expr_list() {
    std::vector<NodeId> list{parse_expr()};
    while (is_op(",")) {
      next();
      list.push_back(parse_expr());
    }
    return list;
  }

  NodeId parse_rhs() { return parse_expr(); }

  NodeId parse_expr() { return parse_binary(1); }

  static int precedence(const Token& t) {
    if (t.kind != LexKind::Operator) return 0;
    const std::string_view op = t.text;
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
        op == ">=")
      return 3;
    if (op == "+" || op == "-" || op == "|" || op == "^") return 4;
    if (op == "*" || op == "/" || op == "%" || op == "<<" || op == ">>" ||
        op == "&" || op == "&^")
      return 5;
    return 0;
  }

  NodeId parse_binary(int min_prec) {
    NodeId left = parse_unary();
    for (;;) {
      const int prec = precedence(tok());
      if (prec < min_prec) return left;
      NodeId bin = open(NodeKind::OtherExpr, Form::Binary, start_of(left));
      nodes_[bin].text = std::string(tok().text);
      next();
      add(bin, left, Role::Lhs);
      add(bin, parse_binary(prec + 1), Role::Rhs);
      close(bin);
      left = bin;
    }
  }

  NodeId parse_unary() {
    if (tok().kind == LexKind::Operator) {
      const std::string_view op = tok().text;
      if (op == "*") {
        NodeId s = open(NodeKind::StarExpr, Form::Star);
        next();
        add(s, parse_unary(), Role::Operand);
        close(s);
        return s;
      }
      if (op == "&") {
        NodeId s = open(NodeKind::UnaryAddrExpr, Form::AddrOf);
        next();
        add(s, parse_unary(), Role::Operand);
        close(s);
        return s;
      }
      if (op == "<-") {
        if (peek().kind == LexKind::Keyword && peek().text == "chan")
          return parse_primary(parse_chan_type());
        NodeId s = open(NodeKind::OtherExpr, Form::Unary);
        nodes_[s].text = "<-";
        next();
        add(s, parse_unary(), Role::Operand);
        close(s);
        return s;
      }
      if (op == "+" || op == "-" || op == "!" || op == "^" || op == "~") {
        NodeId s = open(NodeKind::OtherExpr, Form::Unary);
        nodes_[s].text = std::string(op);
        next();
        add(s, parse_unary(), Role::Operand);
        close(s);
        return s;
      }
    }
    return parse_primary(parse_operand());
  }

  NodeId parse_operand() {
    switch (tok().kind) {
      case LexKind::Ident:
        return leaf(NodeKind::Ident, Form::Ident);
      case LexKind::Int:
      case LexKind::Float:
      case LexKind::Imag:
      case LexKind::Char:
      case LexKind::String:
        return leaf(NodeKind::BasicLit, Form::BasicLit);
      default:
        break;
    }
    if (is_op("(")) {
      NodeId p = open(NodeKind::OtherExpr, Form::Paren);
      next();
      const int saved = expr_level_;
      ++expr_level_;
      if (expr_level_ < 1) expr_level_ = 1;
      add(p, parse_type_or_expr(), Role::Operand);
      expr_level_ = saved;
      expect_op(")");
      close(p);
      return p;
    }
    if (is_op("[")) return parse_array_or_slice_type();
    if (is_keyword("func")) {
      const std::uint32_t start = tok().offset;
      next();
      NodeId fn = open(NodeKind::OtherExpr, Form::FuncType, start);
      parse_signature(fn);
      if (is_op("{")) {
        nodes_[fn].form = Form::FuncLit;
        const int saved = expr_level_;
        expr_level_ = 0;
        add(fn, parse_block(), Role::Body);
        expr_level_ = saved;
      }
      close(fn);
      return fn;
    }
    if (is_keyword("struct") || is_keyword("map") || is_keyword("chan") ||
        is_keyword("interface"))
      return parse_type();
    if (is_op("*")) return parse_unary();
    return bad_expr("expected operand");
  }

  NodeId parse_type_or_expr() {
    // Inside parentheses both `(*T)` and `(x)` are valid; the expression
    // grammar accepts pointer types as StarExpr.
    return parse_expr();
  }

  static bool is_literal_type(const std::vector<SyntaxNode>& nodes, NodeId x) {
    const SyntaxNode& n = nodes[x];
    switch (n.form) {
      case Form::Ident:
      case Form::ArrayType:
      case Form::SliceType:
      case Form::StructType:
      case Form::MapType:
        return true;
      case Form::Selector:
        return nodes[n.children[0]].form == Form::Ident;
      case Form::Index:
        return is_literal_type(nodes, n.children[0]);
      default:
        return false;
    }
  }

  static bool is_type_name(const std::vector<SyntaxNode>& nodes, NodeId x) {
    const Form f = nodes[x].form;
    return f == Form::Ident || f == Form::Selector;
  }

  NodeId parse_primary(NodeId x) {
    for (;;) {
      if (is_op(".")) {
        next();
        if (tok().kind == LexKind::Ident) {
          NodeId sel = open(NodeKind::SelectorExpr, Form::Selector, start_of(x));
          add(sel, x, Role::Operand);
          add(sel, parse_ident(), Role::Member);
          close(sel);
          x = sel;
        } else if (is_op("(")) {
          NodeId ta = open(NodeKind::OtherExpr, Form::TypeAssert, start_of(x));
          next();
          add(ta, x, Role::Operand);
          if (is_keyword("type")) {
            nodes_[ta].text = "type";
            next();
          } else {
            add(ta, parse_type(), Role::Type);
          }
          expect_op(")");
          close(ta);
          x = ta;
        } else {
          error("expected selector or type assertion");
          return x;
        }
      } else if (is_op("[")) {
        x = parse_index_or_slice(x);
      } else if (is_op("(")) {
        x = parse_call(x);
      } else if (is_op("{")) {
        if (is_literal_type(nodes_, x) &&
            (expr_level_ >= 0 || !is_type_name(nodes_, x))) {
          x = parse_composite_lit(x);
        } else {
          return x;
        }
      } else {
        return x;
      }
    }
  }

  NodeId parse_index_or_slice(NodeId x) {
    next();  // [
    const int saved = expr_level_;
    ++expr_level_;
    if (expr_level_ < 1) expr_level_ = 1;
    NodeId first = kNoNode;
    if (!is_op(":")) first = parse_type_or_expr();
    NodeId result;
    if (is_op(":")) {
      result = open(NodeKind::OtherExpr, Form::SliceExpr, start_of(x));
      add(result, x, Role::Operand);
      add(result, first, Role::Arg);
      int colons = 0;
      while (is_op(":") && colons < 2) {
        next();
        ++colons;
        if (!is_op(":") && !is_op("]")) add(result, parse_expr(), Role::Arg);
      }
    } else {
      result = open(NodeKind::OtherExpr, Form::Index, start_of(x));
      add(result, x, Role::Operand);
      add(result, first, Role::Arg);
      while (is_op(",")) {
        next();
        if (is_op("]")) break;
        add(result, parse_type_or_expr(), Role::Arg);
      }
    }
    expr_level_ = saved;
    expect_op("]");
    close(result);
    return result;
  }

  NodeId parse_call(NodeId callee) {
    NodeId call = open(NodeKind::CallExpr, Form::Call, start_of(callee));
    next();  // (
    add(call, callee, Role::Callee);
    const int saved = expr_level_;
    ++expr_level_;
    if (expr_level_ < 1) expr_level_ = 1;
    while (!is_op(")") && !at_eof()) {
      const std::size_t before = pos_;
      add(call, parse_type_or_expr(), Role::Arg);
      if (is_op("...")) {
        nodes_[call].text = "...";
        next();
      }
      if (is_op(",")) {
        next();
      } else if (!is_op(")")) {
        error("expected ',' or ')' in argument list");
        sync_list(")");
        if (is_op(",")) next();
      }
      if (pos_ == before) next();
    }
    expr_level_ = saved;
    expect_op(")");
    close(call);
    return call;
  }

  NodeId parse_composite_lit(NodeId type) {
    NodeId lit = open(NodeKind::CompositeLit, Form::CompositeLit,
                      type == kNoNode ? tok().offset : start_of(type));
    add(lit, type, Role::Type);
    parse_literal_body(lit);
    close(lit);
    return lit;
  }

  void parse_literal_body(NodeId lit) {
    next();  // {
    const int saved = expr_level_;
    ++expr_level_;
    if (expr_level_ < 1) expr_level_ = 1;
    while (!is_op("}") && !at_eof()) {
      const std::size_t before = pos_;
      NodeId elem = parse_element();
      if (is_op(":")) {
        NodeId kv = open(NodeKind::OtherExpr, Form::KeyValue, start_of(elem));
        next();
        add(kv, elem, Role::Key);
        add(kv, parse_element(), Role::Value);
        close(kv);
        elem = kv;
      }
      add(lit, elem, Role::Elem);
      if (is_op(",")) {
        next();
      } else if (!is_op("}")) {
        if (is_semi() && tok().implicit) {
          error("missing ',' before newline in composite literal");
          next();
        } else {
          error("expected ',' or '}' in composite literal");
          sync_list("}");
          if (is_op(",")) next();
        }
      }
      if (pos_ == before) next();
    }
    expr_level_ = saved;
    expect_op("}");
  }

  NodeId parse_element() {
    if (is_op("{")) {
      NodeId lit = open(NodeKind::CompositeLit, Form::CompositeLit);
      parse_literal_body(lit);
      close(lit);
      return lit;
    }
    return parse_expr();
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::uint32_t prev_end_ = 0;
  int expr_level_ = 0;
  std::vector<SyntaxNode> nodes_;
  std::vector<std::string> errors_;
  std::string package_name_;
};

}  // namespace

SyntaxTree parse_file(std::string source, std::string file_path) {
  Lexer lexer(source);
  std::vector<Token> tokens = lexer.tokenize();
  std::vector<std::string> errors = lexer.errors();

  Parser parser(source, std::move(tokens));
  parser.parse_file();
  std::vector<SyntaxNode> nodes = parser.take_nodes();
  for (std::string& e : parser.take_errors()) errors.push_back(std::move(e));

  LineIndex lines(source);
  for (SyntaxNode& n : nodes) {
    n.line = lines.line(n.span.offset);
    n.column = lines.column(n.span.offset);
  }
  std::string package_name = parser.package_name();
  return SyntaxTree(std::move(file_path), std::move(source), std::move(nodes),
                    std::move(package_name), std::move(errors));
}

}  // namespace unsafe_audit
