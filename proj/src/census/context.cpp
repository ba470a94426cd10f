#include <array>
#include <string_view>

#include "unsafe_audit/census.hpp"

namespace unsafe_audit {

namespace {

constexpr std::array<std::string_view, 22> kPredeclaredTypes = {
    "bool",    "byte",    "rune",    "string",     "error",     "any",
    "int",     "int8",    "int16",   "int32",      "int64",     "uint",
    "uint8",   "uint16",  "uint32",  "uint64",     "uintptr",   "float32",
    "float64", "complex64", "complex128", "comparable"};

bool is_predeclared_type(std::string_view name) {
  for (std::string_view t : kPredeclaredTypes)
    if (t == name) return true;
  return false;
}

// Parent of `id` extends the expression chain rooted at the token: the
// call applied to it, a conversion wrapping it, or unary `*`/`&`/parens.
bool extends_chain(const SyntaxTree& tree, NodeId id, const ImportTable& imports,
                   const PackageScope& scope) {
  const NodeId parent = tree.parent(id);
  if (parent == kNoNode) return false;
  const SyntaxNode& p = tree[parent];
  const Role role = tree[id].role;
  switch (p.form) {
    case Form::Star:
    case Form::AddrOf:
    case Form::Paren:
      return true;
    case Form::Call:
      if (role == Role::Callee) return true;
      return role == Role::Arg &&
             is_conversion_callee(tree, tree.child(parent, Role::Callee),
                                  imports, scope);
    case Form::CompositeLit:
      return role == Role::Type;
    default:
      return false;
  }
}

}  // namespace

bool is_conversion_callee(const SyntaxTree& tree, NodeId callee,
                          const ImportTable& imports, const PackageScope& scope) {
  callee = tree.unparen(callee);
  if (callee == kNoNode) return false;
  const SyntaxNode& c = tree[callee];
  switch (c.form) {
    case Form::Star:
    case Form::ArrayType:
    case Form::SliceType:
    case Form::MapType:
    case Form::ChanType:
    case Form::FuncType:
    case Form::InterfaceType:
    case Form::StructType:
      return true;
    case Form::Ident:
      return is_predeclared_type(c.text) || scope.type_names.count(c.text) != 0 ||
             (imports.dot_imports.count("unsafe") != 0 && c.text == "Pointer");
    case Form::Selector: {
      const NodeId q = tree.child(callee, Role::Operand);
      const NodeId m = tree.child(callee, Role::Member);
      return q != kNoNode && m != kNoNode && tree[q].form == Form::Ident &&
             imports.binds(tree[q].text, "unsafe") && tree[m].text == "Pointer";
    }
    default:
      return false;
  }
}

ContextKind classify_context(const SyntaxTree& tree, NodeId token,
                             const ImportTable& imports,
                             const PackageScope& scope) {
  NodeId chain = token;
  while (extends_chain(tree, chain, imports, scope)) chain = tree.parent(chain);

  NodeId child = chain;
  for (NodeId a = tree.parent(chain); a != kNoNode;
       child = a, a = tree.parent(a)) {
    const SyntaxNode& n = tree[a];
    switch (n.kind) {
      case NodeKind::ParamList:
      case NodeKind::ResultList:
        return ContextKind::Parameter;
      case NodeKind::VarDecl:
      case NodeKind::TypeDecl:
        return ContextKind::Variable;
      case NodeKind::Field:
        if (n.parent != kNoNode && tree[n.parent].kind == NodeKind::StructType)
          return ContextKind::Variable;
        break;  // parameter fields resolve at the enclosing list
      case NodeKind::AssignStmt:
      case NodeKind::ReturnStmt:
      case NodeKind::CompositeLit:
        return ContextKind::Assignment;
      case NodeKind::CallExpr:
        if (tree[child].role == Role::Arg) return ContextKind::Call;
        break;
      case NodeKind::File:
      case NodeKind::FuncDecl:
      case NodeKind::IfStmt:
      case NodeKind::ForStmt:
      case NodeKind::SwitchStmt:
      case NodeKind::Block:
      case NodeKind::OtherStmt:
        return ContextKind::Other;
      default:
        if (n.form == Form::FuncLit) return ContextKind::Other;
        break;
    }
  }
  return ContextKind::Other;
}

Span snippet_span(const SyntaxTree& tree, NodeId token) {
  // Compound statements and function headers contribute only the text
  // before their body.
  auto header = [&](NodeId id) -> Span {
    const Span s = tree[id].span;
    for (NodeId c : tree.children(id)) {
      const Role r = tree[c].role;
      if (r == Role::Body || r == Role::Stmt) {
        std::uint32_t end = tree[c].span.offset;
        while (end > s.offset && (tree.source()[end - 1] == ' ' ||
                                  tree.source()[end - 1] == '\t' ||
                                  tree.source()[end - 1] == '\n' ||
                                  tree.source()[end - 1] == '\r'))
          --end;
        return Span{s.offset, end - s.offset};
      }
    }
    return s;
  };

  for (NodeId a = token; a != kNoNode; a = tree.parent(a)) {
    const SyntaxNode& n = tree[a];
    if (n.kind == NodeKind::Field && n.parent != kNoNode &&
        tree[n.parent].kind == NodeKind::StructType)
      return n.span;
    switch (n.form) {
      case Form::If:
      case Form::For:
      case Form::ForRange:
      case Form::Switch:
      case Form::TypeSwitch:
      case Form::Select:
      case Form::CaseClause:
      case Form::CommClause:
      case Form::FuncDecl:
      case Form::FuncLit:
      case Form::Labeled:
        return header(a);
      case Form::Block:
      case Form::File:
        return tree[token].span;
      default:
        break;
    }
    if (tree.is_statement(a) || n.kind == NodeKind::VarDecl ||
        n.kind == NodeKind::TypeDecl || n.kind == NodeKind::ImportDecl)
      return n.span;
  }
  return tree[token].span;
}

std::string make_snippet(std::string_view source_text) {
  std::string s = collapse_whitespace(source_text);
  if (s.size() <= kSnippetLimit) return s;
  std::size_t cut = kSnippetLimit;
  // do not split a UTF-8 sequence
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  s.resize(cut);
  s += "...";
  return s;
}

}  // namespace unsafe_audit
