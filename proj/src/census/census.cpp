#include "unsafe_audit/census.hpp"

#include <algorithm>
#include <tuple>

namespace unsafe_audit {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::UnsafePointer: return "UnsafePointer";
    case TokenKind::UnsafeSizeof: return "UnsafeSizeof";
    case TokenKind::UnsafeOffsetof: return "UnsafeOffsetof";
    case TokenKind::UnsafeAlignof: return "UnsafeAlignof";
    case TokenKind::ReflectSliceHeader: return "ReflectSliceHeader";
    case TokenKind::ReflectStringHeader: return "ReflectStringHeader";
    case TokenKind::Uintptr: return "Uintptr";
  }
  return "?";
}

std::string_view to_string(ContextKind kind) {
  switch (kind) {
    case ContextKind::Assignment: return "Assignment";
    case ContextKind::Call: return "Call";
    case ContextKind::Parameter: return "Parameter";
    case ContextKind::Variable: return "Variable";
    case ContextKind::Other: return "Other";
  }
  return "?";
}

std::optional<TokenKind> parse_token_kind(std::string_view s) {
  for (TokenKind k : kAllTokenKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::optional<ContextKind> parse_context_kind(std::string_view s) {
  for (ContextKind k : kAllContextKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

bool finding_less(const UnsafeFinding& a, const UnsafeFinding& b) {
  return std::tie(a.file, a.line, a.column, a.token) <
         std::tie(b.file, b.line, b.column, b.token);
}

namespace {

std::optional<TokenKind> unsafe_member(std::string_view name) {
  if (name == "Pointer") return TokenKind::UnsafePointer;
  if (name == "Sizeof") return TokenKind::UnsafeSizeof;
  if (name == "Offsetof") return TokenKind::UnsafeOffsetof;
  if (name == "Alignof") return TokenKind::UnsafeAlignof;
  return std::nullopt;
}

std::optional<TokenKind> reflect_member(std::string_view name) {
  if (name == "SliceHeader") return TokenKind::ReflectSliceHeader;
  if (name == "StringHeader") return TokenKind::ReflectStringHeader;
  return std::nullopt;
}

bool declares_name(const SyntaxTree& tree, NodeId id, std::string_view name) {
  for (NodeId c : tree.children(id, Role::Name))
    if (tree[c].text == name) return true;
  return false;
}

// Does `child`, seen as a direct child of a scope-owning node, declare
// `uintptr` for the rest of that scope?
bool declares_uintptr(const SyntaxTree& tree, NodeId child) {
  const SyntaxNode& n = tree[child];
  switch (n.kind) {
    case NodeKind::VarDecl:
    case NodeKind::TypeDecl:
      return declares_name(tree, child, "uintptr");
    case NodeKind::FuncDecl:
      return tree.child(child, Role::Recv) == kNoNode &&
             declares_name(tree, child, "uintptr");
    case NodeKind::AssignStmt:
      if (n.form != Form::Define) return false;
      for (NodeId l : tree.children(child, Role::Lhs))
        if (tree[l].form == Form::Ident && tree[l].text == "uintptr") return true;
      return false;
    case NodeKind::ParamList:
    case NodeKind::ResultList:
      for (NodeId field : tree.children(child))
        if (declares_name(tree, field, "uintptr")) return true;
      return false;
    default:
      return false;
  }
}

// The left side of `:=` binds names; `uintptr` there is never the type.
void mark_defined_names(const SyntaxTree& tree, NodeId id, std::vector<bool>& out) {
  for (NodeId l : tree.children(id, Role::Lhs))
    if (tree[l].form == Form::Ident && tree[l].text == "uintptr") out[l] = true;
}

void mark_shadowing(const SyntaxTree& tree, NodeId id, bool shadowed,
                    std::vector<bool>& out) {
  const SyntaxNode& n = tree[id];
  if (n.form == Form::Ident && n.text == "uintptr") out[id] = shadowed;
  bool scope_shadow = shadowed;
  // Range variables are declared by the ForRange node itself.
  if (n.form == Form::ForRange && n.text == ":=") {
    for (NodeId l : tree.children(id, Role::Lhs))
      if (tree[l].text == "uintptr") {
        // declared for the body only; the range expression keeps the
        // outer meaning
        for (NodeId c : n.children) {
          const bool in_body = tree[c].role == Role::Body;
          mark_shadowing(tree, c, in_body ? true : shadowed, out);
        }
        mark_defined_names(tree, id, out);
        return;
      }
  }
  for (NodeId c : n.children) {
    mark_shadowing(tree, c, scope_shadow, out);
    if (declares_uintptr(tree, c)) scope_shadow = true;
  }
  if (n.kind == NodeKind::AssignStmt && n.form == Form::Define) mark_defined_names(tree, id, out);
}

}  // namespace

PackageScope PackageScope::collect(const std::vector<const SyntaxTree*>& files) {
  PackageScope scope;
  for (const SyntaxTree* tree : files) {
    for (NodeId decl : tree->children(tree->root())) {
      const SyntaxNode& n = (*tree)[decl];
      if (n.kind == NodeKind::TypeDecl) {
        NodeId name = tree->child(decl, Role::Name);
        if (name != kNoNode) scope.type_names.insert((*tree)[name].text);
      }
      if ((n.kind == NodeKind::TypeDecl || n.kind == NodeKind::VarDecl ||
           (n.kind == NodeKind::FuncDecl && tree->child(decl, Role::Recv) == kNoNode)) &&
          declares_name(*tree, decl, "uintptr"))
        scope.uintptr_redeclared = true;
    }
  }
  return scope;
}

std::vector<bool> uintptr_shadowing(const SyntaxTree& tree, bool package_level) {
  std::vector<bool> out(tree.size(), false);
  mark_shadowing(tree, tree.root(), package_level, out);
  return out;
}

std::optional<TokenKind> match_token(const SyntaxTree& tree, NodeId node,
                                     const ImportTable& imports) {
  const SyntaxNode& n = tree[node];
  if (n.kind == NodeKind::SelectorExpr) {
    const NodeId qual = tree.child(node, Role::Operand);
    const NodeId member = tree.child(node, Role::Member);
    if (qual == kNoNode || member == kNoNode || tree[qual].form != Form::Ident)
      return std::nullopt;
    const std::string& q = tree[qual].text;
    const std::string& m = tree[member].text;
    if (imports.binds(q, "unsafe")) return unsafe_member(m);
    if (imports.binds(q, "reflect")) return reflect_member(m);
    return std::nullopt;
  }
  if (n.kind != NodeKind::Ident) return std::nullopt;
  // binding occurrences, selector members and labels are never uses
  if (n.role == Role::Name || n.role == Role::Member) return std::nullopt;
  if (n.parent != kNoNode && tree[n.parent].form == Form::Branch)
    return std::nullopt;
  // struct literal keys name fields
  if (n.role == Role::Key && n.parent != kNoNode &&
      tree[n.parent].form == Form::KeyValue)
    return std::nullopt;
  if (n.text == "uintptr") return TokenKind::Uintptr;
  if (imports.dot_imports.count("unsafe") != 0)
    if (auto k = unsafe_member(n.text)) return k;
  if (imports.dot_imports.count("reflect") != 0)
    if (auto k = reflect_member(n.text)) return k;
  return std::nullopt;
}

std::vector<UnsafeFinding> scan_package(
    const std::vector<const SyntaxTree*>& files,
    const std::vector<ImportTable>& imports, const PackageIdentity& identity,
    const std::vector<std::string>& display_names) {
  const PackageScope scope = PackageScope::collect(files);
  std::vector<UnsafeFinding> findings;
  for (std::size_t f = 0; f < files.size(); ++f) {
    const SyntaxTree& tree = *files[f];
    const ImportTable& table = imports[f];
    const std::vector<bool> shadowed =
        uintptr_shadowing(tree, scope.uintptr_redeclared);
    const std::string& file_name =
        f < display_names.size() && !display_names[f].empty()
            ? display_names[f]
            : tree.file_path();
    for (NodeId id : tree.preorder()) {
      std::optional<TokenKind> kind = match_token(tree, id, table);
      if (!kind) continue;
      if (*kind == TokenKind::Uintptr && shadowed[id]) continue;
      UnsafeFinding finding;
      finding.package_path = identity.package_path;
      finding.module_path = identity.module_path;
      finding.module_version = identity.module_version;
      finding.file = file_name;
      finding.line = tree[id].line;
      finding.column = tree[id].column;
      finding.token = *kind;
      finding.context = classify_context(tree, id, table, scope);
      const Span span = snippet_span(tree, id);
      finding.snippet = make_snippet(
          std::string_view(tree.source()).substr(span.offset, span.length));
      findings.push_back(std::move(finding));
    }
  }
  std::sort(findings.begin(), findings.end(), finding_less);
  return findings;
}

PackageCensus census_package(const std::vector<const SyntaxTree*>& files,
                             const std::vector<ImportTable>& imports,
                             const PackageIdentity& identity,
                             const std::vector<std::string>& display_names) {
  PackageCensus census;
  census.identity = identity;
  census.findings = scan_package(files, imports, identity, display_names);
  for (const UnsafeFinding& f : census.findings) {
    ++census.tokens[f.token];
    ++census.contexts[f.context];
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (files[i]->had_parse_errors()) ++census.parse_errors;
    if (imports[i].imports_path("C")) census.uses_cgo = true;
  }
  return census;
}

}  // namespace unsafe_audit
