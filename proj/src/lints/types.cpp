#include <algorithm>
#include <array>
#include <charconv>

#include "unsafe_audit/lints.hpp"

namespace unsafe_audit {

namespace {

constexpr int kMaxDepth = 16;

constexpr std::array<std::string_view, 22> kPredeclared = {
    "bool",    "byte",    "rune",    "string",     "error",     "any",
    "int",     "int8",    "int16",   "int32",      "int64",     "uint",
    "uint8",   "uint16",  "uint32",  "uint64",     "uintptr",   "float32",
    "float64", "complex64", "complex128", "comparable"};

bool is_predeclared(std::string_view name) {
  return std::find(kPredeclared.begin(), kPredeclared.end(), name) != kPredeclared.end();
}

bool is_arch_dependent(std::string_view name) {
  return name == "int" || name == "uint" || name == "uintptr";
}

const ImportTable kEmptyImports;

TypeRef basic(std::string name) {
  TypeRef t;
  t.basic = std::move(name);
  return t;
}

std::optional<HeaderKind> reflect_header(std::string_view name) {
  if (name == "SliceHeader") return HeaderKind::SliceHeader;
  if (name == "StringHeader") return HeaderKind::StringHeader;
  return std::nullopt;
}

// Integer literal value (decimal, hex, octal, binary, `_` separators).
std::optional<std::uint64_t> int_literal(std::string_view text) {
  std::string digits;
  for (char c : text)
    if (c != '_') digits.push_back(c);
  int base = 10;
  std::string_view d = digits;
  if (d.size() > 1 && d[0] == '0') {
    const char p = static_cast<char>(d[1] | 0x20);
    if (p == 'x') base = 16, d.remove_prefix(2);
    else if (p == 'b') base = 2, d.remove_prefix(2);
    else if (p == 'o') base = 8, d.remove_prefix(2);
    else base = 8, d.remove_prefix(1);
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), v, base);
  if (ec != std::errc() || ptr != d.data() + d.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string_view to_string(HeaderKind kind) {
  return kind == HeaderKind::SliceHeader ? "SliceHeader" : "StringHeader";
}

TypeEnvironment::TypeEnvironment(const std::vector<const SyntaxTree*>& files,
                                 const std::vector<ImportTable>& imports) {
  files_.reserve(files.size());
  for (std::size_t i = 0; i < files.size(); ++i)
    files_.push_back(FileInfo{files[i], i < imports.size() ? &imports[i] : &kEmptyImports, {}});
  for (FileInfo& f : files_) collect(f);
}

const TypeEnvironment::FileInfo* TypeEnvironment::file(const SyntaxTree& tree) const {
  for (const FileInfo& f : files_)
    if (f.tree == &tree) return &f;
  return nullptr;
}

const ImportTable& TypeEnvironment::imports_of(const SyntaxTree& tree) const {
  const FileInfo* f = file(tree);
  return f ? *f->imports : kEmptyImports;
}

void TypeEnvironment::collect(FileInfo& info) {
  const SyntaxTree& t = *info.tree;
  auto ref = [&](NodeId expr) {
    TypeRef r;
    r.tree = &t;
    r.expr = expr;
    r.imports = info.imports;
    return r;
  };
  auto declare = [&](NodeId ident, NodeId scope, std::optional<TypeRef> type, NodeId value) {
    if (ident == kNoNode || t[ident].form != Form::Ident || t[ident].text == "_") return;
    info.decls.push_back(
        LocalDecl{t[ident].text, t[ident].span.offset, scope, ident, std::move(type), value});
  };

  for (NodeId id : t.preorder()) {
    const SyntaxNode& n = t[id];
    switch (n.kind) {
      case NodeKind::TypeDecl: {
        if (t.enclosing_function(id) != kNoNode) break;  // function-local types are rare
        const NodeId name = t.child(id, Role::Name);
        const NodeId type = t.child(id, Role::Type);
        if (name != kNoNode && type != kNoNode) types_.emplace(t[name].text, ref(type));
        break;
      }
      case NodeKind::FuncDecl: {
        if (t.child(id, Role::Recv) != kNoNode) break;
        const NodeId name = t.child(id, Role::Name);
        const NodeId results = t.child(id, Role::Results);
        if (name == kNoNode || results == kNoNode || t[results].children.empty()) break;
        const NodeId type = t.child(t[results].children.front(), Role::Type);
        if (type != kNoNode) func_results_.emplace(t[name].text, ref(type));
        break;
      }
      case NodeKind::VarDecl: {
        const NodeId scope = t.enclosing_function(id);
        const auto names = t.children(id, Role::Name);
        const auto values = t.children(id, Role::Value);
        const NodeId type = t.child(id, Role::Type);
        for (std::size_t i = 0; i < names.size(); ++i) {
          if (type != kNoNode)
            declare(names[i], scope, ref(type), kNoNode);
          else
            declare(names[i], scope, std::nullopt,
                    values.size() == names.size() ? values[i] : kNoNode);
        }
        break;
      }
      case NodeKind::AssignStmt: {
        if (n.form != Form::Define) break;
        const NodeId scope = t.enclosing_function(id);
        const auto lhs = t.children(id, Role::Lhs);
        const auto rhs = t.children(id, Role::Rhs);
        for (std::size_t i = 0; i < lhs.size(); ++i)
          declare(lhs[i], scope, std::nullopt, lhs.size() == rhs.size() ? rhs[i] : kNoNode);
        break;
      }
      case NodeKind::ForStmt: {
        if (n.form != Form::ForRange || n.text != ":=") break;
        for (NodeId l : t.children(id, Role::Lhs)) declare(l, id, std::nullopt, kNoNode);
        break;
      }
      case NodeKind::ParamList:
      case NodeKind::ResultList: {
        if (n.form == Form::TypeParams) break;
        const NodeId owner = n.parent;
        if (owner == kNoNode ||
            (t[owner].form != Form::FuncDecl && t[owner].form != Form::FuncLit))
          break;
        for (NodeId field : n.children) {
          const NodeId type = t.child(field, Role::Type);
          for (NodeId name : t.children(field, Role::Name))
            declare(name, owner, type != kNoNode ? std::optional(ref(type)) : std::nullopt,
                    kNoNode);
        }
        break;
      }
      default:
        break;
    }
  }
}

std::optional<TypeRef> TypeEnvironment::named_type(std::string_view name) const {
  auto it = types_.find(name);
  if (it == types_.end()) return std::nullopt;
  return it->second;
}

TypeRef TypeEnvironment::underlying(TypeRef t) const {
  for (int i = 0; i < kMaxDepth; ++i) {
    if (t.expr == kNoNode) {
      if (!is_predeclared(t.basic))
        if (auto named = named_type(t.basic)) {
          named->pointers += t.pointers;
          t = *named;
          continue;
        }
      return t;
    }
    t.expr = t.tree->unparen(t.expr);
    const SyntaxNode& n = (*t.tree)[t.expr];
    if (n.form != Form::Ident || is_predeclared(n.text)) return t;
    auto named = named_type(n.text);
    if (!named) return t;
    named->pointers += t.pointers;
    t = *named;
  }
  return t;
}

std::optional<TypeRef> TypeEnvironment::type_of_ident(const SyntaxTree& tree,
                                                      NodeId ident) const {
  return ident_impl(tree, ident, 0);
}

std::optional<TypeRef> TypeEnvironment::infer(const SyntaxTree& tree, NodeId expr) const {
  return infer_impl(tree, expr, 0);
}

std::optional<TypeRef> TypeEnvironment::ident_impl(const SyntaxTree& tree, NodeId ident,
                                                   int depth) const {
  if (depth > kMaxDepth || ident == kNoNode || tree[ident].form != Form::Ident)
    return std::nullopt;
  const FileInfo* f = file(tree);
  if (f == nullptr) return std::nullopt;
  const std::string& name = tree[ident].text;
  const std::uint32_t at = tree[ident].span.offset;

  std::vector<NodeId> chain;
  for (NodeId fn = tree.enclosing_function(ident); fn != kNoNode;
       fn = tree.enclosing_function(fn))
    chain.push_back(fn);

  const LocalDecl* best = nullptr;
  for (const LocalDecl& d : f->decls) {
    if (d.name != name || d.scope == kNoNode || d.ident == ident || d.offset > at) continue;
    bool visible = std::find(chain.begin(), chain.end(), d.scope) != chain.end();
    if (!visible && tree[d.scope].form == Form::ForRange) {
      // range variables are visible inside the loop statement only
      const Span s = tree[d.scope].span;
      visible = at >= s.offset && at < s.end();
    }
    if (!visible) continue;
    if (best == nullptr || d.offset > best->offset) best = &d;
  }
  const FileInfo* owner = f;
  if (best == nullptr) {
    for (const FileInfo& other : files_) {
      for (const LocalDecl& d : other.decls)
        if (d.scope == kNoNode && d.name == name) {
          best = &d;
          owner = &other;
          break;
        }
      if (best != nullptr) break;
    }
  }
  if (best == nullptr) return std::nullopt;
  if (best->type) return best->type;
  if (best->value == kNoNode) return std::nullopt;
  return infer_impl(*owner->tree, best->value, depth + 1);
}

std::optional<TypeRef> TypeEnvironment::infer_impl(const SyntaxTree& tree, NodeId expr,
                                                   int depth) const {
  if (depth > kMaxDepth || expr == kNoNode) return std::nullopt;
  const NodeId e = tree.unparen(expr);
  const SyntaxNode& n = tree[e];
  const ImportTable& imports = imports_of(tree);
  auto ref = [&](NodeId type_expr, int pointers = 0) {
    TypeRef r;
    r.tree = &tree;
    r.expr = type_expr;
    r.imports = &imports;
    r.pointers = pointers;
    return r;
  };

  switch (n.form) {
    case Form::CompositeLit: {
      const NodeId type = tree.child(e, Role::Type);
      if (type == kNoNode) return std::nullopt;
      return ref(type);
    }
    case Form::AddrOf: {
      auto inner = infer_impl(tree, tree.child(e, Role::Operand), depth + 1);
      if (inner) ++inner->pointers;
      return inner;
    }
    case Form::Star: {
      auto inner = infer_impl(tree, tree.child(e, Role::Operand), depth + 1);
      if (!inner) return std::nullopt;
      TypeRef u = underlying(*inner);
      if (u.pointers > 0) {
        --u.pointers;
        return u;
      }
      if (u.expr != kNoNode && (*u.tree)[u.expr].form == Form::Star) {
        TypeRef r = u;
        r.expr = u.tree->child(u.expr, Role::Operand);
        return r;
      }
      return std::nullopt;
    }
    case Form::Call: {
      const NodeId callee = tree.unparen(tree.child(e, Role::Callee));
      const auto args = tree.children(e, Role::Arg);
      if (callee == kNoNode) return std::nullopt;
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
          return ref(callee);
        case Form::Ident:
          if (c.text == "new" && args.size() == 1) return ref(args[0], 1);
          if (c.text == "make" && !args.empty()) return ref(args[0]);
          if (is_predeclared(c.text) || named_type(c.text)) return ref(callee);
          if (auto it = func_results_.find(c.text); it != func_results_.end())
            return it->second;
          return std::nullopt;
        case Form::Selector: {
          const NodeId q = tree.child(callee, Role::Operand);
          const NodeId m = tree.child(callee, Role::Member);
          if (q == kNoNode || m == kNoNode || tree[q].form != Form::Ident) return std::nullopt;
          if ((imports.binds(tree[q].text, "reflect") && reflect_header(tree[m].text)) ||
              (imports.binds(tree[q].text, "unsafe") && tree[m].text == "Pointer"))
            return ref(callee);
          return std::nullopt;
        }
        default:
          return std::nullopt;
      }
    }
    case Form::BasicLit:
      if (!n.text.empty() && (n.text[0] == '"' || n.text[0] == '`')) return basic("string");
      if (!n.text.empty() && n.text[0] == '\'') return basic("rune");
      if (n.text.find_first_of(".eEpP") != std::string::npos &&
          n.text.rfind("0x", 0) != 0)
        return basic("float64");
      return basic("int");
    case Form::Ident:
      return ident_impl(tree, e, depth + 1);
    case Form::Selector: {
      auto base = infer_impl(tree, tree.child(e, Role::Operand), depth + 1);
      const NodeId member = tree.child(e, Role::Member);
      if (!base || member == kNoNode) return std::nullopt;
      TypeRef u = underlying(*base);
      if (u.pointers > 0) u.pointers = 0;
      if (u.expr != kNoNode && (*u.tree)[u.expr].form == Form::Star)
        u = underlying(TypeRef{u.tree, u.tree->child(u.expr, Role::Operand), u.imports, 0, ""});
      if (u.expr == kNoNode || (*u.tree)[u.expr].form != Form::StructType) return std::nullopt;
      for (NodeId field : u.tree->children(u.expr)) {
        const NodeId type = u.tree->child(field, Role::Type);
        for (NodeId name : u.tree->children(field, Role::Name))
          if ((*u.tree)[name].text == tree[member].text)
            return TypeRef{u.tree, type, u.imports, 0, ""};
      }
      return std::nullopt;
    }
    case Form::Index: {
      auto base = infer_impl(tree, tree.child(e, Role::Operand), depth + 1);
      if (!base) return std::nullopt;
      TypeRef u = underlying(*base);
      if (u.pointers > 0 || u.expr == kNoNode) return std::nullopt;
      const Form f = (*u.tree)[u.expr].form;
      if (f != Form::SliceType && f != Form::ArrayType && f != Form::MapType)
        return std::nullopt;
      return TypeRef{u.tree, u.tree->child(u.expr, Role::Elem), u.imports, 0, ""};
    }
    case Form::SliceExpr:
      return infer_impl(tree, tree.child(e, Role::Operand), depth + 1);
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

namespace {

std::optional<HeaderKind> match_struct_signature(const SyntaxTree& t, NodeId st) {
  std::vector<std::pair<std::string, std::string>> fields;
  for (NodeId field : t.children(st)) {
    const NodeId type = t.child(field, Role::Type);
    const auto names = t.children(field, Role::Name);
    if (type == kNoNode || names.empty()) return std::nullopt;  // embedded
    const NodeId ut = t.unparen(type);
    const std::string type_name = t[ut].form == Form::Ident ? t[ut].text : std::string();
    for (NodeId name : names) fields.emplace_back(t[name].text, type_name);
  }
  std::sort(fields.begin(), fields.end());
  using Sig = std::vector<std::pair<std::string, std::string>>;
  static const Sig slice = {{"Cap", "int"}, {"Data", "uintptr"}, {"Len", "int"}};
  static const Sig string = {{"Data", "uintptr"}, {"Len", "int"}};
  if (fields == slice) return HeaderKind::SliceHeader;
  if (fields == string) return HeaderKind::StringHeader;
  return std::nullopt;
}

std::optional<HeaderKind> header_match_impl(const TypeRef& type, const TypeEnvironment& env,
                                            int depth) {
  if (depth > kMaxDepth || type.pointers > 0 || type.expr == kNoNode || type.tree == nullptr)
    return std::nullopt;
  const SyntaxTree& t = *type.tree;
  const NodeId e = t.unparen(type.expr);
  const SyntaxNode& n = t[e];
  const ImportTable& imports = type.imports ? *type.imports : kEmptyImports;
  switch (n.form) {
    case Form::Selector: {
      const NodeId q = t.child(e, Role::Operand);
      const NodeId m = t.child(e, Role::Member);
      if (q == kNoNode || m == kNoNode || t[q].form != Form::Ident) return std::nullopt;
      if (imports.binds(t[q].text, "reflect")) {
        if (auto k = reflect_header(t[m].text)) return k;
        return std::nullopt;
      }
      if (imports.entries.count(t[q].text) != 0) env.note_unresolved();
      return std::nullopt;
    }
    case Form::Ident: {
      if (auto named = env.named_type(n.text)) return header_match_impl(*named, env, depth + 1);
      if (imports.dot_imports.count("reflect") != 0) return reflect_header(n.text);
      return std::nullopt;
    }
    case Form::StructType:
      return match_struct_signature(t, e);
    default:
      return std::nullopt;
  }
}

ArchCount count_type(const TypeRef& type, const TypeEnvironment& env, bool flat, int depth);

ArchCount count_struct(const SyntaxTree& t, NodeId st, const ImportTable* imports,
                       const TypeEnvironment& env, bool flat, int depth) {
  ArchCount total;
  for (NodeId field : t.children(st)) {
    const NodeId type = t.child(field, Role::Type);
    if (type == kNoNode) continue;
    const auto names = t.children(field, Role::Name);
    const std::uint64_t k = names.empty() ? 1 : names.size();
    const ArchCount c = count_type(TypeRef{&t, type, imports, 0, ""}, env, flat, depth + 1);
    total.count += k * c.count;
    total.incomplete = total.incomplete || c.incomplete;
  }
  return total;
}

// Arch-dependent count contributed by one field of the given type.
ArchCount count_type(const TypeRef& type, const TypeEnvironment& env, bool flat, int depth) {
  if (depth > kMaxDepth) return {0, true};
  if (type.pointers > 0) return {};
  if (type.expr == kNoNode) return {is_arch_dependent(type.basic) ? 1u : 0u, false};
  const SyntaxTree& t = *type.tree;
  const NodeId e = t.unparen(type.expr);
  const SyntaxNode& n = t[e];
  const ImportTable& imports = type.imports ? *type.imports : kEmptyImports;
  switch (n.form) {
    case Form::Ident: {
      if (is_arch_dependent(n.text)) return {1, false};
      if (is_predeclared(n.text)) return {};
      if (auto named = env.named_type(n.text)) {
        if (flat) return {};
        return count_type(*named, env, flat, depth + 1);
      }
      if (imports.dot_imports.count("reflect") != 0 && reflect_header(n.text))
        return {flat ? 0u : (n.text == "SliceHeader" ? 3u : 2u), false};
      return {0, true};
    }
    case Form::Selector: {
      const NodeId q = t.child(e, Role::Operand);
      const NodeId m = t.child(e, Role::Member);
      if (q != kNoNode && m != kNoNode && t[q].form == Form::Ident) {
        if (imports.binds(t[q].text, "unsafe")) return {};
        if (imports.binds(t[q].text, "reflect") && reflect_header(t[m].text))
          return {flat ? 0u : (t[m].text == "SliceHeader" ? 3u : 2u), false};
      }
      return {0, true};
    }
    case Form::StructType:
      if (flat) return {};
      return count_struct(t, e, type.imports, env, flat, depth);
    case Form::ArrayType: {
      const NodeId len = t.child(e, Role::Len);
      const NodeId elem = t.child(e, Role::Elem);
      if (elem == kNoNode) return {0, true};
      const ArchCount per = count_type(TypeRef{&t, elem, type.imports, 0, ""}, env, flat, depth + 1);
      if (len == kNoNode || t[t.unparen(len)].form != Form::BasicLit) {
        // `[...]T` or a named constant length
        return {0, per.incomplete || per.count > 0};
      }
      const auto value = int_literal(t[t.unparen(len)].text);
      if (!value) return {0, per.incomplete || per.count > 0};
      return {*value * per.count, per.incomplete};
    }
    case Form::Star:
    case Form::SliceType:
    case Form::MapType:
    case Form::ChanType:
    case Form::FuncType:
    case Form::InterfaceType:
      return {};
    default:
      return {0, true};
  }
}

}  // namespace

std::optional<HeaderKind> header_signature_match(const TypeRef& type,
                                                 const TypeEnvironment& env) {
  return header_match_impl(type, env, 0);
}

ArchCount count_arch_dependent_fields(const TypeRef& struct_type, const TypeEnvironment& env,
                                      bool flat) {
  const TypeRef u = env.underlying(struct_type);
  if (u.pointers > 0 || u.expr == kNoNode) return {0, u.pointers == 0};
  const SyntaxTree& t = *u.tree;
  const NodeId e = t.unparen(u.expr);
  if (t[e].form == Form::StructType) return count_struct(t, e, u.imports, env, flat, 0);
  // reflect headers and other non-literal struct types
  return count_type(u, env, false, 0);
}

}  // namespace unsafe_audit
