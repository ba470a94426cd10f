#include "unsafe_audit/lints.hpp"

namespace unsafe_audit {

namespace {

bool is_unsafe_pointer(const SyntaxTree& t, NodeId callee, const ImportTable& imports) {
  callee = t.unparen(callee);
  if (callee == kNoNode) return false;
  if (t[callee].form == Form::Ident)
    return t[callee].text == "Pointer" && imports.dot_imports.count("unsafe") != 0;
  if (t[callee].form != Form::Selector) return false;
  const NodeId q = t.child(callee, Role::Operand);
  const NodeId m = t.child(callee, Role::Member);
  return q != kNoNode && m != kNoNode && t[q].form == Form::Ident &&
         imports.binds(t[q].text, "unsafe") && t[m].text == "Pointer";
}

enum class Shape { NotStruct, Struct, Foreign };

// Whether a type is a struct the pass can reason about. Named types from
// other packages (other than reflect's headers) are Foreign.
Shape shape_of(const TypeEnvironment& env, const TypeRef& type) {
  const TypeRef u = env.underlying(type);
  if (u.pointers > 0) return Shape::NotStruct;
  if (u.expr == kNoNode) return Shape::NotStruct;
  const SyntaxTree& t = *u.tree;
  const NodeId e = t.unparen(u.expr);
  const SyntaxNode& n = t[e];
  if (n.form == Form::StructType) return Shape::Struct;
  if (header_signature_match(u, env)) return Shape::Struct;
  if (n.form == Form::Selector) {
    const NodeId q = t.child(e, Role::Operand);
    const ImportTable& imports = u.imports ? *u.imports : env.imports_of(t);
    if (q != kNoNode && t[q].form == Form::Ident && imports.binds(t[q].text, "unsafe"))
      return Shape::NotStruct;
    return Shape::Foreign;
  }
  return Shape::NotStruct;
}

std::string type_text(const TypeRef& type) {
  std::string s(static_cast<std::size_t>(type.pointers), '*');
  if (type.expr == kNoNode) return s + type.basic;
  return s + collapse_whitespace(type.tree->text_of(type.expr));
}

}  // namespace

std::vector<Diagnostic> structcast_check(const SyntaxTree& tree, NodeId function,
                                         const TypeEnvironment& env, bool flat) {
  std::vector<Diagnostic> out;
  const ImportTable& imports = env.imports_of(tree);
  for (NodeId id : tree.preorder()) {
    if (tree[id].form != Form::Call || tree.enclosing_function(id) != function) continue;
    // (*T2)(unsafe.Pointer(x))
    const NodeId callee = tree.unparen(tree.child(id, Role::Callee));
    const auto args = tree.children(id, Role::Arg);
    if (callee == kNoNode || tree[callee].form != Form::Star || args.size() != 1) continue;
    const NodeId conv = tree.unparen(args[0]);
    if (tree[conv].form != Form::Call) continue;
    const auto inner = tree.children(conv, Role::Arg);
    if (inner.size() != 1 || !is_unsafe_pointer(tree, tree.child(conv, Role::Callee), imports))
      continue;
    const NodeId target = tree.child(callee, Role::Operand);
    if (target == kNoNode) continue;
    const TypeRef t2{&tree, target, &imports, 0, ""};

    // x is &v (T1 = type of v) or a pointer p (T1 = *p's type)
    const NodeId x = tree.unparen(inner[0]);
    std::optional<TypeRef> t1;
    if (tree[x].form == Form::AddrOf) {
      t1 = env.infer(tree, tree.child(x, Role::Operand));
    } else if (auto p = env.infer(tree, x)) {
      TypeRef u = env.underlying(*p);
      if (u.pointers > 0) {
        --u.pointers;
        t1 = u;
      } else if (u.expr != kNoNode && (*u.tree)[u.tree->unparen(u.expr)].form == Form::Star) {
        t1 = TypeRef{u.tree, u.tree->child(u.tree->unparen(u.expr), Role::Operand), u.imports,
                     0, ""};
      }
    }
    if (!t1) continue;

    const Shape s1 = shape_of(env, *t1);
    const Shape s2 = shape_of(env, t2);
    if (s1 == Shape::NotStruct || s2 == Shape::NotStruct) continue;
    const std::string from = type_text(*t1);
    const std::string to = type_text(t2);
    if (from == to && t1->tree == t2.tree) continue;  // identical named or literal type

    const ArchCount c1 = count_arch_dependent_fields(*t1, env, flat);
    const ArchCount c2 = count_arch_dependent_fields(t2, env, flat);
    Diagnostic d;
    d.pass = LintPass::Structcast;
    d.file = tree.file_path();
    d.line = tree[id].line;
    d.column = tree[id].column;
    const Span span = snippet_span(tree, id);
    d.snippet = make_snippet(std::string_view(tree.source()).substr(span.offset, span.length));
    const std::string counts = std::to_string(c1.count) + " vs " + std::to_string(c2.count);
    if (s1 == Shape::Foreign || s2 == Shape::Foreign || c1.incomplete || c2.incomplete) {
      d.severity = Severity::Info;
      d.message = "cast from " + from + " to " + to +
                  " involves types that cannot be fully resolved (architecture-dependent "
                  "fields " + counts + ")";
    } else if (c1.count != c2.count) {
      d.message = "cast from " + from + " to " + to +
                  " changes the number of architecture-dependent fields (int, uint, "
                  "uintptr): " + counts;
    } else {
      continue;
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace unsafe_audit
