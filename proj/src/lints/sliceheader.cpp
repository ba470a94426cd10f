#include <algorithm>

#include "unsafe_audit/lints.hpp"

namespace unsafe_audit {

namespace {

enum class Origin { Safe, Composite, ZeroValue, Unknown, NoDefinition, Bound };

std::string_view describe(Origin o) {
  switch (o) {
    case Origin::Composite: return "comes from a composite literal";
    case Origin::ZeroValue: return "is a zero-value declaration";
    case Origin::Unknown: return "is not derived from a cast of a slice or string";
    case Origin::NoDefinition: return "has no definition in this function";
    case Origin::Bound: return "could not be traced within the search bound";
    case Origin::Safe: break;
  }
  return "";
}

bool is_header_field(std::string_view name) {
  return name == "Data" || name == "Len" || name == "Cap";
}

bool in_scope(const SyntaxTree& t, NodeId id, NodeId function) {
  return t.enclosing_function(id) == function;
}

Diagnostic make_diag(const SyntaxTree& t, NodeId at, std::string message) {
  Diagnostic d;
  d.pass = LintPass::Sliceheader;
  d.file = t.file_path();
  d.line = t[at].line;
  d.column = t[at].column;
  d.message = std::move(message);
  const Span s = snippet_span(t, at);
  d.snippet = make_snippet(std::string_view(t.source()).substr(s.offset, s.length));
  return d;
}

bool is_unsafe_pointer_callee(const SyntaxTree& t, NodeId callee, const ImportTable& imports) {
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

bool is_slice_or_string(const TypeEnvironment& env, const std::optional<TypeRef>& type) {
  if (!type) return false;
  const TypeRef u = env.underlying(*type);
  if (u.pointers > 0) return false;
  if (u.expr == kNoNode) return u.basic == "string";
  const SyntaxNode& n = (*u.tree)[u.expr];
  return n.form == Form::SliceType || n.form == Form::Ellipsis ||
         (n.form == Form::Ident && n.text == "string");
}

// Header type behind a value of type T or *T.
std::optional<HeaderKind> header_behind(const TypeEnvironment& env, TypeRef type) {
  TypeRef u = env.underlying(type);
  if (u.pointers > 1) return std::nullopt;
  if (u.pointers == 1) {
    u.pointers = 0;
    return header_signature_match(u, env);
  }
  if (u.expr != kNoNode && (*u.tree)[u.expr].form == Form::Star) {
    u.expr = u.tree->child(u.expr, Role::Operand);
    if (u.expr == kNoNode) return std::nullopt;
  }
  return header_signature_match(u, env);
}

}  // namespace

namespace detail {

// `(*H)(unsafe.Pointer(&s))` with H a header type and s a slice or string.
bool is_cast_derived_header(const SyntaxTree& t, NodeId expr, const TypeEnvironment& env) {
  const NodeId e = t.unparen(expr);
  if (e == kNoNode || t[e].form != Form::Call) return false;
  const NodeId callee = t.unparen(t.child(e, Role::Callee));
  const auto args = t.children(e, Role::Arg);
  if (callee == kNoNode || t[callee].form != Form::Star || args.size() != 1) return false;
  const ImportTable& imports = env.imports_of(t);
  const NodeId target = t.child(callee, Role::Operand);
  if (target == kNoNode ||
      !header_signature_match(TypeRef{&t, target, &imports, 0, ""}, env))
    return false;
  const NodeId conv = t.unparen(args[0]);
  if (t[conv].form != Form::Call) return false;
  const auto inner = t.children(conv, Role::Arg);
  if (!is_unsafe_pointer_callee(t, t.child(conv, Role::Callee), imports) || inner.size() != 1)
    return false;
  const NodeId addr = t.unparen(inner[0]);
  if (t[addr].form != Form::AddrOf) return false;
  return is_slice_or_string(env, env.infer(t, t.child(addr, Role::Operand)));
}

}  // namespace detail

namespace {

struct Definition {
  enum Kind { Value, ZeroValue, Unknown } kind;
  NodeId value = kNoNode;
};

bool is_name(const SyntaxTree& t, NodeId id, std::string_view name) {
  id = t.unparen(id);
  return id != kNoNode && t[id].form == Form::Ident && t[id].text == name;
}

std::optional<Definition> definition_in(const SyntaxTree& t, NodeId item, std::string_view name) {
  const SyntaxNode& n = t[item];
  switch (n.form) {
    case Form::Assign:
    case Form::Define:
    case Form::OpAssign: {
      const auto lhs = t.children(item, Role::Lhs);
      const auto rhs = t.children(item, Role::Rhs);
      for (std::size_t k = 0; k < lhs.size(); ++k) {
        if (!is_name(t, lhs[k], name)) continue;
        if (n.form != Form::OpAssign && lhs.size() == rhs.size())
          return Definition{Definition::Value, rhs[k]};
        return Definition{Definition::Unknown};
      }
      return std::nullopt;
    }
    case Form::VarSpec: {
      const auto names = t.children(item, Role::Name);
      const auto values = t.children(item, Role::Value);
      for (std::size_t k = 0; k < names.size(); ++k) {
        if (!is_name(t, names[k], name)) continue;
        if (values.empty()) return Definition{Definition::ZeroValue};
        if (values.size() == names.size()) return Definition{Definition::Value, values[k]};
        return Definition{Definition::Unknown};
      }
      return std::nullopt;
    }
    case Form::ForRange:
      for (NodeId l : t.children(item, Role::Lhs))
        if (is_name(t, l, name)) return Definition{Definition::Unknown};
      return std::nullopt;
    case Form::Switch:
    case Form::TypeSwitch: {
      const NodeId cond = t.child(item, Role::Cond);
      if (cond != kNoNode && t[cond].kind == NodeKind::AssignStmt)
        return definition_in(t, cond, name);
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

class BackwardWalk {
 public:
  BackwardWalk(const SyntaxTree& t, const Cfg& cfg, const TypeEnvironment& env,
               std::string name, SliceheaderOptions opts)
      : t_(t), cfg_(cfg), env_(env), name_(std::move(name)), opts_(opts),
        on_path_(cfg.blocks.size(), false) {}

  // Worst origin over every acyclic path from (block, index) back to a
  // definition or the function entry.
  Origin run(std::size_t block, std::size_t index) {
    walk(block, index, 0);
    if (!recorded_) return Origin::NoDefinition;
    return worst_;
  }

 private:
  void record(Origin o) {
    recorded_ = true;
    if (o != Origin::Safe && (worst_ == Origin::Safe || o < worst_)) worst_ = o;
  }

  void walk(std::size_t block, std::size_t end, std::size_t path_len) {
    if (worst_ != Origin::Safe && worst_ <= Origin::Composite) return;  // cannot get worse
    const auto& items = cfg_.blocks[block].items;
    for (std::size_t i = end; i-- > 0;) {
      if (++path_len > opts_.path_bound || ++steps_ > opts_.step_budget) {
        record(Origin::Bound);
        return;
      }
      if (auto def = definition_in(t_, items[i], name_)) {
        record(classify(*def));
        return;
      }
    }
    const auto& preds = cfg_.blocks[block].preds;
    if (block == cfg_.entry || preds.empty()) {
      record(Origin::NoDefinition);
      return;
    }
    on_path_[block] = true;
    for (std::size_t p : preds)
      if (!on_path_[p]) walk(p, cfg_.blocks[p].items.size(), path_len);
    on_path_[block] = false;
  }

  Origin classify(const Definition& d) const {
    if (d.kind == Definition::ZeroValue) return Origin::ZeroValue;
    if (d.kind == Definition::Unknown) return Origin::Unknown;
    if (detail::is_cast_derived_header(t_, d.value, env_)) return Origin::Safe;
    NodeId v = t_.unparen(d.value);
    if (t_[v].form == Form::AddrOf) v = t_.unparen(t_.child(v, Role::Operand));
    if (v != kNoNode && t_[v].form == Form::CompositeLit) return Origin::Composite;
    return Origin::Unknown;
  }

  const SyntaxTree& t_;
  const Cfg& cfg_;
  const TypeEnvironment& env_;
  std::string name_;
  SliceheaderOptions opts_;
  std::vector<bool> on_path_;
  std::size_t steps_ = 0;
  bool recorded_ = false;
  Origin worst_ = Origin::Safe;
};

// Statement containing `node` that is an item of the CFG.
NodeId cfg_item(const SyntaxTree& t, const Cfg& cfg, NodeId node) {
  for (NodeId a = node; a != kNoNode; a = t.parent(a))
    if (cfg.locate(a)) return a;
  return kNoNode;
}

}  // namespace

std::vector<Diagnostic> sliceheader_check(const SyntaxTree& tree, NodeId function,
                                          const TypeEnvironment& env,
                                          SliceheaderOptions opts) {
  std::vector<Diagnostic> out;
  const ImportTable& imports = env.imports_of(tree);
  std::optional<Cfg> cfg;

  for (NodeId id : tree.preorder()) {
    const SyntaxNode& n = tree[id];
    if (n.form == Form::CompositeLit) {
      if (!in_scope(tree, id, function)) continue;
      const NodeId type = tree.child(id, Role::Type);
      if (type == kNoNode) continue;
      if (auto kind = header_signature_match(TypeRef{&tree, type, &imports, 0, ""}, env)) {
        out.push_back(make_diag(
            tree, id,
            "composite literal of " + std::string(to_string(*kind)) + " type " +
                collapse_whitespace(tree.text_of(type)) +
                ": its Data field does not keep the referenced memory alive"));
      }
      continue;
    }
    if (function == kNoNode) continue;

    // field writes: h.F = v, h.F += v, h.F++
    NodeId target = kNoNode;
    if (n.kind == NodeKind::AssignStmt && n.form != Form::Define) {
      for (NodeId l : tree.children(id, Role::Lhs)) {
        const NodeId u = tree.unparen(l);
        if (tree[u].form == Form::Selector) {
          target = u;
          break;
        }
      }
    } else if (n.form == Form::IncDec) {
      const NodeId u = tree.unparen(tree.child(id, Role::Operand));
      if (u != kNoNode && tree[u].form == Form::Selector) target = u;
    }
    if (target == kNoNode || !in_scope(tree, id, function)) continue;
    const NodeId member = tree.child(target, Role::Member);
    if (member == kNoNode || !is_header_field(tree[member].text)) continue;
    NodeId base = tree.unparen(tree.child(target, Role::Operand));
    if (base != kNoNode && tree[base].form == Form::Star)
      base = tree.unparen(tree.child(base, Role::Operand));
    if (base == kNoNode) continue;

    const std::string field = std::string(tree[member].text);
    if (tree[base].form == Form::Call) {
      auto type = env.infer(tree, base);
      if (!type || !header_behind(env, *type)) continue;
      if (detail::is_cast_derived_header(tree, base, env)) continue;
      out.push_back(make_diag(tree, target,
                              "header field " + field + " written through a value that " +
                                  std::string(describe(Origin::Unknown))));
      continue;
    }
    if (tree[base].form != Form::Ident) continue;
    auto type = env.type_of_ident(tree, base);
    if (!type) continue;
    auto kind = header_behind(env, *type);
    if (!kind) continue;

    if (!cfg) cfg = build_cfg(tree, function);
    const NodeId item = cfg_item(tree, *cfg, id);
    Origin origin = Origin::NoDefinition;
    if (item != kNoNode) {
      const auto [block, index] = *cfg->locate(item);
      BackwardWalk walk(tree, *cfg, env, tree[base].text, opts);
      origin = walk.run(block, index);
    }
    if (origin == Origin::Safe) continue;
    out.push_back(make_diag(tree, target,
                            std::string(to_string(*kind)) + " field " + tree[base].text + "." +
                                field + " written, but " + tree[base].text + " " +
                                std::string(describe(origin))));
  }
  return out;
}

}  // namespace unsafe_audit
