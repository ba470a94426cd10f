#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace unsafe_audit {

/// Coarse node vocabulary shared by every analysis.
enum class NodeKind : std::uint8_t {
  File,
  PackageClause,
  ImportDecl,
  FuncDecl,
  ParamList,
  ResultList,
  TypeDecl,
  StructType,
  Field,
  VarDecl,
  AssignStmt,
  ReturnStmt,
  CompositeLit,
  CallExpr,
  SelectorExpr,
  StarExpr,
  UnaryAddrExpr,
  Ident,
  BasicLit,
  IfStmt,
  ForStmt,
  SwitchStmt,
  Block,
  OtherExpr,
  OtherStmt,
};

/// Exact syntactic form. Several forms share one NodeKind, e.g. every
/// catch-all expression is OtherExpr with a distinguishing form.
enum class Form : std::uint8_t {
  File,
  PackageClause,
  ImportSpec,
  FuncDecl,
  FuncLit,
  Receiver,
  TypeParams,
  Params,
  Results,
  TypeSpec,
  TypeAlias,
  StructType,
  Field,
  VarSpec,
  ConstSpec,
  Assign,      // =
  OpAssign,    // += etc.
  Define,      // :=
  Return,
  CompositeLit,
  Call,
  Selector,
  Star,
  AddrOf,
  Ident,
  BasicLit,
  If,
  For,
  ForRange,
  Switch,
  TypeSwitch,
  Select,
  Block,
  // OtherExpr forms
  Paren,
  Unary,
  Binary,
  Index,
  SliceExpr,
  TypeAssert,
  KeyValue,
  ArrayType,
  SliceType,
  MapType,
  ChanType,
  FuncType,
  InterfaceType,
  Ellipsis,
  BadExpr,
  // OtherStmt forms
  ExprStmt,
  IncDec,
  Send,
  Go,
  Defer,
  Labeled,
  Branch,
  CaseClause,
  CommClause,
  EmptyStmt,
  BadStmt,
};

/// Role of a node inside its parent. Lets analyses tell apart, say, the
/// callee of a call from its arguments without positional conventions.
enum class Role : std::uint8_t {
  None,
  Name,     // binding occurrence (declared name, label, import alias)
  Type,
  Value,
  Lhs,
  Rhs,
  Callee,
  Arg,
  Operand,
  Member,
  Key,
  Elem,
  Len,
  Init,
  Cond,
  Post,
  Body,
  Else,
  Recv,
  TypeParams,
  Params,
  Results,
  Path,
  Tag,
  Stmt,
  Decl,
};

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct Span {
  std::uint32_t offset = 0;
  std::uint32_t length = 0;
  [[nodiscard]] std::uint32_t end() const { return offset + length; }
};

struct SyntaxNode {
  NodeKind kind = NodeKind::OtherExpr;
  Form form = Form::BadExpr;
  Role role = Role::None;
  Span span;
  std::uint32_t line = 1;    // 1-based
  std::uint32_t column = 1;  // 1-based, in bytes
  /// Identifier name, literal spelling, or operator text.
  std::string text;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
};

/// Immutable parse tree of one source file. Nodes live in an arena and
/// refer to each other by index; index 0 is always the File root.
class SyntaxTree {
 public:
  SyntaxTree() = default;
  SyntaxTree(std::string file_path, std::string source,
             std::vector<SyntaxNode> nodes, std::string package_name,
             std::vector<std::string> errors);

  [[nodiscard]] const std::string& file_path() const { return file_path_; }
  [[nodiscard]] const std::string& source() const { return source_; }
  [[nodiscard]] const std::string& package_name() const {
    return package_name_;
  }
  [[nodiscard]] bool had_parse_errors() const { return !errors_.empty(); }
  [[nodiscard]] const std::vector<std::string>& errors() const {
    return errors_;
  }
  /// Byte offset of each recorded error, in recording order.
  [[nodiscard]] std::vector<std::uint32_t> error_offsets() const;

  [[nodiscard]] NodeId root() const { return 0; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const SyntaxNode& node(NodeId id) const { return nodes_[id]; }
  [[nodiscard]] const SyntaxNode& operator[](NodeId id) const {
    return nodes_[id];
  }
  [[nodiscard]] NodeId parent(NodeId id) const { return nodes_[id].parent; }
  [[nodiscard]] const std::vector<NodeId>& children(NodeId id) const {
    return nodes_[id].children;
  }

  /// Source text covered by the node.
  [[nodiscard]] std::string_view text_of(NodeId id) const;

  /// First child with the given role, or kNoNode.
  [[nodiscard]] NodeId child(NodeId id, Role role) const;
  /// All children with the given role, in source order.
  [[nodiscard]] std::vector<NodeId> children(NodeId id, Role role) const;

  /// Strips any number of enclosing parentheses.
  [[nodiscard]] NodeId unparen(NodeId id) const;

  [[nodiscard]] bool is_statement(NodeId id) const;

  /// Every node reachable from the root, parents before children, siblings
  /// in source order. Nodes orphaned by error recovery are excluded.
  [[nodiscard]] std::vector<NodeId> preorder() const;

  /// Function declarations and function literals, in source order.
  [[nodiscard]] std::vector<NodeId> functions() const;

  /// Nearest enclosing FuncDecl or FuncLit, or kNoNode.
  [[nodiscard]] NodeId enclosing_function(NodeId id) const;

 private:
  std::string file_path_;
  std::string source_;
  std::vector<SyntaxNode> nodes_;
  std::string package_name_;
  std::vector<std::string> errors_;
};

[[nodiscard]] std::string_view to_string(NodeKind kind);
[[nodiscard]] std::string_view to_string(Form form);

/// Collapses every run of whitespace to one space and trims the ends.
[[nodiscard]] std::string collapse_whitespace(std::string_view text);

}  // namespace unsafe_audit
