#include "unsafe_audit/syntax.hpp"

#include <cctype>

namespace unsafe_audit {

SyntaxTree::SyntaxTree(std::string file_path, std::string source,
                       std::vector<SyntaxNode> nodes, std::string package_name,
                       std::vector<std::string> errors)
    : file_path_(std::move(file_path)),
      source_(std::move(source)),
      nodes_(std::move(nodes)),
      package_name_(std::move(package_name)),
      errors_(std::move(errors)) {}

std::string_view SyntaxTree::text_of(NodeId id) const {
  const Span s = nodes_[id].span;
  return std::string_view(source_).substr(s.offset, s.length);
}

std::vector<std::uint32_t> SyntaxTree::error_offsets() const {
  // every message starts with "offset N: "
  std::vector<std::uint32_t> out;
  for (const std::string& e : errors_) {
    std::uint32_t v = 0;
    for (std::size_t i = 7; i < e.size() && std::isdigit(static_cast<unsigned char>(e[i])); ++i)
      v = v * 10 + static_cast<std::uint32_t>(e[i] - '0');
    out.push_back(v);
  }
  return out;
}

NodeId SyntaxTree::child(NodeId id, Role role) const {
  for (NodeId c : nodes_[id].children)
    if (nodes_[c].role == role) return c;
  return kNoNode;
}

std::vector<NodeId> SyntaxTree::children(NodeId id, Role role) const {
  std::vector<NodeId> out;
  for (NodeId c : nodes_[id].children)
    if (nodes_[c].role == role) out.push_back(c);
  return out;
}

NodeId SyntaxTree::unparen(NodeId id) const {
  while (id != kNoNode && nodes_[id].form == Form::Paren &&
         !nodes_[id].children.empty())
    id = nodes_[id].children.front();
  return id;
}

bool SyntaxTree::is_statement(NodeId id) const {
  switch (nodes_[id].kind) {
    case NodeKind::AssignStmt:
    case NodeKind::ReturnStmt:
    case NodeKind::IfStmt:
    case NodeKind::ForStmt:
    case NodeKind::SwitchStmt:
    case NodeKind::Block:
    case NodeKind::OtherStmt:
      return true;
    case NodeKind::VarDecl:
    case NodeKind::TypeDecl:
      return nodes_[id].role == Role::Stmt;
    default:
      return false;
  }
}

std::vector<NodeId> SyntaxTree::preorder() const {
  std::vector<NodeId> out;
  if (nodes_.empty()) return out;
  out.reserve(nodes_.size());
  // Arena order is not source order, so walk the tree.
  std::vector<NodeId> stack{root()};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    out.push_back(id);
    const SyntaxNode& n = nodes_[id];
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
      stack.push_back(*it);
  }
  return out;
}

std::vector<NodeId> SyntaxTree::functions() const {
  std::vector<NodeId> out;
  for (NodeId id : preorder())
    if (nodes_[id].form == Form::FuncDecl || nodes_[id].form == Form::FuncLit)
      out.push_back(id);
  return out;
}

NodeId SyntaxTree::enclosing_function(NodeId id) const {
  for (NodeId p = nodes_[id].parent; p != kNoNode; p = nodes_[p].parent)
    if (nodes_[p].form == Form::FuncDecl || nodes_[p].form == Form::FuncLit)
      return p;
  return kNoNode;
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::File: return "File";
    case NodeKind::PackageClause: return "PackageClause";
    case NodeKind::ImportDecl: return "ImportDecl";
    case NodeKind::FuncDecl: return "FuncDecl";
    case NodeKind::ParamList: return "ParamList";
    case NodeKind::ResultList: return "ResultList";
    case NodeKind::TypeDecl: return "TypeDecl";
    case NodeKind::StructType: return "StructType";
    case NodeKind::Field: return "Field";
    case NodeKind::VarDecl: return "VarDecl";
    case NodeKind::AssignStmt: return "AssignStmt";
    case NodeKind::ReturnStmt: return "ReturnStmt";
    case NodeKind::CompositeLit: return "CompositeLit";
    case NodeKind::CallExpr: return "CallExpr";
    case NodeKind::SelectorExpr: return "SelectorExpr";
    case NodeKind::StarExpr: return "StarExpr";
    case NodeKind::UnaryAddrExpr: return "UnaryAddrExpr";
    case NodeKind::Ident: return "Ident";
    case NodeKind::BasicLit: return "BasicLit";
    case NodeKind::IfStmt: return "IfStmt";
    case NodeKind::ForStmt: return "ForStmt";
    case NodeKind::SwitchStmt: return "SwitchStmt";
    case NodeKind::Block: return "Block";
    case NodeKind::OtherExpr: return "OtherExpr";
    case NodeKind::OtherStmt: return "OtherStmt";
  }
  return "?";
}

std::string_view to_string(Form form) {
  switch (form) {
    case Form::File: return "File";
    case Form::PackageClause: return "PackageClause";
    case Form::ImportSpec: return "ImportSpec";
    case Form::FuncDecl: return "FuncDecl";
    case Form::FuncLit: return "FuncLit";
    case Form::Receiver: return "Receiver";
    case Form::TypeParams: return "TypeParams";
    case Form::Params: return "Params";
    case Form::Results: return "Results";
    case Form::TypeSpec: return "TypeSpec";
    case Form::TypeAlias: return "TypeAlias";
    case Form::StructType: return "StructType";
    case Form::Field: return "Field";
    case Form::VarSpec: return "VarSpec";
    case Form::ConstSpec: return "ConstSpec";
    case Form::Assign: return "Assign";
    case Form::OpAssign: return "OpAssign";
    case Form::Define: return "Define";
    case Form::Return: return "Return";
    case Form::CompositeLit: return "CompositeLit";
    case Form::Call: return "Call";
    case Form::Selector: return "Selector";
    case Form::Star: return "Star";
    case Form::AddrOf: return "AddrOf";
    case Form::Ident: return "Ident";
    case Form::BasicLit: return "BasicLit";
    case Form::If: return "If";
    case Form::For: return "For";
    case Form::ForRange: return "ForRange";
    case Form::Switch: return "Switch";
    case Form::TypeSwitch: return "TypeSwitch";
    case Form::Select: return "Select";
    case Form::Block: return "Block";
    case Form::Paren: return "Paren";
    case Form::Unary: return "Unary";
    case Form::Binary: return "Binary";
    case Form::Index: return "Index";
    case Form::SliceExpr: return "SliceExpr";
    case Form::TypeAssert: return "TypeAssert";
    case Form::KeyValue: return "KeyValue";
    case Form::ArrayType: return "ArrayType";
    case Form::SliceType: return "SliceType";
    case Form::MapType: return "MapType";
    case Form::ChanType: return "ChanType";
    case Form::FuncType: return "FuncType";
    case Form::InterfaceType: return "InterfaceType";
    case Form::Ellipsis: return "Ellipsis";
    case Form::BadExpr: return "BadExpr";
    case Form::ExprStmt: return "ExprStmt";
    case Form::IncDec: return "IncDec";
    case Form::Send: return "Send";
    case Form::Go: return "Go";
    case Form::Defer: return "Defer";
    case Form::Labeled: return "Labeled";
    case Form::Branch: return "Branch";
    case Form::CaseClause: return "CaseClause";
    case Form::CommClause: return "CommClause";
    case Form::EmptyStmt: return "EmptyStmt";
    case Form::BadStmt: return "BadStmt";
  }
  return "?";
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace unsafe_audit
