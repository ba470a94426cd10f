#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unsafe_audit/census.hpp"
#include "unsafe_audit/frontend.hpp"
#include "unsafe_audit/syntax.hpp"

namespace unsafe_audit {

// ---------------------------------------------------------------------------
// Control-flow graph

struct BasicBlock {
  /// Simple statements, plus the header node of each compound statement
  /// (if/for/switch/select/case), in execution order.
  std::vector<NodeId> items;
  std::vector<std::size_t> succs;
  std::vector<std::size_t> preds;
  bool dead = false;  // unreachable from entry
};

struct Cfg {
  NodeId function = kNoNode;
  std::vector<BasicBlock> blocks;
  std::size_t entry = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // sorted

  /// Block and position of an item, or nullopt.
  [[nodiscard]] std::optional<std::pair<std::size_t, std::size_t>> locate(NodeId item) const;

  std::map<NodeId, std::pair<std::size_t, std::size_t>> item_index;
};

/// CFG of a FuncDecl or function literal body. Empty blocks are folded
/// away, so straight-line code is a single block. `goto` to an unknown
/// label connects to every block.
[[nodiscard]] Cfg build_cfg(const SyntaxTree& tree, NodeId function);

// ---------------------------------------------------------------------------
// Package-local type environment

enum class HeaderKind : std::uint8_t { SliceHeader, StringHeader };
[[nodiscard]] std::string_view to_string(HeaderKind kind);

/// A type written somewhere in the package: the expression `expr` in `tree`
/// wrapped in `pointers` extra levels of indirection. When expr is kNoNode
/// the type is the predeclared type named by `basic`.
struct TypeRef {
  const SyntaxTree* tree = nullptr;
  NodeId expr = kNoNode;
  const ImportTable* imports = nullptr;
  int pointers = 0;
  std::string basic;
};

struct ArchCount {
  std::uint64_t count = 0;
  bool incomplete = false;
  friend bool operator==(const ArchCount&, const ArchCount&) = default;
};

class TypeEnvironment {
 public:
  TypeEnvironment(const std::vector<const SyntaxTree*>& files,
                  const std::vector<ImportTable>& imports);
  TypeEnvironment(const TypeEnvironment&) = delete;
  TypeEnvironment& operator=(const TypeEnvironment&) = delete;

  /// Underlying type expression of a package-level type name.
  [[nodiscard]] std::optional<TypeRef> named_type(std::string_view name) const;

  /// Declared type of the identifier `ident` at its point of use: locals of
  /// the enclosing functions first, then package-level variables.
  [[nodiscard]] std::optional<TypeRef> type_of_ident(const SyntaxTree& tree,
                                                     NodeId ident) const;

  /// Best-effort static type of an expression; nullopt when unknown.
  [[nodiscard]] std::optional<TypeRef> infer(const SyntaxTree& tree, NodeId expr) const;

  /// Strips parens and resolves local named types (depth-limited).
  [[nodiscard]] TypeRef underlying(TypeRef t) const;

  [[nodiscard]] const ImportTable& imports_of(const SyntaxTree& tree) const;

  /// Cross-package named types met during header matching.
  [[nodiscard]] std::uint64_t unresolved_types() const { return unresolved_.load(); }
  void note_unresolved() const { unresolved_.fetch_add(1, std::memory_order_relaxed); }

 private:
  struct LocalDecl {
    std::string name;
    std::uint32_t offset;
    NodeId scope;  // innermost function, or kNoNode at package level
    NodeId ident;
    std::optional<TypeRef> type;  // nullopt: declared with unknown type
    NodeId value = kNoNode;       // initializer for deferred inference
  };
  struct FileInfo {
    const SyntaxTree* tree;
    const ImportTable* imports;
    std::vector<LocalDecl> decls;
  };

  void collect(FileInfo& info);
  std::optional<TypeRef> infer_impl(const SyntaxTree& tree, NodeId expr, int depth) const;
  std::optional<TypeRef> ident_impl(const SyntaxTree& tree, NodeId ident, int depth) const;
  const FileInfo* file(const SyntaxTree& tree) const;

  std::vector<FileInfo> files_;
  std::map<std::string, TypeRef, std::less<>> types_;
  std::map<std::string, TypeRef, std::less<>> func_results_;
  mutable std::atomic<std::uint64_t> unresolved_{0};
};

/// HeaderKind of a type: reflect's headers, local named types and anonymous
/// structs whose {name: type} field multiset equals a header's exactly.
[[nodiscard]] std::optional<HeaderKind> header_signature_match(const TypeRef& type,
                                                               const TypeEnvironment& env);

/// Number of `int`, `uint` and `uintptr` fields of a struct type. Nested
/// structs and local named types are followed unless `flat`; arrays
/// contribute length times their element count. Types that cannot be
/// resolved contribute 0 and set `incomplete`.
[[nodiscard]] ArchCount count_arch_dependent_fields(const TypeRef& struct_type,
                                                    const TypeEnvironment& env,
                                                    bool flat = false);

// ---------------------------------------------------------------------------
// Diagnostics and passes

enum class LintPass : std::uint8_t { Sliceheader, Structcast };
enum class Severity : std::uint8_t { Warning, Info };
[[nodiscard]] std::string_view to_string(LintPass pass);
[[nodiscard]] std::string_view to_string(Severity severity);

struct Diagnostic {
  LintPass pass = LintPass::Sliceheader;
  Severity severity = Severity::Warning;
  std::string file;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::string message;
  std::string snippet;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// (file, line, column, pass), then message.
[[nodiscard]] bool diagnostic_less(const Diagnostic& a, const Diagnostic& b);

struct SliceheaderOptions {
  std::size_t path_bound = 64;       // items per backward path
  std::size_t step_budget = 100000;  // items per field write, all paths
};

/// Sliceheader checks for one function (or, with function == kNoNode, for
/// the package-level declarations of the file).
[[nodiscard]] std::vector<Diagnostic> sliceheader_check(const SyntaxTree& tree,
                                                        NodeId function,
                                                        const TypeEnvironment& env,
                                                        SliceheaderOptions opts = {});

/// Structcast checks for one function (kNoNode: package-level code).
[[nodiscard]] std::vector<Diagnostic> structcast_check(const SyntaxTree& tree,
                                                       NodeId function,
                                                       const TypeEnvironment& env,
                                                       bool flat = false);

struct LintOptions {
  bool sliceheader = true;
  bool structcast = true;
  bool structcast_flat = false;
  int workers = 1;
  bool parallel = true;
};

/// Both passes over one package, per function in parallel. Functions that
/// contain a parse error are skipped. `display_names` rename files in the
/// output. Result is sorted with diagnostic_less.
[[nodiscard]] std::vector<Diagnostic> lint_package(
    const std::vector<const SyntaxTree*>& files, const std::vector<ImportTable>& imports,
    LintOptions opts = {}, const std::vector<std::string>& display_names = {});

[[nodiscard]] std::size_t warning_count(const std::vector<Diagnostic>& diags);

}  // namespace unsafe_audit
