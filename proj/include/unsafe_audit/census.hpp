#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "unsafe_audit/frontend.hpp"
#include "unsafe_audit/syntax.hpp"

namespace unsafe_audit {

enum class TokenKind : std::uint8_t {
  UnsafePointer,
  UnsafeSizeof,
  UnsafeOffsetof,
  UnsafeAlignof,
  ReflectSliceHeader,
  ReflectStringHeader,
  Uintptr,
};
inline constexpr std::size_t kTokenKindCount = 7;

enum class ContextKind : std::uint8_t {
  Assignment,
  Call,
  Parameter,
  Variable,
  Other,
};
inline constexpr std::size_t kContextKindCount = 5;

inline constexpr std::array<TokenKind, kTokenKindCount> kAllTokenKinds = {
    TokenKind::UnsafePointer,      TokenKind::UnsafeSizeof,
    TokenKind::UnsafeOffsetof,     TokenKind::UnsafeAlignof,
    TokenKind::ReflectSliceHeader, TokenKind::ReflectStringHeader,
    TokenKind::Uintptr};
inline constexpr std::array<ContextKind, kContextKindCount> kAllContextKinds = {
    ContextKind::Assignment, ContextKind::Call, ContextKind::Parameter,
    ContextKind::Variable, ContextKind::Other};

[[nodiscard]] std::string_view to_string(TokenKind kind);
[[nodiscard]] std::string_view to_string(ContextKind kind);
[[nodiscard]] std::optional<TokenKind> parse_token_kind(std::string_view s);
[[nodiscard]] std::optional<ContextKind> parse_context_kind(std::string_view s);

/// Fixed-size count vector indexed by an enum.
template <typename Enum, std::size_t N>
struct Counts {
  std::array<std::uint64_t, N> values{};

  std::uint64_t& operator[](Enum e) { return values[static_cast<std::size_t>(e)]; }
  std::uint64_t operator[](Enum e) const {
    return values[static_cast<std::size_t>(e)];
  }
  [[nodiscard]] std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto v : values) t += v;
    return t;
  }
  Counts& operator+=(const Counts& other) {
    for (std::size_t i = 0; i < N; ++i) values[i] += other.values[i];
    return *this;
  }
  friend bool operator==(const Counts&, const Counts&) = default;
};

using TokenCounts = Counts<TokenKind, kTokenKindCount>;
using ContextCounts = Counts<ContextKind, kContextKindCount>;

struct PackageIdentity {
  std::string package_path;
  std::string module_path;
  std::string module_version;
};

struct UnsafeFinding {
  std::string package_path;
  std::string module_path;
  std::string module_version;
  std::string file;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  TokenKind token = TokenKind::UnsafePointer;
  ContextKind context = ContextKind::Other;
  std::string snippet;

  friend bool operator==(const UnsafeFinding&, const UnsafeFinding&) = default;
};

/// Sort order used in every output: (file, line, column, token).
[[nodiscard]] bool finding_less(const UnsafeFinding& a, const UnsafeFinding& b);

/// Names declared at package level across all files of a package, used for
/// conversion detection and `uintptr` shadowing.
struct PackageScope {
  std::set<std::string> type_names;
  bool uintptr_redeclared = false;

  [[nodiscard]] static PackageScope collect(
      const std::vector<const SyntaxTree*>& files);
};

/// Classifies one node as an unsafe token, ignoring lexical shadowing of
/// `uintptr` (scan_package applies that separately).
[[nodiscard]] std::optional<TokenKind> match_token(const SyntaxTree& tree,
                                                   NodeId node,
                                                   const ImportTable& imports);

/// Syntactic context of a matched token. Total; defaults to Other.
[[nodiscard]] ContextKind classify_context(const SyntaxTree& tree, NodeId token,
                                           const ImportTable& imports,
                                           const PackageScope& scope);

/// True if `callee` (the callee of a call expression) syntactically denotes
/// a type, making the call a conversion.
[[nodiscard]] bool is_conversion_callee(const SyntaxTree& tree, NodeId callee,
                                        const ImportTable& imports,
                                        const PackageScope& scope);

/// Per-node flags: true for `uintptr` identifiers that refer to a local
/// redeclaration rather than the predeclared type.
[[nodiscard]] std::vector<bool> uintptr_shadowing(const SyntaxTree& tree,
                                                  bool package_level);

/// Node whose source text becomes the finding's snippet, and the byte
/// range of that text.
[[nodiscard]] Span snippet_span(const SyntaxTree& tree, NodeId token);

inline constexpr std::size_t kSnippetLimit = 200;
[[nodiscard]] std::string make_snippet(std::string_view source_text);

struct PackageCensus {
  PackageIdentity identity;
  std::vector<UnsafeFinding> findings;
  TokenCounts tokens;
  ContextCounts contexts;
  std::uint32_t parse_errors = 0;  // files with syntax errors
  bool uses_cgo = false;
};

/// All findings of one package, sorted. `display_names[i]` names file i in
/// the output (defaults to the tree's path when empty).
[[nodiscard]] std::vector<UnsafeFinding> scan_package(
    const std::vector<const SyntaxTree*>& files,
    const std::vector<ImportTable>& imports, const PackageIdentity& identity,
    const std::vector<std::string>& display_names = {});

/// scan_package plus per-kind tallies.
[[nodiscard]] PackageCensus census_package(
    const std::vector<const SyntaxTree*>& files,
    const std::vector<ImportTable>& imports, const PackageIdentity& identity,
    const std::vector<std::string>& display_names = {});

}  // namespace unsafe_audit
