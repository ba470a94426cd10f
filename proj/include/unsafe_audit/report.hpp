#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unsafe_audit/census.hpp"
#include "unsafe_audit/lints.hpp"
#include "unsafe_audit/modgraph.hpp"

namespace unsafe_audit {

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kCensusCsvHeader =
    "module,version,package,file,line,column,token,context,snippet";

/// RFC 4180 field quoting: fields containing a comma, quote, CR or LF are
/// wrapped in quotes with inner quotes doubled.
[[nodiscard]] std::string csv_field(std::string_view value);

/// Splits CSV text into records. Accepts LF or CRLF line ends. Throws
/// AuditError on an unterminated quoted field.
[[nodiscard]] std::vector<std::vector<std::string>> parse_csv(std::string_view text);

[[nodiscard]] std::string emit_census_csv(const std::vector<UnsafeFinding>& findings);

/// Inverse of emit_census_csv. Throws AuditError on a malformed document.
[[nodiscard]] std::vector<UnsafeFinding> parse_census_csv(std::string_view text);

// ---------------------------------------------------------------------------
// Dependency tree

struct TreeOptions {
  std::optional<int> max_depth;
  bool show_std = false;
  bool show_code = false;
};

/// One line per node, `path [local L | cumulative C]`, children indented by
/// two spaces. A node shared by several parents is expanded once, at its
/// shallowest then lexicographically first position; other occurrences
/// print as `path (*)`.
[[nodiscard]] std::string render_tree(const DepGraph& graph, const TreeOptions& opts = {});

/// Census as JSON: packages with counts, unresolved imports and findings.
[[nodiscard]] std::string emit_census_json(const DepGraph& graph);

// ---------------------------------------------------------------------------
// Corpus statistics

struct CorpusStats {
  std::uint64_t project_count = 0;
  std::uint64_t projects_with_direct_unsafe = 0;
  std::uint64_t projects_with_unsafe = 0;  // direct or transitive non-std
  double direct_unsafe_share = 0;
  double transitive_unsafe_share = 0;
  std::uint64_t first_level_deps = 0;
  std::uint64_t first_level_unsafe_deps = 0;
  double first_level_share = 0;
  std::map<int, std::uint64_t> depth_histogram;
  double depth_mean = 0;
  double depth_sd = 0;  // population
  TokenCounts tokens_per_project;
  TokenCounts tokens_per_package_version;
  ContextCounts contexts_per_project;
  ContextCounts contexts_per_package_version;
  bool include_std = false;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// Mean and population standard deviation of a depth histogram; both 0
/// when the histogram is empty.
[[nodiscard]] std::pair<double, double> depth_moments(const std::map<int, std::uint64_t>& hist);

/// Throws EmptyCorpus for an empty list.
[[nodiscard]] CorpusStats compute_stats(const std::vector<CorpusProjectSummary>& summaries);

/// JSON object with stable key order. `summaries` adds a per-project array.
[[nodiscard]] std::string emit_stats_json(const CorpusStats& stats,
                                          const std::vector<CorpusProjectSummary>& summaries = {});
[[nodiscard]] CorpusStats parse_stats_json(std::string_view text);

/// `depth,packages` rows.
[[nodiscard]] std::string emit_histogram_csv(const CorpusStats& stats);
/// `grouping,token,count` rows for both groupings.
[[nodiscard]] std::string emit_token_distribution_csv(const CorpusStats& stats);

// ---------------------------------------------------------------------------
// Diagnostics

enum class DiagnosticFormat { Text, Json };

/// Text: `file:line:col: [pass] message`, one per line; info diagnostics
/// carry an `info: ` prefix on the message. Json: array of objects.
[[nodiscard]] std::string emit_diagnostics(const std::vector<Diagnostic>& diags,
                                           DiagnosticFormat format);

// ---------------------------------------------------------------------------
// Usage taxonomy for human annotation files

inline constexpr std::array<std::string_view, 7> kWhatClasses = {
    "cast", "memory-access", "pointer-arithmetic", "definition",
    "delegate", "syscall", "unused"};
inline constexpr std::array<std::string_view, 11> kPurposeClasses = {
    "efficiency", "serialization", "generics", "avoid-gc", "atomic", "ffi",
    "hide-escape", "memory-layout", "types", "reflect", "unused"};

[[nodiscard]] bool is_what_class(std::string_view s);
[[nodiscard]] bool is_purpose_class(std::string_view s);

inline constexpr std::string_view kAnnotationHeader = "file,line,column,what_class,purpose_class";

/// Problems found in an annotation CSV; empty when valid.
[[nodiscard]] std::vector<std::string> validate_annotations(std::string_view csv_text);

}  // namespace unsafe_audit
