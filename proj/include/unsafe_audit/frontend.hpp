#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "unsafe_audit/parser.hpp"
#include "unsafe_audit/syntax.hpp"

namespace unsafe_audit {

struct ImportTable {
  /// Local name -> import path. Dot and blank imports are not entries.
  std::map<std::string, std::string> entries;
  std::set<std::string> dot_imports;
  std::set<std::string> blank_imports;
  /// Every imported path in source order, duplicates removed.
  std::vector<std::string> paths;
  /// Import specs that could not be understood (logged, not fatal).
  std::vector<std::string> skipped;

  [[nodiscard]] bool imports_path(std::string_view path) const;
  /// True if `name` is bound to `path` through a plain or aliased import.
  [[nodiscard]] bool binds(std::string_view name, std::string_view path) const;
};

struct EnumerateOptions {
  bool include_tests = false;
};

/// `.go` files directly inside `dir`, sorted by file name. Throws IoError if
/// the directory cannot be read.
[[nodiscard]] std::vector<std::filesystem::path> enumerate_package(
    const std::filesystem::path& dir, EnumerateOptions opts = {});

[[nodiscard]] ImportTable resolve_imports(const SyntaxTree& tree);

/// Package name assumed for an unaliased import: the last path segment with
/// a `/vN` major-version element (or gopkg.in `.vN` suffix) removed.
[[nodiscard]] std::string default_package_name(std::string_view import_path);

/// Reads and parses one file. Throws IoError if unreadable.
[[nodiscard]] SyntaxTree parse_path(const std::filesystem::path& file);

}  // namespace unsafe_audit
