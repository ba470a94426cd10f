#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace unsafe_audit {

struct Requirement {
  std::string module_path;
  std::string version;
  bool indirect = false;
  friend bool operator==(const Requirement&, const Requirement&) = default;
};

/// `replace old [old_version] => new [new_version]`. A new path starting
/// with ./, ../ or / names a directory on disk.
struct Replacement {
  std::string old_path;
  std::string old_version;  // empty: all versions
  std::string new_path;
  std::string new_version;  // empty for directory replacements

  [[nodiscard]] bool is_directory() const;
  friend bool operator==(const Replacement&, const Replacement&) = default;
};

struct ModuleInfo {
  std::string module_path;
  std::string version;  // "" for the root module and the standard library
  std::filesystem::path source_dir;
  std::string go_version;
  std::vector<Requirement> requirements;
  std::vector<Replacement> replaces;
  std::vector<Requirement> excludes;
  bool is_std = false;

  /// Longest requirement whose module path is `import_path` or a
  /// path-segment prefix of it.
  [[nodiscard]] const Requirement* longest_require(std::string_view import_path) const;
  /// Replacement applying to module@version, if any.
  [[nodiscard]] const Replacement* replacement_for(std::string_view module_path,
                                                   std::string_view version) const;
  /// True if import_path lies inside this module's path.
  [[nodiscard]] bool owns(std::string_view import_path) const;
};

/// Parses a go.mod body. Unknown directives are ignored. Throws
/// MalformedManifest when there is no module directive.
[[nodiscard]] ModuleInfo parse_gomod(std::string_view text);

/// Module cache case-escaping: every uppercase letter becomes '!' followed
/// by its lowercase form.
[[nodiscard]] std::string escape_module_path(std::string_view path);

/// True if `prefix` equals `path` or is a '/'-delimited prefix of it.
[[nodiscard]] bool has_path_prefix(std::string_view path, std::string_view prefix);

/// Standard library import paths have no dot in their first element.
[[nodiscard]] bool is_std_import_path(std::string_view import_path);

}  // namespace unsafe_audit
