#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace unsafe_audit {

enum class Subcommand { Census, Lint, Stats };
enum class OutputFormat { Csv, Json, Tree, Text };

struct RunConfig {
  Subcommand subcommand = Subcommand::Census;
  std::vector<std::string> target_dirs;
  bool include_tests = false;
  bool include_std = false;
  std::optional<int> max_depth;
  OutputFormat format = OutputFormat::Tree;
  std::filesystem::path module_cache;
  std::optional<std::filesystem::path> vendor_dir;
  std::optional<std::filesystem::path> goroot_src;
  bool show_code = false;
  bool deps = false;
  bool structcast_flat = false;
  std::optional<std::filesystem::path> output;
  int jobs = 0;  // 0: one per core
  std::string stats_table = "histogram";  // csv table for `stats`
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitWarnings = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `unsafe-audit` executable. `args` excludes the
/// program name. Reports go to `out` (or --output), logs to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Package directories named by a target. `dir/...` expands to every
/// package below dir inside the same module; a plain dir names itself.
/// Throws IoError when the directory does not exist.
[[nodiscard]] std::vector<std::filesystem::path> expand_target(const std::string& target,
                                                               bool include_tests = false);

}  // namespace unsafe_audit
