#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unsafe_audit/census.hpp"
#include "unsafe_audit/gomod.hpp"

namespace unsafe_audit {

namespace fs = std::filesystem;

struct ResolverRoots {
  fs::path module_cache;
  std::optional<fs::path> vendor_dir;
  std::optional<fs::path> goroot_src;
};

/// Nearest go.mod at or above `dir`, or nullopt.
[[nodiscard]] std::optional<fs::path> find_enclosing_gomod(const fs::path& dir);

/// Reads and parses `<dir>/go.mod`; source_dir is set to `dir`. Throws
/// IoError or MalformedManifest.
[[nodiscard]] ModuleInfo load_module(const fs::path& dir);

struct ResolvedPackage {
  fs::path dir;
  std::shared_ptr<const ModuleInfo> module;
};

/// Offline import-path resolution against the root module, a vendor tree,
/// a module cache and a GOROOT source tree. Loaded dependency modules are
/// memoised, so repeated lookups return the same ModuleInfo instance.
/// Thread-safe.
class Resolver {
 public:
  Resolver(ModuleInfo root, ResolverRoots roots);

  [[nodiscard]] const std::shared_ptr<const ModuleInfo>& root() const {
    return root_;
  }
  [[nodiscard]] const std::shared_ptr<const ModuleInfo>& std_module() const {
    return std_;
  }
  [[nodiscard]] const ResolverRoots& roots() const { return roots_; }

  /// Directory and owning module of `import_path` as seen from a package of
  /// `importer` (the root module when null). nullopt when unresolved.
  [[nodiscard]] std::optional<ResolvedPackage> resolve_package_dir(
      std::string_view import_path, const ModuleInfo* importer = nullptr);

  /// Import path of a directory inside the root module, or nullopt.
  [[nodiscard]] std::optional<std::string> import_path_of(const fs::path& dir) const;

 private:
  std::optional<ResolvedPackage> from_module(std::string_view import_path,
                                             const std::string& module_path,
                                             const std::string& version);
  std::optional<ResolvedPackage> from_vendor(std::string_view import_path);
  std::shared_ptr<const ModuleInfo> dependency_module(const std::string& module_path,
                                                      const std::string& version,
                                                      const fs::path& dir);

  std::shared_ptr<const ModuleInfo> root_;
  std::shared_ptr<const ModuleInfo> std_;
  ResolverRoots roots_;
  // module path of every vendored package directory, from vendor/modules.txt
  std::map<std::string, std::pair<std::string, std::string>, std::less<>> vendored_;
  std::mutex mu_;
  std::map<std::pair<std::string, std::string>, std::shared_ptr<const ModuleInfo>>
      loaded_;
};

/// The std classification used in every summary.
[[nodiscard]] bool is_std_package(std::string_view import_path,
                                  const ModuleInfo* module);

// ---------------------------------------------------------------------------
// Dependency DAG

struct PackageRef {
  std::string package_path;
  std::shared_ptr<const ModuleInfo> module;
  fs::path dir;
  bool resolved = true;
};

struct ScannedPackage {
  PackageCensus census;
  /// Child-creating imports of the package, sorted and unique (no `unsafe`,
  /// no `C`, no blank imports).
  std::vector<std::string> imports;
  std::uint32_t file_count = 0;
  std::string error;  // non-empty if the directory could not be read
};

/// Source of packages for DAG construction. scan() must be safe to call
/// concurrently; resolve() is only called from the single writer.
class PackageProvider {
 public:
  virtual ~PackageProvider() = default;
  [[nodiscard]] virtual std::optional<PackageRef> resolve(
      std::string_view import_path, const PackageRef& importer) = 0;
  [[nodiscard]] virtual ScannedPackage scan(const PackageRef& pkg) const = 0;
};

/// Provider backed by the file system and a Resolver.
class FileSystemProvider : public PackageProvider {
 public:
  FileSystemProvider(Resolver& resolver, EnumerateOptions opts);
  [[nodiscard]] std::optional<PackageRef> resolve(std::string_view import_path,
                                                  const PackageRef& importer) override;
  [[nodiscard]] ScannedPackage scan(const PackageRef& pkg) const override;

  /// PackageRef for a directory inside the root module.
  [[nodiscard]] PackageRef root_package(const fs::path& dir) const;

 private:
  Resolver& resolver_;
  EnumerateOptions opts_;
};

/// Parses and scans one package directory. Output file names are
/// `<package_path>/<file name>`.
[[nodiscard]] ScannedPackage scan_package_dir(const PackageRef& pkg,
                                              EnumerateOptions opts);

struct PackageNode {
  std::string package_path;
  std::shared_ptr<const ModuleInfo> module;
  fs::path dir;
  int depth = 0;
  bool is_std = false;
  bool resolved = true;
  bool uses_cgo = false;
  std::uint32_t parse_errors = 0;
  TokenCounts local_counts;
  ContextCounts local_context_counts;
  TokenCounts cumulative_counts;
  /// Indices into DepGraph::nodes, ordered by (package_path, version).
  std::vector<std::size_t> children;
  std::vector<UnsafeFinding> findings;

  [[nodiscard]] const std::string& version() const;
};

struct UnresolvedImport {
  std::string import_path;
  std::string importer;
  friend bool operator==(const UnresolvedImport&, const UnresolvedImport&) = default;
};

struct DepGraph {
  std::vector<PackageNode> nodes;
  std::vector<std::size_t> roots;
  std::vector<UnresolvedImport> unresolved;
  std::shared_ptr<const ModuleInfo> root_module;

  [[nodiscard]] bool in_root_module(const PackageNode& n) const;
  /// Node index for (package_path, version), or nullopt.
  [[nodiscard]] std::optional<std::size_t> find(std::string_view package_path,
                                                std::string_view version = "") const;
  /// Every finding of every node, sorted with finding_less.
  [[nodiscard]] std::vector<UnsafeFinding> all_findings() const;
};

enum class Kernel { Serial, Parallel };

struct BuildOptions {
  Kernel kernel = Kernel::Parallel;
  int workers = 1;
};

/// Breadth-first expansion from `roots`, deduplicated by (package_path,
/// module version). Each BFS layer is scanned with the selected kernel and
/// folded into the graph by a single writer. Back-edges of import cycles
/// are dropped and cumulative counts are filled in.
[[nodiscard]] DepGraph build_dep_tree(const std::vector<PackageRef>& roots,
                                      PackageProvider& provider,
                                      BuildOptions opts = {});

/// Scans a frontier of packages. Results are positionally aligned with
/// `layer` for both kernels.
[[nodiscard]] std::vector<ScannedPackage> scan_layer_serial(
    const std::vector<PackageRef>& layer, const PackageProvider& provider);
[[nodiscard]] std::vector<ScannedPackage> scan_layer_parallel(
    const std::vector<PackageRef>& layer, const PackageProvider& provider,
    int workers);

/// Removes edges that close a cycle, visiting roots and children in order.
void drop_back_edges(DepGraph& graph);

/// cumulative_counts(n) = sum of local_counts over the distinct nodes
/// reachable from n, including n.
void compute_cumulative_serial(DepGraph& graph);
void compute_cumulative_parallel(DepGraph& graph, int workers);

// ---------------------------------------------------------------------------
// Per-project summary

struct PackageSummary {
  std::string package_path;
  std::string version;
  bool is_std = false;
  bool in_root_module = false;
  int depth = 0;
  TokenCounts tokens;
  ContextCounts contexts;
};

struct CorpusProjectSummary {
  std::string project;
  bool has_direct_unsafe = false;
  bool has_transitive_nonstd_unsafe = false;
  std::uint64_t first_level_dep_count = 0;
  std::uint64_t first_level_unsafe_dep_count = 0;
  /// depth -> number of unsafe-containing dependency packages.
  std::map<int, std::uint64_t> depth_histogram;
  bool include_std = false;
  std::uint64_t package_count = 0;
  std::uint64_t unresolved_count = 0;
  std::uint64_t parse_error_files = 0;
  std::vector<PackageSummary> packages;
};

/// Direct/transitive flags, first-level counts and the depth histogram.
/// Std packages enter the first-level counts and the histogram only when
/// include_std is set; the transitive flag never considers them.
[[nodiscard]] CorpusProjectSummary summarize_project(const DepGraph& graph,
                                                     std::string project,
                                                     bool include_std = false);

}  // namespace unsafe_audit
