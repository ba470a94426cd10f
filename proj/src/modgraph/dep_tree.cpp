#include <algorithm>
#include <deque>
#include <set>

#include "unsafe_audit/errors.hpp"
#include "unsafe_audit/modgraph.hpp"

namespace unsafe_audit {

namespace {

const std::string kNoVersion;
// Internal key suffix keeping unresolved placeholders apart from real nodes.
const std::string kUnresolvedKey = "\x01unresolved";

void sort_children(DepGraph& g) {
  for (PackageNode& n : g.nodes) {
    std::sort(n.children.begin(), n.children.end(), [&](std::size_t a, std::size_t b) {
      const PackageNode& x = g.nodes[a];
      const PackageNode& y = g.nodes[b];
      if (x.package_path != y.package_path) return x.package_path < y.package_path;
      return x.version() < y.version();
    });
    n.children.erase(std::unique(n.children.begin(), n.children.end()), n.children.end());
  }
}

void recompute_depths(DepGraph& g) {
  std::vector<int> depth(g.nodes.size(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t r : g.roots) {
    if (depth[r] == -1) {
      depth[r] = 0;
      queue.push_back(r);
    }
  }
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : g.nodes[u].children) {
      if (depth[v] != -1) continue;
      depth[v] = depth[u] + 1;
      queue.push_back(v);
    }
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    if (depth[i] != -1) g.nodes[i].depth = depth[i];
}

}  // namespace

const std::string& PackageNode::version() const {
  return module ? module->version : kNoVersion;
}

bool DepGraph::in_root_module(const PackageNode& n) const {
  if (!n.module || !root_module) return false;
  if (n.module == root_module) return true;
  return n.module->module_path == root_module->module_path &&
         n.module->version == root_module->version && !n.module->is_std;
}

std::optional<std::size_t> DepGraph::find(std::string_view package_path,
                                          std::string_view version) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].package_path == package_path && nodes[i].version() == version)
      return i;
  return std::nullopt;
}

std::vector<UnsafeFinding> DepGraph::all_findings() const {
  std::vector<UnsafeFinding> out;
  for (const PackageNode& n : nodes)
    out.insert(out.end(), n.findings.begin(), n.findings.end());
  std::sort(out.begin(), out.end(), finding_less);
  return out;
}

ScannedPackage scan_package_dir(const PackageRef& pkg, EnumerateOptions opts) {
  ScannedPackage out;
  PackageIdentity identity{pkg.package_path, pkg.module ? pkg.module->module_path : "",
                           pkg.module ? pkg.module->version : ""};
  out.census.identity = identity;
  try {
    const auto files = enumerate_package(pkg.dir, opts);
    std::vector<SyntaxTree> trees;
    trees.reserve(files.size());
    std::vector<ImportTable> tables;
    std::vector<std::string> names;
    std::set<std::string> imports;
    for (const fs::path& f : files) {
      trees.push_back(parse_path(f));
      tables.push_back(resolve_imports(trees.back()));
      names.push_back(pkg.package_path + "/" + f.filename().string());
      const ImportTable& t = tables.back();
      for (const auto& [name, path] : t.entries) imports.insert(path);
      for (const auto& path : t.dot_imports) imports.insert(path);
    }
    imports.erase("unsafe");
    imports.erase("C");
    out.imports.assign(imports.begin(), imports.end());
    std::vector<const SyntaxTree*> ptrs;
    for (const SyntaxTree& t : trees) ptrs.push_back(&t);
    out.census = census_package(ptrs, tables, identity, names);
    out.file_count = static_cast<std::uint32_t>(files.size());
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

FileSystemProvider::FileSystemProvider(Resolver& resolver, EnumerateOptions opts)
    : resolver_(resolver), opts_(opts) {}

std::optional<PackageRef> FileSystemProvider::resolve(std::string_view import_path,
                                                      const PackageRef& importer) {
  auto r = resolver_.resolve_package_dir(import_path, importer.module.get());
  if (!r) return std::nullopt;
  std::string path(import_path);
  // GOROOT's own vendored copies are distinct packages from the module
  // versions a project might require.
  if (r->module && r->module->is_std && !is_std_import_path(path)) path = "vendor/" + path;
  return PackageRef{std::move(path), r->module, r->dir, true};
}

ScannedPackage FileSystemProvider::scan(const PackageRef& pkg) const {
  return scan_package_dir(pkg, opts_);
}

PackageRef FileSystemProvider::root_package(const fs::path& dir) const {
  std::error_code ec;
  const fs::path abs = fs::weakly_canonical(fs::absolute(dir, ec), ec);
  auto path = resolver_.import_path_of(abs);
  return PackageRef{path ? *path : abs.filename().string(), resolver_.root(), abs, true};
}

std::vector<ScannedPackage> scan_layer_serial(const std::vector<PackageRef>& layer,
                                              const PackageProvider& provider) {
  std::vector<ScannedPackage> out(layer.size());
  for (std::size_t i = 0; i < layer.size(); ++i) out[i] = provider.scan(layer[i]);
  return out;
}

std::vector<ScannedPackage> scan_layer_parallel(const std::vector<PackageRef>& layer,
                                                const PackageProvider& provider,
                                                int workers) {
  std::vector<ScannedPackage> out(layer.size());
  const long n = static_cast<long>(layer.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(workers, 1))
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = provider.scan(layer[i]);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

void drop_back_edges(DepGraph& g) {
  enum : std::uint8_t { White, Gray, Black };
  std::vector<std::uint8_t> color(g.nodes.size(), White);
  struct Frame {
    std::size_t node;
    std::size_t next;
  };
  auto visit = [&](std::size_t start) {
    if (color[start] != White) return;
    std::vector<Frame> stack{{start, 0}};
    color[start] = Gray;
    while (!stack.empty()) {
      Frame& f = stack.back();
      auto& kids = g.nodes[f.node].children;
      if (f.next == kids.size()) {
        color[f.node] = Black;
        stack.pop_back();
        continue;
      }
      const std::size_t v = kids[f.next];
      if (color[v] == Gray) {
        kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(f.next));
        continue;
      }
      ++f.next;
      if (color[v] == White) {
        color[v] = Gray;
        stack.push_back({v, 0});
      }
    }
  };
  for (std::size_t r : g.roots) visit(r);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) visit(i);
}

DepGraph build_dep_tree(const std::vector<PackageRef>& roots, PackageProvider& provider,
                        BuildOptions opts) {
  DepGraph g;
  std::map<std::pair<std::string, std::string>, std::size_t> index;

  auto add_node = [&](const PackageRef& ref, int depth, const std::string& key_version) {
    PackageNode n;
    n.package_path = ref.package_path;
    n.module = ref.module;
    n.dir = ref.dir;
    n.depth = depth;
    n.resolved = ref.resolved;
    n.is_std = is_std_package(ref.package_path, ref.module.get());
    const std::size_t id = g.nodes.size();
    g.nodes.push_back(std::move(n));
    index.emplace(std::make_pair(ref.package_path, key_version), id);
    return id;
  };

  std::vector<PackageRef> layer;
  std::vector<std::size_t> layer_ids;
  {
    std::vector<PackageRef> sorted = roots;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      return a.package_path < b.package_path;
    });
    for (const PackageRef& r : sorted) {
      if (!g.root_module && r.module) g.root_module = r.module;
      const std::string version = r.module ? r.module->version : "";
      auto it = index.find({r.package_path, version});
      if (it != index.end()) continue;
      const std::size_t id = add_node(r, 0, version);
      g.roots.push_back(id);
      layer.push_back(r);
      layer_ids.push_back(id);
    }
  }

  int depth = 0;
  while (!layer.empty()) {
    std::vector<ScannedPackage> scanned =
        opts.kernel == Kernel::Parallel ? scan_layer_parallel(layer, provider, opts.workers)
                                        : scan_layer_serial(layer, provider);
    std::vector<PackageRef> next;
    std::vector<std::size_t> next_ids;
    // single writer: fold the layer in its deterministic order
    for (std::size_t i = 0; i < layer.size(); ++i) {
      const std::size_t id = layer_ids[i];
      ScannedPackage& s = scanned[i];
      {
        PackageNode& n = g.nodes[id];
        if (!s.error.empty()) n.resolved = false;
        n.findings = std::move(s.census.findings);
        n.local_counts = s.census.tokens;
        n.local_context_counts = s.census.contexts;
        n.uses_cgo = s.census.uses_cgo;
        n.parse_errors = s.census.parse_errors;
      }
      for (const std::string& imp : s.imports) {
        std::optional<PackageRef> ref = provider.resolve(imp, layer[i]);
        std::size_t child;
        if (!ref) {
          g.unresolved.push_back({imp, layer[i].package_path});
          auto it = index.find({imp, kUnresolvedKey});
          if (it != index.end()) {
            child = it->second;
          } else {
            PackageRef placeholder{imp, nullptr, {}, false};
            child = add_node(placeholder, depth + 1, kUnresolvedKey);
          }
        } else {
          const std::string version = ref->module ? ref->module->version : "";
          auto it = index.find({ref->package_path, version});
          if (it != index.end()) {
            child = it->second;
          } else {
            child = add_node(*ref, depth + 1, version);
            next.push_back(std::move(*ref));
            next_ids.push_back(child);
          }
        }
        g.nodes[id].children.push_back(child);
      }
    }
    layer = std::move(next);
    layer_ids = std::move(next_ids);
    ++depth;
  }

  std::sort(g.unresolved.begin(), g.unresolved.end(), [](const auto& a, const auto& b) {
    return std::tie(a.import_path, a.importer) < std::tie(b.import_path, b.importer);
  });
  g.unresolved.erase(std::unique(g.unresolved.begin(), g.unresolved.end()),
                     g.unresolved.end());
  sort_children(g);
  recompute_depths(g);  // shortest distance, back edges included
  drop_back_edges(g);
  if (opts.kernel == Kernel::Parallel)
    compute_cumulative_parallel(g, opts.workers);
  else
    compute_cumulative_serial(g);
  return g;
}

}  // namespace unsafe_audit
