#include <fstream>
#include <sstream>
#include <system_error>

#include "unsafe_audit/errors.hpp"
#include "unsafe_audit/modgraph.hpp"

namespace unsafe_audit {

namespace {

bool is_dir(const fs::path& p) {
  std::error_code ec;
  return fs::is_directory(p, ec);
}

std::string read_text(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Path of import_path below module_path ("" when equal).
std::string_view subpath(std::string_view import_path, std::string_view module_path) {
  if (import_path.size() == module_path.size()) return {};
  return import_path.substr(module_path.size() + 1);
}

fs::path join(const fs::path& base, std::string_view sub) {
  return sub.empty() ? base : base / fs::path(std::string(sub));
}

// vendor/modules.txt: "# module version [=> replacement]" lines followed by
// the packages vendored from that module.
std::map<std::string, std::pair<std::string, std::string>, std::less<>> read_modules_txt(
    const fs::path& vendor_dir) {
  std::map<std::string, std::pair<std::string, std::string>, std::less<>> out;
  std::ifstream in(vendor_dir / "modules.txt");
  if (!in) return out;
  std::string line;
  std::pair<std::string, std::string> current;
  while (std::getline(in, line)) {
    if (line.rfind("## ", 0) == 0) continue;  // "## explicit" markers
    if (line.rfind("# ", 0) == 0) {
      std::istringstream ss(line.substr(2));
      current = {};
      ss >> current.first >> current.second;
      continue;
    }
    if (!line.empty() && line[0] != '#' && !current.first.empty())
      out[line] = current;
  }
  return out;
}

}  // namespace

std::optional<fs::path> find_enclosing_gomod(const fs::path& dir) {
  std::error_code ec;
  fs::path cur = fs::weakly_canonical(fs::absolute(dir, ec), ec);
  while (true) {
    if (fs::is_regular_file(cur / "go.mod", ec)) return cur / "go.mod";
    if (!cur.has_parent_path() || cur.parent_path() == cur) return std::nullopt;
    cur = cur.parent_path();
  }
}

ModuleInfo load_module(const fs::path& dir) {
  ModuleInfo info = parse_gomod(read_text(dir / "go.mod"));
  std::error_code ec;
  info.source_dir = fs::weakly_canonical(fs::absolute(dir, ec), ec);
  return info;
}

bool is_std_package(std::string_view import_path, const ModuleInfo* module) {
  if (is_std_import_path(import_path)) return true;
  if (module != nullptr && module->is_std) return true;
  if (has_path_prefix(import_path, "golang.org/x/sys")) return true;
  return module != nullptr && module->module_path == "golang.org/x/sys";
}

Resolver::Resolver(ModuleInfo root, ResolverRoots roots) : roots_(std::move(roots)) {
  root.version.clear();
  root_ = std::make_shared<const ModuleInfo>(std::move(root));
  ModuleInfo std_info;
  std_info.module_path = "std";
  std_info.is_std = true;
  if (roots_.goroot_src) std_info.source_dir = *roots_.goroot_src;
  std_ = std::make_shared<const ModuleInfo>(std::move(std_info));
  if (roots_.vendor_dir) vendored_ = read_modules_txt(*roots_.vendor_dir);
}

std::shared_ptr<const ModuleInfo> Resolver::dependency_module(
    const std::string& module_path, const std::string& version, const fs::path& dir) {
  std::lock_guard lock(mu_);
  auto key = std::make_pair(module_path, version);
  if (auto it = loaded_.find(key); it != loaded_.end()) return it->second;
  ModuleInfo info;
  try {
    info = load_module(dir);
  } catch (const AuditError&) {
    // Pre-module dependencies have no go.mod; they simply require nothing.
    info = ModuleInfo{};
    info.source_dir = dir;
  }
  info.module_path = module_path;
  info.version = version;
  auto ptr = std::make_shared<const ModuleInfo>(std::move(info));
  loaded_.emplace(std::move(key), ptr);
  return ptr;
}

std::optional<ResolvedPackage> Resolver::from_module(std::string_view import_path,
                                                     const std::string& module_path,
                                                     const std::string& version) {
  fs::path base;
  std::string label = version;
  if (const Replacement* r = root_->replacement_for(module_path, version)) {
    if (r->is_directory()) {
      base = (root_->source_dir / r->new_path).lexically_normal();
    } else {
      base = roots_.module_cache /
             (escape_module_path(r->new_path) + "@" + escape_module_path(r->new_version));
      label = r->new_version;
    }
  } else {
    if (roots_.module_cache.empty()) return std::nullopt;
    base = roots_.module_cache /
           (escape_module_path(module_path) + "@" + escape_module_path(version));
  }
  const fs::path dir = join(base, subpath(import_path, module_path));
  if (!is_dir(dir)) return std::nullopt;
  return ResolvedPackage{dir, dependency_module(module_path, label, base)};
}

std::optional<ResolvedPackage> Resolver::from_vendor(std::string_view import_path) {
  const fs::path dir = *roots_.vendor_dir / std::string(import_path);
  if (!is_dir(dir)) return std::nullopt;
  std::string module_path(import_path);
  std::string version;
  if (auto it = vendored_.find(import_path); it != vendored_.end()) {
    module_path = it->second.first;
    version = it->second.second;
  } else if (const Requirement* req = root_->longest_require(import_path)) {
    module_path = req->module_path;
    version = req->version;
  }
  return ResolvedPackage{dir, dependency_module(module_path, version,
                                                *roots_.vendor_dir / module_path)};
}

std::optional<ResolvedPackage> Resolver::resolve_package_dir(std::string_view import_path,
                                                             const ModuleInfo* importer) {
  if (importer == nullptr) importer = root_.get();

  if (importer->is_std) {
    // std packages import golang.org/x/... from GOROOT's own vendor tree
    if (!roots_.goroot_src) return std::nullopt;
    const fs::path base = *roots_.goroot_src;
    fs::path dir = is_std_import_path(import_path)
                       ? base / std::string(import_path)
                       : base / "vendor" / std::string(import_path);
    if (is_dir(dir)) return ResolvedPackage{dir, std_};
    return std::nullopt;
  }

  if (importer != root_.get() && importer->owns(import_path)) {
    const fs::path dir = join(importer->source_dir, subpath(import_path, importer->module_path));
    if (is_dir(dir)) {
      std::lock_guard lock(mu_);
      auto it = loaded_.find({importer->module_path, importer->version});
      if (it != loaded_.end()) return ResolvedPackage{dir, it->second};
    }
  }

  if (root_->owns(import_path)) {
    const fs::path dir = join(root_->source_dir, subpath(import_path, root_->module_path));
    if (is_dir(dir)) return ResolvedPackage{dir, root_};
    return std::nullopt;
  }

  if (roots_.vendor_dir) {
    if (auto r = from_vendor(import_path)) return r;
  }

  if (!is_std_import_path(import_path)) {
    if (const Requirement* req = root_->longest_require(import_path)) {
      if (auto r = from_module(import_path, req->module_path, req->version)) return r;
    }
    if (importer != root_.get()) {
      if (const Requirement* req = importer->longest_require(import_path)) {
        if (auto r = from_module(import_path, req->module_path, req->version)) return r;
      }
    }
    return std::nullopt;
  }

  if (roots_.goroot_src) {
    const fs::path dir = *roots_.goroot_src / std::string(import_path);
    if (is_dir(dir)) return ResolvedPackage{dir, std_};
  }
  return std::nullopt;
}

std::optional<std::string> Resolver::import_path_of(const fs::path& dir) const {
  std::error_code ec;
  const fs::path abs = fs::weakly_canonical(fs::absolute(dir, ec), ec);
  const fs::path rel = abs.lexically_relative(root_->source_dir);
  if (rel.empty()) return std::nullopt;
  const std::string r = rel.generic_string();
  if (r == ".") return root_->module_path;
  if (r == ".." || r.rfind("../", 0) == 0) return std::nullopt;
  return root_->module_path + "/" + r;
}

}  // namespace unsafe_audit
