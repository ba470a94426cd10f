#include "unsafe_audit/frontend.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include "unsafe_audit/errors.hpp"

namespace unsafe_audit {

namespace fs = std::filesystem;

namespace {

bool is_major_version(std::string_view seg) {
  if (seg.size() < 2 || seg[0] != 'v') return false;
  return std::all_of(seg.begin() + 1, seg.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

std::string unquote(std::string_view lit) {
  if (lit.size() >= 2 && (lit.front() == '"' || lit.front() == '`') &&
      lit.back() == lit.front())
    return std::string(lit.substr(1, lit.size() - 2));
  return {};
}

}  // namespace

bool ImportTable::imports_path(std::string_view path) const {
  return std::find(paths.begin(), paths.end(), path) != paths.end();
}

bool ImportTable::binds(std::string_view name, std::string_view path) const {
  auto it = entries.find(std::string(name));
  return it != entries.end() && it->second == path;
}

std::string default_package_name(std::string_view import_path) {
  std::vector<std::string_view> segs;
  std::size_t start = 0;
  while (start <= import_path.size()) {
    std::size_t slash = import_path.find('/', start);
    if (slash == std::string_view::npos) slash = import_path.size();
    if (slash > start) segs.push_back(import_path.substr(start, slash - start));
    start = slash + 1;
  }
  if (segs.empty()) return {};
  std::string_view last = segs.back();
  if (segs.size() > 1 && is_major_version(last)) last = segs[segs.size() - 2];
  // gopkg.in/yaml.v3 -> yaml
  const std::size_t dot_v = last.rfind(".v");
  if (dot_v != std::string_view::npos && dot_v > 0 &&
      is_major_version(last.substr(dot_v + 1)))
    last = last.substr(0, dot_v);
  return std::string(last);
}

std::vector<fs::path> enumerate_package(const fs::path& dir,
                                        EnumerateOptions opts) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw IoError("not a readable directory: " + dir.string());
  std::vector<fs::path> files;
  fs::directory_iterator it(dir, ec);
  if (ec) throw IoError("cannot read directory " + dir.string() + ": " + ec.message());
  for (const fs::directory_entry& entry : it) {
    if (!entry.is_regular_file(ec)) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() < 4 || name.substr(name.size() - 3) != ".go") continue;
    if (name.front() == '.' || name.front() == '_') continue;
    const bool is_test =
        name.size() > 8 && name.substr(name.size() - 8) == "_test.go";
    if (is_test && !opts.include_tests) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

ImportTable resolve_imports(const SyntaxTree& tree) {
  ImportTable table;
  for (NodeId decl : tree.children(tree.root())) {
    const SyntaxNode& n = tree[decl];
    if (n.kind != NodeKind::ImportDecl) continue;
    const NodeId path_node = tree.child(decl, Role::Path);
    if (path_node == kNoNode) {
      table.skipped.push_back(std::string(tree.text_of(decl)));
      continue;
    }
    const std::string path = unquote(tree[path_node].text);
    if (path.empty()) {
      table.skipped.push_back(std::string(tree.text_of(decl)));
      continue;
    }
    if (!table.imports_path(path)) table.paths.push_back(path);
    const NodeId alias = tree.child(decl, Role::Name);
    const std::string name =
        alias == kNoNode ? default_package_name(path) : tree[alias].text;
    if (name == ".") {
      table.dot_imports.insert(path);
    } else if (name == "_") {
      table.blank_imports.insert(path);
    } else {
      table.entries[name] = path;
    }
  }
  return table;
}

SyntaxTree parse_path(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_file(buf.str(), file.string());
}

}  // namespace unsafe_audit
