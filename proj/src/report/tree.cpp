#include <algorithm>
#include <limits>

#include "json.hpp"
#include "unsafe_audit/report.hpp"

namespace unsafe_audit {

namespace {

constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

std::string label(const DepGraph& g, const PackageNode& n) {
  std::string s = n.package_path;
  if (!n.version().empty() && !g.in_root_module(n)) s += "@" + n.version();
  return s;
}

// Canonical parent of every visible node: among the parents one layer up,
// the one whose own canonical path sorts first. Layers are ranked so that
// comparing ranks compares whole root-to-node paths.
std::vector<std::size_t> canonical_parents(const DepGraph& g,
                                           const std::vector<bool>& visible) {
  const std::size_t n = g.nodes.size();
  std::vector<std::size_t> parent(n, kNoParent);
  std::vector<std::size_t> rank(n, kNoParent);
  std::vector<int> depth(n, -1);
  std::vector<std::size_t> layer;
  for (std::size_t r : g.roots)
    if (visible[r] && depth[r] == -1) {
      depth[r] = 0;
      layer.push_back(r);
    }
  auto key = [&](std::size_t v) {
    return std::make_tuple(parent[v] == kNoParent ? 0 : rank[parent[v]],
                           std::cref(g.nodes[v].package_path), std::cref(g.nodes[v].version()));
  };
  while (!layer.empty()) {
    std::sort(layer.begin(), layer.end(),
              [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    for (std::size_t i = 0; i < layer.size(); ++i) rank[layer[i]] = i;
    std::vector<std::size_t> next;
    for (std::size_t u : layer) {
      for (std::size_t v : g.nodes[u].children) {
        if (!visible[v]) continue;
        if (depth[v] == -1) {
          depth[v] = depth[u] + 1;
          parent[v] = u;
          next.push_back(v);
        } else if (depth[v] == depth[u] + 1 && rank[u] < rank[parent[v]]) {
          parent[v] = u;
        }
      }
    }
    layer = std::move(next);
  }
  return parent;
}

}  // namespace

std::string render_tree(const DepGraph& g, const TreeOptions& opts) {
  std::vector<bool> visible(g.nodes.size(), true);
  if (!opts.show_std)
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      visible[i] = !g.nodes[i].is_std || g.in_root_module(g.nodes[i]);
  const auto parent = canonical_parents(g, visible);

  std::string out;
  struct Frame {
    std::size_t node;
    int depth;
    bool expand;
  };
  std::vector<Frame> stack;
  std::vector<std::size_t> roots;
  for (std::size_t r : g.roots)
    if (visible[r]) roots.push_back(r);
  std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) {
    return g.nodes[a].package_path < g.nodes[b].package_path;
  });
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) stack.push_back({*it, 0, true});

  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (opts.max_depth && f.depth > *opts.max_depth) continue;
    const PackageNode& n = g.nodes[f.node];
    const std::string indent(static_cast<std::size_t>(f.depth) * 2, ' ');
    out += indent + label(g, n);
    if (!f.expand) {
      out += " (*)\n";
      continue;
    }
    out += " [local " + std::to_string(n.local_counts.total()) + " | cumulative " +
           std::to_string(n.cumulative_counts.total()) + "]";
    if (!n.resolved) out += " (unresolved)";
    out += '\n';
    if (opts.show_code) {
      for (const UnsafeFinding& finding : n.findings)
        out += indent + "  ! " + finding.file + ":" + std::to_string(finding.line) + ":" +
               std::to_string(finding.column) + " " + std::string(to_string(finding.token)) +
               "/" + std::string(to_string(finding.context)) + " " + finding.snippet + "\n";
    }
    const auto& kids = n.children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      if (!visible[*it]) continue;
      stack.push_back({*it, f.depth + 1, parent[*it] == f.node});
    }
  }
  return out;
}

std::string emit_census_json(const DepGraph& g) {
  using nlohmann::ordered_json;
  auto token_obj = [](const TokenCounts& c) {
    ordered_json o = ordered_json::object();
    for (TokenKind k : kAllTokenKinds) o[std::string(to_string(k))] = c[k];
    return o;
  };
  auto context_obj = [](const ContextCounts& c) {
    ordered_json o = ordered_json::object();
    for (ContextKind k : kAllContextKinds) o[std::string(to_string(k))] = c[k];
    return o;
  };
  std::vector<std::size_t> order(g.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = g.nodes[a];
    const auto& y = g.nodes[b];
    return std::tie(x.depth, x.package_path, x.version()) <
           std::tie(y.depth, y.package_path, y.version());
  });

  ordered_json doc = ordered_json::object();
  doc["root_module"] = g.root_module ? g.root_module->module_path : "";
  ordered_json packages = ordered_json::array();
  for (std::size_t i : order) {
    const PackageNode& n = g.nodes[i];
    ordered_json p = ordered_json::object();
    p["package"] = n.package_path;
    p["module"] = n.module ? n.module->module_path : "";
    p["version"] = n.version();
    p["depth"] = n.depth;
    p["is_std"] = n.is_std;
    p["in_root_module"] = g.in_root_module(n);
    p["resolved"] = n.resolved;
    p["uses_cgo"] = n.uses_cgo;
    p["parse_errors"] = n.parse_errors;
    p["local"] = token_obj(n.local_counts);
    p["local_contexts"] = context_obj(n.local_context_counts);
    p["cumulative"] = token_obj(n.cumulative_counts);
    ordered_json kids = ordered_json::array();
    for (std::size_t c : n.children) kids.push_back(label(g, g.nodes[c]));
    p["imports"] = std::move(kids);
    packages.push_back(std::move(p));
  }
  doc["packages"] = std::move(packages);
  ordered_json unresolved = ordered_json::array();
  for (const UnresolvedImport& u : g.unresolved)
    unresolved.push_back(ordered_json{{"import", u.import_path}, {"importer", u.importer}});
  doc["unresolved"] = std::move(unresolved);
  ordered_json findings = ordered_json::array();
  for (const UnsafeFinding& f : g.all_findings()) {
    ordered_json o = ordered_json::object();
    o["module"] = f.module_path;
    o["version"] = f.module_version;
    o["package"] = f.package_path;
    o["file"] = f.file;
    o["line"] = f.line;
    o["column"] = f.column;
    o["token"] = to_string(f.token);
    o["context"] = to_string(f.context);
    o["snippet"] = f.snippet;
    findings.push_back(std::move(o));
  }
  doc["findings"] = std::move(findings);
  return doc.dump(2) + "\n";
}

}  // namespace unsafe_audit
