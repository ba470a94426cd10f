#pragma once

#include <algorithm>
#include <memory>
#include <random>
#include <set>

#include "unsafe_audit/modgraph.hpp"

namespace ua_test {

using namespace unsafe_audit;

// Synthetic package universe: node i imports the paths in edges[i].
struct SyntheticPackage {
  std::string path;
  std::shared_ptr<const ModuleInfo> module;
  TokenCounts tokens;
  std::vector<std::size_t> edges;
};

class MemoryProvider : public PackageProvider {
 public:
  explicit MemoryProvider(std::vector<SyntheticPackage> pkgs) : pkgs_(std::move(pkgs)) {}

  std::optional<PackageRef> resolve(std::string_view import_path, const PackageRef&) override {
    for (const auto& p : pkgs_)
      if (p.path == import_path) return PackageRef{p.path, p.module, {}, true};
    return std::nullopt;
  }

  ScannedPackage scan(const PackageRef& ref) const override {
    ScannedPackage s;
    for (const auto& p : pkgs_) {
      if (p.path != ref.package_path) continue;
      s.census.tokens = p.tokens;
      for (std::size_t e : p.edges) s.imports.push_back(pkgs_[e].path);
    }
    std::sort(s.imports.begin(), s.imports.end());
    return s;
  }

  [[nodiscard]] const std::vector<SyntheticPackage>& packages() const { return pkgs_; }

 private:
  std::vector<SyntheticPackage> pkgs_;
};

inline std::vector<SyntheticPackage> random_universe(std::mt19937& rng, bool allow_cycles) {
  std::uniform_int_distribution<int> size_dist(1, 40);
  const int n = size_dist(rng);
  std::uniform_real_distribution<double> unit(0, 1);
  const double density = 0.02 + unit(rng) * 0.25;
  std::uniform_int_distribution<int> count_dist(0, 4);
  std::vector<SyntheticPackage> pkgs(static_cast<std::size_t>(n));
  auto root = std::make_shared<ModuleInfo>();
  root->module_path = "root";
  for (int i = 0; i < n; ++i) {
    auto& p = pkgs[static_cast<std::size_t>(i)];
    p.path = i == 0 ? "root" : "dep.example/p" + std::to_string(i);
    if (i == 0) {
      p.module = root;
    } else {
      auto m = std::make_shared<ModuleInfo>();
      m->module_path = p.path;
      m->version = "v1.0." + std::to_string(i % 3);
      p.module = m;
    }
    for (TokenKind k : kAllTokenKinds)
      if (unit(rng) < 0.3) p.tokens[k] = static_cast<std::uint64_t>(count_dist(rng));
    for (int j = 0; j < n; ++j) {
      if (j == i || j == 0) continue;
      if (j < i && !allow_cycles) continue;
      if (unit(rng) < density) p.edges.push_back(static_cast<std::size_t>(j));
    }
  }
  return pkgs;
}

inline std::set<std::size_t> reachable(const std::vector<SyntheticPackage>& pkgs, std::size_t from) {
  std::set<std::size_t> seen{from};
  std::vector<std::size_t> stack{from};
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : pkgs[u].edges)
      if (seen.insert(v).second) stack.push_back(v);
  }
  return seen;
}

inline std::vector<int> bfs_depths(const std::vector<SyntheticPackage>& pkgs) {
  std::vector<int> depth(pkgs.size(), -1);
  std::vector<std::size_t> frontier{0};
  depth[0] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const std::size_t u = frontier[head];
    for (std::size_t v : pkgs[u].edges)
      if (depth[v] == -1) {
        depth[v] = depth[u] + 1;
        frontier.push_back(v);
      }
  }
  return depth;
}

inline bool dominates(const TokenCounts& a, const TokenCounts& b) {
  for (TokenKind k : kAllTokenKinds)
    if (a[k] < b[k]) return false;
  return true;
}

}  // namespace ua_test
