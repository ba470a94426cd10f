#include "doctest.h"
#include "synthetic_dag.hpp"

using namespace unsafe_audit;
using namespace ua_test;

namespace {

void check_universe(const std::vector<SyntheticPackage>& pkgs, bool acyclic) {
  MemoryProvider provider(pkgs);
  const PackageRef root{pkgs[0].path, pkgs[0].module, {}, true};
  const DepGraph serial = build_dep_tree({root}, provider, {Kernel::Serial, 1});
  const DepGraph parallel = build_dep_tree({root}, provider, {Kernel::Parallel, 8});

  const auto reach = reachable(pkgs, 0);
  const auto depth = bfs_depths(pkgs);
  REQUIRE(serial.nodes.size() == reach.size());

  for (const DepGraph* g : {&serial, &parallel}) {
    for (const PackageNode& n : g->nodes) {
      std::size_t src = 0;
      while (pkgs[src].path != n.package_path) ++src;
      CHECK(n.depth == depth[src]);
      CHECK(n.local_counts == pkgs[src].tokens);
      if (acyclic || src == 0) {
        TokenCounts expected;
        for (std::size_t r : reachable(pkgs, src)) expected += pkgs[r].tokens;
        CHECK(n.cumulative_counts == expected);
      }
      for (std::size_t c : n.children) {
        CHECK(dominates(n.cumulative_counts, g->nodes[c].cumulative_counts));
        CHECK(g->nodes[c].depth <= n.depth + 1);
      }
    }
  }
  for (std::size_t i = 0; i < serial.nodes.size(); ++i) {
    CHECK(serial.nodes[i].package_path == parallel.nodes[i].package_path);
    CHECK(serial.nodes[i].children == parallel.nodes[i].children);
    CHECK(serial.nodes[i].cumulative_counts == parallel.nodes[i].cumulative_counts);
  }
}

}  // namespace

TEST_SUITE("property") {

TEST_CASE("100 random DAGs match the brute-force oracle") {
  std::mt19937 rng(20201015);
  for (int trial = 0; trial < 100; ++trial) {
    CAPTURE(trial);
    check_universe(random_universe(rng, false), true);
  }
}

TEST_CASE("import cycles terminate and keep the root total") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    CAPTURE(trial);
    check_universe(random_universe(rng, true), false);
  }
}

TEST_CASE("diamond is counted once") {
  // a -> b, a -> c, b -> d, c -> d
  std::vector<SyntheticPackage> pkgs(4);
  const char* names[] = {"root", "x/b", "x/c", "x/d"};
  for (std::size_t i = 0; i < 4; ++i) {
    pkgs[i].path = names[i];
    auto m = std::make_shared<ModuleInfo>();
    m->module_path = names[i];
    pkgs[i].module = m;
  }
  pkgs[0].edges = {1, 2};
  pkgs[1].edges = {3};
  pkgs[2].edges = {3};
  pkgs[3].tokens[TokenKind::UnsafePointer] = 5;
  pkgs[1].tokens[TokenKind::Uintptr] = 1;
  MemoryProvider provider(pkgs);
  const DepGraph g =
      build_dep_tree({PackageRef{"root", pkgs[0].module, {}, true}}, provider, {});
  REQUIRE(g.nodes.size() == 4);
  CHECK(g.nodes[g.roots[0]].cumulative_counts.total() == 6);
  CHECK(g.nodes[*g.find("x/d")].depth == 2);
}

TEST_CASE("same path at two versions gives two nodes") {
  std::vector<SyntheticPackage> pkgs(3);
  auto root = std::make_shared<ModuleInfo>();
  root->module_path = "root";
  pkgs[0] = {"root", root, {}, {1, 2}};
  auto m1 = std::make_shared<ModuleInfo>();
  m1->module_path = "x/a";
  m1->version = "v1.0.0";
  auto m2 = std::make_shared<ModuleInfo>();
  m2->module_path = "x/a/v2";
  m2->version = "v2.0.0";
  pkgs[1] = {"x/a", m1, {}, {}};
  pkgs[2] = {"x/a/v2", m2, {}, {}};
  pkgs[1].tokens[TokenKind::UnsafeSizeof] = 1;
  pkgs[2].tokens[TokenKind::UnsafeSizeof] = 2;
  MemoryProvider provider(pkgs);
  const DepGraph g = build_dep_tree({PackageRef{"root", root, {}, true}}, provider, {});
  CHECK(g.nodes.size() == 3);
  CHECK(g.nodes[g.roots[0]].cumulative_counts[TokenKind::UnsafeSizeof] == 3);
}

}  // TEST_SUITE
