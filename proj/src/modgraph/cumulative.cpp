#include <algorithm>

#include "unsafe_audit/modgraph.hpp"

namespace unsafe_audit {

namespace {

// Sum of local counts over the distinct nodes reachable from `start`.
// `mark` is caller-owned scratch; `stamp` must be fresh for each call.
TokenCounts reachable_sum(const DepGraph& g, std::size_t start,
                          std::vector<std::uint32_t>& mark, std::uint32_t stamp,
                          std::vector<std::size_t>& stack) {
  TokenCounts sum;
  stack.clear();
  stack.push_back(start);
  mark[start] = stamp;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    sum += g.nodes[u].local_counts;
    for (std::size_t v : g.nodes[u].children) {
      if (mark[v] == stamp) continue;
      mark[v] = stamp;
      stack.push_back(v);
    }
  }
  return sum;
}

}  // namespace

void compute_cumulative_serial(DepGraph& g) {
  std::vector<std::uint32_t> mark(g.nodes.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    g.nodes[i].cumulative_counts =
        reachable_sum(g, i, mark, static_cast<std::uint32_t>(i + 1), stack);
}

void compute_cumulative_parallel(DepGraph& g, int workers) {
  const long n = static_cast<long>(g.nodes.size());
  std::vector<TokenCounts> result(g.nodes.size());
#pragma omp parallel num_threads(std::max(workers, 1))
  {
    std::vector<std::uint32_t> mark(g.nodes.size(), 0);
    std::vector<std::size_t> stack;
#pragma omp for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i)
      result[i] = reachable_sum(g, static_cast<std::size_t>(i), mark,
                                static_cast<std::uint32_t>(i + 1), stack);
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    g.nodes[i].cumulative_counts = result[i];
}

}  // namespace unsafe_audit
