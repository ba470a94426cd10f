#include "unsafe_audit/modgraph.hpp"

namespace unsafe_audit {

CorpusProjectSummary summarize_project(const DepGraph& g, std::string project,
                                       bool include_std) {
  CorpusProjectSummary s;
  s.project = std::move(project);
  s.include_std = include_std;
  s.package_count = g.nodes.size();
  s.unresolved_count = g.unresolved.size();
  for (const PackageNode& n : g.nodes) {
    const bool in_root = g.in_root_module(n);
    const bool has_unsafe = n.local_counts.total() > 0;
    s.parse_error_files += n.parse_errors;
    s.packages.push_back(PackageSummary{n.package_path, n.version(), n.is_std, in_root,
                                        n.depth, n.local_counts, n.local_context_counts});
    if (in_root) {
      if (has_unsafe) s.has_direct_unsafe = true;
      continue;
    }
    if (!n.is_std && has_unsafe) s.has_transitive_nonstd_unsafe = true;
    if (n.is_std && !include_std) continue;
    if (n.depth == 1) {
      ++s.first_level_dep_count;
      if (has_unsafe) ++s.first_level_unsafe_dep_count;
    }
    if (has_unsafe) ++s.depth_histogram[n.depth];
  }
  return s;
}

}  // namespace unsafe_audit
