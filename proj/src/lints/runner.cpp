#include <algorithm>
#include <tuple>

#include "unsafe_audit/lints.hpp"

namespace unsafe_audit {

std::string_view to_string(LintPass pass) {
  return pass == LintPass::Sliceheader ? "sliceheader" : "structcast";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::Warning ? "warning" : "info";
}

bool diagnostic_less(const Diagnostic& a, const Diagnostic& b) {
  return std::tie(a.file, a.line, a.column, a.pass, a.message) <
         std::tie(b.file, b.line, b.column, b.pass, b.message);
}

std::size_t warning_count(const std::vector<Diagnostic>& diags) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(),
                    [](const Diagnostic& d) { return d.severity == Severity::Warning; }));
}

namespace {

struct Task {
  std::size_t file;
  NodeId function;  // kNoNode: package-level code of the file
};

// A task is skipped when a parse error falls inside its code.
bool affected(const SyntaxTree& t, NodeId function, const std::vector<std::uint32_t>& errors,
              const std::vector<NodeId>& functions) {
  for (std::uint32_t off : errors) {
    if (function != kNoNode) {
      const Span s = t[function].span;
      if (off >= s.offset && off <= s.end()) return true;
      continue;
    }
    const bool inside_any = std::any_of(functions.begin(), functions.end(), [&](NodeId f) {
      return off >= t[f].span.offset && off <= t[f].span.end();
    });
    if (!inside_any) return true;
  }
  return false;
}

}  // namespace

std::vector<Diagnostic> lint_package(const std::vector<const SyntaxTree*>& files,
                                     const std::vector<ImportTable>& imports, LintOptions opts,
                                     const std::vector<std::string>& display_names) {
  const TypeEnvironment env(files, imports);
  std::vector<Task> tasks;
  for (std::size_t f = 0; f < files.size(); ++f) {
    const SyntaxTree& t = *files[f];
    const auto functions = t.functions();
    const auto errors = t.error_offsets();
    if (!affected(t, kNoNode, errors, functions)) tasks.push_back({f, kNoNode});
    for (NodeId fn : functions)
      if (!affected(t, fn, errors, functions)) tasks.push_back({f, fn});
  }

  std::vector<std::vector<Diagnostic>> results(tasks.size());
  auto run = [&](std::size_t i) {
    const SyntaxTree& t = *files[tasks[i].file];
    std::vector<Diagnostic>& out = results[i];
    if (opts.sliceheader) {
      auto d = sliceheader_check(t, tasks[i].function, env);
      out.insert(out.end(), d.begin(), d.end());
    }
    if (opts.structcast) {
      auto d = structcast_check(t, tasks[i].function, env, opts.structcast_flat);
      out.insert(out.end(), d.begin(), d.end());
    }
    if (tasks[i].file < display_names.size())
      for (Diagnostic& d : out) d.file = display_names[tasks[i].file];
  };

  const long n = static_cast<long>(tasks.size());
  if (opts.parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(opts.workers, 1))
    for (long i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  } else {
    for (long i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  }

  std::vector<Diagnostic> all;
  for (auto& r : results) all.insert(all.end(), r.begin(), r.end());
  std::sort(all.begin(), all.end(), diagnostic_less);
  return all;
}

}  // namespace unsafe_audit
