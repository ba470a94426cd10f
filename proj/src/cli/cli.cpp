#include "unsafe_audit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "unsafe_audit/errors.hpp"
#include "unsafe_audit/report.hpp"

namespace unsafe_audit {

namespace {

// `dir/...` and `...` mark a recursive target.
std::pair<std::string, bool> split_target(const std::string& target) {
  if (target == "...") return {".", true};
  if (target.size() >= 4 && target.compare(target.size() - 4, 4, "/...") == 0) {
    std::string base = target.substr(0, target.size() - 4);
    return {base.empty() ? "/" : base, true};
  }
  return {target, false};
}

bool is_package_dir(const fs::path& dir, bool include_tests) {
  try {
    return !enumerate_package(dir, EnumerateOptions{include_tests}).empty();
  } catch (const IoError&) {
    return false;
  }
}

bool skipped_subdir(const fs::path& dir) {
  const std::string name = dir.filename().string();
  return name == "vendor" || name == "testdata" || name.empty() || name[0] == '.' ||
         name[0] == '_';
}

fs::path canonical_dir(const fs::path& p) {
  std::error_code ec;
  return fs::weakly_canonical(fs::absolute(p, ec), ec);
}

// One module root together with the package directories audited in it.
struct Project {
  ModuleInfo module;
  std::vector<fs::path> packages;
};

ModuleInfo module_for(const fs::path& dir) {
  if (auto gomod = find_enclosing_gomod(dir)) return load_module(gomod->parent_path());
  ModuleInfo m;
  m.module_path = dir.filename().string();
  m.source_dir = dir;
  return m;
}

std::vector<Project> group_by_module(const std::vector<fs::path>& dirs) {
  std::map<fs::path, Project> by_root;
  for (const fs::path& d : dirs) {
    ModuleInfo m = module_for(d);
    auto [it, fresh] = by_root.try_emplace(m.source_dir);
    if (fresh) it->second.module = std::move(m);
    it->second.packages.push_back(d);
  }
  std::vector<Project> out;
  for (auto& [root, p] : by_root) {
    std::sort(p.packages.begin(), p.packages.end());
    p.packages.erase(std::unique(p.packages.begin(), p.packages.end()), p.packages.end());
    out.push_back(std::move(p));
  }
  return out;
}

ResolverRoots resolver_roots(const RunConfig& cfg) {
  return ResolverRoots{cfg.module_cache, cfg.vendor_dir, cfg.goroot_src};
}

BuildOptions build_options(const RunConfig& cfg) {
  return BuildOptions{cfg.jobs > 1 ? Kernel::Parallel : Kernel::Serial, cfg.jobs};
}

void log_graph(const DepGraph& g, bool have_goroot, std::ostream& err) {
  std::set<std::string> std_missing;
  for (const UnresolvedImport& u : g.unresolved) {
    if (!have_goroot && is_std_import_path(u.import_path)) {
      std_missing.insert(u.import_path);
      continue;
    }
    err << "unsafe-audit: unresolved import " << u.import_path << " (imported by "
        << u.importer << ")\n";
  }
  if (!std_missing.empty())
    err << "unsafe-audit: " << std_missing.size()
        << " standard-library package(s) not scanned; pass --goroot-src to include them\n";
  for (const PackageNode& n : g.nodes)
    if (n.parse_errors > 0)
      err << "unsafe-audit: " << n.package_path << ": " << n.parse_errors
          << " file(s) with syntax errors, scanned partially\n";
}

DepGraph build_project(const Project& p, const RunConfig& cfg, std::ostream& err) {
  Resolver resolver(p.module, resolver_roots(cfg));
  FileSystemProvider provider(resolver, EnumerateOptions{cfg.include_tests});
  std::vector<PackageRef> roots;
  for (const fs::path& d : p.packages) roots.push_back(provider.root_package(d));
  DepGraph g = build_dep_tree(roots, provider, build_options(cfg));
  log_graph(g, cfg.goroot_src.has_value(), err);
  return g;
}

void write_report(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (!cfg.output) {
    out << text;
    out.flush();
    return;
  }
  fs::path tmp = *cfg.output;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << text;
    f.close();
    if (!f) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, *cfg.output, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot write " + cfg.output->string());
  }
}

std::vector<fs::path> target_packages(const RunConfig& cfg) {
  std::vector<fs::path> dirs;
  for (const std::string& t : cfg.target_dirs) {
    auto expanded = expand_target(t, cfg.include_tests);
    dirs.insert(dirs.end(), expanded.begin(), expanded.end());
  }
  return dirs;
}

int run_census(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto projects = group_by_module(target_packages(cfg));
  std::vector<DepGraph> graphs;
  for (const Project& p : projects) graphs.push_back(build_project(p, cfg, err));

  std::string text;
  switch (cfg.format) {
    case OutputFormat::Csv: {
      std::vector<UnsafeFinding> all;
      for (const DepGraph& g : graphs) {
        auto f = g.all_findings();
        all.insert(all.end(), f.begin(), f.end());
      }
      std::stable_sort(all.begin(), all.end(), finding_less);
      text = emit_census_csv(all);
      break;
    }
    case OutputFormat::Json:
      if (graphs.size() == 1) {
        text = emit_census_json(graphs.front());
      } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const DepGraph& g : graphs)
          arr.push_back(nlohmann::ordered_json::parse(emit_census_json(g)));
        text = arr.dump(2) + "\n";
      }
      break;
    default: {
      TreeOptions opts{cfg.max_depth, cfg.include_std, cfg.show_code};
      for (const DepGraph& g : graphs) text += render_tree(g, opts);
    }
  }
  write_report(cfg, text, out);
  return kExitOk;
}

struct LintUnit {
  fs::path dir;
  std::string display_prefix;
};

std::vector<Diagnostic> lint_dir(const LintUnit& unit, const RunConfig& cfg,
                                 std::ostream& err) {
  const auto files = enumerate_package(unit.dir, EnumerateOptions{cfg.include_tests});
  std::vector<SyntaxTree> trees;
  trees.reserve(files.size());
  std::vector<ImportTable> imports;
  std::vector<std::string> names;
  for (const fs::path& f : files) {
    trees.push_back(parse_path(f));
    if (!trees.back().errors().empty())
      err << "unsafe-audit: " << unit.display_prefix << f.filename().string()
          << ": syntax errors, affected functions skipped\n";
    imports.push_back(resolve_imports(trees.back()));
    names.push_back(unit.display_prefix + f.filename().string());
  }
  std::vector<const SyntaxTree*> ptrs;
  for (const SyntaxTree& t : trees) ptrs.push_back(&t);
  LintOptions opts;
  opts.structcast_flat = cfg.structcast_flat;
  opts.workers = cfg.jobs;
  opts.parallel = cfg.jobs > 1;
  return lint_package(ptrs, imports, opts, names);
}

std::string display_prefix_for(const std::string& target, const fs::path& base,
                               const fs::path& dir) {
  const std::string root = split_target(target).first;
  fs::path rel = dir.lexically_relative(base);
  fs::path shown = rel.empty() || rel == "." ? fs::path(root) : fs::path(root) / rel;
  std::string s = shown.generic_string();
  if (s.empty() || s.back() != '/') s += '/';
  return s;
}

int run_lint(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<LintUnit> units;
  std::set<fs::path> seen;
  std::vector<fs::path> target_dirs;
  for (const std::string& t : cfg.target_dirs) {
    const fs::path base_dir = canonical_dir(split_target(t).first);
    for (const fs::path& d : expand_target(t, cfg.include_tests)) {
      target_dirs.push_back(d);
      if (seen.insert(d).second) units.push_back({d, display_prefix_for(t, base_dir, d)});
    }
  }
  if (cfg.deps) {
    for (const Project& p : group_by_module(target_dirs)) {
      const DepGraph g = build_project(p, cfg, err);
      std::vector<std::pair<std::string, fs::path>> deps;
      for (const PackageNode& n : g.nodes) {
        if (!n.resolved || g.in_root_module(n)) continue;
        if (n.is_std && !cfg.include_std) continue;
        std::string label = n.package_path;
        if (!n.version().empty()) label += "@" + n.version();
        deps.emplace_back(label + "/", n.dir);
      }
      std::sort(deps.begin(), deps.end());
      for (auto& [label, dir] : deps)
        if (seen.insert(dir).second) units.push_back({dir, label});
    }
  }
  std::vector<Diagnostic> diags;
  for (const LintUnit& u : units) {
    auto d = lint_dir(u, cfg, err);
    diags.insert(diags.end(), d.begin(), d.end());
  }
  std::stable_sort(diags.begin(), diags.end(), diagnostic_less);
  write_report(cfg,
               emit_diagnostics(diags, cfg.format == OutputFormat::Json ? DiagnosticFormat::Json
                                                                        : DiagnosticFormat::Text),
               out);
  const std::size_t warnings = warning_count(diags);
  if (warnings > 0) err << "unsafe-audit: " << warnings << " warning(s)\n";
  return warnings > 0 ? kExitWarnings : kExitOk;
}

int run_stats(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<CorpusProjectSummary> summaries;
  for (const std::string& t : cfg.target_dirs) {
    const std::string root = split_target(t).first;
    const auto dirs = expand_target(root == "/" ? "/..." : root + "/...", cfg.include_tests);
    if (dirs.empty()) {
      err << "unsafe-audit: " << t << ": no Go packages, skipped\n";
      continue;
    }
    Project p;
    p.module = module_for(canonical_dir(root));
    p.packages = dirs;
    const DepGraph g = build_project(p, cfg, err);
    summaries.push_back(summarize_project(g, p.module.module_path, cfg.include_std));
  }
  const CorpusStats stats = compute_stats(summaries);
  std::string text;
  if (cfg.format == OutputFormat::Csv)
    text = cfg.stats_table == "tokens" ? emit_token_distribution_csv(stats)
                                       : emit_histogram_csv(stats);
  else
    text = emit_stats_json(stats, summaries);
  write_report(cfg, text, out);
  return kExitOk;
}

void add_common_options(CLI::App* sub, RunConfig& cfg, std::string& format,
                        std::vector<std::string> formats) {
  sub->add_option("targets", cfg.target_dirs, "Package directories; dir/... recurses");
  sub->add_flag("--include-tests", cfg.include_tests, "Also scan _test.go files");
  sub->add_flag("--include-std", cfg.include_std,
                "Count standard-library packages in trees and statistics");
  sub->add_option("--format", format, "Output format")
      ->check(CLI::IsMember(std::move(formats)));
  sub->add_option("--module-cache", cfg.module_cache,
                  "Module cache root (default: $UNSAFE_AUDIT_MODCACHE)");
  sub->add_option("--vendor", cfg.vendor_dir, "Vendor directory");
  sub->add_option("--goroot-src", cfg.goroot_src, "GOROOT/src of the toolchain");
  sub->add_option("--output,-o", cfg.output, "Write the report to FILE");
  sub->add_option("--jobs,-j", cfg.jobs, "Worker threads (0: one per core)")
      ->check(CLI::NonNegativeNumber);
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  if (s == "text") return OutputFormat::Text;
  return OutputFormat::Tree;
}

}  // namespace

std::vector<fs::path> expand_target(const std::string& target, bool include_tests) {
  const auto [base, recursive] = split_target(target);
  std::error_code ec;
  if (!fs::is_directory(base, ec)) throw IoError(target + ": no such directory");
  const fs::path root = canonical_dir(base);
  if (!recursive) return {root};

  std::vector<fs::path> out;
  if (is_package_dir(root, include_tests)) out.push_back(root);
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw IoError(target + ": " + ec.message());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw IoError(target + ": " + ec.message());
    if (!it->is_directory(ec)) continue;
    const fs::path& d = it->path();
    if (skipped_subdir(d) || fs::is_regular_file(d / "go.mod", ec)) {
      it.disable_recursion_pending();
      continue;
    }
    if (is_package_dir(d, include_tests)) out.push_back(canonical_dir(d));
  }
  std::sort(out.begin(), out.end());
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counts and lints uses of Go's unsafe package across a module and its "
               "dependencies.",
               "unsafe-audit"};
  app.require_subcommand(1, 1);
  app.failure_message(CLI::FailureMessage::help);

  RunConfig cfg;
  std::string format;
  CLI::App* census = app.add_subcommand("census", "Count unsafe tokens per package");
  add_common_options(census, cfg, format, {"csv", "json", "tree"});
  census->add_option("--max-depth", cfg.max_depth, "Deepest tree level printed")
      ->check(CLI::NonNegativeNumber);
  census->add_flag("--show-code", cfg.show_code, "List findings under each tree node");

  CLI::App* lint = app.add_subcommand("lint", "Run the sliceheader and structcast passes");
  add_common_options(lint, cfg, format, {"text", "json"});
  lint->add_flag("--deps", cfg.deps, "Also lint resolved dependency packages");
  lint->add_flag("--structcast-flat", cfg.structcast_flat,
                 "Count only top-level struct fields in structcast");

  CLI::App* stats = app.add_subcommand("stats", "Corpus statistics over project roots");
  add_common_options(stats, cfg, format, {"json", "csv"});
  stats->add_option("--csv-table", cfg.stats_table, "Table emitted with --format csv")
      ->check(CLI::IsMember({"histogram", "tokens"}));

  std::vector<const char*> argv{"unsafe-audit"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "unsafe-audit: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  if (census->parsed()) {
    cfg.subcommand = Subcommand::Census;
    cfg.format = format.empty() ? OutputFormat::Tree : parse_format(format);
  } else if (lint->parsed()) {
    cfg.subcommand = Subcommand::Lint;
    cfg.format = format.empty() ? OutputFormat::Text : parse_format(format);
  } else {
    cfg.subcommand = Subcommand::Stats;
    cfg.format = format.empty() ? OutputFormat::Json : parse_format(format);
    if (cfg.target_dirs.empty()) {
      err << "unsafe-audit: stats needs at least one project root\n" << stats->help();
      return kExitUsage;
    }
  }
  if (cfg.target_dirs.empty()) cfg.target_dirs.push_back(".");
  if (cfg.module_cache.empty())
    if (const char* env = std::getenv("UNSAFE_AUDIT_MODCACHE")) cfg.module_cache = env;
  if (cfg.jobs == 0) cfg.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  try {
    switch (cfg.subcommand) {
      case Subcommand::Census:
        return run_census(cfg, out, err);
      case Subcommand::Lint:
        return run_lint(cfg, out, err);
      case Subcommand::Stats:
        return run_stats(cfg, out, err);
    }
  } catch (const std::exception& e) {
    err << "unsafe-audit: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace unsafe_audit
