#include <cmath>
#include <set>

#include "json.hpp"
#include "unsafe_audit/errors.hpp"
#include "unsafe_audit/report.hpp"

namespace unsafe_audit {

using nlohmann::ordered_json;

std::pair<double, double> depth_moments(const std::map<int, std::uint64_t>& hist) {
  double n = 0;
  double sum = 0;
  for (const auto& [d, c] : hist) {
    n += static_cast<double>(c);
    sum += static_cast<double>(d) * static_cast<double>(c);
  }
  if (n == 0) return {0.0, 0.0};
  const double mean = sum / n;
  double ss = 0;
  for (const auto& [d, c] : hist) ss += static_cast<double>(c) * (d - mean) * (d - mean);
  return {mean, std::sqrt(ss / n)};
}

CorpusStats compute_stats(const std::vector<CorpusProjectSummary>& summaries) {
  if (summaries.empty()) throw EmptyCorpus("statistics need at least one project");
  CorpusStats s;
  s.project_count = summaries.size();
  s.include_std = summaries.front().include_std;
  std::set<std::pair<std::string, std::string>> seen;
  for (const CorpusProjectSummary& p : summaries) {
    if (p.has_direct_unsafe) ++s.projects_with_direct_unsafe;
    if (p.has_direct_unsafe || p.has_transitive_nonstd_unsafe) ++s.projects_with_unsafe;
    s.first_level_deps += p.first_level_dep_count;
    s.first_level_unsafe_deps += p.first_level_unsafe_dep_count;
    for (const auto& [d, c] : p.depth_histogram) s.depth_histogram[d] += c;
    for (const PackageSummary& pkg : p.packages) {
      if (pkg.is_std && !p.include_std && !pkg.in_root_module) continue;
      s.tokens_per_project += pkg.tokens;
      s.contexts_per_project += pkg.contexts;
      if (seen.insert({pkg.package_path, pkg.version}).second) {
        s.tokens_per_package_version += pkg.tokens;
        s.contexts_per_package_version += pkg.contexts;
      }
    }
  }
  const double n = static_cast<double>(s.project_count);
  s.direct_unsafe_share = static_cast<double>(s.projects_with_direct_unsafe) / n;
  s.transitive_unsafe_share = static_cast<double>(s.projects_with_unsafe) / n;
  s.first_level_share = s.first_level_deps == 0
                            ? 0.0
                            : static_cast<double>(s.first_level_unsafe_deps) /
                                  static_cast<double>(s.first_level_deps);
  std::tie(s.depth_mean, s.depth_sd) = depth_moments(s.depth_histogram);
  return s;
}

namespace {

template <typename Enum, std::size_t N, typename All>
ordered_json counts_json(const Counts<Enum, N>& c, const All& all) {
  ordered_json o = ordered_json::object();
  for (Enum k : all) o[std::string(to_string(k))] = c[k];
  return o;
}

template <typename Enum, std::size_t N, typename Parse>
Counts<Enum, N> counts_from(const ordered_json& o, Parse parse) {
  Counts<Enum, N> c;
  for (auto it = o.begin(); it != o.end(); ++it) {
    auto k = parse(it.key());
    if (!k) throw AuditError("unknown key '" + it.key() + "' in stats JSON");
    c[*k] = it.value().template get<std::uint64_t>();
  }
  return c;
}

ordered_json histogram_json(const std::map<int, std::uint64_t>& h) {
  ordered_json o = ordered_json::object();
  for (const auto& [d, c] : h) o[std::to_string(d)] = c;
  return o;
}

}  // namespace

std::string emit_stats_json(const CorpusStats& s,
                            const std::vector<CorpusProjectSummary>& summaries) {
  ordered_json doc = ordered_json::object();
  doc["project_count"] = s.project_count;
  doc["projects_with_direct_unsafe"] = s.projects_with_direct_unsafe;
  doc["projects_with_unsafe"] = s.projects_with_unsafe;
  doc["direct_unsafe_share"] = s.direct_unsafe_share;
  doc["transitive_unsafe_share"] = s.transitive_unsafe_share;
  doc["first_level_deps"] = s.first_level_deps;
  doc["first_level_unsafe_deps"] = s.first_level_unsafe_deps;
  doc["first_level_share"] = s.first_level_share;
  doc["include_std"] = s.include_std;
  doc["depth_histogram"] = histogram_json(s.depth_histogram);
  doc["depth_mean"] = s.depth_mean;
  doc["depth_sd"] = s.depth_sd;
  doc["depth_sd_kind"] = "population";
  doc["token_distribution"] = ordered_json{
      {"per_project", counts_json(s.tokens_per_project, kAllTokenKinds)},
      {"per_package_version", counts_json(s.tokens_per_package_version, kAllTokenKinds)}};
  doc["context_distribution"] = ordered_json{
      {"per_project", counts_json(s.contexts_per_project, kAllContextKinds)},
      {"per_package_version", counts_json(s.contexts_per_package_version, kAllContextKinds)}};
  if (!summaries.empty()) {
    ordered_json projects = ordered_json::array();
    for (const CorpusProjectSummary& p : summaries) {
      ordered_json o = ordered_json::object();
      o["project"] = p.project;
      o["has_direct_unsafe"] = p.has_direct_unsafe;
      o["has_transitive_nonstd_unsafe"] = p.has_transitive_nonstd_unsafe;
      o["first_level_dep_count"] = p.first_level_dep_count;
      o["first_level_unsafe_dep_count"] = p.first_level_unsafe_dep_count;
      o["depth_histogram"] = histogram_json(p.depth_histogram);
      o["packages"] = p.package_count;
      o["unresolved_imports"] = p.unresolved_count;
      o["files_with_parse_errors"] = p.parse_error_files;
      projects.push_back(std::move(o));
    }
    doc["projects"] = std::move(projects);
  }
  return doc.dump(2) + "\n";
}

CorpusStats parse_stats_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw AuditError(std::string("invalid stats JSON: ") + e.what());
  }
  try {
    CorpusStats s;
    s.project_count = doc.at("project_count").get<std::uint64_t>();
    s.projects_with_direct_unsafe = doc.at("projects_with_direct_unsafe").get<std::uint64_t>();
    s.projects_with_unsafe = doc.at("projects_with_unsafe").get<std::uint64_t>();
    s.direct_unsafe_share = doc.at("direct_unsafe_share").get<double>();
    s.transitive_unsafe_share = doc.at("transitive_unsafe_share").get<double>();
    s.first_level_deps = doc.at("first_level_deps").get<std::uint64_t>();
    s.first_level_unsafe_deps = doc.at("first_level_unsafe_deps").get<std::uint64_t>();
    s.first_level_share = doc.at("first_level_share").get<double>();
    s.include_std = doc.at("include_std").get<bool>();
    const auto& h = doc.at("depth_histogram");
    for (auto it = h.begin(); it != h.end(); ++it)
      s.depth_histogram[std::stoi(it.key())] = it.value().get<std::uint64_t>();
    s.depth_mean = doc.at("depth_mean").get<double>();
    s.depth_sd = doc.at("depth_sd").get<double>();
    const auto& td = doc.at("token_distribution");
    s.tokens_per_project = counts_from<TokenKind, kTokenKindCount>(
        td.at("per_project"), parse_token_kind);
    s.tokens_per_package_version = counts_from<TokenKind, kTokenKindCount>(
        td.at("per_package_version"), parse_token_kind);
    const auto& cd = doc.at("context_distribution");
    s.contexts_per_project = counts_from<ContextKind, kContextKindCount>(
        cd.at("per_project"), parse_context_kind);
    s.contexts_per_package_version = counts_from<ContextKind, kContextKindCount>(
        cd.at("per_package_version"), parse_context_kind);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw AuditError(std::string("malformed stats JSON: ") + e.what());
  }
}

std::string emit_histogram_csv(const CorpusStats& s) {
  std::string out = "depth,packages\n";
  for (const auto& [d, c] : s.depth_histogram)
    out += std::to_string(d) + "," + std::to_string(c) + "\n";
  return out;
}

std::string emit_token_distribution_csv(const CorpusStats& s) {
  std::string out = "grouping,token,count\n";
  for (TokenKind k : kAllTokenKinds)
    out += "per_project," + std::string(to_string(k)) + "," +
           std::to_string(s.tokens_per_project[k]) + "\n";
  for (TokenKind k : kAllTokenKinds)
    out += "per_package_version," + std::string(to_string(k)) + "," +
           std::to_string(s.tokens_per_package_version[k]) + "\n";
  return out;
}

}  // namespace unsafe_audit
