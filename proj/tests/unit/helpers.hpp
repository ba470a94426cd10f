#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "unsafe_audit/census.hpp"
#include "unsafe_audit/errors.hpp"
#include "unsafe_audit/frontend.hpp"
#include "unsafe_audit/parser.hpp"

namespace ua_test {

inline std::filesystem::path fixtures() { return UA_FIXTURES; }

// Parsed files of one package kept alive together with their import tables.
struct Package {
  std::vector<unsafe_audit::SyntaxTree> trees;
  std::vector<unsafe_audit::ImportTable> imports;

  [[nodiscard]] std::vector<const unsafe_audit::SyntaxTree*> ptrs() const {
    std::vector<const unsafe_audit::SyntaxTree*> out;
    for (const auto& t : trees) out.push_back(&t);
    return out;
  }
};

inline Package from_sources(const std::vector<std::string>& sources) {
  Package p;
  p.trees.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    p.trees.push_back(unsafe_audit::parse_file(sources[i], "f" + std::to_string(i) + ".go"));
    p.imports.push_back(unsafe_audit::resolve_imports(p.trees.back()));
  }
  return p;
}

inline Package from_dir(const std::filesystem::path& dir, bool include_tests = false) {
  Package p;
  const auto files = unsafe_audit::enumerate_package(dir, {include_tests});
  p.trees.reserve(files.size());
  for (const auto& f : files) {
    p.trees.push_back(unsafe_audit::parse_path(f));
    p.imports.push_back(unsafe_audit::resolve_imports(p.trees.back()));
  }
  return p;
}

inline unsafe_audit::PackageCensus census_of(const Package& p) {
  return unsafe_audit::census_package(p.ptrs(), p.imports, {"pkg", "mod", ""});
}

inline unsafe_audit::PackageCensus census_of(const std::string& source) {
  return census_of(from_sources({source}));
}

}  // namespace ua_test
