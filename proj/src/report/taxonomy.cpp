#include <algorithm>

#include "unsafe_audit/errors.hpp"
#include "unsafe_audit/report.hpp"

namespace unsafe_audit {

bool is_what_class(std::string_view s) {
  return std::find(kWhatClasses.begin(), kWhatClasses.end(), s) != kWhatClasses.end();
}

bool is_purpose_class(std::string_view s) {
  return std::find(kPurposeClasses.begin(), kPurposeClasses.end(), s) != kPurposeClasses.end();
}

std::vector<std::string> validate_annotations(std::string_view csv_text) {
  std::vector<std::string> problems;
  std::vector<std::vector<std::string>> rows;
  try {
    rows = parse_csv(csv_text);
  } catch (const AuditError& e) {
    return {e.what()};
  }
  if (rows.empty()) return {"annotation file is empty"};
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != kAnnotationHeader) problems.push_back("header must be '" +
                                                      std::string(kAnnotationHeader) + "'");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "row " + std::to_string(r) + ": ";
    if (row.size() != 5) {
      problems.push_back(where + "expected 5 fields");
      continue;
    }
    for (int i : {1, 2})
      if (row[i].empty() ||
          !std::all_of(row[i].begin(), row[i].end(), [](char c) { return c >= '0' && c <= '9'; }))
        problems.push_back(where + "line and column must be positive integers");
    if (!is_what_class(row[3])) problems.push_back(where + "unknown what class '" + row[3] + "'");
    if (!is_purpose_class(row[4]))
      problems.push_back(where + "unknown purpose class '" + row[4] + "'");
  }
  return problems;
}

}  // namespace unsafe_audit
