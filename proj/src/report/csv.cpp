#include <charconv>

#include "unsafe_audit/errors.hpp"
#include "unsafe_audit/report.hpp"

namespace unsafe_audit {

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      field += c;
      ++i;
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
      ++i;
    } else if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_row();
      i += 2;
    } else if (c == '\n') {
      end_row();
      ++i;
    } else {
      field += c;
      field_started = true;
      ++i;
    }
  }
  if (quoted) throw AuditError("unterminated quoted CSV field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

std::string emit_census_csv(const std::vector<UnsafeFinding>& findings) {
  std::string out(kCensusCsvHeader);
  out += '\n';
  for (const UnsafeFinding& f : findings) {
    out += csv_field(f.module_path) + ',' + csv_field(f.module_version) + ',' +
           csv_field(f.package_path) + ',' + csv_field(f.file) + ',' +
           std::to_string(f.line) + ',' + std::to_string(f.column) + ',' +
           std::string(to_string(f.token)) + ',' + std::string(to_string(f.context)) + ',' +
           csv_field(f.snippet) + '\n';
  }
  return out;
}

namespace {

std::uint32_t parse_u32(const std::string& s, std::size_t row) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw AuditError("census CSV row " + std::to_string(row) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<UnsafeFinding> parse_census_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw AuditError("census CSV is empty");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != kCensusCsvHeader) throw AuditError("unexpected census CSV header");
  std::vector<UnsafeFinding> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 9)
      throw AuditError("census CSV row " + std::to_string(r) + ": expected 9 fields");
    UnsafeFinding f;
    f.module_path = row[0];
    f.module_version = row[1];
    f.package_path = row[2];
    f.file = row[3];
    f.line = parse_u32(row[4], r);
    f.column = parse_u32(row[5], r);
    auto token = parse_token_kind(row[6]);
    auto context = parse_context_kind(row[7]);
    if (!token || !context)
      throw AuditError("census CSV row " + std::to_string(r) + ": unknown token or context");
    f.token = *token;
    f.context = *context;
    f.snippet = row[8];
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace unsafe_audit
