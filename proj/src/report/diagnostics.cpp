#include "json.hpp"
#include "unsafe_audit/report.hpp"

namespace unsafe_audit {

std::string emit_diagnostics(const std::vector<Diagnostic>& diags, DiagnosticFormat format) {
  if (format == DiagnosticFormat::Text) {
    std::string out;
    for (const Diagnostic& d : diags) {
      out += d.file + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": [" +
             std::string(to_string(d.pass)) + "] ";
      if (d.severity == Severity::Info) out += "info: ";
      out += d.message + "\n";
    }
    return out;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Diagnostic& d : diags) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    o["pass"] = to_string(d.pass);
    o["severity"] = to_string(d.severity);
    o["file"] = d.file;
    o["line"] = d.line;
    o["column"] = d.column;
    o["message"] = d.message;
    o["snippet"] = d.snippet;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

}  // namespace unsafe_audit
