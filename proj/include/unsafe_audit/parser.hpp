#pragma once

#include <string>
#include <string_view>

#include "unsafe_audit/syntax.hpp"

namespace unsafe_audit {

/// Parses one Go source file. Error tolerant: malformed input produces a
/// best-effort tree with had_parse_errors() set; this function never throws
/// on bad source.
[[nodiscard]] SyntaxTree parse_file(std::string source, std::string file_path);

}  // namespace unsafe_audit
