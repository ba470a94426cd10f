#include "unsafe_audit/gomod.hpp"

#include <cctype>
#include <optional>

#include "unsafe_audit/errors.hpp"

namespace unsafe_audit {

namespace {

// Splits one go.mod line into tokens, honouring quoted strings and
// stopping at a `//` comment. The comment text is returned separately.
struct LineTokens {
  std::vector<std::string> words;
  std::string comment;
};

LineTokens tokenize_line(std::string_view line) {
  LineTokens out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') {
      std::string_view rest = line.substr(i + 2);
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front())))
        rest.remove_prefix(1);
      out.comment = std::string(rest);
      break;
    }
    if (c == '"' || c == '`') {
      const std::size_t close = line.find(c, i + 1);
      const std::size_t end = close == std::string_view::npos ? line.size() : close;
      out.words.emplace_back(line.substr(i + 1, end - i - 1));
      i = end + 1;
      continue;
    }
    if (c == '(' || c == ')') {
      out.words.emplace_back(1, c);
      ++i;
      continue;
    }
    if (c == '=' && i + 1 < line.size() && line[i + 1] == '>') {
      out.words.emplace_back("=>");
      i += 2;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
           line[j] != '(' && line[j] != ')' &&
           !(line[j] == '/' && j + 1 < line.size() && line[j + 1] == '/') &&
           !(line[j] == '=' && j + 1 < line.size() && line[j + 1] == '>'))
      ++j;
    out.words.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool comment_marks_indirect(std::string_view comment) {
  // "// indirect" possibly followed by "; other text"
  return comment.substr(0, 8) == "indirect" &&
         (comment.size() == 8 || comment[8] == ';' ||
          std::isspace(static_cast<unsigned char>(comment[8])));
}

void apply_directive(ModuleInfo& info, std::string_view verb,
                     const std::vector<std::string>& args,
                     const std::string& comment, bool& saw_module) {
  if (verb == "module" && !args.empty()) {
    info.module_path = args[0];
    saw_module = true;
  } else if (verb == "go" && !args.empty()) {
    info.go_version = args[0];
  } else if (verb == "require" && args.size() >= 2) {
    info.requirements.push_back({args[0], args[1], comment_marks_indirect(comment)});
  } else if (verb == "exclude" && args.size() >= 2) {
    info.excludes.push_back({args[0], args[1], false});
  } else if (verb == "replace") {
    std::size_t arrow = 0;
    while (arrow < args.size() && args[arrow] != "=>") ++arrow;
    if (arrow == 0 || arrow >= args.size() - 1) return;
    Replacement r;
    r.old_path = args[0];
    if (arrow == 2) r.old_version = args[1];
    r.new_path = args[arrow + 1];
    if (arrow + 2 < args.size()) r.new_version = args[arrow + 2];
    info.replaces.push_back(std::move(r));
  }
  // toolchain, retract, godebug and future directives are ignored
}

}  // namespace

bool Replacement::is_directory() const {
  return new_path.rfind("./", 0) == 0 || new_path.rfind("../", 0) == 0 ||
         new_path.rfind("/", 0) == 0 || new_path == "." || new_path == "..";
}

bool has_path_prefix(std::string_view path, std::string_view prefix) {
  if (prefix.empty() || path.size() < prefix.size()) return false;
  if (path.substr(0, prefix.size()) != prefix) return false;
  return path.size() == prefix.size() || path[prefix.size()] == '/';
}

bool is_std_import_path(std::string_view import_path) {
  const std::size_t slash = import_path.find('/');
  const std::string_view first = import_path.substr(0, slash);
  return first.find('.') == std::string_view::npos;
}

const Requirement* ModuleInfo::longest_require(std::string_view import_path) const {
  const Requirement* best = nullptr;
  for (const Requirement& r : requirements) {
    if (!has_path_prefix(import_path, r.module_path)) continue;
    if (best == nullptr || r.module_path.size() > best->module_path.size())
      best = &r;
  }
  return best;
}

const Replacement* ModuleInfo::replacement_for(std::string_view module_path,
                                               std::string_view version) const {
  const Replacement* any_version = nullptr;
  for (const Replacement& r : replaces) {
    if (r.old_path != module_path) continue;
    if (r.old_version == version) return &r;
    if (r.old_version.empty()) any_version = &r;
  }
  return any_version;
}

bool ModuleInfo::owns(std::string_view import_path) const {
  return has_path_prefix(import_path, module_path);
}

ModuleInfo parse_gomod(std::string_view text) {
  ModuleInfo info;
  bool saw_module = false;
  std::string block_verb;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const LineTokens line = tokenize_line(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.words.empty()) continue;

    if (!block_verb.empty()) {
      if (line.words[0] == ")") {
        block_verb.clear();
        continue;
      }
      apply_directive(info, block_verb, line.words, line.comment, saw_module);
      continue;
    }
    const std::string& verb = line.words[0];
    if (line.words.size() == 2 && line.words[1] == "(") {
      block_verb = verb;
      continue;
    }
    std::vector<std::string> args(line.words.begin() + 1, line.words.end());
    apply_directive(info, verb, args, line.comment, saw_module);
  }
  if (!saw_module || info.module_path.empty())
    throw MalformedManifest("go.mod has no module directive");
  return info;
}

std::string escape_module_path(std::string_view path) {
  std::string out;
  out.reserve(path.size() + 4);
  for (char c : path) {
    if (c >= 'A' && c <= 'Z') {
      out.push_back('!');
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace unsafe_audit
