#include "unsafe_audit/lexer.hpp"

#include <algorithm>
#include <array>

namespace unsafe_audit {

namespace {

constexpr std::array<std::string_view, 25> kKeywords = {
    "break",    "case",   "chan",      "const",       "continue",
    "default",  "defer",  "else",      "fallthrough", "for",
    "func",     "go",     "goto",      "if",          "import",
    "interface", "map",   "package",   "range",       "return",
    "select",   "struct", "switch",    "type",        "var"};

// Longest operators first so that maximal munch works by linear scan.
constexpr std::array<std::string_view, 48> kOperators = {
    "&^=", "<<=", ">>=", "...", "&&", "||", "<-", "++", "--", "==", "!=",
    "<=",  ">=",  ":=",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<",  ">>",  "&^",  "+",   "-",  "*",  "/",  "%",  "&",  "|",  "^",
    "<",   ">",   "=",   "!",   "(",  ")",  "[",  "]",  "{",  "}",  ",",
    ";",   ".",   ":",   "~"};

bool is_letter(unsigned char c) {
  // Bytes >= 0x80 belong to UTF-8 sequences; Go allows Unicode letters in
  // identifiers, and treating every multi-byte sequence as a letter is
  // enough for tokenization.
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c >= 0x80;
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_hex(unsigned char c) {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

bool ends_statement(const Token& t) {
  switch (t.kind) {
    case LexKind::Ident:
    case LexKind::Int:
    case LexKind::Float:
    case LexKind::Imag:
    case LexKind::Char:
    case LexKind::String:
      return true;
    case LexKind::Keyword:
      return t.text == "break" || t.text == "continue" ||
             t.text == "fallthrough" || t.text == "return";
    case LexKind::Operator:
      return t.text == "++" || t.text == "--" || t.text == ")" ||
             t.text == "]" || t.text == "}";
    default:
      return false;
  }
}

}  // namespace

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) !=
         kKeywords.end();
}

Lexer::Lexer(std::string_view source) : src_(source) {}

void Lexer::error(std::size_t at, std::string message) {
  errors_.push_back("offset " + std::to_string(at) + ": " + std::move(message));
}

std::vector<Token> Lexer::tokenize() {
  std::vector<Token> out;
  for (;;) {
    bool saw_newline = false;
    skip_space_and_comments(saw_newline);
    if (saw_newline && !out.empty() && ends_statement(out.back())) {
      Token semi;
      semi.kind = LexKind::Semicolon;
      semi.offset = out.back().offset + out.back().length;
      semi.implicit = true;
      out.push_back(semi);
    }
    if (pos_ >= src_.size()) {
      if (!out.empty() && ends_statement(out.back())) {
        Token semi;
        semi.kind = LexKind::Semicolon;
        semi.offset = static_cast<std::uint32_t>(src_.size());
        semi.implicit = true;
        out.push_back(semi);
      }
      Token eof;
      eof.kind = LexKind::Eof;
      eof.offset = static_cast<std::uint32_t>(src_.size());
      out.push_back(eof);
      return out;
    }
    out.push_back(scan());
  }
}

void Lexer::skip_space_and_comments(bool& saw_newline) {
  while (pos_ < src_.size()) {
    char c = src_[pos_];
    if (c == '\n') {
      saw_newline = true;
      ++pos_;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++pos_;
    } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
      std::size_t start = pos_;
      pos_ += 2;
      bool closed = false;
      while (pos_ + 1 < src_.size()) {
        if (src_[pos_] == '*' && src_[pos_ + 1] == '/') {
          pos_ += 2;
          closed = true;
          break;
        }
        if (src_[pos_] == '\n') saw_newline = true;
        ++pos_;
      }
      if (!closed) {
        pos_ = src_.size();
        error(start, "comment not terminated");
      }
    } else if (static_cast<unsigned char>(c) == 0xEF && pos_ == 0 &&
               src_.substr(0, 3) == "\xEF\xBB\xBF") {
      pos_ += 3;  // byte order mark
    } else {
      return;
    }
  }
}

Token Lexer::make(LexKind kind, std::size_t start) {
  Token t;
  t.kind = kind;
  t.offset = static_cast<std::uint32_t>(start);
  t.length = static_cast<std::uint32_t>(pos_ - start);
  t.text = src_.substr(start, pos_ - start);
  return t;
}

Token Lexer::scan() {
  const std::size_t start = pos_;
  const auto c = static_cast<unsigned char>(src_[pos_]);

  if (is_letter(c)) {
    while (pos_ < src_.size() &&
           (is_letter(static_cast<unsigned char>(src_[pos_])) ||
            is_digit(static_cast<unsigned char>(src_[pos_]))))
      ++pos_;
    Token t = make(LexKind::Ident, start);
    if (is_keyword(t.text)) t.kind = LexKind::Keyword;
    return t;
  }
  if (is_digit(c) ||
      (c == '.' && pos_ + 1 < src_.size() &&
       is_digit(static_cast<unsigned char>(src_[pos_ + 1])))) {
    scan_number();
    Token t = make(LexKind::Int, start);
    if (!t.text.empty() && t.text.back() == 'i') {
      t.kind = LexKind::Imag;
    } else {
      const bool hex = t.text.size() > 1 && t.text[0] == '0' &&
                       (t.text[1] == 'x' || t.text[1] == 'X');
      const bool has_dot = t.text.find('.') != std::string_view::npos;
      const bool has_exp =
          hex ? t.text.find_first_of("pP") != std::string_view::npos
              : t.text.find_first_of("eE") != std::string_view::npos;
      if (has_dot || has_exp) t.kind = LexKind::Float;
    }
    return t;
  }
  if (c == '"') {
    scan_quoted('"');
    return make(LexKind::String, start);
  }
  if (c == '\'') {
    scan_quoted('\'');
    return make(LexKind::Char, start);
  }
  if (c == '`') {
    scan_raw_string();
    return make(LexKind::String, start);
  }
  for (std::string_view op : kOperators) {
    if (src_.substr(pos_, op.size()) == op) {
      pos_ += op.size();
      if (op == ";") return make(LexKind::Semicolon, start);
      return make(LexKind::Operator, start);
    }
  }
  ++pos_;
  error(start, "unexpected character");
  return make(LexKind::Illegal, start);
}

void Lexer::scan_number() {
  auto at = [&](std::size_t i) -> unsigned char {
    return i < src_.size() ? static_cast<unsigned char>(src_[i]) : 0;
  };
  bool hex = false;
  if (at(pos_) == '0' && (at(pos_ + 1) == 'x' || at(pos_ + 1) == 'X')) {
    hex = true;
    pos_ += 2;
  } else if (at(pos_) == '0' && (at(pos_ + 1) == 'b' || at(pos_ + 1) == 'B' ||
                                 at(pos_ + 1) == 'o' || at(pos_ + 1) == 'O')) {
    pos_ += 2;
  }
  for (;;) {
    const unsigned char d = at(pos_);
    if (d == '_' || (hex ? is_hex(d) : is_digit(d))) {
      ++pos_;
    } else if (d == '.') {
      ++pos_;
    } else if ((!hex && (d == 'e' || d == 'E')) ||
               (hex && (d == 'p' || d == 'P'))) {
      ++pos_;
      if (at(pos_) == '+' || at(pos_) == '-') ++pos_;
    } else {
      break;
    }
  }
  if (at(pos_) == 'i') ++pos_;
}

void Lexer::scan_quoted(char quote) {
  const std::size_t start = pos_;
  ++pos_;
  while (pos_ < src_.size()) {
    const char c = src_[pos_];
    if (c == '\\') {
      pos_ += 2;
      continue;
    }
    if (c == '\n') {
      error(start, "literal not terminated");
      return;
    }
    ++pos_;
    if (c == quote) return;
  }
  pos_ = src_.size();
  error(start, "literal not terminated");
}

void Lexer::scan_raw_string() {
  const std::size_t start = pos_;
  const std::size_t close = src_.find('`', pos_ + 1);
  if (close == std::string_view::npos) {
    pos_ = src_.size();
    error(start, "raw string literal not terminated");
    return;
  }
  pos_ = close + 1;
}

LineIndex::LineIndex(std::string_view source) {
  starts_.push_back(0);
  for (std::size_t i = 0; i < source.size(); ++i)
    if (source[i] == '\n') starts_.push_back(static_cast<std::uint32_t>(i + 1));
}

std::uint32_t LineIndex::line(std::uint32_t offset) const {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
  return static_cast<std::uint32_t>(it - starts_.begin());
}

std::uint32_t LineIndex::column(std::uint32_t offset) const {
  return offset - starts_[line(offset) - 1] + 1;
}

}  // namespace unsafe_audit
