#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace unsafe_audit {

enum class LexKind : std::uint8_t {
  Eof,
  Ident,
  Keyword,
  Int,
  Float,
  Imag,
  Char,
  String,
  Operator,
  Semicolon,  // explicit or inserted at a line end
  Illegal,
};

struct Token {
  LexKind kind = LexKind::Eof;
  std::uint32_t offset = 0;
  std::uint32_t length = 0;
  std::string_view text;  // view into the lexed source; empty for inserted ';'
  bool implicit = false;  // semicolon inserted by the newline rule
};

/// Go lexer with automatic semicolon insertion. Comments are dropped.
/// Never throws; malformed input yields Illegal tokens and error messages.
class Lexer {
 public:
  explicit Lexer(std::string_view source);

  [[nodiscard]] std::vector<Token> tokenize();
  [[nodiscard]] const std::vector<std::string>& errors() const {
    return errors_;
  }

 private:
  void skip_space_and_comments(bool& saw_newline);
  Token scan();
  Token make(LexKind kind, std::size_t start);
  void scan_number();
  void scan_quoted(char quote);
  void scan_raw_string();
  void error(std::size_t at, std::string message);

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<std::string> errors_;
};

/// Maps byte offsets to 1-based line/column pairs.
class LineIndex {
 public:
  explicit LineIndex(std::string_view source);
  [[nodiscard]] std::uint32_t line(std::uint32_t offset) const;
  [[nodiscard]] std::uint32_t column(std::uint32_t offset) const;

 private:
  std::vector<std::uint32_t> starts_;
};

[[nodiscard]] bool is_keyword(std::string_view word);

}  // namespace unsafe_audit
