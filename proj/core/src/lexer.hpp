#pragma once
// Line/indentation-aware tokenizer for the FIRRTL subset.

#include <cstdint>
#include <string>
#include <vector>

#include "actsim/diagnostics.hpp"

namespace actsim {

enum class Tok : uint8_t {
  Id,
  Int,     // decimal integer (no sign)
  String,  // quoted, quotes stripped
  Colon,
  Comma,
  Less,
  Greater,
  LParen,
  RParen,
  Dot,
  Equal,
  Connect,  // <=
  FatArrow, // =>
  Minus,
  Newline,
  Indent,
  Dedent,
  Eof,
};

struct Token {
  Tok kind = Tok::Eof;
  SourceLoc loc;
  std::string text;  // Id/String payload
  uint64_t ival = 0; // Int payload
};

// Tokenizes the whole input; reports errors through `diags` (throws).
std::vector<Token> lex_firrtl(const std::string& text, DiagEngine& diags);

}  // namespace actsim
