#include "lexer.hpp"

#include <cctype>

namespace actsim {

namespace {

bool is_id_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool is_id_char(char c) {
  return std::isalnum((unsigned char)c) || c == '_' || c == '$';
}

}  // namespace

std::vector<Token> lex_firrtl(const std::string& text, DiagEngine& diags) {
  std::vector<Token> out;
  std::vector<uint32_t> indents{0};
  uint32_t line = 1;
  size_t i = 0;
  const size_t n = text.size();

  auto peek = [&](size_t k) -> char { return i + k < n ? text[i + k] : '\0'; };

  while (i < n) {
    // Start of line: measure indentation, skip blank/comment-only lines.
    size_t line_start = i;
    uint32_t indent = 0;
    while (i < n && (text[i] == ' ' || text[i] == '\t')) {
      if (text[i] == '\t')
        diags.error({line, uint32_t(i - line_start + 1)},
                    "tab character in indentation; use spaces");
      indent++;
      i++;
    }
    if (i >= n) break;
    if (text[i] == '\n') {
      i++;
      line++;
      continue;
    }
    if (text[i] == ';') {
      while (i < n && text[i] != '\n') i++;
      continue;
    }

    if (indent > indents.back()) {
      indents.push_back(indent);
      out.push_back({Tok::Indent, {line, 1}, "", 0});
    } else {
      while (indent < indents.back()) {
        indents.pop_back();
        out.push_back({Tok::Dedent, {line, 1}, "", 0});
      }
      if (indent != indents.back())
        diags.error({line, 1}, "inconsistent indentation");
    }

    // Tokens within the line.
    while (i < n && text[i] != '\n') {
      char c = text[i];
      uint32_t col = uint32_t(i - line_start + 1);
      SourceLoc loc{line, col};
      if (c == ' ' || c == '\t') {
        i++;
        continue;
      }
      if (c == ';') {
        while (i < n && text[i] != '\n') i++;
        break;
      }
      if (c == '@' && peek(1) == '[') {
        // Source locator annotation; skip to the closing bracket.
        i += 2;
        while (i < n && text[i] != ']' && text[i] != '\n') i++;
        if (i < n && text[i] == ']') i++;
        continue;
      }
      if (is_id_start(c)) {
        size_t s = i;
        while (i < n && is_id_char(text[i])) i++;
        out.push_back({Tok::Id, loc, text.substr(s, i - s), 0});
        continue;
      }
      if (std::isdigit((unsigned char)c)) {
        uint64_t v = 0;
        size_t s = i;
        while (i < n && std::isdigit((unsigned char)text[i])) {
          uint64_t d = uint64_t(text[i] - '0');
          if (v > (~uint64_t{0} - d) / 10)
            diags.error(loc, "integer literal too large");
          v = v * 10 + d;
          i++;
        }
        Token t{Tok::Int, loc, text.substr(s, i - s), v};
        out.push_back(std::move(t));
        continue;
      }
      if (c == '"') {
        size_t s = ++i;
        while (i < n && text[i] != '"' && text[i] != '\n') i++;
        if (i >= n || text[i] != '"') diags.error(loc, "unterminated string");
        out.push_back({Tok::String, loc, text.substr(s, i - s), 0});
        i++;
        continue;
      }
      switch (c) {
        case ':': out.push_back({Tok::Colon, loc, "", 0}); i++; break;
        case ',': out.push_back({Tok::Comma, loc, "", 0}); i++; break;
        case '(': out.push_back({Tok::LParen, loc, "", 0}); i++; break;
        case ')': out.push_back({Tok::RParen, loc, "", 0}); i++; break;
        case '.': out.push_back({Tok::Dot, loc, "", 0}); i++; break;
        case '>': out.push_back({Tok::Greater, loc, "", 0}); i++; break;
        case '-': out.push_back({Tok::Minus, loc, "", 0}); i++; break;
        case '<':
          if (peek(1) == '=') {
            out.push_back({Tok::Connect, loc, "", 0});
            i += 2;
          } else {
            out.push_back({Tok::Less, loc, "", 0});
            i++;
          }
          break;
        case '=':
          if (peek(1) == '>') {
            out.push_back({Tok::FatArrow, loc, "", 0});
            i += 2;
          } else {
            out.push_back({Tok::Equal, loc, "", 0});
            i++;
          }
          break;
        default:
          diags.error(loc, std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back({Tok::Newline, {line, uint32_t(i - line_start + 1)}, "", 0});
    if (i < n) {
      i++;
      line++;
    }
  }
  while (indents.size() > 1) {
    indents.pop_back();
    out.push_back({Tok::Dedent, {line, 1}, "", 0});
  }
  out.push_back({Tok::Eof, {line, 1}, "", 0});
  return out;
}

}  // namespace actsim
