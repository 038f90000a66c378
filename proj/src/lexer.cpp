#include "lexer.hpp"

#include <array>
#include <cctype>

namespace bmv::detail
{

namespace
{

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_continue(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

constexpr std::array<std::string_view, 7> kTwoCharPuncts = {"->", "..", "::", "<>", "<=", ">=", ":="};
constexpr std::string_view kOneCharPuncts = "(){}[],:;|.=<>+-*/!@";

}  // namespace

LexResult lex(std::string_view text, const std::string & file)
{
  LexResult out;
  std::size_t pos = 0;
  int line = 1;
  std::size_t line_start = 0;

  auto location_at = [&](std::size_t p) { return SourceLocation{file, line, static_cast<int>(p - line_start) + 1}; };
  auto newline = [&](std::size_t after) {
    ++line;
    line_start = after;
  };

  while (pos < text.size()) {
    const char c = text[pos];
    if (c == '\n') {
      newline(++pos);
      continue;
    }
    if (c == '\r') {
      ++pos;
      if (pos < text.size() && text[pos] == '\n') ++pos;
      newline(pos);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    if (text.substr(pos, 2) == "--") {
      while (pos < text.size() && text[pos] != '\n' && text[pos] != '\r') ++pos;
      continue;
    }

    Token tok;
    tok.begin = pos;
    tok.location = location_at(pos);

    if (ident_start(c)) {
      while (pos < text.size() && ident_continue(text[pos])) ++pos;
      tok.kind = TokenKind::Identifier;
      tok.text = std::string(text.substr(tok.begin, pos - tok.begin));
    } else if (digit(c)) {
      while (pos < text.size() && digit(text[pos])) ++pos;
      bool real = false;
      if (pos + 1 < text.size() && text[pos] == '.' && digit(text[pos + 1])) {
        real = true;
        ++pos;
        while (pos < text.size() && digit(text[pos])) ++pos;
      }
      if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        std::size_t p = pos + 1;
        if (p < text.size() && (text[p] == '+' || text[p] == '-')) ++p;
        if (p < text.size() && digit(text[p])) {
          real = true;
          pos = p;
          while (pos < text.size() && digit(text[pos])) ++pos;
        }
      }
      tok.kind = real ? TokenKind::Real : TokenKind::Integer;
      tok.text = std::string(text.substr(tok.begin, pos - tok.begin));
    } else if (c == '\'') {
      ++pos;
      std::string value;
      bool closed = false;
      while (pos < text.size()) {
        const char d = text[pos];
        if (d == '\n' || d == '\r') break;
        if (d == '\\' && pos + 1 < text.size()) {
          value += text[pos + 1];
          pos += 2;
          continue;
        }
        ++pos;
        if (d == '\'') {
          closed = true;
          break;
        }
        value += d;
      }
      if (!closed) {
        out.diagnostics.push_back(
          {DiagnosticKind::Parse, "UnterminatedString", "unterminated string literal", tok.location, {}});
        break;
      }
      tok.kind = TokenKind::String;
      tok.text = std::move(value);
    } else {
      std::string_view two = text.substr(pos, 2);
      bool matched = false;
      for (auto p : kTwoCharPuncts) {
        if (two == p) {
          tok.text = std::string(p);
          pos += 2;
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (kOneCharPuncts.find(c) == std::string_view::npos) {
          out.diagnostics.push_back({DiagnosticKind::Parse, "UnexpectedCharacter",
                                     std::string("unexpected character `") + c + "'", tok.location, {}});
          break;
        }
        tok.text = std::string(1, c);
        ++pos;
      }
      tok.kind = TokenKind::Punct;
    }
    tok.end = pos;
    out.tokens.push_back(std::move(tok));
  }

  Token end;
  end.kind = TokenKind::End;
  end.begin = end.end = pos;
  end.location = location_at(pos);
  out.tokens.push_back(end);
  return out;
}

std::string slice_text(std::string_view source, std::size_t begin, std::size_t end)
{
  std::string out;
  std::size_t i = begin;
  while (i < end && i < source.size()) {
    if (std::isspace(static_cast<unsigned char>(source[i]))) {
      std::size_t j = i;
      bool spans_lines = false;
      while (j < end && std::isspace(static_cast<unsigned char>(source[j]))) {
        spans_lines = spans_lines || source[j] == '\n' || source[j] == '\r';
        ++j;
      }
      out += spans_lines ? std::string(" ") : std::string(source.substr(i, j - i));
      i = j;
      continue;
    }
    out += source[i++];
  }
  return out;
}

}  // namespace bmv::detail
