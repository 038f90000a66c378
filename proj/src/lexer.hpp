// Tokenizer shared by the model, OCL, and state-command parsers.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "bmv/diagnostics.hpp"

namespace bmv::detail
{

enum class TokenKind { Identifier, Integer, Real, String, Punct, End };

struct Token
{
  TokenKind kind = TokenKind::End;
  std::string text;    // identifier/punct spelling, or decoded string contents
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the last source byte
  SourceLocation location;

  [[nodiscard]] bool is(std::string_view punct_or_word) const
  {
    return (kind == TokenKind::Punct || kind == TokenKind::Identifier) && text == punct_or_word;
  }
};

struct LexResult
{
  std::vector<Token> tokens;  // always terminated by an End token
  std::vector<Diagnostic> diagnostics;
};

/// `--` starts a comment to end of line. CR and LF both end lines.
LexResult lex(std::string_view text, const std::string & file);

/// Source slice [begin, end) with whitespace runs that span lines folded
/// into one space.
std::string slice_text(std::string_view source, std::size_t begin, std::size_t end);

}  // namespace bmv::detail
