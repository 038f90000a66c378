// bmv/diagnostics.hpp - source locations and located diagnostics
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmv
{

struct SourceLocation
{
  std::string file;
  int line = 1;    // 1-based
  int column = 1;  // 1-based

  bool operator==(const SourceLocation &) const = default;
};

std::string to_string(const SourceLocation & loc);

enum class DiagnosticKind { Parse, Model, Type, Config, State };

/// A located error report. `code` is a stable identifier such as
/// `CyclicGeneralization` or `MinExceedsMax`; `key` is only set for
/// configuration diagnostics and names the offending key.
struct Diagnostic
{
  DiagnosticKind kind = DiagnosticKind::Parse;
  std::string code;
  std::string message;
  SourceLocation location;
  std::string key;
};

using ModelError = Diagnostic;
using ConfigError = Diagnostic;

std::string format_diagnostic(const Diagnostic & d);

template <typename T>
struct ParseResult
{
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  [[nodiscard]] bool ok() const { return value.has_value() && diagnostics.empty(); }
};

/// Thrown for contract breaches by callers (bad preconditions), never for
/// problems in user input, which are reported as Diagnostic values.
class Error : public std::runtime_error
{
public:
  Error(std::string code, const std::string & message)
  : std::runtime_error(message), code_(std::move(code))
  {
  }

  [[nodiscard]] const std::string & code() const { return code_; }

private:
  std::string code_;
};

}  // namespace bmv
