#include "bmv/diagnostics.hpp"

namespace bmv
{

std::string to_string(const SourceLocation & loc)
{
  return (loc.file.empty() ? std::string("<input>") : loc.file) + ":" + std::to_string(loc.line) + ":" +
         std::to_string(loc.column);
}

std::string format_diagnostic(const Diagnostic & d)
{
  std::string out = to_string(d.location) + ": error: ";
  if (!d.code.empty()) {
    out += "[" + d.code + "] ";
  }
  return out + d.message;
}

}  // namespace bmv
