// Shared fixtures for the test binaries.
#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bmv/config.hpp"
#include "bmv/diagnostics.hpp"
#include "bmv/evaluator.hpp"
#include "bmv/model.hpp"
#include "bmv/parse.hpp"

#ifndef BMV_SOURCE_DIR
#define BMV_SOURCE_DIR "."
#endif

namespace bmv::test
{

inline std::string source_path(const std::string & rel) { return std::string(BMV_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string messages(const std::vector<Diagnostic> & ds)
{
  std::string out;
  for (const auto & d : ds) out += format_diagnostic(d) + "\n";
  return out;
}

inline Model model_from(const std::string & text)
{
  auto r = parse_model(text, "<test>");
  if (!r.ok()) throw std::runtime_error("model does not parse:\n" + messages(r.diagnostics) + text);
  return std::move(*r.value);
}

inline Model corpus() { return model_from(slurp(source_path("models/carrental.use"))); }

inline ConfigFile corpus_configs(const Model & model)
{
  auto r = parse_config_file(slurp(source_path("models/carrental.properties")), model, "carrental.properties");
  if (!r.ok()) throw std::runtime_error("corpus configs do not parse:\n" + messages(r.diagnostics));
  return std::move(*r.value);
}

inline Configuration config_from(const std::string & text, const Model & model)
{
  auto r = parse_config_file(text, model, "<test>");
  if (!r.ok() || r.value->configs.size() != 1) {
    throw std::runtime_error("config does not parse:\n" + messages(r.diagnostics) + text);
  }
  return r.value->configs.front();
}

inline SystemState state_from(const std::string & text, const Model & model)
{
  auto r = parse_state_commands(text, model, "<test>");
  if (!r.ok()) throw std::runtime_error("state does not parse:\n" + messages(r.diagnostics) + text);
  return std::move(*r.value);
}

/// Evaluates `ocl` with `self` bound to `self_name` (or unbound when empty).
inline Value eval_text(const std::string & ocl, const std::string & context, const Model & model,
                       const SystemState & state, const EvalMode & mode, const std::string & self_name = "")
{
  auto r = parse_ocl(ocl, context, model);
  if (!r.ok()) throw std::runtime_error("expression does not typecheck:\n" + messages(r.diagnostics) + ocl);
  Bindings b;
  if (!self_name.empty()) b["self"] = Value::object(self_name);
  return eval(**r.value, state, model, b, mode);
}

}  // namespace bmv::test
