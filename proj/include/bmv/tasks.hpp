// bmv/tasks.hpp - verification tasks on top of the finder
#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bmv/config.hpp"
#include "bmv/finder.hpp"
#include "bmv/model.hpp"
#include "bmv/state.hpp"

namespace bmv
{

enum class TaskKind { Consistency, Independence };
enum class Outcome { Holds, Fails, Inconclusive };

const char * to_string(TaskKind k);  // consistency, independence
const char * to_string(Outcome o);   // holds, fails, inconclusive

/// Holds: consistent / independent, with a witness state.
/// Fails: no such state within bounds. Inconclusive: stopped early.
struct TaskReport
{
  TaskKind task = TaskKind::Consistency;
  std::string invariant;  // qualified name, independence only
  Outcome outcome = Outcome::Inconclusive;
  std::optional<SystemState> witness;
  std::string verdict;  // e.g. "not independent within bounds"
  std::string details;
  bool vacuous = false;  // the context class can have no instances
  FinderStats stats;
};

struct TaskOptions
{
  std::optional<SystemState> base;
  std::optional<std::chrono::milliseconds> timeout;
  std::shared_ptr<CancelToken> cancel;
  FinderOptions finder;
};

TaskReport check_consistency(const Model & model, const Configuration & config, const TaskOptions & options = {});

/// Negates `invariant`, activates all others and searches. Throws
/// bmv::Error(UnknownInvariant) for a name not in the model.
TaskReport check_independence(const Model & model, const Configuration & config, const std::string & invariant,
                              const TaskOptions & options = {});

/// One report per invariant in declaration order; runs concurrently.
std::vector<TaskReport> run_all_independence(const Model & model, const Configuration & config,
                                             const TaskOptions & options = {});

std::string render_text(const TaskReport & report);
/// `{"task", "invariant"?, "outcome", "verdict", "details", "vacuous", "witness"?}`
std::string render_json(const TaskReport & report);
std::string render_json(const std::vector<TaskReport> & reports);

}  // namespace bmv
