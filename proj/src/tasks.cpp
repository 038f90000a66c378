#include "bmv/tasks.hpp"

#include <future>

#include <json.hpp>

namespace bmv
{

using nlohmann::json;

const char * to_string(TaskKind k) { return k == TaskKind::Consistency ? "consistency" : "independence"; }

const char * to_string(Outcome o)
{
  switch (o) {
    case Outcome::Holds: return "holds";
    case Outcome::Fails: return "fails";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace
{

FinderProblem problem_for(const Model & model, Configuration config, const TaskOptions & options)
{
  FinderProblem p;
  p.model = &model;
  p.config = std::move(config);
  p.base = options.base;
  p.timeout = options.timeout;
  p.cancel = options.cancel;
  p.options = options.finder;
  return p;
}

std::string describe(const SystemState & s)
{
  return "witness with " + std::to_string(s.objects.size()) + " object(s) and " + std::to_string(s.links.size()) +
         " link(s)";
}

// Largest number of instances the context class can have within bounds.
std::int64_t max_extent(const Model & model, const Configuration & config, const std::string & cls,
                        const std::optional<SystemState> & base)
{
  std::int64_t n = 0;
  for (const auto & c : model.classes) {
    if (c.is_abstract || !model.is_kind_of(c.name, cls)) continue;
    std::int64_t upper = config.upper(config.class_bound(c.name));
    if (base) upper = std::max(upper, base->count_of(c.name));
    n += upper;
  }
  return n;
}

}  // namespace

TaskReport check_consistency(const Model & model, const Configuration & config, const TaskOptions & options)
{
  Configuration c = config;
  for (const auto & inv : model.invariants) c.invariant_flags[inv.qualified_name()] = InvariantFlag::Active;
  const FinderResult r = find(problem_for(model, std::move(c), options));

  TaskReport report;
  report.task = TaskKind::Consistency;
  report.stats = r.stats;
  switch (r.verdict) {
    case Verdict::Sat:
      report.outcome = Outcome::Holds;
      report.witness = r.state;
      report.verdict = "consistent within bounds";
      report.details = "all invariants hold in a " + describe(*r.state);
      break;
    case Verdict::Unsat:
      report.outcome = Outcome::Fails;
      report.verdict = "inconsistent within bounds";
      report.details = "no state within the configured bounds satisfies the model and all invariants";
      break;
    case Verdict::Timeout:
      report.outcome = Outcome::Inconclusive;
      report.verdict = "inconclusive";
      report.details = "the search was stopped before it completed";
      break;
  }
  return report;
}

TaskReport check_independence(const Model & model, const Configuration & config, const std::string & invariant,
                              const TaskOptions & options)
{
  const Invariant * target = model.find_invariant(invariant);
  if (target == nullptr) throw Error("UnknownInvariant", "unknown invariant `" + invariant + "'");
  Configuration c = config;
  for (const auto & inv : model.invariants) {
    c.invariant_flags[inv.qualified_name()] =
      inv.qualified_name() == invariant ? InvariantFlag::Negated : InvariantFlag::Active;
  }
  const FinderResult r = find(problem_for(model, std::move(c), options));

  TaskReport report;
  report.task = TaskKind::Independence;
  report.invariant = invariant;
  report.stats = r.stats;
  switch (r.verdict) {
    case Verdict::Sat:
      report.outcome = Outcome::Holds;
      report.witness = r.state;
      report.verdict = "independent within bounds";
      report.details = "a " + describe(*r.state) + " violates " + invariant + " while all other invariants hold";
      break;
    case Verdict::Unsat:
      report.outcome = Outcome::Fails;
      report.verdict = "not independent within bounds";
      report.details = "every state within the configured bounds that satisfies the other invariants also satisfies " +
                       invariant;
      if (max_extent(model, config, target->context, options.base) == 0) {
        report.vacuous = true;
        report.details += "; note: " + target->context +
                          " can have no instances within these bounds, so the invariant cannot be violated (vacuous)";
      }
      break;
    case Verdict::Timeout:
      report.outcome = Outcome::Inconclusive;
      report.verdict = "inconclusive";
      report.details = "the search was stopped before it completed";
      break;
  }
  return report;
}

std::vector<TaskReport> run_all_independence(const Model & model, const Configuration & config,
                                             const TaskOptions & options)
{
  std::vector<std::future<TaskReport>> jobs;
  for (const auto & inv : model.invariants) {
    jobs.push_back(std::async(std::launch::async, [&model, &config, &options, name = inv.qualified_name()] {
      return check_independence(model, config, name, options);
    }));
  }
  std::vector<TaskReport> out;
  for (auto & j : jobs) out.push_back(j.get());
  return out;
}

std::string render_text(const TaskReport & report)
{
  std::string out = report.task == TaskKind::Consistency ? "Consistency" : "Independence of " + report.invariant;
  out += ": " + report.verdict + "\n  " + report.details + "\n";
  out += "  (" + std::to_string(report.stats.decisions) + " decisions, " + std::to_string(report.stats.propagations) +
         " propagations)\n";
  return out;
}

namespace
{

json to_json(const TaskReport & report)
{
  json j;
  j["task"] = to_string(report.task);
  if (report.task == TaskKind::Independence) j["invariant"] = report.invariant;
  j["outcome"] = to_string(report.outcome);
  j["verdict"] = report.verdict;
  j["details"] = report.details;
  j["vacuous"] = report.vacuous;
  if (report.witness) j["witness"] = json::parse(export_json(*report.witness));
  j["stats"] = {{"decisions", report.stats.decisions},
                {"propagations", report.stats.propagations},
                {"elapsed_ms", report.stats.elapsed_ms}};
  return j;
}

}  // namespace

std::string render_json(const TaskReport & report) { return to_json(report).dump(2); }

std::string render_json(const std::vector<TaskReport> & reports)
{
  json arr = json::array();
  for (const auto & r : reports) arr.push_back(to_json(r));
  return arr.dump(2);
}

}  // namespace bmv
