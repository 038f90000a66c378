// bmv - bounded model validator command line
//
//   bmv check MODEL [--properties FILE [--config NAME]]
//   bmv validate MODEL PROPERTIES [--config NAME] [--state CMD] [--bitwidth K]
//                [--out dot|json] [--output PATH] [--limit N] [--timeout S]
//   bmv tasks MODEL PROPERTIES [--config NAME] --task consistency|independence[:INV] [--json]
//   bmv config list|clone|rename|delete PROPERTIES [NAME [NEW]] [--model MODEL]
//
// Exit status: 0 success or SAT, 1 UNSAT / failed task / timeout, 2 usage or input error.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bmv/analyzer.hpp"
#include "bmv/config.hpp"
#include "bmv/finder.hpp"
#include "bmv/parse.hpp"
#include "bmv/tasks.hpp"

#ifndef BMV_VERSION
#define BMV_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace bmv;

namespace
{

struct InputError
{
  std::string message;
};

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{"cannot read `" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError{"cannot write `" + path + "'"};
  out << text;
}

void print(const std::vector<Diagnostic> & diagnostics)
{
  for (const auto & d : diagnostics) std::cerr << format_diagnostic(d) << '\n';
}

Model load_model(const std::string & path)
{
  auto r = parse_model(read_file(path), path);
  if (!r.ok()) {
    print(r.diagnostics);
    throw InputError{"`" + path + "' has errors"};
  }
  return std::move(*r.value);
}

ConfigFile load_configs(const std::string & path, const Model & model)
{
  auto r = parse_config_file(read_file(path), model, path);
  if (!r.ok()) {
    print(r.diagnostics);
    throw InputError{"`" + path + "' has errors"};
  }
  return std::move(*r.value);
}

Configuration pick(const ConfigFile & file, const std::string & name)
{
  if (!name.empty()) {
    if (const Configuration * c = file.find(name)) return *c;
    throw InputError{"no configuration named `" + name + "' in `" + file.path + "'"};
  }
  if (file.configs.size() == 1) return file.configs.front();
  std::string list;
  for (const auto & n : file.names()) list += "\n  " + n;
  throw InputError{"choose a configuration with --config; available:" + (list.empty() ? std::string(" none") : list)};
}

void print_warnings(const Model & model, const Configuration * config)
{
  for (const auto & w : analyze_all(model, config)) std::cerr << w.message << '\n';
}

Configuration checked(Configuration config, const Model & model, const SystemState * base)
{
  auto errors = validate(config, model, base);
  if (!errors.empty()) {
    print(errors);
    throw InputError{"configuration `" + config.name + "' is invalid"};
  }
  return config;
}

std::string stats_line(const FinderStats & s)
{
  std::ostringstream os;
  os << "decisions=" << s.decisions << " propagations=" << s.propagations << " backtracks=" << s.backtracks
     << " count-vectors=" << s.count_vectors << " elapsed=" << s.elapsed_ms << "ms";
  return os.str();
}

int cmd_check(const std::string & model_path, const std::string & properties, const std::string & config_name)
{
  const Model model = load_model(model_path);
  if (properties.empty()) {
    print_warnings(model, nullptr);
  } else {
    const Configuration config = pick(load_configs(properties, model), config_name);
    print_warnings(model, &config);
  }
  return 0;
}

struct ValidateArgs
{
  std::string model;
  std::string properties;
  std::string config;
  std::string state;
  std::optional<int> bitwidth;
  std::string out = "dot";
  std::string output;
  std::optional<std::size_t> limit;
  std::optional<double> timeout;
};

int cmd_validate(const ValidateArgs & a)
{
  const Model model = load_model(a.model);
  Configuration config = pick(load_configs(a.properties, model), a.config);
  if (a.bitwidth) config.bitwidth = *a.bitwidth;
  FinderProblem problem;
  problem.model = &model;
  if (!a.state.empty()) {
    auto r = parse_state_commands(read_file(a.state), model, a.state);
    if (!r.ok()) {
      print(r.diagnostics);
      throw InputError{"`" + a.state + "' has errors"};
    }
    problem.base = std::move(*r.value);
  }
  problem.config = checked(config, model, problem.base ? &*problem.base : nullptr);
  if (a.timeout) {
    problem.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(*a.timeout * 1000));
  }
  print_warnings(model, &problem.config);

  auto render = [&](const SystemState & s) { return a.out == "json" ? export_json(s) + "\n" : export_dot(s); };
  std::vector<SystemState> states;
  Verdict verdict = Verdict::Unsat;
  FinderStats stats;
  if (a.limit) {
    Enumeration e = enumerate_all(problem, *a.limit);
    states = std::move(e.states);
    stats = e.stats;
    if (!states.empty()) {
      verdict = Verdict::Sat;
    } else if (!e.complete) {
      verdict = Verdict::Timeout;
    }
  } else {
    FinderResult r = find(problem);
    for (const auto & line : r.log) std::cerr << "note: " << line << '\n';
    verdict = r.verdict;
    stats = r.stats;
    if (r.state) states.push_back(std::move(*r.state));
  }

  std::cout << to_string(verdict) << ' ' << stats_line(stats) << '\n';
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (a.output.empty()) {
      std::cout << render(states[i]);
      continue;
    }
    std::string path = a.output;
    if (states.size() > 1 || a.limit) {
      const fs::path p(a.output);
      path = (p.parent_path() / (p.stem().string() + "-" + std::to_string(i + 1) + p.extension().string())).string();
    }
    write_file(path, render(states[i]));
    std::cout << "wrote " << path << '\n';
  }
  return verdict == Verdict::Sat ? 0 : 1;
}

int cmd_tasks(const std::string & model_path, const std::string & properties, const std::string & config_name,
              const std::string & task, bool as_json, const std::string & witness, std::optional<double> timeout)
{
  const Model model = load_model(model_path);
  const Configuration config = checked(pick(load_configs(properties, model), config_name), model, nullptr);
  TaskOptions options;
  if (timeout) options.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(*timeout * 1000));

  std::vector<TaskReport> reports;
  if (task == "consistency") {
    reports.push_back(check_consistency(model, config, options));
  } else if (task == "independence") {
    reports = run_all_independence(model, config, options);
  } else if (task.rfind("independence:", 0) == 0) {
    const std::string name = task.substr(13);
    if (model.find_invariant(name) == nullptr) {
      std::vector<std::string> names;
      for (const auto & inv : model.invariants) names.push_back(inv.qualified_name());
      std::string message = "unknown invariant `" + name + "'";
      if (auto hint = nearest(name, names)) message += "; did you mean `" + *hint + "'?";
      throw InputError{message};
    }
    reports.push_back(check_independence(model, config, name, options));
  } else {
    throw InputError{"unknown task `" + task + "'; use consistency, independence or independence:<Class>::<inv>"};
  }

  if (as_json) {
    std::cout << (reports.size() == 1 && task != "independence" ? render_json(reports.front()) : render_json(reports))
              << '\n';
  } else {
    for (const auto & r : reports) std::cout << render_text(r);
  }
  if (!witness.empty()) {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (!reports[i].witness) continue;
      std::string path = witness;
      if (reports.size() > 1) {
        const fs::path p(witness);
        path = (p.parent_path() / (p.stem().string() + "-" + std::to_string(i + 1) + p.extension().string())).string();
      }
      write_file(path, export_json(*reports[i].witness) + "\n");
      std::cerr << "witness: " << path << '\n';
    }
  }
  const bool all_hold =
    std::all_of(reports.begin(), reports.end(), [](const TaskReport & r) { return r.outcome == Outcome::Holds; });
  return all_hold ? 0 : 1;
}

int cmd_config(const std::string & action, const std::string & properties, const std::vector<std::string> & names,
               std::string model_path)
{
  if (model_path.empty()) model_path = fs::path(properties).replace_extension(".use").string();
  const Model model = load_model(model_path);
  ConfigFile file = load_configs(properties, model);
  auto need = [&](std::size_t n) {
    if (names.size() != n) {
      throw InputError{"`config " + action + "' expects " + std::to_string(n) + " name(s)"};
    }
  };
  if (action == "list") {
    need(0);
    for (const auto & n : file.names()) std::cout << n << '\n';
    return 0;
  }
  if (action == "clone") {
    if (names.empty() || names.size() > 2) throw InputError{"`config clone' expects NAME [NEW]"};
    file = clone_config(file, names[0], names.size() == 2 ? std::optional(names[1]) : std::nullopt);
  } else if (action == "rename") {
    need(2);
    file = rename_config(file, names[0], names[1]);
  } else if (action == "delete") {
    need(1);
    file = delete_config(file, names[0]);
  } else {
    throw InputError{"unknown config action `" + action + "'; use list, clone, rename or delete"};
  }
  write_file(properties, serialize_config_file(file));
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Bounded model validator for UML class models with OCL invariants"};
  app.set_version_flag("--version", std::string("bmv ") + BMV_VERSION);
  app.require_subcommand(1);

  std::string model_path;
  std::string properties;
  std::string config_name;

  auto * check = app.add_subcommand("check", "Parse, typecheck and analyze a model");
  check->add_option("model", model_path, "Model file (.use)")->required();
  check->add_option("--properties", properties, "Configuration file for the bitwidth check");
  check->add_option("--config", config_name, "Configuration name");

  ValidateArgs va;
  auto * validate_cmd = app.add_subcommand("validate", "Search for a valid object diagram");
  validate_cmd->add_option("model", va.model, "Model file (.use)")->required();
  validate_cmd->add_option("properties", va.properties, "Configuration file (.properties)")->required();
  validate_cmd->add_option("--config", va.config, "Configuration name");
  validate_cmd->add_option("--state", va.state, "Partial state command file (.cmd)");
  validate_cmd->add_option("--bitwidth", va.bitwidth, "Override the configured bitwidth")->check(CLI::Range(1, 63));
  validate_cmd->add_option("--out", va.out, "Export format")->check(CLI::IsMember({"dot", "json"}));
  validate_cmd->add_option("--output", va.output, "Export file (numbered when several states are written)");
  validate_cmd->add_option("--limit", va.limit, "Enumerate up to N states")->check(CLI::PositiveNumber);
  validate_cmd->add_option("--timeout", va.timeout, "Time budget in seconds")->check(CLI::NonNegativeNumber);

  std::string task;
  bool as_json = false;
  std::string witness;
  std::optional<double> task_timeout;
  auto * tasks = app.add_subcommand("tasks", "Run verification tasks");
  tasks->add_option("model", model_path, "Model file (.use)")->required();
  tasks->add_option("properties", properties, "Configuration file (.properties)")->required();
  tasks->add_option("--config", config_name, "Configuration name");
  tasks->add_option("--task", task, "consistency, independence or independence:<Class>::<inv>")->required();
  tasks->add_flag("--json", as_json, "JSON output");
  tasks->add_option("--witness", witness, "Write witness states (JSON) to this path");
  tasks->add_option("--timeout", task_timeout, "Time budget in seconds per search")->check(CLI::NonNegativeNumber);

  std::string action;
  std::vector<std::string> names;
  std::string config_model;
  auto * config = app.add_subcommand("config", "List, clone, rename or delete configurations");
  config->add_option("action", action, "list, clone, rename or delete")->required();
  config->add_option("properties", properties, "Configuration file (.properties)")->required();
  config->add_option("names", names, "Configuration names");
  config->add_option("--model", config_model, "Model file (default: the .use file next to the configuration)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(model_path, properties, config_name);
    if (*validate_cmd) return cmd_validate(va);
    if (*tasks) return cmd_tasks(model_path, properties, config_name, task, as_json, witness, task_timeout);
    if (*config) return cmd_config(action, properties, names, config_model);
  } catch (const InputError & e) {
    std::cerr << "error: " << e.message << '\n';
    return 2;
  } catch (const Error & e) {
    std::cerr << "error: [" << e.code() << "] " << e.what() << '\n';
    return 2;
  }
  return 2;
}
