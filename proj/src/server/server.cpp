#include "bmv/server.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "bmv/analyzer.hpp"
#include "bmv/config.hpp"
#include "bmv/finder.hpp"
#include "bmv/parse.hpp"
#include "bmv/tasks.hpp"

namespace bmv
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

enum class JobState { Queued, Running, Done, Cancelled };

const char * to_string(JobState s)
{
  switch (s) {
    case JobState::Queued: return "queued";
    case JobState::Running: return "running";
    case JobState::Done: return "done";
    case JobState::Cancelled: return "cancelled";
  }
  return "done";
}

json location_json(const SourceLocation & loc)
{
  return json{{"file", loc.file}, {"line", loc.line}, {"column", loc.column}};
}

json diagnostic_json(const Diagnostic & d, const std::string & fallback_key)
{
  return json{{"key", d.key.empty() ? fallback_key : d.key},
              {"code", d.code},
              {"message", d.message},
              {"location", location_json(d.location)}};
}

json errors_json(const std::vector<Diagnostic> & diagnostics, const std::string & fallback_key)
{
  json errors = json::array();
  for (const auto & d : diagnostics) errors.push_back(diagnostic_json(d, fallback_key));
  return json{{"errors", errors}};
}

json error_json(const std::string & key, const std::string & message)
{
  return json{{"errors", json::array({json{{"key", key}, {"message", message}, {"location", nullptr}}})}};
}

json warning_json(const Warning & w)
{
  return json{{"kind", to_string(w.kind)},
              {"message", w.message},
              {"location", location_json(w.location)},
              {"expression", w.expression_text},
              {"invariant", w.invariant}};
}

json stats_json(const FinderStats & s)
{
  return json{{"decisions", s.decisions},
              {"propagations", s.propagations},
              {"backtracks", s.backtracks},
              {"countVectors", s.count_vectors},
              {"elapsedMs", s.elapsed_ms}};
}

json bound_json(const Bound & b)
{
  return json{{"min", b.min}, {"max", b.max ? json(*b.max) : json("*")}};
}

json config_json(const Configuration & c)
{
  json j{{"name", c.name},
         {"integerMin", c.integer_min},
         {"integerMax", c.integer_max},
         {"stringCount", c.string_count},
         {"bitwidth", c.bitwidth},
         {"defaultUpper", c.default_upper}};
  j["stringValues"] = c.string_values ? json(*c.string_values) : json(nullptr);
  j["realValues"] = c.real_values ? json(*c.real_values) : json(nullptr);
  json classes = json::object();
  for (const auto & [name, b] : c.class_bounds) classes[name] = bound_json(b);
  j["classBounds"] = classes;
  json assocs = json::object();
  for (const auto & [name, b] : c.association_bounds) assocs[name] = bound_json(b);
  j["associationBounds"] = assocs;
  json domains = json::array();
  for (const auto & [key, d] : c.attribute_domains) {
    json e{{"class", key.first}, {"attribute", key.second}};
    if (d.values) {
      json values = json::array();
      for (const auto & v : *d.values) values.push_back(to_string(v));
      e["values"] = values;
    }
    if (d.min) e["min"] = *d.min;
    if (d.max) e["max"] = *d.max;
    domains.push_back(e);
  }
  j["attributeDomains"] = domains;
  json flags = json::object();
  for (const auto & [name, f] : c.invariant_flags) flags[name] = to_string(f);
  j["invariantFlags"] = flags;
  json links = json::array();
  for (const auto & l : c.required_links) {
    links.push_back(json{{"association", l.association}, {"ends", json::array({l.first, l.second})}});
  }
  j["requiredLinks"] = links;
  return j;
}

json model_json(const Model & m)
{
  json classes = json::array();
  for (const auto & c : m.classes) {
    json attrs = json::array();
    for (const Attribute * a : m.all_attributes(c.name)) {
      attrs.push_back(json{{"name", a->name}, {"type", to_string(a->type)}});
    }
    classes.push_back(json{{"name", c.name}, {"abstract", c.is_abstract}, {"parents", c.parents}, {"attributes", attrs}});
  }
  json assocs = json::array();
  for (const auto & a : m.associations) {
    json ends = json::array();
    for (const auto & e : a.ends) {
      ends.push_back(json{{"role", e.role}, {"class", e.class_name}, {"multiplicity", to_string(e.multiplicity)}});
    }
    assocs.push_back(json{{"name", a.name}, {"ends", ends}});
  }
  json invs = json::array();
  for (const auto & inv : m.invariants) {
    invs.push_back(json{{"name", inv.qualified_name()}, {"context", inv.context}, {"text", inv.text}});
  }
  return json{{"name", m.name}, {"classes", classes}, {"associations", assocs}, {"invariants", invs}};
}

std::optional<std::string> read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Job
{
  std::string id;
  std::string session;
  std::string kind;
  std::string config_name;
  std::string invariant;
  std::optional<std::size_t> limit;
  std::optional<std::chrono::milliseconds> timeout;
  std::shared_ptr<const Model> model;
  Configuration config;
  std::optional<SystemState> base;
  std::shared_ptr<CancelToken> cancel = std::make_shared<CancelToken>();

  mutable std::mutex mutex;
  JobState state = JobState::Queued;
  json result;
  std::vector<SystemState> states;

  json status() const
  {
    std::lock_guard lock(mutex);
    json j{{"id", id}, {"session", session}, {"kind", kind}, {"config", config_name}, {"state", to_string(state)}};
    if (!invariant.empty()) j["invariant"] = invariant;
    j["result"] = result.is_null() ? json(nullptr) : result;
    return j;
  }
};

void run_job(Job & job)
{
  json result;
  std::vector<SystemState> states;
  if (job.kind == "validate") {
    FinderProblem problem;
    problem.model = job.model.get();
    problem.config = job.config;
    problem.base = job.base;
    problem.timeout = job.timeout;
    problem.cancel = job.cancel;
    if (job.limit) {
      Enumeration e = enumerate_all(problem, *job.limit);
      states = std::move(e.states);
      Verdict v = !states.empty() ? Verdict::Sat : e.complete ? Verdict::Unsat : Verdict::Timeout;
      result = json{{"verdict", to_string(v)}, {"complete", e.complete}, {"stats", stats_json(e.stats)}};
    } else {
      FinderResult r = find(problem);
      if (r.state) states.push_back(std::move(*r.state));
      result = json{{"verdict", to_string(r.verdict)}, {"stats", stats_json(r.stats)}, {"log", r.log}};
    }
  } else {
    TaskOptions options;
    options.base = job.base;
    options.timeout = job.timeout;
    options.cancel = job.cancel;
    std::vector<TaskReport> reports;
    if (job.kind == "consistency") {
      reports.push_back(check_consistency(*job.model, job.config, options));
    } else if (!job.invariant.empty()) {
      reports.push_back(check_independence(*job.model, job.config, job.invariant, options));
    } else {
      reports = run_all_independence(*job.model, job.config, options);
    }
    json list = json::array();
    for (auto & r : reports) {
      json j = json::parse(render_json(r));
      if (r.witness) {
        j["stateIndex"] = states.size();
        states.push_back(*r.witness);
      }
      list.push_back(j);
    }
    result = json{{"reports", list}};
  }
  result["states"] = states.size();

  std::lock_guard lock(job.mutex);
  job.result = std::move(result);
  job.states = std::move(states);
  job.state = job.cancel->cancelled() ? JobState::Cancelled : JobState::Done;
}

struct Session
{
  std::string id;
  std::mutex mutex;
  std::shared_ptr<const Model> model;
  ConfigFile configs;
  std::vector<std::shared_ptr<Job>> jobs;

  std::deque<std::shared_ptr<Job>> queue;
  std::condition_variable wake;
  bool stopping = false;
  std::thread worker;

  void work()
  {
    for (;;) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock lock(mutex);
        wake.wait(lock, [&] { return stopping || !queue.empty(); });
        if (stopping) return;
        job = queue.front();
        queue.pop_front();
      }
      {
        std::lock_guard lock(job->mutex);
        if (job->state != JobState::Queued) continue;
        job->state = JobState::Running;
      }
      try {
        run_job(*job);
      } catch (const std::exception & e) {
        std::lock_guard lock(job->mutex);
        job->result = json{{"error", e.what()}};
        job->state = job->cancel->cancelled() ? JobState::Cancelled : JobState::Done;
      }
    }
  }

  void start() { worker = std::thread([this] { work(); }); }

  void shutdown()
  {
    {
      std::lock_guard lock(mutex);
      stopping = true;
      for (auto & job : jobs) job->cancel->cancel();
    }
    wake.notify_all();
    if (worker.joinable()) worker.join();
  }
};

}  // namespace

struct Server::Impl
{
  ServerOptions options;
  httplib::Server http;
  std::mutex mutex;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::map<std::string, std::shared_ptr<Job>> jobs;
  std::uint64_t next_session = 1;
  std::uint64_t next_job = 1;

  explicit Impl(ServerOptions o) : options(std::move(o)) { routes(); }

  ~Impl()
  {
    http.stop();
    std::lock_guard lock(mutex);
    for (auto & [id, s] : sessions) s->shutdown();
  }

  static void reply(httplib::Response & res, int status, const json & body)
  {
    res.status = status;
    res.set_content(body.dump(2), "application/json");
  }

  std::shared_ptr<Session> session(const std::string & id)
  {
    std::lock_guard lock(mutex);
    auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second;
  }

  std::shared_ptr<Job> job(const std::string & id)
  {
    std::lock_guard lock(mutex);
    auto it = jobs.find(id);
    return it == jobs.end() ? nullptr : it->second;
  }

  template <typename F>
  void with_session(const httplib::Request & req, httplib::Response & res, F && f)
  {
    auto s = session(req.matches[1]);
    if (!s) return reply(res, 404, error_json("session", "unknown session `" + std::string(req.matches[1]) + "'"));
    std::lock_guard lock(s->mutex);
    f(*s);
  }

  static std::optional<json> body_json(const httplib::Request & req, httplib::Response & res)
  {
    if (req.body.empty()) return json::object();
    try {
      json j = json::parse(req.body);
      if (j.is_object()) return j;
    } catch (const json::exception &) {
    }
    reply(res, 400, error_json("body", "request body must be a JSON object"));
    return std::nullopt;
  }

  static bool require_model(Session & s, httplib::Response & res)
  {
    if (s.model) return true;
    reply(res, 409, error_json("model", "no model loaded in this session"));
    return false;
  }

  static json file_json(const ConfigFile & f)
  {
    return json{{"path", f.path.empty() ? json(nullptr) : json(f.path)}, {"configs", f.names()}};
  }

  void load_model(Session & s, const httplib::Request & req, httplib::Response & res)
  {
    std::string text = req.body;
    std::string path = req.get_param_value("path");
    if (req.get_header_value("Content-Type").rfind("application/json", 0) == 0) {
      auto body = body_json(req, res);
      if (!body) return;
      if (!body->contains("text") || !(*body)["text"].is_string()) {
        return reply(res, 400, error_json("text", "missing model text"));
      }
      text = (*body)["text"].get<std::string>();
      if (body->contains("path") && (*body)["path"].is_string()) path = (*body)["path"].get<std::string>();
    }
    auto parsed = parse_model(text, path.empty() ? "<model>" : path);
    if (!parsed.ok()) return reply(res, 422, errors_json(parsed.diagnostics, "model"));
    auto model = std::make_shared<const Model>(std::move(*parsed.value));

    ConfigFile file;
    bool loaded = false;
    json config_errors = json::array();
    if (!path.empty()) {
      fs::path sidecar(path);
      sidecar.replace_extension(".properties");
      file.path = sidecar.string();
      if (auto text = read_file(sidecar)) {
        auto cf = parse_config_file(*text, *model, file.path);
        if (cf.ok()) {
          file = std::move(*cf.value);
          loaded = true;
        } else {
          config_errors = errors_json(cf.diagnostics, "config")["errors"];
        }
      }
    }
    if (!loaded) file.configs.push_back(default_config(*model));

    s.model = model;
    s.configs = std::move(file);
    json warnings = json::array();
    for (const auto & w : analyze_all(*model, nullptr)) warnings.push_back(warning_json(w));
    json out{{"model", model_json(*model)}, {"configFile", file_json(s.configs)}, {"warnings", warnings}};
    out["configFile"]["loaded"] = loaded;
    out["configErrors"] = config_errors;
    reply(res, 200, out);
  }

  static json config_detail(const Session & s, const Configuration & c)
  {
    json errors = json::array();
    for (const auto & d : validate(c, *s.model)) errors.push_back(diagnostic_json(d, "config"));
    return json{{"name", c.name},
                {"text", serialize_config_file(ConfigFile{"", {c}})},
                {"config", config_json(c)},
                {"errors", errors}};
  }

  void put_config_text(Session & s, const std::string & name, const httplib::Request & req, httplib::Response & res)
  {
    std::string text = req.body;
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool headed = first != std::string::npos && text[first] == '[';
    if (!headed) text = "[" + name + "]\n" + text;
    auto parsed = parse_config_file(text, *s.model, s.configs.path.empty() ? "<config>" : s.configs.path);
    if (!parsed.ok()) {
      if (!headed) {
        for (auto & d : parsed.diagnostics) d.location.line = std::max(1, d.location.line - 1);
      }
      return reply(res, 422, errors_json(parsed.diagnostics, "config"));
    }
    if (parsed.value->configs.size() != 1) {
      return reply(res, 400, error_json("config", "expected exactly one configuration section"));
    }
    Configuration c = parsed.value->configs.front();
    if (c.name != name) return reply(res, 400, error_json("config", "section name must be `" + name + "'"));
    auto errors = validate(c, *s.model);
    if (!errors.empty()) return reply(res, 422, errors_json(errors, "config"));
    s.configs = put_config(s.configs, c);
    reply(res, 200, config_detail(s, c));
  }

  void manage(Session & s, const std::string & name, const std::string & action, const httplib::Request & req,
              httplib::Response & res)
  {
    auto body = body_json(req, res);
    if (!body) return;
    std::optional<std::string> new_name;
    if (body->contains("newName") && (*body)["newName"].is_string()) new_name = (*body)["newName"].get<std::string>();
    try {
      if (action == "clone") {
        s.configs = clone_config(s.configs, name, new_name);
      } else if (action == "rename") {
        if (!new_name) return reply(res, 400, error_json("newName", "missing newName"));
        s.configs = rename_config(s.configs, name, *new_name);
      } else {
        s.configs = delete_config(s.configs, name);
      }
    } catch (const Error & e) {
      const int status = e.code() == "UnknownConfig" ? 404 : e.code() == "DuplicateName" ? 409 : 422;
      return reply(res, status, error_json("newName", e.what()));
    }
    reply(res, 200, file_json(s.configs));
  }

  void submit(Session & s, const httplib::Request & req, httplib::Response & res)
  {
    auto body = body_json(req, res);
    if (!body) return;
    if (!require_model(s, res)) return;
    auto j = std::make_shared<Job>();
    j->session = s.id;
    j->kind = body->value("kind", std::string("validate"));
    if (j->kind != "validate" && j->kind != "consistency" && j->kind != "independence") {
      return reply(res, 400, error_json("kind", "kind must be validate, consistency or independence"));
    }
    j->model = s.model;
    j->config_name = body->value("configName", std::string());
    if (j->config_name.empty() && s.configs.configs.size() == 1) j->config_name = s.configs.configs.front().name;
    const Configuration * c = s.configs.find(j->config_name);
    if (c == nullptr) {
      return reply(res, 404, error_json("configName", "unknown configuration `" + j->config_name + "'"));
    }
    j->config = *c;
    j->invariant = body->value("invariant", std::string());
    if (!j->invariant.empty() && s.model->find_invariant(j->invariant) == nullptr) {
      return reply(res, 422, error_json("invariant", "unknown invariant `" + j->invariant + "'"));
    }
    if (body->contains("limit") && !(*body)["limit"].is_null()) {
      const auto & l = (*body)["limit"];
      if (!l.is_number_integer() || l.get<std::int64_t>() < 1) {
        return reply(res, 422, error_json("limit", "limit must be a positive integer"));
      }
      j->limit = l.get<std::size_t>();
    }
    if (body->contains("timeoutMs") && (*body)["timeoutMs"].is_number()) {
      j->timeout = std::chrono::milliseconds((*body)["timeoutMs"].get<std::int64_t>());
    }
    if (body->contains("baseState") && !(*body)["baseState"].is_null()) {
      const auto & b = (*body)["baseState"];
      try {
        if (b.is_string()) {
          auto parsed = parse_state_commands(b.get<std::string>(), *s.model, "<baseState>");
          if (!parsed.ok()) return reply(res, 422, errors_json(parsed.diagnostics, "baseState"));
          j->base = std::move(*parsed.value);
        } else {
          j->base = import_json(b.dump());
        }
      } catch (const Error & e) {
        return reply(res, 422, error_json("baseState", e.what()));
      }
      auto problems = check_structure(*j->base, *s.model);
      if (!problems.empty()) return reply(res, 422, errors_json(problems, "baseState"));
    }
    auto errors = validate(j->config, *s.model, j->base ? &*j->base : nullptr);
    if (!errors.empty()) return reply(res, 422, errors_json(errors, "config"));

    {
      std::lock_guard lock(mutex);
      j->id = "j" + std::to_string(next_job++);
      jobs[j->id] = j;
    }
    s.jobs.push_back(j);
    s.queue.push_back(j);
    s.wake.notify_all();
    reply(res, 202, json{{"jobId", j->id}, {"status", j->status()}});
  }

  void state_export(const httplib::Request & req, httplib::Response & res, bool as_json)
  {
    auto j = job(req.matches[1]);
    if (!j) return reply(res, 404, error_json("job", "unknown job `" + std::string(req.matches[1]) + "'"));
    std::size_t index = 0;
    if (req.has_param("index")) {
      try {
        index = std::stoul(req.get_param_value("index"));
      } catch (const std::exception &) {
        return reply(res, 400, error_json("index", "index must be a nonnegative integer"));
      }
    }
    std::lock_guard lock(j->mutex);
    if (index >= j->states.size()) return reply(res, 404, error_json("index", "no state with that index"));
    if (as_json) {
      res.set_content(export_json(j->states[index]), "application/json");
    } else {
      res.set_content(export_dot(j->states[index]), "text/vnd.graphviz");
    }
  }

  void routes()
  {
    http.Post("/sessions", [this](const httplib::Request &, httplib::Response & res) {
      auto s = std::make_shared<Session>();
      {
        std::lock_guard lock(mutex);
        s->id = "s" + std::to_string(next_session++);
        sessions[s->id] = s;
      }
      s->start();
      reply(res, 201, json{{"id", s->id}});
    });

    http.Post(R"(/sessions/([^/]+)/model)", [this](const httplib::Request & req, httplib::Response & res) {
      with_session(req, res, [&](Session & s) { load_model(s, req, res); });
    });

    http.Get(R"(/sessions/([^/]+)/configs)", [this](const httplib::Request & req, httplib::Response & res) {
      with_session(req, res, [&](Session & s) {
        if (require_model(s, res)) reply(res, 200, file_json(s.configs));
      });
    });

    http.Put(R"(/sessions/([^/]+)/configs)", [this](const httplib::Request & req, httplib::Response & res) {
      with_session(req, res, [&](Session & s) {
        if (!require_model(s, res)) return;
        auto parsed = parse_config_file(req.body, *s.model, s.configs.path.empty() ? "<config>" : s.configs.path);
        if (!parsed.ok()) return reply(res, 422, errors_json(parsed.diagnostics, "config"));
        parsed.value->path = s.configs.path;
        s.configs = std::move(*parsed.value);
        reply(res, 200, file_json(s.configs));
      });
    });

    http.Post(R"(/sessions/([^/]+)/configs/save)", [this](const httplib::Request & req, httplib::Response & res) {
      with_session(req, res, [&](Session & s) {
        if (!require_model(s, res)) return;
        if (s.configs.path.empty()) return reply(res, 409, error_json("path", "configuration file has no path"));
        std::ofstream out(s.configs.path, std::ios::binary);
        if (!out) return reply(res, 500, error_json("path", "cannot write `" + s.configs.path + "'"));
        out << serialize_config_file(s.configs);
        reply(res, 200, file_json(s.configs));
      });
    });

    http.Post(R"(/sessions/([^/]+)/configs/(.+)/(clone|rename|delete))",
              [this](const httplib::Request & req, httplib::Response & res) {
                with_session(req, res, [&](Session & s) {
                  if (require_model(s, res)) manage(s, req.matches[2], req.matches[3], req, res);
                });
              });

    http.Get(R"(/sessions/([^/]+)/configs/(.+))", [this](const httplib::Request & req, httplib::Response & res) {
      with_session(req, res, [&](Session & s) {
        if (!require_model(s, res)) return;
        const Configuration * c = s.configs.find(std::string(req.matches[2]));
        if (c == nullptr) {
          return reply(res, 404, error_json("config", "unknown configuration `" + std::string(req.matches[2]) + "'"));
        }
        reply(res, 200, config_detail(s, *c));
      });
    });

    http.Put(R"(/sessions/([^/]+)/configs/(.+))", [this](const httplib::Request & req, httplib::Response & res) {
      with_session(req, res, [&](Session & s) {
        if (require_model(s, res)) put_config_text(s, req.matches[2], req, res);
      });
    });

    http.Get(R"(/sessions/([^/]+)/warnings)", [this](const httplib::Request & req, httplib::Response & res) {
      with_session(req, res, [&](Session & s) {
        if (!require_model(s, res)) return;
        const Configuration * c = nullptr;
        if (req.has_param("config")) {
          c = s.configs.find(req.get_param_value("config"));
          if (c == nullptr) {
            return reply(res, 404,
                         error_json("config", "unknown configuration `" + req.get_param_value("config") + "'"));
          }
        }
        json warnings = json::array();
        for (const auto & w : analyze_all(*s.model, c)) warnings.push_back(warning_json(w));
        reply(res, 200, json{{"warnings", warnings}});
      });
    });

    http.Post(R"(/sessions/([^/]+)/jobs)", [this](const httplib::Request & req, httplib::Response & res) {
      with_session(req, res, [&](Session & s) { submit(s, req, res); });
    });

    http.Get(R"(/sessions/([^/]+)/jobs)", [this](const httplib::Request & req, httplib::Response & res) {
      with_session(req, res, [&](Session & s) {
        json list = json::array();
        for (const auto & j : s.jobs) list.push_back(j->status());
        reply(res, 200, json{{"jobs", list}});
      });
    });

    http.Get(R"(/jobs/([^/]+))", [this](const httplib::Request & req, httplib::Response & res) {
      auto j = job(req.matches[1]);
      if (!j) return reply(res, 404, error_json("job", "unknown job `" + std::string(req.matches[1]) + "'"));
      reply(res, 200, j->status());
    });

    http.Post(R"(/jobs/([^/]+)/cancel)", [this](const httplib::Request & req, httplib::Response & res) {
      auto j = job(req.matches[1]);
      if (!j) return reply(res, 404, error_json("job", "unknown job `" + std::string(req.matches[1]) + "'"));
      j->cancel->cancel();
      {
        std::lock_guard lock(j->mutex);
        if (j->state == JobState::Queued) j->state = JobState::Cancelled;
      }
      reply(res, 202, j->status());
    });

    http.Get(R"(/jobs/([^/]+)/state\.json)",
             [this](const httplib::Request & req, httplib::Response & res) { state_export(req, res, true); });
    http.Get(R"(/jobs/([^/]+)/state\.dot)",
             [this](const httplib::Request & req, httplib::Response & res) { state_export(req, res, false); });

    http.set_exception_handler([](const httplib::Request &, httplib::Response & res, std::exception_ptr ep) {
      std::string message = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception & e) {
        message = e.what();
      } catch (...) {
      }
      reply(res, 500, error_json("server", message));
    });

    if (!options.static_dir.empty()) http.set_mount_point("/", options.static_dir);
  }
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Server::~Server() = default;

int Server::bind(const std::string & host, int port)
{
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool Server::listen() { return impl_->http.listen_after_bind(); }

void Server::stop() { impl_->http.stop(); }

bool Server::running() const { return impl_->http.is_running(); }

}  // namespace bmv
