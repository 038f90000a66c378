#include "bmv/finder.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "bmv/evaluator.hpp"

namespace bmv
{

const char * to_string(Verdict v)
{
  switch (v) {
    case Verdict::Sat: return "SAT";
    case Verdict::Unsat: return "UNSAT";
    case Verdict::Timeout: return "TIMEOUT";
  }
  return "?";
}

std::pair<std::int64_t, std::int64_t> integer_range(const Configuration & config)
{
  const int k = std::clamp(config.bitwidth, 1, 63);
  const std::int64_t lo = -(std::int64_t{1} << (k - 1));
  const std::int64_t hi = (std::int64_t{1} << (k - 1)) - 1;
  return {std::max(config.integer_min, lo), std::min(config.integer_max, hi)};
}

namespace
{

using Clock = std::chrono::steady_clock;

struct Stop
{
};

// State shared by all object-count combinations of one run.
struct Run
{
  const Model & model;
  const Configuration & config;
  const SystemState & base;
  FinderOptions options;
  EvalMode mode;
  FinderStats stats;
  std::optional<Clock::time_point> deadline;
  const CancelToken * cancel = nullptr;
  std::vector<const Invariant *> active;
  std::vector<const Invariant *> negated;
  std::vector<std::string> classes;                          // concrete, model order
  std::map<std::string, std::vector<std::string>> names;     // generated names per class
  std::set<std::string> pinned;                              // generated names used by required links
  std::function<bool(SystemState &&)> on_solution;           // true stops the run
  std::uint64_t ticks = 0;

  void poll()
  {
    if (cancel != nullptr && cancel->cancelled()) throw Stop{};
    if (deadline && (++ticks & 127U) == 0 && Clock::now() >= *deadline) throw Stop{};
  }
};

const AttributeDomain * find_domain(const Run & run, const std::string & cls, const std::string & attr)
{
  auto it = run.config.attribute_domains.find({cls, attr});
  if (it != run.config.attribute_domains.end()) return &it->second;
  for (const auto & c : run.model.classes) {
    if (c.name == cls || !run.model.is_kind_of(cls, c.name)) continue;
    auto inherited = run.config.attribute_domains.find({c.name, attr});
    if (inherited != run.config.attribute_domains.end()) return &inherited->second;
  }
  return nullptr;
}

std::vector<Value> attribute_domain(const Run & run, const std::string & cls, const Attribute & attr)
{
  const AttributeDomain * d = find_domain(run, cls, attr.name);
  std::vector<Value> out;
  switch (attr.type.element) {
    case TypeKind::Integer: {
      auto [lo, hi] = integer_range(run.config);
      if (d != nullptr && d->min) lo = std::max(lo, *d->min);
      if (d != nullptr && d->max) hi = std::min(hi, *d->max);
      if (d != nullptr && d->values) {
        for (const auto & v : *d->values) {
          if (v.is_integer() && v.as_integer() >= lo && v.as_integer() <= hi) out.push_back(v);
        }
        std::sort(out.begin(), out.end());
      } else {
        for (std::int64_t i = lo; i <= hi; ++i) out.push_back(Value::integer(i));
      }
      break;
    }
    case TypeKind::String:
      if (d != nullptr && d->values) {
        out = *d->values;
      } else {
        for (const auto & s : run.config.string_domain()) out.push_back(Value::string(s));
      }
      break;
    case TypeKind::Real:
      if (d != nullptr && d->values) {
        for (const auto & v : *d->values) out.push_back(Value::real(v.as_number()));
      } else if (run.config.real_values) {
        for (double r : *run.config.real_values) out.push_back(Value::real(r));
      }
      break;
    case TypeKind::Boolean:
      if (d != nullptr && d->values) {
        out = *d->values;
      } else {
        out = {Value::boolean(false), Value::boolean(true)};
      }
      break;
    default: break;
  }
  std::vector<Value> unique;
  for (auto & v : out) {
    if (std::find(unique.begin(), unique.end(), v) == unique.end()) unique.push_back(std::move(v));
  }
  if (run.options.seed != 0) {
    std::mt19937_64 rng(run.options.seed ^ std::hash<std::string>{}(cls + "." + attr.name));
    std::shuffle(unique.begin(), unique.end(), rng);
  }
  return unique;
}

// One object-count combination: decision variables and their search.
class Search final : public StateView
{
public:
  Search(Run & run, const std::map<std::string, std::int64_t> & generated) : run_(run)
  {
    build_objects(generated);
    build_links();
    build_attributes();
    if (run_.options.symmetry_breaking) build_swaps();
    swaps_of_var_.resize(vars_.size());
    val_.assign(vars_.size(), -1);
  }

  // True when the run was stopped by the solution callback.
  bool solve()
  {
    if (infeasible_ || !initially_consistent()) return false;
    return dfs(0);
  }

  [[nodiscard]] const std::vector<std::string> & instances_of(const std::string & cls) const override
  {
    static const std::vector<std::string> none;
    auto it = extents_.find(cls);
    return it == extents_.end() ? none : it->second;
  }

  [[nodiscard]] const std::string & class_of(const std::string & object) const override
  {
    return classes_.at(index_.at(object));
  }

  [[nodiscard]] Value attribute(const std::string & object, const std::string & attr) const override
  {
    const auto & slots = attr_var_.at(index_.at(object));
    auto it = slots.find(attr);
    if (it == slots.end()) return Value::undefined();
    const int v = val_[it->second];
    if (v < 0) throw UnresolvedRead{};
    return vars_[it->second].domain[v];
  }

  [[nodiscard]] std::vector<std::string> navigate(const std::string & object, const std::string & association,
                                                  int to_end) const override
  {
    const int a = assoc_index_.at(association);
    const int o = index_.at(object);
    std::vector<std::string> out;
    for (int k : partner_vars_[a][o][to_end]) {
      if (val_[k] < 0) throw UnresolvedRead{};
      if (val_[k] == 1) out.push_back(names_[to_end == 1 ? vars_[k].y : vars_[k].x]);
    }
    return out;
  }

private:
  struct Var
  {
    bool link = true;
    int assoc = -1;
    int x = -1;  // link: object at end 0
    int y = -1;  // link: object at end 1
    int obj = -1;  // attribute owner
    std::vector<Value> domain;  // attribute values
    int fixed = -1;
    bool checkpoint = false;  // last variable of an association or object block
  };

  struct AssocInfo
  {
    const Association * assoc = nullptr;
    std::int64_t min = 0;
    std::int64_t max = 0;
    int ones = 0;
    int undecided = 0;
  };

  void build_objects(const std::map<std::string, std::int64_t> & generated)
  {
    for (const auto & cls : run_.classes) {
      for (const auto & [name, obj] : run_.base.objects) {
        if (obj.class_name == cls) add_object(name, cls, false);
      }
      const auto & names = run_.names.at(cls);
      for (std::int64_t i = 0; i < generated.at(cls); ++i) add_object(names[i], cls, true);
    }
    for (const auto & c : run_.model.classes) {
      auto & extent = extents_[c.name];
      for (std::size_t o = 0; o < names_.size(); ++o) {
        if (run_.model.is_kind_of(classes_[o], c.name)) extent.push_back(names_[o]);
      }
      std::sort(extent.begin(), extent.end());
    }
  }

  void add_object(const std::string & name, const std::string & cls, bool generated)
  {
    index_[name] = static_cast<int>(names_.size());
    names_.push_back(name);
    classes_.push_back(cls);
    interchangeable_.push_back(generated && run_.pinned.count(name) == 0);
  }

  void build_links()
  {
    const int n = static_cast<int>(names_.size());
    std::set<std::tuple<std::string, std::string, std::string>> forced;
    for (const Link & l : run_.base.links) forced.insert({l.association, l.first, l.second});
    for (const auto & l : run_.config.required_links) forced.insert({l.association, l.first, l.second});

    for (const auto & assoc : run_.model.associations) {
      const int a = static_cast<int>(assocs_.size());
      assoc_index_[assoc.name] = a;
      const Bound b = run_.config.association_bound(assoc.name);
      assocs_.push_back(AssocInfo{&assoc, b.min, run_.config.upper(b), 0, 0});
      ones_.emplace_back(n, std::array<int, 2>{0, 0});
      undecided_.emplace_back(n, std::array<int, 2>{0, 0});
      partner_vars_.emplace_back(n);
      conforms_.emplace_back(n, std::array<bool, 2>{false, false});
      for (int o = 0; o < n; ++o) {
        for (int end = 0; end < 2; ++end) {
          conforms_[a][o][end] = run_.model.is_kind_of(classes_[o], assoc.ends[end].class_name);
        }
      }
      for (int x = 0; x < n; ++x) {
        if (!conforms_[a][x][0]) continue;
        for (int y = 0; y < n; ++y) {
          if (!conforms_[a][y][1]) continue;
          Var v;
          v.link = true;
          v.assoc = a;
          v.x = x;
          v.y = y;
          if (forced.count({assoc.name, names_[x], names_[y]}) > 0) v.fixed = 1;
          const int k = static_cast<int>(vars_.size());
          link_var_[{a, x, y}] = k;
          partner_vars_[a][x][1].push_back(k);
          partner_vars_[a][y][0].push_back(k);
          ++undecided_[a][x][0];
          ++undecided_[a][y][1];
          ++assocs_[a].undecided;
          vars_.push_back(std::move(v));
        }
      }
      if (!vars_.empty() && vars_.back().link && vars_.back().assoc == a) vars_.back().checkpoint = true;
    }
  }

  void build_attributes()
  {
    attr_var_.resize(names_.size());
    std::map<std::pair<std::string, std::string>, std::vector<Value>> domains;
    // Objects carrying attributes a negated invariant reads are decided first.
    std::set<std::string> read;
    for (const Invariant * inv : run_.negated) {
      visit(*inv->body, [&](const Expr & e) {
        if (e.kind == ExprKind::Attribute) read.insert(e.name);
      });
    }
    std::vector<std::size_t> order;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t o = 0; o < names_.size(); ++o) {
        bool reads = false;
        for (const Attribute * attr : run_.model.all_attributes(classes_[o])) reads = reads || read.count(attr->name) > 0;
        if (reads == (pass == 0)) order.push_back(o);
      }
    }
    for (std::size_t o : order) {
      const ObjectState * pinned = run_.base.find(names_[o]);
      for (const Attribute * attr : run_.model.all_attributes(classes_[o])) {
        Var v;
        v.link = false;
        v.obj = static_cast<int>(o);
        const Value * given = nullptr;
        if (pinned != nullptr) {
          auto it = pinned->attributes.find(attr->name);
          if (it != pinned->attributes.end() && !it->second.is_undefined()) given = &it->second;
        }
        if (given != nullptr) {
          v.domain = {*given};
          v.fixed = 0;
        } else {
          auto key = std::make_pair(classes_[o], attr->name);
          auto it = domains.find(key);
          if (it == domains.end()) it = domains.emplace(key, attribute_domain(run_, classes_[o], *attr)).first;
          v.domain = it->second;
          if (v.domain.empty()) infeasible_ = true;
        }
        attr_var_[o][attr->name] = static_cast<int>(vars_.size());
        vars_.push_back(std::move(v));
      }
      if (!vars_.empty() && !vars_.back().link && vars_.back().obj == static_cast<int>(o)) {
        vars_.back().checkpoint = true;
      }
    }
  }

  // Lex-leader constraints for transpositions of adjacent interchangeable
  // objects of the same class.
  void build_swaps()
  {
    swaps_of_var_.resize(vars_.size());
    for (std::size_t i = 0; i + 1 < names_.size(); ++i) {
      const std::size_t j = i + 1;
      if (!interchangeable_[i] || !interchangeable_[j] || classes_[i] != classes_[j]) continue;
      auto perm = [&](int o) { return o == static_cast<int>(i) ? static_cast<int>(j) : o == static_cast<int>(j) ? static_cast<int>(i) : o; };
      std::vector<int> sigma(vars_.size());
      std::vector<int> moved;
      for (std::size_t k = 0; k < vars_.size(); ++k) {
        const Var & v = vars_[k];
        int image = static_cast<int>(k);
        if (v.link) {
          image = link_var_.at({v.assoc, perm(v.x), perm(v.y)});
        } else {
          const int other = perm(v.obj);
          if (other != v.obj) {
            for (const auto & [attr, idx] : attr_var_[v.obj]) {
              if (idx == static_cast<int>(k)) image = attr_var_[other].at(attr);
            }
          }
        }
        sigma[k] = image;
        if (image != static_cast<int>(k)) moved.push_back(static_cast<int>(k));
      }
      const int s = static_cast<int>(swaps_.size());
      for (int k : moved) swaps_of_var_[k].push_back(s);
      swaps_.push_back({std::move(sigma), std::move(moved)});
    }
  }

  bool initially_consistent() const
  {
    for (std::size_t a = 0; a < assocs_.size(); ++a) {
      const auto & info = assocs_[a];
      if (info.undecided < info.min) return false;
      for (std::size_t o = 0; o < names_.size(); ++o) {
        // side 0: partners at end 1 of an object at end 0, and vice versa
        if (conforms_[a][o][0] && undecided_[a][o][0] < info.assoc->ends[1].multiplicity.lower) return false;
        if (conforms_[a][o][1] && undecided_[a][o][1] < info.assoc->ends[0].multiplicity.lower) return false;
      }
    }
    return true;
  }

  static bool below_upper(int n, const Multiplicity & m) { return !m.upper || n <= *m.upper; }

  bool link_allowed(const Var & v, int value) const
  {
    const auto & info = assocs_[v.assoc];
    const auto & mx = info.assoc->ends[1].multiplicity;
    const auto & my = info.assoc->ends[0].multiplicity;
    const int ox = ones_[v.assoc][v.x][0];
    const int oy = ones_[v.assoc][v.y][1];
    if (value == 1) {
      return below_upper(ox + 1, mx) && below_upper(oy + 1, my) && info.ones + 1 <= info.max;
    }
    const int ux = undecided_[v.assoc][v.x][0];
    const int uy = undecided_[v.assoc][v.y][1];
    return ox + ux - 1 >= mx.lower && oy + uy - 1 >= my.lower && info.ones + info.undecided - 1 >= info.min;
  }

  void set_link(const Var & v, int value, int delta)
  {
    auto & info = assocs_[v.assoc];
    undecided_[v.assoc][v.x][0] -= delta;
    undecided_[v.assoc][v.y][1] -= delta;
    info.undecided -= delta;
    if (value == 1) {
      ones_[v.assoc][v.x][0] += delta;
      ones_[v.assoc][v.y][1] += delta;
      info.ones += delta;
    }
  }

  bool symmetric_ok(int k) const
  {
    for (int s : swaps_of_var_[k]) {
      const auto & [sigma, moved] = swaps_[s];
      for (int p : moved) {
        const int a = val_[p];
        const int b = val_[sigma[p]];
        if (a < 0 || b < 0 || a < b) break;
        if (a > b) return false;
      }
    }
    return true;
  }

  // Invariant check on the decided part of the state. Results that do not
  // throw UnresolvedRead are final for this branch.
  bool invariants_ok()
  {
    Bindings bindings;
    for (const Invariant * inv : run_.active) {
      for (const auto & name : instances_of(inv->context)) {
        bindings["self"] = Value::object(name);
        try {
          const Value v = eval(*inv->body, *this, bindings, run_.mode);
          if (!v.is_boolean() || !v.as_boolean()) return false;
        } catch (const UnresolvedRead &) {
        }
      }
    }
    for (const Invariant * inv : run_.negated) {
      bool violated = false;
      bool unknown = false;
      for (const auto & name : instances_of(inv->context)) {
        bindings["self"] = Value::object(name);
        try {
          const Value v = eval(*inv->body, *this, bindings, run_.mode);
          if (!v.is_boolean() || !v.as_boolean()) {
            violated = true;
            break;
          }
        } catch (const UnresolvedRead &) {
          unknown = true;
        }
      }
      if (!violated && !unknown) return false;
    }
    return true;
  }

  SystemState snapshot() const
  {
    SystemState s;
    for (std::size_t o = 0; o < names_.size(); ++o) s.objects[names_[o]].class_name = classes_[o];
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      const Var & v = vars_[k];
      if (v.link) {
        if (val_[k] == 1) s.links.insert(Link{assocs_[v.assoc].assoc->name, names_[v.x], names_[v.y]});
      } else {
        for (const auto & [attr, idx] : attr_var_[v.obj]) {
          if (idx == static_cast<int>(k)) s.objects[names_[v.obj]].attributes[attr] = v.domain[val_[k]];
        }
      }
    }
    return s;
  }

  bool dfs(std::size_t k)
  {
    if (k == vars_.size()) {
      if (!invariants_ok()) return false;
      return run_.on_solution(snapshot());
    }
    run_.poll();
    const Var & v = vars_[k];
    std::vector<int> choices;
    if (v.link) {
      for (int value : {0, 1}) {
        if ((v.fixed < 0 || v.fixed == value) && link_allowed(v, value)) choices.push_back(value);
      }
    } else if (v.fixed >= 0) {
      choices.push_back(v.fixed);
    } else {
      for (int i = 0; i < static_cast<int>(v.domain.size()); ++i) choices.push_back(i);
    }
    if (choices.size() == 1) {
      ++run_.stats.propagations;
    }
    for (int c : choices) {
      if (choices.size() > 1) ++run_.stats.decisions;
      val_[k] = c;
      if (v.link) set_link(v, c, 1);
      bool ok = symmetric_ok(static_cast<int>(k));
      if (ok && v.checkpoint && run_.options.early_checks) ok = invariants_ok();
      if (ok && dfs(k + 1)) return true;
      if (v.link) set_link(v, c, -1);
      val_[k] = -1;
      ++run_.stats.backtracks;
    }
    return false;
  }

  Run & run_;
  bool infeasible_ = false;
  std::vector<std::string> names_;
  std::vector<std::string> classes_;
  std::vector<bool> interchangeable_;
  std::unordered_map<std::string, int> index_;
  std::map<std::string, std::vector<std::string>, std::less<>> extents_;

  std::vector<Var> vars_;
  std::vector<int> val_;

  std::vector<AssocInfo> assocs_;
  std::unordered_map<std::string, int> assoc_index_;
  std::map<std::tuple<int, int, int>, int> link_var_;
  std::vector<std::vector<std::array<int, 2>>> ones_;
  std::vector<std::vector<std::array<int, 2>>> undecided_;
  std::vector<std::vector<std::array<bool, 2>>> conforms_;
  std::vector<std::vector<std::array<std::vector<int>, 2>>> partner_vars_;  // [assoc][object][to_end]
  std::vector<std::unordered_map<std::string, int>> attr_var_;

  std::vector<std::pair<std::vector<int>, std::vector<int>>> swaps_;  // (sigma, moved positions)
  std::vector<std::vector<int>> swaps_of_var_;
};

std::string join(const std::vector<ConfigError> & errors)
{
  std::string out;
  for (const auto & e : errors) out += (out.empty() ? "" : "; ") + e.key + ": " + e.message;
  return out;
}

class Driver
{
public:
  Driver(const FinderProblem & problem, std::vector<std::string> & log)
  : problem_(problem),
    run_{*problem.model, problem.config, problem.base ? *problem.base : empty_, problem.options,
         EvalMode::solver_mode(problem.config.bitwidth), {}, {}, problem.cancel.get(), {}, {}, {}, {}, {}, {}, 0}
  {
    const Model & model = *problem.model;
    const Configuration & config = problem.config;
    for (const auto & inv : model.invariants) {
      const InvariantFlag f = config.flag(inv.qualified_name());
      if (f == InvariantFlag::Active) run_.active.push_back(&inv);
      if (f == InvariantFlag::Negated) run_.negated.push_back(&inv);
    }

    std::set<std::string> used;
    for (const auto & [name, obj] : run_.base.objects) used.insert(name);
    for (const auto & cls : model.classes) {
      if (cls.is_abstract) continue;
      run_.classes.push_back(cls.name);
      const Bound b = config.class_bound(cls.name);
      const std::int64_t base_count = run_.base.count_of(cls.name);
      if (base_count > config.upper(b)) {
        throw Error("InvalidProblem", "the base state has " + std::to_string(base_count) + " objects of " + cls.name +
                                        ", more than `" + cls.name + "_max' allows");
      }
      if (!b.max) {
        log.push_back("`" + cls.name + "_max' is `*'; using default_upper = " + std::to_string(config.default_upper));
      }
      auto & names = run_.names[cls.name];
      for (std::int64_t i = 1; static_cast<std::int64_t>(names.size()) < config.upper(b) - base_count; ++i) {
        std::string name = generated_object_name(cls.name, i);
        if (used.insert(name).second) names.push_back(std::move(name));
      }
      lo_.push_back(std::max(b.min, base_count));
      hi_.push_back(config.upper(b));
    }
    for (const auto & assoc : model.associations) {
      const Bound b = config.association_bound(assoc.name);
      if (!b.max) {
        log.push_back("`" + assoc.name + "_max' is `*'; using default_upper = " + std::to_string(config.default_upper));
      }
      if (run_.base.link_count(assoc.name) > config.upper(b)) {
        throw Error("InvalidProblem", "the base state has more links of " + assoc.name + " than `" + assoc.name +
                                        "_max' allows");
      }
    }
    for (const auto & l : config.required_links) {
      for (const auto * end : {&l.first, &l.second}) {
        if (run_.base.find(*end) != nullptr) continue;
        for (std::size_t c = 0; c < run_.classes.size(); ++c) {
          const auto & names = run_.names[run_.classes[c]];
          auto it = std::find(names.begin(), names.end(), *end);
          if (it == names.end()) continue;
          run_.pinned.insert(*end);
          const auto position = static_cast<std::int64_t>(it - names.begin()) + 1;
          lo_[c] = std::max(lo_[c], run_.base.count_of(run_.classes[c]) + position);
        }
      }
    }
    const auto [ilo, ihi] = integer_range(config);
    if (ilo != config.integer_min || ihi != config.integer_max) {
      log.push_back("integer domain clipped to " + std::to_string(ilo) + ".." + std::to_string(ihi) + " by bitwidth " +
                    std::to_string(config.bitwidth));
    }
  }

  Run & run() { return run_; }

  // Tries count vectors by ascending total, lexicographically within a total.
  // Returns true when the solution callback stopped the run.
  bool search()
  {
    std::int64_t lo_total = 0;
    std::int64_t hi_total = 0;
    for (std::size_t c = 0; c < lo_.size(); ++c) {
      if (lo_[c] > hi_[c]) return false;
      lo_total += lo_[c];
      hi_total += hi_[c];
    }
    counts_.assign(lo_.size(), 0);
    for (std::int64_t total = lo_total; total <= hi_total; ++total) {
      if (vectors(0, total)) return true;
    }
    return false;
  }

private:
  bool vectors(std::size_t c, std::int64_t remaining)
  {
    if (c == lo_.size()) {
      if (remaining != 0) return false;
      ++run_.stats.count_vectors;
      std::map<std::string, std::int64_t> generated;
      for (std::size_t i = 0; i < counts_.size(); ++i) {
        generated[run_.classes[i]] = counts_[i] - run_.base.count_of(run_.classes[i]);
      }
      run_.poll();
      Search search(run_, generated);
      return search.solve();
    }
    std::int64_t rest_lo = 0;
    std::int64_t rest_hi = 0;
    for (std::size_t i = c + 1; i < lo_.size(); ++i) {
      rest_lo += lo_[i];
      rest_hi += hi_[i];
    }
    const std::int64_t from = std::max(lo_[c], remaining - rest_hi);
    const std::int64_t to = std::min(hi_[c], remaining - rest_lo);
    for (std::int64_t n = from; n <= to; ++n) {
      counts_[c] = n;
      if (vectors(c + 1, remaining - n)) return true;
    }
    return false;
  }

  const FinderProblem & problem_;
  SystemState empty_;
  Run run_;
  std::vector<std::int64_t> lo_;
  std::vector<std::int64_t> hi_;
  std::vector<std::int64_t> counts_;
};

void check_problem(const FinderProblem & problem)
{
  if (problem.model == nullptr) throw Error("InvalidProblem", "no model given");
  const SystemState * base = problem.base ? &*problem.base : nullptr;
  if (auto errors = validate(problem.config, *problem.model, base); !errors.empty()) {
    throw Error("InvalidProblem", "invalid configuration: " + join(errors));
  }
  if (base != nullptr) {
    auto errors = check_structure(*base, *problem.model);
    if (!errors.empty()) throw Error("InvalidProblem", "invalid base state: " + errors.front().message);
  }
}

// Independent re-check of a found state.
void self_check(const FinderProblem & problem, const SystemState & state)
{
  const Model & model = *problem.model;
  const Configuration & config = problem.config;
  std::string failure;
  if (!check_structure(state, model).empty()) failure = "structure";
  if (!check_model_inherent(state, model).empty()) failure = "multiplicities";
  for (const auto & cls : model.classes) {
    if (cls.is_abstract) continue;
    const Bound b = config.class_bound(cls.name);
    const std::int64_t n = state.count_of(cls.name);
    if (n < b.min || n > config.upper(b)) failure = "bounds of " + cls.name;
  }
  for (const auto & assoc : model.associations) {
    const Bound b = config.association_bound(assoc.name);
    const std::int64_t n = state.link_count(assoc.name);
    if (n < b.min || n > config.upper(b)) failure = "bounds of " + assoc.name;
  }
  const StateIndex index(state, model);
  const EvalMode mode = EvalMode::solver_mode(config.bitwidth);
  for (const auto & inv : model.invariants) {
    const InvariantFlag f = config.flag(inv.qualified_name());
    if (f == InvariantFlag::Inactive) continue;
    const InvariantResult r = eval_invariant(inv, index, mode);
    const bool ok = f == InvariantFlag::Active ? r.holds : (!r.holds && !r.per_object.empty());
    if (!ok) failure = "invariant " + inv.qualified_name();
  }
  if (!failure.empty()) throw Error("InternalError", "found state fails its re-check: " + failure);
}

}  // namespace

FinderResult find(const FinderProblem & problem)
{
  check_problem(problem);
  const auto start = Clock::now();
  FinderResult result;
  Driver driver(problem, result.log);
  Run & run = driver.run();
  if (problem.timeout) run.deadline = start + *problem.timeout;
  run.on_solution = [&](SystemState && s) {
    result.state = std::move(s);
    return true;
  };
  try {
    if (problem.timeout && problem.timeout->count() <= 0) throw Stop{};
    result.verdict = driver.search() ? Verdict::Sat : Verdict::Unsat;
  } catch (const Stop &) {
    result.verdict = Verdict::Timeout;
    result.state.reset();
  }
  run.stats.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  result.stats = run.stats;
  if (result.state) self_check(problem, *result.state);
  return result;
}

Enumeration enumerate_all(const FinderProblem & problem, std::size_t limit)
{
  check_problem(problem);
  const auto start = Clock::now();
  Enumeration result;
  std::vector<std::string> log;
  Driver driver(problem, log);
  Run & run = driver.run();
  if (problem.timeout) run.deadline = start + *problem.timeout;
  run.on_solution = [&](SystemState && s) {
    result.states.push_back(std::move(s));
    return result.states.size() >= limit;
  };
  try {
    if (limit == 0) {
      result.complete = false;
    } else if (problem.timeout && problem.timeout->count() <= 0) {
      throw Stop{};
    } else {
      result.complete = !driver.search();
    }
  } catch (const Stop &) {
    result.complete = false;
  }
  run.stats.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  result.stats = run.stats;
  return result;
}

}  // namespace bmv
