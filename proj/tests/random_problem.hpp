// Random small models, configurations and states for property tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bmv/config.hpp"
#include "bmv/model.hpp"
#include "bmv/parse.hpp"
#include "bmv/state.hpp"

namespace bmv::test
{

struct RandomProblem
{
  std::string model_text;
  Model model;
  Configuration config;
  double space = 0;  // number of candidate states the oracle visits at most
};

class ProblemGenerator
{
public:
  explicit ProblemGenerator(std::uint64_t seed) : rng_(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T>
  const T & one_of(const std::vector<T> & v)
  {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }

  /// A problem whose brute-force space stays below `max_space`.
  RandomProblem next(double max_space = 2e5)
  {
    for (;;) {
      RandomProblem p = attempt();
      if (p.space <= max_space) return p;
    }
  }

private:
  struct Shape
  {
    std::vector<std::string> classes;
    std::map<std::string, std::string> parent;
    std::map<std::string, bool> abstract;
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> attrs;  // own (name, type)
  };

  std::string model_skeleton(Shape & shape)
  {
    const int n = pick(1, 3);
    const std::vector<std::string> names{"A", "B", "C"};
    for (int i = 0; i < n; ++i) shape.classes.push_back(names[static_cast<std::size_t>(i)]);
    if (n == 3 && coin(0.3)) {
      shape.parent["C"] = "A";
      shape.abstract["A"] = coin(0.3);
    }
    std::string text = "model Random\n";
    for (const auto & c : shape.classes) {
      const int k = pick(0, 2);
      std::string lower(1, static_cast<char>(c[0] - 'A' + 'a'));
      if (k >= 1) shape.attrs[c].emplace_back("x" + lower, "Integer");
      if (k >= 2) shape.attrs[c].emplace_back("f" + lower, coin() ? "Boolean" : "Integer");
      text += std::string(shape.abstract[c] ? "abstract " : "") + "class " + c;
      if (shape.parent.count(c)) text += " < " + shape.parent[c];
      text += "\n";
      if (!shape.attrs[c].empty()) {
        text += "attributes\n";
        for (const auto & [a, t] : shape.attrs[c]) text += "  " + a + " : " + t + "\n";
      }
      text += "end\n";
    }
    const std::vector<std::string> mults{"*", "0..1", "1", "0..2", "1..*"};
    const int assocs = pick(0, 2);
    for (int i = 0; i < assocs; ++i) {
      const std::string id = std::to_string(i + 1);
      text += "association R" + id + " between\n";
      text += "  " + one_of(shape.classes) + " [" + one_of(mults) + "] role s" + id + "\n";
      text += "  " + one_of(shape.classes) + " [" + one_of(mults) + "] role t" + id + "\n";
      text += "end\n";
    }
    return text;
  }

  std::vector<std::string> invariant_pool(const Model & m, const std::string & cls)
  {
    std::vector<std::string> ints, bools;
    for (const Attribute * a : m.all_attributes(cls)) {
      (a->type.is(TypeKind::Integer) ? ints : bools).push_back(a->name);
    }
    const std::string k = std::to_string(pick(0, 3));
    const std::string k2 = std::to_string(pick(0, 3));
    std::vector<std::string> pool{
      cls + ".allInstances()->size() <= " + k,
      cls + ".allInstances()->size() = " + k,
      cls + ".allInstances()->notEmpty() implies " + cls + ".allInstances()->size() >= " + k,
    };
    for (const auto & x : ints) {
      pool.push_back("self." + x + " >= " + k);
      pool.push_back("self." + x + " <> " + k);
      pool.push_back("self." + x + " < " + k + " or self." + x + " = " + k2);
      pool.push_back("self." + x + " + " + k + " <= self." + x + " * 2");
      pool.push_back("self." + x + " div 2 = " + k);
      pool.push_back(cls + ".allInstances()->isUnique(" + x + ")");
      pool.push_back(cls + ".allInstances()->forAll(o | o <> self implies o." + x + " <> self." + x + ")");
      pool.push_back(cls + ".allInstances()->collect(" + x + ")->sum() <= " + k);
      pool.push_back(cls + ".allInstances()->select(o | o." + x + " > " + k + ")->size() <= " + k2);
    }
    for (const auto & b : bools) {
      pool.push_back("self." + b);
      pool.push_back(ints.empty() ? "not self." + b : "self." + b + " implies self." + ints.front() + " > " + k);
    }
    for (const RoleRef & r : m.navigable_roles(cls)) {
      const std::string role = r.target().role;
      const std::string target = r.target().class_name;
      pool.push_back("self." + role + "->size() <= " + k);
      pool.push_back("self." + role + "->notEmpty()");
      pool.push_back("self." + role + "->isEmpty()");
      for (const Attribute * a : m.all_attributes(target)) {
        if (!a->type.is(TypeKind::Integer)) continue;
        pool.push_back("self." + role + "->exists(o | o." + a->name + " = " + k + ")");
        pool.push_back("self." + role + "." + a->name + "->sum() <= " + k);
        pool.push_back("self." + role + "->one(o | o." + a->name + " > " + k + ")");
        if (!ints.empty()) {
          pool.push_back("self." + role + "->forAll(o | o." + a->name + " > self." + ints.front() + ")");
        }
      }
      if (m.is_kind_of(cls, target) || m.is_kind_of(target, cls)) {
        pool.push_back("self." + role + "->excludes(self)");
        if (m.is_kind_of(target, cls)) pool.push_back("self." + role + "->closure(" + role + ")->excludes(self)");
      }
    }
    return pool;
  }

  RandomProblem attempt()
  {
    Shape shape;
    std::string text = model_skeleton(shape);
    auto skeleton = parse_model(text, "<random>");
    if (!skeleton.ok()) return attempt();
    const Model & m = *skeleton.value;

    std::string constraints;
    const int invs = pick(0, 3);
    for (int i = 0; i < invs; ++i) {
      const std::string cls = one_of(shape.classes);
      constraints += "context " + cls + " inv I" + std::to_string(i + 1) + ":\n  " + one_of(invariant_pool(m, cls)) + "\n";
    }
    if (!constraints.empty()) text += "constraints\n" + constraints;

    RandomProblem p;
    p.model_text = text;
    auto parsed = parse_model(text, "<random>");
    if (!parsed.ok()) return attempt();
    p.model = std::move(*parsed.value);

    Configuration & c = p.config;
    c.name = "random";
    c.integer_min = 0;
    c.integer_max = pick(1, 3);
    c.bitwidth = one_of(std::vector<int>{2, 3, 8});
    c.default_upper = pick(2, 4);
    c.string_count = 2;
    for (const auto & cls : p.model.concrete_classes()) {
      Bound b;
      b.min = pick(0, 1);
      b.max = pick(static_cast<int>(b.min), 2);
      c.class_bounds[cls] = b;
    }
    for (const auto & a : p.model.associations) {
      if (coin(0.4)) continue;
      Bound b;
      b.min = pick(0, 2);
      if (coin(0.8)) b.max = pick(static_cast<int>(b.min), 4);
      if (b.max || b.min <= c.default_upper) c.association_bounds[a.name] = b;
    }
    for (const auto & inv : p.model.invariants) {
      const int r = pick(0, 99);
      if (r >= 80) {
        c.invariant_flags[inv.qualified_name()] = InvariantFlag::Negated;
      } else if (r >= 65) {
        c.invariant_flags[inv.qualified_name()] = InvariantFlag::Inactive;
      }
    }
    p.space = space(p.model, c);
    return p;
  }

  static double space(const Model & m, const Configuration & c)
  {
    const std::int64_t half = std::int64_t{1} << (c.bitwidth - 1);
    const double ints =
      static_cast<double>(std::max<std::int64_t>(0, std::min(c.integer_max, half - 1) - std::max(c.integer_min, -half) + 1));
    double total = 0;
    std::vector<std::string> classes = m.concrete_classes();
    std::vector<std::int64_t> counts(classes.size());
    std::function<void(std::size_t)> walk = [&](std::size_t i) {
      if (i == classes.size()) {
        double states = 1;
        for (std::size_t j = 0; j < classes.size(); ++j) {
          for (const Attribute * a : m.all_attributes(classes[j])) {
            const double d = a->type.is(TypeKind::Integer) ? ints : 2.0;
            for (std::int64_t k = 0; k < counts[j]; ++k) states *= d;
          }
        }
        for (const auto & a : m.associations) {
          double pairs = 1;
          for (int e = 0; e < 2; ++e) {
            std::int64_t n = 0;
            for (std::size_t j = 0; j < classes.size(); ++j) {
              if (m.is_kind_of(classes[j], a.ends[e].class_name)) n += counts[j];
            }
            pairs *= static_cast<double>(n);
          }
          states *= std::pow(2.0, pairs);
        }
        total += states;
        return;
      }
      const Bound b = c.class_bound(classes[i]);
      for (std::int64_t n = b.min; n <= c.upper(b); ++n) {
        counts[i] = n;
        walk(i + 1);
      }
    };
    walk(0);
    return total;
  }

  std::mt19937_64 rng_;
};

}  // namespace bmv::test
