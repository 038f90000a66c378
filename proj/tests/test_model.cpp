#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "bmv/typecheck.hpp"
#include "random_problem.hpp"
#include "support.hpp"

using namespace bmv;
using namespace bmv::test;

namespace
{

bool has_code(const std::vector<Diagnostic> & ds, const std::string & code)
{
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic & d) { return d.code == code; });
}

// Every location must point into the text: a real line, a column on it.
bool located_inside(const Diagnostic & d, const std::string & text)
{
  std::vector<std::size_t> lengths{0};
  for (char c : text) {
    if (c == '\n') {
      lengths.push_back(0);
    } else {
      ++lengths.back();
    }
  }
  if (d.location.line < 1 || static_cast<std::size_t>(d.location.line) > lengths.size()) return false;
  return d.location.column >= 1 && static_cast<std::size_t>(d.location.column) <= lengths[d.location.line - 1] + 1;
}

OclType type_of(const std::string & ocl, const std::string & cls, const Model & m, bool solver = false)
{
  auto r = parse_ocl(ocl, cls, m);
  REQUIRE_MESSAGE(r.ok(), messages(r.diagnostics));
  return solver ? (*r.value)->solver_type : (*r.value)->standard_type;
}

}  // namespace

TEST_SUITE("model")
{
  TEST_CASE("corpus parses cleanly with the expected roster")
  {
    const std::string text = slurp(source_path("models/carrental.use"));
    auto r = parse_model(text, "carrental.use");
    REQUIRE_MESSAGE(r.ok(), messages(r.diagnostics));
    const Model & m = *r.value;
    CHECK(check_well_formed(m).empty());
    for (const char * c : {"Person", "Customer", "Employee", "Branch", "Car", "CarGroup"}) {
      CHECK_MESSAGE(m.find_class(c) != nullptr, c);
    }
    CHECK(m.find_class("Person")->is_abstract);
    CHECK(m.find_association("Employment") != nullptr);
    CHECK(m.find_association("Management") != nullptr);
    CHECK(m.invariants.size() == 8);
    for (const auto & inv : m.invariants) CHECK(inv.body->typed);
  }

  TEST_CASE("minimal model")
  {
    Model m = model_from("model M class A end");
    CHECK(m.name == "M");
    REQUIRE(m.classes.size() == 1);
    CHECK(m.classes[0].name == "A");
    CHECK(m.classes[0].attributes.empty());
  }

  TEST_CASE("self generalization is cyclic")
  {
    auto r = parse_model("model M class A < A end");
    CHECK_FALSE(r.ok());
    CHECK(has_code(r.diagnostics, "CyclicGeneralization"));
  }

  TEST_CASE("two-class generalization cycle names both classes")
  {
    auto r = parse_model("model M\nclass A < B end\nclass B < A end\n");
    REQUIRE(has_code(r.diagnostics, "CyclicGeneralization"));
    for (const auto & d : r.diagnostics) {
      if (d.code != "CyclicGeneralization") continue;
      CHECK(d.message.find('A') != std::string::npos);
      CHECK(d.message.find('B') != std::string::npos);
    }
  }

  TEST_CASE("association end with unknown class")
  {
    auto r = parse_model("model M\nclass A end\nassociation R between\n  A [*] role as\n  X [1] role x\nend\n");
    CHECK(has_code(r.diagnostics, "UnknownClass"));
    for (const auto & d : r.diagnostics) CHECK(d.message.find("X") != std::string::npos);
  }

  TEST_CASE("duplicate names are reported")
  {
    CHECK(has_code(parse_model("model M class A end class A end").diagnostics, "DuplicateClass"));
    auto dup_inv = parse_model("model M class A end constraints context A inv I: true context A inv I: false");
    CHECK(has_code(dup_inv.diagnostics, "DuplicateInvariant"));
    auto dup_attr = parse_model("model M class A attributes x : Integer end class B < A attributes x : Integer end");
    CHECK(has_code(dup_attr.diagnostics, "DuplicateAttribute"));
  }

  TEST_CASE("syntax errors carry locations inside the text")
  {
    const std::vector<std::string> broken{
      "model M\nclass A\nattributes\n  x Integer\nend\n",
      "model M\nclass A end\nassociation R between\n  A [1..] role a\n  A [*] role b\nend\n",
      "model M\nclass A end\nconstraints\ncontext A inv I: self.x >\n",
      "model\n",
      "model M class A attributes x : Sequence(Integer) end",
      "model M\nclass A\nattributes\n  name : String\nend\nconstraints\ncontext A inv Q: self.name = 'open\n",
    };
    for (const auto & text : broken) {
      auto r = parse_model(text, "<broken>");
      CHECK_FALSE(r.ok());
      REQUIRE_FALSE(r.diagnostics.empty());
      for (const auto & d : r.diagnostics) CHECK_MESSAGE(located_inside(d, text), format_diagnostic(d) << "\n" << text);
    }
  }

  TEST_CASE("printing and reparsing gives a structurally equal model")
  {
    const Model corpus_model = corpus();
    auto again = parse_model(print_model(corpus_model));
    REQUIRE_MESSAGE(again.ok(), messages(again.diagnostics));
    CHECK(same_structure(corpus_model, *again.value));

    ProblemGenerator gen(11);
    for (int i = 0; i < 200; ++i) {
      RandomProblem p = gen.next(1e12);
      auto back = parse_model(print_model(p.model));
      REQUIRE_MESSAGE(back.ok(), messages(back.diagnostics) << print_model(p.model));
      CHECK_MESSAGE(same_structure(p.model, *back.value), print_model(p.model));
    }
  }

  TEST_CASE("generalization acyclicity agrees with a reachability oracle")
  {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 300; ++round) {
      Model m;
      m.name = "G";
      const int n = 10;
      std::vector<std::set<int>> parents(n);
      const double density = std::uniform_real_distribution<double>(0.02, 0.25)(rng);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (std::bernoulli_distribution(density)(rng)) parents[i].insert(j);
        }
      }
      for (int i = 0; i < n; ++i) {
        Class c;
        c.name = "C" + std::to_string(i);
        for (int j : parents[i]) c.parents.push_back("C" + std::to_string(j));
        m.classes.push_back(c);
      }
      std::set<std::string> expected;
      for (int i = 0; i < n; ++i) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack(parents[i].begin(), parents[i].end());
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          if (seen[v]) continue;
          seen[v] = true;
          for (int w : parents[v]) stack.push_back(w);
        }
        if (seen[i]) expected.insert("C" + std::to_string(i));
      }
      std::set<std::string> reported;
      for (const auto & d : check_well_formed(m)) {
        if (d.code != "CyclicGeneralization") continue;
        const std::string list = d.message.substr(d.message.find("involving ") + 10);
        std::size_t start = 0;
        while (start < list.size()) {
          std::size_t end = list.find(", ", start);
          if (end == std::string::npos) end = list.size();
          reported.insert(list.substr(start, end - start));
          start = end + 2;
        }
      }
      CHECK(reported == expected);
    }
  }
}

TEST_SUITE("typecheck")
{
  TEST_CASE("navigation typing")
  {
    const Model m = corpus();
    CHECK(to_string(type_of("self.employee", "Branch", m)) == "Set(Employee)");
    CHECK(to_string(type_of("self.manager", "Branch", m)) == "Employee");
    CHECK(to_string(type_of("self.employee.age", "Branch", m)) == "Bag(Integer)");
    CHECK(to_string(type_of("self.employee.age", "Branch", m, true)) == "Set(Integer)");
    CHECK(to_string(type_of("self.employee->collect(e | e.age)->asSet()", "Branch", m)) == "Set(Integer)");
    CHECK(to_string(type_of("self.parent->closure(parent)", "CarGroup", m)) == "Set(CarGroup)");
    CHECK(to_string(type_of("Person.allInstances()", "Branch", m)) == "Set(Person)");
  }

  TEST_CASE("Set and Bag comparison typechecks with both kinds visible")
  {
    const Model m = corpus();
    auto r = parse_ocl("Set{1} = Bag{1}", "Branch", m);
    REQUIRE(r.ok());
    const Expr & e = **r.value;
    CHECK(to_string(e.standard_type) == "Boolean");
    CHECK(to_string(e.operand(0).standard_type) == "Set(Integer)");
    CHECK(to_string(e.operand(1).standard_type) == "Bag(Integer)");
    CHECK(to_string(e.operand(1).solver_type) == "Set(Integer)");
  }

  TEST_CASE("type errors")
  {
    const Model m = corpus();
    auto code = [&](const std::string & ocl, const std::string & cls = "Branch") {
      auto r = parse_ocl(ocl, cls, m);
      CHECK_FALSE(r.ok());
      return r.diagnostics.empty() ? std::string() : r.diagnostics.front().code;
    };
    CHECK(code("self.nothing") == "UnknownFeature");
    CHECK(code("unknownVar > 1") == "UnknownIdentifier");
    CHECK(code("Sequence{1, 2}->size() = 2") == "UnsupportedCollection");
    CHECK(code("self.employee->asOrderedSet()->size() = 1") == "UnsupportedCollection");
    CHECK(code("Set{Set{1}}->size() = 1") == "NestedCollection");
    CHECK(code("self.location + 1 = 2") == "TypeMismatch");
    CHECK(code("self.employee->includes(1, 2)") == "ArityError");
    CHECK(code("self.employee->frobnicate()") == "UnknownOperation");
    CHECK(code("self.employee = self.manager") == "TypeMismatch");
    CHECK(code("Nowhere.allInstances()->isEmpty()") == "UnknownClass");
  }

  TEST_CASE("solver types never contain Bag and typing is deterministic")
  {
    std::vector<Model> models{corpus()};
    ProblemGenerator gen(5);
    for (int i = 0; i < 100; ++i) models.push_back(gen.next(1e12).model);
    for (const auto & m : models) {
      for (const auto & inv : m.invariants) {
        visit(*inv.body, [](const Expr & e) {
          CHECK(e.typed);
          CHECK(e.solver_type.collection != CollectionKind::Bag);
          CHECK(e.solver_type == solver_type(e.standard_type));
        });
        auto raw = parse_ocl_untyped(inv.text);
        REQUIRE(raw.ok());
        auto a = typecheck(*raw.value, TypeEnv::for_context(inv.context), m);
        auto b = typecheck(*raw.value, TypeEnv::for_context(inv.context), m);
        REQUIRE(a.ok());
        REQUIRE(b.ok());
        CHECK(same_structure(**a.value, **b.value));
        CHECK(same_structure(**a.value, *inv.body));
      }
    }
  }

  TEST_CASE("printed expressions reparse to the same tree")
  {
    const Model m = corpus();
    for (const auto & inv : m.invariants) {
      auto r = parse_ocl(print_ocl(*inv.body), inv.context, m);
      REQUIRE_MESSAGE(r.ok(), print_ocl(*inv.body));
      CHECK(same_structure(**r.value, *inv.body));
    }
  }
}

TEST_SUITE("state commands")
{
  TEST_CASE("create, set and insert")
  {
    const Model m = corpus();
    SystemState one = state_from("!create b1 : Branch", m);
    REQUIRE(one.objects.size() == 1);
    CHECK(one.objects.at("b1").class_name == "Branch");

    SystemState two = state_from("!create e1:Employee\n!create b1:Branch\n!insert (e1,b1) into Employment\n", m);
    CHECK(two.objects.size() == 2);
    CHECK(two.links.size() == 1);
    CHECK(two.links.begin()->association == "Employment");

    SystemState set = state_from("!create e1 : Employee\n!set e1.age := 42\n!set e1.firstName := 'Ann'\n", m);
    CHECK(set.objects.at("e1").attributes.at("age") == Value::integer(42));
    CHECK(set.objects.at("e1").attributes.at("firstName") == Value::string("Ann"));
  }

  TEST_CASE("command errors")
  {
    const Model m = corpus();
    auto code = [&](const std::string & text) {
      auto r = parse_state_commands(text, m);
      CHECK_FALSE(r.ok());
      for (const auto & d : r.diagnostics) CHECK(located_inside(d, text));
      return r.diagnostics.empty() ? std::string() : r.diagnostics.front().code;
    };
    CHECK(code("!create p : Person") == "AbstractInstantiation");
    CHECK(code("!create x : Nope") == "UnknownClass");
    CHECK(code("!create a : Branch\n!create a : Branch") == "DuplicateObjectName");
    CHECK(code("!create e : Employee\n!set e.age := 'old'") == "TypeMismatch");
    CHECK(code("!create e : Employee\n!set e.height := 3") == "UnknownAttribute");
    CHECK(code("!create e : Employee\n!insert (e, b) into Employment") == "UnknownObject");
    CHECK(code("!create e : Employee\n!create c : Customer\n!insert (e, c) into Employment") == "TypeMismatch");
  }
}
