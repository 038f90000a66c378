#include <doctest.h>

#include <random>

#include "random_data.hpp"
#include "random_problem.hpp"
#include "support.hpp"

using namespace bmv;
using namespace bmv::test;

namespace
{

const EvalMode standard = EvalMode::standard();

Value ev(const std::string & ocl, const Model & m, const SystemState & s, const EvalMode & mode,
         const std::string & context = "Branch", const std::string & self = "")
{
  return eval_text(ocl, context, m, s, mode, self);
}

SystemState aged_staff(const Model & m)
{
  return state_from("!create b1 : Branch\n"
                    "!create e1 : Employee\n!create e2 : Employee\n!create e3 : Employee\n"
                    "!set e1.age := 2\n!set e2.age := 2\n!set e3.age := 3\n"
                    "!insert (e1, b1) into Employment\n!insert (e2, b1) into Employment\n"
                    "!insert (e3, b1) into Employment\n",
                    m);
}

// Random integer/boolean expressions over Employee attributes.
class ExprGen
{
public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  std::string integer(int depth)
  {
    const int choice = pick(0, depth <= 0 ? 2 : 8);
    switch (choice) {
      case 0: return std::to_string(pick(0, 5));
      case 1: return "self.age";
      case 2: return "self.salary";
      case 3: return "(" + integer(depth - 1) + " + " + integer(depth - 1) + ")";
      case 4: return "(" + integer(depth - 1) + " - " + integer(depth - 1) + ")";
      case 5: return "(" + integer(depth - 1) + " * " + integer(depth - 1) + ")";
      case 6: return "(" + integer(depth - 1) + " div " + integer(depth - 1) + ")";
      case 7: return "Employee.allInstances()->select(e | " + boolean(depth - 1, "e") + ")->size()";
      default: return "Set{" + integer(depth - 1) + ", " + integer(depth - 1) + "}->sum()";
    }
  }

  std::string boolean(int depth, const std::string & var = "self")
  {
    const int choice = pick(0, depth <= 0 ? 1 : 7);
    switch (choice) {
      case 0: return var + ".age > " + std::to_string(pick(-5, 5));
      case 1: return var + ".salary <= " + var + ".age";
      case 2: return "(" + boolean(depth - 1, var) + " and " + boolean(depth - 1, var) + ")";
      case 3: return "(" + boolean(depth - 1, var) + " or " + boolean(depth - 1, var) + ")";
      case 4: return "(" + boolean(depth - 1, var) + " implies " + boolean(depth - 1, var) + ")";
      case 5: return "not (" + boolean(depth - 1, var) + ")";
      case 6: return integer(depth - 1) + " <> " + integer(depth - 1);
      default: return "Employee.allInstances()->forAll(o | " + boolean(depth - 1, "o") + ")";
    }
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
  std::mt19937_64 rng_;
};

}  // namespace

TEST_SUITE("evaluator")
{
  TEST_CASE("set literal idempotence")
  {
    const Model m = corpus();
    CHECK(ev("Set{2,3}->including(2)->size()", m, {}, standard) == Value::integer(2));
    CHECK(ev("Bag{2,3}->including(2)->size()", m, {}, standard) == Value::integer(3));
  }

  TEST_CASE("sum over a collected bag differs between modes")
  {
    const Model m = corpus();
    const SystemState s = aged_staff(m);
    CHECK(ev("self.employee.age->sum()", m, s, standard, "Branch", "b1") == Value::integer(7));
    CHECK(ev("self.employee.age->sum()", m, s, EvalMode::solver_mode(8), "Branch", "b1") == Value::integer(5));
    CHECK(ev("self.employee.age", m, s, standard, "Branch", "b1") ==
          Value::bag({Value::integer(2), Value::integer(2), Value::integer(3)}));
    CHECK(ev("self.employee.age", m, s, EvalMode::solver_mode(8), "Branch", "b1") ==
          Value::set({Value::integer(2), Value::integer(3)}));
  }

  TEST_CASE("Set and Bag equality")
  {
    const Model m = corpus();
    CHECK(ev("Set{ 1 } = Bag{ 1 }", m, {}, standard) == Value::boolean(false));
    CHECK(ev("Set{ 1 } = Bag{ 1 }", m, {}, EvalMode::solver_mode(8)) == Value::boolean(true));
    CHECK(ev("Set{ 1 } <> Bag{ 1 }", m, {}, standard) == Value::boolean(true));
  }

  TEST_CASE("solver arithmetic wraps")
  {
    const Model m = corpus();
    CHECK(ev("120 + 10", m, {}, EvalMode::solver_mode(8)) == Value::integer(-126));
    CHECK(ev("120 + 10", m, {}, standard) == Value::integer(130));
    CHECK(ev("-128 - 1", m, {}, EvalMode::solver_mode(8)) == Value::integer(127));
    CHECK(ev("64 * 2", m, {}, EvalMode::solver_mode(8)) == Value::integer(-128));
  }

  TEST_CASE("wrap_to_bitwidth against modular arithmetic")
  {
    std::mt19937_64 rng(1);
    for (int k = 1; k <= 20; ++k) {
      const std::int64_t size = std::int64_t{1} << k;
      for (int i = 0; i < 2000; ++i) {
        const std::int64_t v = std::uniform_int_distribution<std::int64_t>(-5 * size, 5 * size)(rng);
        std::int64_t r = ((v % size) + size) % size;
        if (r >= size / 2) r -= size;
        CHECK(wrap_to_bitwidth(v, k) == r);
      }
    }
  }

  TEST_CASE("undefined handling")
  {
    const Model m = corpus();
    const SystemState s = state_from("!create b1 : Branch\n!create e1 : Employee\n!set e1.age := 4\n", m);
    auto at_b1 = [&](const std::string & ocl) { return ev(ocl, m, s, standard, "Branch", "b1"); };
    CHECK(at_b1("self.manager.age").is_undefined());
    CHECK(at_b1("self.manager.age > 1").is_undefined());
    CHECK(at_b1("false and self.manager.age > 1") == Value::boolean(false));
    CHECK(at_b1("self.manager.age > 1 and false") == Value::boolean(false));
    CHECK(at_b1("true or self.manager.age > 1") == Value::boolean(true));
    CHECK(at_b1("self.manager.age > 1 implies true") == Value::boolean(true));
    CHECK(at_b1("false implies self.manager.age > 1") == Value::boolean(true));
    CHECK(at_b1("self.manager.age > 1 and true").is_undefined());
    CHECK(at_b1("self.manager.oclIsUndefined()") == Value::boolean(true));
    CHECK(at_b1("self.manager->isEmpty()") == Value::boolean(true));
    CHECK(at_b1("5 div 0").is_undefined());
    CHECK(at_b1("7 div 2") == Value::integer(3));
    CHECK(at_b1("-7 div 2") == Value::integer(-3));
  }

  TEST_CASE("invariants over states")
  {
    const Model m = corpus();
    const Invariant & cycle = *m.find_invariant("CarGroup::CycleFree");

    const SystemState two = state_from("!create g1 : CarGroup\n!create g2 : CarGroup\n"
                                       "!insert (g1, g2) into GroupHierarchy\n!insert (g2, g1) into GroupHierarchy\n",
                                       m);
    InvariantResult r = eval_invariant(cycle, two, m, standard);
    CHECK_FALSE(r.holds);
    CHECK(r.violators == std::vector<std::string>{"g1", "g2"});

    const SystemState chain = state_from("!create g1 : CarGroup\n!create g2 : CarGroup\n!create g3 : CarGroup\n"
                                         "!insert (g2, g1) into GroupHierarchy\n!insert (g3, g2) into GroupHierarchy\n",
                                         m);
    CHECK(eval_invariant(cycle, chain, m, standard).holds);

    for (const auto & inv : m.invariants) CHECK(eval_invariant(inv, SystemState{}, m, standard).holds);

    const SystemState scenario = state_from("!create c1 : Customer\n!create e1 : Employee\n!create b1 : Branch\n"
                                            "!insert (e1, b1) into Employment\n!insert (e1, b1) into Management\n",
                                            m);
    CHECK(eval_invariant(*m.find_invariant("Employee::EmployeeConnected"), scenario, m, standard).holds);
    CHECK(eval_invariant(*m.find_invariant("Branch::ManagerIsEmployee"), scenario, m, standard).holds);

    const SystemState unset = state_from("!create e1 : Employee\n", m);
    InvariantResult u = eval_invariant(*m.find_invariant("Person::NonNegativeAge"), unset, m, standard);
    CHECK_FALSE(u.holds);
    CHECK(u.per_object.at("e1").is_undefined());
  }

  TEST_CASE("closure")
  {
    const Model m = corpus();
    const SystemState chain = state_from("!create g1 : CarGroup\n!create g2 : CarGroup\n!create g3 : CarGroup\n"
                                         "!insert (g2, g1) into GroupHierarchy\n!insert (g3, g2) into GroupHierarchy\n",
                                         m);
    CHECK(ev("self.parent->closure(parent)", m, chain, standard, "CarGroup", "g1") ==
          Value::set({Value::object("g3")}));
    const SystemState loop = state_from("!create g : CarGroup\n!insert (g, g) into GroupHierarchy\n", m);
    CHECK(ev("Set{self}->closure(parent)", m, loop, standard, "CarGroup", "g") == Value::set({Value::object("g")}));
    const SystemState alone = state_from("!create g : CarGroup\n", m);
    CHECK(ev("Set{self}->closure(parent)", m, alone, standard, "CarGroup", "g") == Value::set({}));

    auto step = [](const Value & v) {
      const std::int64_t i = v.as_integer();
      return i < 5 ? std::vector<Value>{Value::integer(i + 1)} : std::vector<Value>{};
    };
    CHECK(closure({Value::integer(1)}, step).size() == 4);
    auto cyclic = [](const Value & v) { return std::vector<Value>{Value::integer((v.as_integer() + 1) % 3)}; };
    CHECK(closure({Value::integer(0)}, cyclic).size() == 3);
  }

  TEST_CASE("iterators and collection operations")
  {
    const Model m = corpus();
    const SystemState s = aged_staff(m);
    auto at_b1 = [&](const std::string & ocl) { return ev(ocl, m, s, standard, "Branch", "b1"); };
    CHECK(at_b1("self.employee->select(e | e.age = 2)->size()") == Value::integer(2));
    CHECK(at_b1("self.employee->reject(e | e.age = 2)->size()") == Value::integer(1));
    CHECK(at_b1("self.employee->exists(e | e.age = 3)") == Value::boolean(true));
    CHECK(at_b1("self.employee->forAll(e | e.age > 2)") == Value::boolean(false));
    CHECK(at_b1("self.employee->one(e | e.age = 3)") == Value::boolean(true));
    CHECK(at_b1("self.employee->isUnique(age)") == Value::boolean(false));
    CHECK(at_b1("self.employee->forAll(a, b | a <> b implies a.age <= b.age + 1)") == Value::boolean(true));
    CHECK(at_b1("self.employee->collect(age)->asSet()->sum()") == Value::integer(5));
    CHECK(at_b1("Set{1, 2}->union(Set{2, 3})") == Value::set({Value::integer(1), Value::integer(2), Value::integer(3)}));
    CHECK(at_b1("Bag{1, 2}->union(Bag{2})->size()") == Value::integer(3));
    CHECK(at_b1("Set{1, 2}->intersection(Set{2, 3})") == Value::set({Value::integer(2)}));
    CHECK(at_b1("Set{1, 2}->excluding(1)->includes(1)") == Value::boolean(false));
    CHECK(at_b1("self.employee->includes(self.manager)").is_undefined());
    CHECK(at_b1("Person.allInstances()->size()") == Value::integer(3));
    CHECK(at_b1("Employee.allInstances()->forAll(e | e.oclIsKindOf(Person))") == Value::boolean(true));
  }

  TEST_CASE("modes agree without bags or overflow")
  {
    const Model m = corpus();
    DataGenerator data(8);
    ExprGen gen(21);
    int compared = 0;
    for (int i = 0; i < 400; ++i) {
      const SystemState s = data.valid_state(m);
      std::string self;
      for (const auto & [name, obj] : s.objects) {
        if (obj.class_name == "Employee") self = name;
      }
      if (self.empty()) continue;
      const std::string ocl = gen.pick(0, 1) ? gen.integer(3) : gen.boolean(3);
      auto r = parse_ocl(ocl, "Employee", m);
      REQUIRE_MESSAGE(r.ok(), messages(r.diagnostics) << ocl);
      bool has_bag = false;
      visit(**r.value, [&](const Expr & e) { has_bag = has_bag || e.standard_type.collection == CollectionKind::Bag; });
      if (has_bag) continue;
      Bindings b{{"self", Value::object(self)}};
      const Value a = eval(**r.value, s, m, b, standard);
      const Value c = eval(**r.value, s, m, b, EvalMode::solver_mode(40));
      CHECK_MESSAGE(a == c, ocl);
      CHECK(eval(**r.value, s, m, b, standard) == a);
      ++compared;
    }
    CHECK(compared > 100);
  }

  TEST_CASE("solver integers stay within the bitwidth and collections are sets")
  {
    const Model m = corpus();
    DataGenerator data(9);
    ExprGen gen(33);
    for (int i = 0; i < 400; ++i) {
      const SystemState s = data.valid_state(m);
      std::string self;
      for (const auto & [name, obj] : s.objects) {
        if (obj.class_name == "Employee") self = name;
      }
      if (self.empty()) continue;
      const int k = gen.pick(2, 10);
      const std::string ocl = gen.integer(3);
      auto r = parse_ocl(ocl, "Employee", m);
      REQUIRE(r.ok());
      const Value v = eval(**r.value, s, m, {{"self", Value::object(self)}}, EvalMode::solver_mode(k));
      if (v.is_integer()) {
        CHECK(v.as_integer() >= -(std::int64_t{1} << (k - 1)));
        CHECK(v.as_integer() <= (std::int64_t{1} << (k - 1)) - 1);
      }
      const Value ages = ev("Employee.allInstances().age", m, s, EvalMode::solver_mode(k), "Employee", self);
      CHECK(ages.as_collection().kind == CollectionKind::Set);
    }
  }
}
