#include <doctest.h>

#include <json.hpp>

#include "bmv/tasks.hpp"
#include "oracle.hpp"
#include "random_problem.hpp"
#include "support.hpp"

using namespace bmv;
using namespace bmv::test;

namespace
{

const char * const ages = "model Ages\nclass Person\nattributes\n  age : Integer\nend\n"
                          "constraints\n"
                          "context Person inv Positive: self.age > 0\n"
                          "context Person inv Negative: self.age < 0\n";

const char * const dup_model = "model Dup\nclass Item\nattributes\n  n : Integer\nend\n"
                         "constraints\n"
                         "context Item inv Positive: self.n > 0\n"
                         "context Item inv PositiveCopy: self.n > 0\n"
                         "context Item inv Small: self.n < 3\n";

bool all_hold(const SystemState & s, const Model & m, const Configuration & c, const std::string & negated = "")
{
  for (const auto & inv : m.invariants) {
    const bool holds = eval_invariant(inv, s, m, EvalMode::solver_mode(c.bitwidth)).holds;
    if (holds != (inv.qualified_name() != negated)) return false;
  }
  return check_structure(s, m).empty() && check_model_inherent(s, m).empty();
}

}  // namespace

TEST_SUITE("tasks")
{
  TEST_CASE("contradictory invariants are inconsistent")
  {
    const Model m = model_from(ages);
    const Configuration c = config_from("[p]\nPerson_min = 1\nPerson_max = 2\n", m);
    const TaskReport r = check_consistency(m, c);
    CHECK(r.outcome == Outcome::Fails);
    CHECK(r.verdict == "inconsistent within bounds");
    CHECK_FALSE(r.witness);

    Configuration empty_allowed = c;
    empty_allowed.class_bounds["Person"] = Bound{0, 2};
    const TaskReport e = check_consistency(m, empty_allowed);
    CHECK(e.outcome == Outcome::Holds);
    REQUIRE(e.witness);
    CHECK(e.witness->objects.empty());
  }

  TEST_CASE("empty model is consistent")
  {
    const Model m = model_from("model Empty");
    const TaskReport r = check_consistency(m, default_config(m));
    CHECK(r.outcome == Outcome::Holds);
    CHECK(r.verdict == "consistent within bounds");
  }

  TEST_CASE("corpus is consistent under every shipped configuration but groups")
  {
    const Model m = corpus();
    for (const auto & c : corpus_configs(m).configs) {
      Configuration all_active = c;
      all_active.invariant_flags.clear();
      const TaskReport r = check_consistency(m, all_active);
      CHECK_MESSAGE(r.outcome == Outcome::Holds, c.name);
      if (r.witness) CHECK(all_hold(*r.witness, m, all_active));
    }
  }

  TEST_CASE("duplicated invariant is not independent")
  {
    const Model m = model_from(dup_model);
    const Configuration c = config_from("[d]\nInteger_min = -3\nInteger_max = 3\nItem_min = 1\nItem_max = 2\n", m);
    const TaskReport copy = check_independence(m, c, "Item::PositiveCopy");
    CHECK(copy.outcome == Outcome::Fails);
    CHECK(copy.verdict == "not independent within bounds");
    CHECK_FALSE(copy.vacuous);

    const TaskReport small = check_independence(m, c, "Item::Small");
    CHECK(small.outcome == Outcome::Holds);
    REQUIRE(small.witness);
    CHECK(all_hold(*small.witness, m, c, "Item::Small"));

    CHECK_THROWS_AS(check_independence(m, c, "Item::Nope"), Error);
    try {
      (void)check_independence(m, c, "Item::Nope");
    } catch (const Error & err) {
      CHECK(err.code() == "UnknownInvariant");
    }
  }

  TEST_CASE("zero bound on the context class is vacuous")
  {
    const Model m = model_from(dup_model);
    const Configuration c = config_from("[z]\nItem_min = 0\nItem_max = 0\n", m);
    const TaskReport r = check_independence(m, c, "Item::Small");
    CHECK(r.outcome == Outcome::Fails);
    CHECK(r.vacuous);
    CHECK(r.details.find("(vacuous)") != std::string::npos);
  }

  TEST_CASE("run all keeps declaration order and witnesses re-validate")
  {
    const Model m = corpus();
    const Configuration c = *corpus_configs(m).find("full");
    TaskOptions o;
    o.timeout = std::chrono::milliseconds(3000);
    const std::vector<TaskReport> reports = run_all_independence(m, c, o);
    REQUIRE(reports.size() == m.invariants.size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
      CHECK(reports[i].invariant == m.invariants[i].qualified_name());
      if (reports[i].witness) CHECK(all_hold(*reports[i].witness, m, c, reports[i].invariant));
      // at most three employees aged at most 10 never exceed the budget
      const bool bounded = reports[i].invariant == "Branch::StaffAgeBudget";
      CHECK_MESSAGE((reports[i].outcome == Outcome::Holds) != bounded, reports[i].invariant);
    }
  }

  TEST_CASE("independence agrees with the brute-force oracle")
  {
    ProblemGenerator gen(31337);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
      const RandomProblem rp = gen.next(2e4);
      INFO(rp.model_text);
      for (const auto & inv : rp.model.invariants) {
        Configuration c = rp.config;
        c.invariant_flags.clear();
        const TaskReport r = check_independence(rp.model, c, inv.qualified_name());
        c.invariant_flags[inv.qualified_name()] = InvariantFlag::Negated;
        BruteForce oracle(rp.model, c);
        oracle.stop_at_first = true;
        CHECK((r.outcome == Outcome::Holds) == (oracle.run().satisfying > 0));
        ++checked;
      }
    }
    CHECK(checked > 30);
  }

  TEST_CASE("inconclusive when stopped")
  {
    const Model m = corpus();
    TaskOptions o;
    o.timeout = std::chrono::milliseconds(0);
    const TaskReport r = check_consistency(m, *corpus_configs(m).find("full"), o);
    CHECK(r.outcome == Outcome::Inconclusive);
    CHECK(r.verdict == "inconclusive");
  }

  TEST_CASE("rendering")
  {
    const Model m = model_from(dup_model);
    const Configuration c = config_from("[d]\nInteger_min = -3\nInteger_max = 3\nItem_min = 1\nItem_max = 2\n", m);
    const TaskReport small = check_independence(m, c, "Item::Small");
    const auto j = nlohmann::json::parse(render_json(small));
    CHECK(j["task"] == "independence");
    CHECK(j["invariant"] == "Item::Small");
    CHECK(j["outcome"] == "holds");
    CHECK(j["vacuous"] == false);
    CHECK(import_json(j["witness"].dump()) == *small.witness);

    const TaskReport cons = check_consistency(m, c);
    const auto jc = nlohmann::json::parse(render_json(cons));
    CHECK_FALSE(jc.contains("invariant"));

    const auto list = nlohmann::json::parse(render_json(run_all_independence(m, c)));
    REQUIRE(list.is_array());
    CHECK(list.size() == 3);

    const std::string text = render_text(small);
    CHECK(text.rfind("Independence of Item::Small: independent within bounds\n", 0) == 0);
  }
}
