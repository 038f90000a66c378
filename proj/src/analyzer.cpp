#include "bmv/analyzer.hpp"

#include <bit>
#include <functional>

#include "bmv/expr.hpp"

namespace bmv
{

const char * to_string(WarningKind k)
{
  switch (k) {
    case WarningKind::BagCollapse: return "BagCollapse";
    case WarningKind::SumOverDuplicates: return "SumOverDuplicates";
    case WarningKind::TypeContradiction: return "TypeContradiction";
    case WarningKind::BitwidthTooSmall: return "BitwidthTooSmall";
  }
  return "?";
}

int required_bitwidth(std::int64_t v)
{
  const auto magnitude = v >= 0 ? static_cast<std::uint64_t>(v) : ~static_cast<std::uint64_t>(v);
  return static_cast<int>(std::bit_width(magnitude)) + 1;
}

namespace
{

void each_node(const Model & model, const std::function<void(const Invariant &, const Expr &)> & f)
{
  for (const auto & inv : model.invariants) {
    if (!inv.body) continue;
    visit(*inv.body, [&](const Expr & e) { f(inv, e); });
  }
}

Warning make(WarningKind kind, std::string message, const Invariant & inv, const Expr & e)
{
  return Warning{kind, "WARNING: " + std::move(message), e.location, e.text, inv.qualified_name()};
}

bool is_bag(const OclType & t) { return t.collection == CollectionKind::Bag; }

struct Candidate
{
  std::int64_t value = 0;
  SourceLocation location;
  std::string text;
  std::string invariant;
};

// Integer literals in pre-order; a minus directly on a literal folds into it.
void literals(const Invariant & inv, const Expr & e, std::vector<Candidate> & out)
{
  if (e.kind == ExprKind::Unary && e.unary_op == UnaryOp::Negate && e.operand(0).kind == ExprKind::Literal &&
      std::holds_alternative<std::int64_t>(e.operand(0).literal)) {
    const auto v = std::get<std::int64_t>(e.operand(0).literal);
    out.push_back({v == INT64_MIN ? v : -v, e.location, e.text, inv.qualified_name()});
    return;
  }
  if (e.kind == ExprKind::Literal && std::holds_alternative<std::int64_t>(e.literal)) {
    out.push_back({std::get<std::int64_t>(e.literal), e.location, e.text, inv.qualified_name()});
    return;
  }
  for (const auto & op : e.operands) literals(inv, *op, out);
}

}  // namespace

std::vector<Warning> warn_bag_collapse(const Model & model)
{
  std::vector<Warning> out;
  each_node(model, [&](const Invariant & inv, const Expr & e) {
    if (is_bag(e.standard_type) && !is_bag(e.solver_type)) {
      out.push_back(make(WarningKind::BagCollapse,
                         "Collect operation `" + e.text + "' results in unsupported type `Bag'. It will be "
                                                          "interpreted as `Set'.",
                         inv, e));
    }
  });
  return out;
}

std::vector<Warning> warn_sum_over_duplicates(const Model & model)
{
  std::vector<Warning> out;
  each_node(model, [&](const Invariant & inv, const Expr & e) {
    if (e.kind == ExprKind::CollectionOp && e.collection_op == CollectionOpKind::Sum &&
        is_bag(e.operand(0).standard_type)) {
      out.push_back(make(WarningKind::SumOverDuplicates,
                         "The evaluation of sum expression `" + e.text +
                           "' might be wrong if source contains duplicates (Collection is interpreted as Set).",
                         inv, e));
    }
  });
  return out;
}

std::vector<Warning> warn_type_contradictions(const Model & model)
{
  std::vector<Warning> out;
  each_node(model, [&](const Invariant & inv, const Expr & e) {
    if (e.kind != ExprKind::Binary || (e.binary_op != BinaryOp::Equal && e.binary_op != BinaryOp::NotEqual)) return;
    const OclType & l = e.operand(0).standard_type;
    const OclType & r = e.operand(1).standard_type;
    if (!l.is_collection() || !r.is_collection() || l.collection == r.collection) return;
    const char * never = e.binary_op == BinaryOp::Equal ? "true" : "false";
    out.push_back(make(WarningKind::TypeContradiction,
                       "Expression `" + e.text + "' can never evaluate to " + never + " because `" + to_string(l) +
                         "' and `" + to_string(r) + "' are unrelated.",
                       inv, e));
  });
  return out;
}

std::vector<Warning> warn_bitwidth(const Model & model, const Configuration & config)
{
  std::vector<Candidate> candidates;
  for (const auto & inv : model.invariants) {
    if (inv.body) literals(inv, *inv.body, candidates);
  }
  const SourceLocation here{"<config:" + config.name + ">", 1, 1};
  candidates.push_back({config.integer_min, here, "Integer_min", {}});
  candidates.push_back({config.integer_max, here, "Integer_max", {}});
  for (const auto & [key, d] : config.attribute_domains) {
    const std::string prefix = key.first + "_" + key.second;
    if (d.values) {
      for (const auto & v : *d.values) {
        if (v.is_integer()) candidates.push_back({v.as_integer(), here, prefix, {}});
      }
    }
    if (d.min) candidates.push_back({*d.min, here, prefix + "_min", {}});
    if (d.max) candidates.push_back({*d.max, here, prefix + "_max", {}});
  }

  const Candidate * worst = nullptr;
  for (const auto & c : candidates) {
    if (worst == nullptr || required_bitwidth(c.value) > required_bitwidth(worst->value)) worst = &c;
  }
  if (worst == nullptr || required_bitwidth(worst->value) <= config.bitwidth) return {};
  const int k = required_bitwidth(worst->value);
  return {Warning{WarningKind::BitwidthTooSmall,
                  "WARNING: The configured bitwidth is too small for the property Integer max value (" +
                    std::to_string(worst->value) + "). Required bitwidth: " + std::to_string(k) + " or greater.",
                  worst->location, worst->text, worst->invariant}};
}

std::vector<Warning> analyze_all(const Model & model, const Configuration * config)
{
  std::vector<Warning> out = warn_bag_collapse(model);
  for (auto * f : {&warn_sum_over_duplicates, &warn_type_contradictions}) {
    auto more = f(model);
    out.insert(out.end(), more.begin(), more.end());
  }
  if (config != nullptr) {
    auto more = warn_bitwidth(model, *config);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

}  // namespace bmv
