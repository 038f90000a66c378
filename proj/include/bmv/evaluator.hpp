// bmv/evaluator.hpp - OCL evaluation in standard and solver semantics
#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "bmv/expr.hpp"
#include "bmv/model.hpp"
#include "bmv/state.hpp"
#include "bmv/value.hpp"

namespace bmv
{

/// Standard OCL, or the solver reading: Bags collapse to Sets at the node
/// that produces them and integers wrap to a signed `bitwidth`-bit range.
struct EvalMode
{
  bool solver = false;
  int bitwidth = 32;
  /// Called with the producing node whenever a Bag is collapsed.
  std::function<void(const Expr &)> on_collapse;

  static EvalMode standard() { return {}; }
  static EvalMode solver_mode(int bitwidth) { return EvalMode{true, bitwidth, {}}; }
};

/// Two's-complement wrap of `v` into [-2^(k-1), 2^(k-1)-1].
std::int64_t wrap_to_bitwidth(std::int64_t v, int k);

/// Thrown by a StateView when a read touches a slot or link set that has
/// not been decided yet (partial states during search).
struct UnresolvedRead : std::exception
{
  [[nodiscard]] const char * what() const noexcept override { return "unresolved read"; }
};

/// Read access to a system state. Object lists are sorted by name.
class StateView
{
public:
  virtual ~StateView() = default;
  /// Instances of `cls` and of its subclasses.
  [[nodiscard]] virtual const std::vector<std::string> & instances_of(const std::string & cls) const = 0;
  [[nodiscard]] virtual const std::string & class_of(const std::string & object) const = 0;
  [[nodiscard]] virtual Value attribute(const std::string & object, const std::string & attr) const = 0;
  /// Objects linked to `object` at end `to_end` of `association`.
  [[nodiscard]] virtual std::vector<std::string> navigate(const std::string & object, const std::string & association,
                                                          int to_end) const = 0;
};

/// StateView over a complete SystemState.
class StateIndex : public StateView
{
public:
  StateIndex(const SystemState & state, const Model & model);

  [[nodiscard]] const std::vector<std::string> & instances_of(const std::string & cls) const override;
  [[nodiscard]] const std::string & class_of(const std::string & object) const override;
  [[nodiscard]] Value attribute(const std::string & object, const std::string & attr) const override;
  [[nodiscard]] std::vector<std::string> navigate(const std::string & object, const std::string & association,
                                                  int to_end) const override;

private:
  const SystemState & state_;
  std::map<std::string, std::vector<std::string>, std::less<>> extents_;
  // (association, to_end, object) -> partners
  std::map<std::tuple<std::string, int, std::string>, std::vector<std::string>> partners_;
};

using Bindings = std::map<std::string, Value, std::less<>>;

/// Evaluates a typechecked expression. Domain problems (division by zero,
/// absent links, undefined slots) give undefined, never an error.
Value eval(const Expr & expr, const StateView & state, const Bindings & bindings, const EvalMode & mode);
Value eval(const Expr & expr, const SystemState & state, const Model & model, const Bindings & bindings,
           const EvalMode & mode);

struct InvariantResult
{
  bool holds = true;                      // every instance yields true
  std::map<std::string, Value> per_object;  // object -> body value
  std::vector<std::string> violators;     // false or undefined
};

InvariantResult eval_invariant(const Invariant & inv, const StateView & state, const EvalMode & mode);
InvariantResult eval_invariant(const Invariant & inv, const SystemState & state, const Model & model,
                               const EvalMode & mode);

/// Everything reachable from `start` in one or more `step`s. An element of
/// `start` is included only when it is reachable from itself.
std::vector<Value> closure(const std::vector<Value> & start, const std::function<std::vector<Value>(const Value &)> & step);

}  // namespace bmv
