#include "bmv/evaluator.hpp"

#include <algorithm>
#include <set>

#include "bmv/diagnostics.hpp"

namespace bmv
{

std::int64_t wrap_to_bitwidth(std::int64_t v, int k)
{
  if (k >= 64) return v;
  const auto modulus = std::uint64_t{1} << k;
  std::uint64_t u = static_cast<std::uint64_t>(v) & (modulus - 1);
  if (u >= modulus / 2) u -= modulus;  // wraps through unsigned arithmetic
  return static_cast<std::int64_t>(u);
}

StateIndex::StateIndex(const SystemState & state, const Model & model) : state_(state)
{
  for (const auto & cls : model.classes) {
    auto & extent = extents_[cls.name];
    for (const auto & [name, obj] : state.objects) {
      if (model.is_kind_of(obj.class_name, cls.name)) extent.push_back(name);
    }
  }
  for (const Link & l : state.links) {
    partners_[{l.association, 1, l.first}].push_back(l.second);
    partners_[{l.association, 0, l.second}].push_back(l.first);
  }
}

const std::vector<std::string> & StateIndex::instances_of(const std::string & cls) const
{
  static const std::vector<std::string> none;
  auto it = extents_.find(cls);
  return it == extents_.end() ? none : it->second;
}

const std::string & StateIndex::class_of(const std::string & object) const
{
  const ObjectState * obj = state_.find(object);
  if (obj == nullptr) throw Error("EvalError", "unknown object `" + object + "'");
  return obj->class_name;
}

Value StateIndex::attribute(const std::string & object, const std::string & attr) const
{
  const ObjectState * obj = state_.find(object);
  if (obj == nullptr) throw Error("EvalError", "unknown object `" + object + "'");
  auto it = obj->attributes.find(attr);
  return it == obj->attributes.end() ? Value::undefined() : it->second;
}

std::vector<std::string> StateIndex::navigate(const std::string & object, const std::string & association,
                                              int to_end) const
{
  auto it = partners_.find({association, to_end, object});
  return it == partners_.end() ? std::vector<std::string>{} : it->second;
}

std::vector<Value> closure(const std::vector<Value> & start,
                           const std::function<std::vector<Value>(const Value &)> & step)
{
  std::set<Value> reached;
  std::vector<Value> frontier = start;
  while (!frontier.empty()) {
    const Value v = frontier.back();
    frontier.pop_back();
    for (auto & next : step(v)) {
      if (reached.insert(next).second) frontier.push_back(next);
    }
  }
  return {reached.begin(), reached.end()};
}

namespace
{

const std::vector<Value> & elements(const Value & v) { return v.as_collection().elements; }

class Evaluator
{
public:
  Evaluator(const StateView & state, const Bindings & bindings, const EvalMode & mode)
  : state_(state), bindings_(bindings), mode_(mode)
  {
  }

  Value eval(const Expr & e)
  {
    if (!e.typed) throw Error("EvalError", "expression `" + e.text + "' has not been typechecked");
    return finish(e, compute(e));
  }

private:
  // Solver reading of a freshly produced value.
  Value finish(const Expr & e, Value v) const
  {
    if (!mode_.solver) return v;
    if (v.is_integer()) return Value::integer(wrap_to_bitwidth(v.as_integer(), mode_.bitwidth));
    if (v.is_collection() && v.as_collection().kind == CollectionKind::Bag) {
      if (mode_.on_collapse) mode_.on_collapse(e);
      return Value::set(elements(v));
    }
    return v;
  }

  Value lookup(const std::string & name) const
  {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (*it->first == name) return it->second;
    }
    auto it = bindings_.find(name);
    if (it == bindings_.end()) throw Error("EvalError", "unbound variable `" + name + "'");
    return it->second;
  }

  // Source of a `->` operation: a collection, or undefined.
  Value source(const Expr & e)
  {
    Value v = eval(e.operand(0));
    if (!e.implicit_set) return v;
    if (v.is_undefined()) return Value::set({});
    if (v.is_collection()) return v;
    return Value::set({std::move(v)});
  }

  static CollectionKind result_kind(const Expr & e) { return e.standard_type.collection; }

  Value compute(const Expr & e)
  {
    switch (e.kind) {
      case ExprKind::Literal: return literal(e);
      case ExprKind::CollectionLiteral: {
        std::vector<Value> items;
        for (const auto & op : e.operands) {
          Value v = eval(*op);
          if (v.is_undefined()) return v;
          items.push_back(std::move(v));
        }
        return Value::collection(e.collection_kind, std::move(items));
      }
      case ExprKind::Variable: return lookup(e.name);
      case ExprKind::Attribute: return attribute(e);
      case ExprKind::Navigation: return navigation(e);
      case ExprKind::AllInstances: {
        std::vector<Value> items;
        for (const auto & name : state_.instances_of(e.name)) items.push_back(Value::object(name));
        return Value::set(std::move(items));
      }
      case ExprKind::Binary: return binary(e);
      case ExprKind::Unary: return unary(e);
      case ExprKind::Iterator: return iterator(e);
      case ExprKind::CollectionOp: return collection_op(e);
      case ExprKind::ObjectOp: return object_op(e);
      default: throw Error("EvalError", "unexpected parse-tree node in `" + e.text + "'");
    }
  }

  static Value literal(const Expr & e)
  {
    return std::visit(
      [](const auto & x) -> Value {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return Value::integer(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return Value::real(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return Value::string(x);
        } else {
          return Value::boolean(x);
        }
      },
      e.literal);
  }

  Value attribute(const Expr & e)
  {
    Value src = eval(e.operand(0));
    if (src.is_undefined()) return src;
    if (!e.implicit_collect) return state_.attribute(src.as_object(), e.name);
    std::vector<Value> items;
    for (const auto & obj : elements(src)) {
      Value v = state_.attribute(obj.as_object(), e.name);
      if (v.is_undefined()) return v;
      items.push_back(std::move(v));
    }
    return Value::bag(std::move(items));
  }

  Value navigation(const Expr & e)
  {
    Value src = eval(e.operand(0));
    if (src.is_undefined()) return src;
    if (!e.implicit_collect) {
      auto partners = state_.navigate(src.as_object(), e.association, e.to_end);
      if (e.standard_type.is_object()) {
        return partners.size() == 1 ? Value::object(partners.front()) : Value::undefined();
      }
      std::vector<Value> items;
      for (auto & p : partners) items.push_back(Value::object(std::move(p)));
      return Value::set(std::move(items));
    }
    std::vector<Value> items;
    for (const auto & obj : elements(src)) {
      for (auto & p : state_.navigate(obj.as_object(), e.association, e.to_end)) {
        items.push_back(Value::object(std::move(p)));
      }
    }
    return Value::bag(std::move(items));
  }

  Value binary(const Expr & e)
  {
    const BinaryOp op = e.binary_op;
    if (op == BinaryOp::And || op == BinaryOp::Or || op == BinaryOp::Implies) {
      const Value l = eval(e.operand(0));
      // Short-circuit only where the result no longer depends on the right side.
      if (l.is_boolean()) {
        if (op == BinaryOp::And && !l.as_boolean()) return l;
        if (op == BinaryOp::Or && l.as_boolean()) return l;
        if (op == BinaryOp::Implies && !l.as_boolean()) return Value::boolean(true);
      }
      const Value r = eval(e.operand(1));
      const bool dominant = op != BinaryOp::And;  // value of r that decides alone
      if (r.is_boolean() && r.as_boolean() == dominant) return Value::boolean(dominant);
      if (l.is_undefined() || r.is_undefined()) return Value::undefined();
      if (op == BinaryOp::Implies) return Value::boolean(!l.as_boolean() || r.as_boolean());
      return r;
    }

    const Value l = eval(e.operand(0));
    const Value r = eval(e.operand(1));
    if (l.is_undefined() || r.is_undefined()) return Value::undefined();
    switch (op) {
      case BinaryOp::Equal: return Value::boolean(ocl_equal(l, r));
      case BinaryOp::NotEqual: return Value::boolean(!ocl_equal(l, r));
      case BinaryOp::Less:
      case BinaryOp::LessEqual:
      case BinaryOp::Greater:
      case BinaryOp::GreaterEqual: {
        int c = 0;
        if (l.is_string()) {
          c = l.as_string().compare(r.as_string());
        } else if (l.is_integer() && r.is_integer()) {
          c = (l.as_integer() > r.as_integer()) - (l.as_integer() < r.as_integer());
        } else {
          c = (l.as_number() > r.as_number()) - (l.as_number() < r.as_number());
        }
        switch (op) {
          case BinaryOp::Less: return Value::boolean(c < 0);
          case BinaryOp::LessEqual: return Value::boolean(c <= 0);
          case BinaryOp::Greater: return Value::boolean(c > 0);
          default: return Value::boolean(c >= 0);
        }
      }
      case BinaryOp::Plus:
      case BinaryOp::Minus:
      case BinaryOp::Times:
      case BinaryOp::Div: return arithmetic(op, l, r);
      default: break;
    }
    throw Error("EvalError", "unhandled operator in `" + e.text + "'");
  }

  Value arithmetic(BinaryOp op, const Value & l, const Value & r) const
  {
    if (l.is_integer() && r.is_integer()) {
      const std::int64_t a = l.as_integer();
      const std::int64_t b = r.as_integer();
      std::int64_t out = 0;
      bool overflow = false;
      switch (op) {
        case BinaryOp::Plus: overflow = __builtin_add_overflow(a, b, &out); break;
        case BinaryOp::Minus: overflow = __builtin_sub_overflow(a, b, &out); break;
        case BinaryOp::Times: overflow = __builtin_mul_overflow(a, b, &out); break;
        default:
          if (b == 0) return Value::undefined();
          if (a == INT64_MIN && b == -1) {
            overflow = true;
          } else {
            out = a / b;
          }
      }
      if (overflow) {
        if (!mode_.solver) return Value::undefined();
        // Operands are within the bitwidth, so the wrapped unsigned result is exact.
        std::uint64_t u = 0;
        if (op == BinaryOp::Plus) u = static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b);
        if (op == BinaryOp::Minus) u = static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b);
        if (op == BinaryOp::Times) u = static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b);
        if (op == BinaryOp::Div) u = static_cast<std::uint64_t>(a);
        out = static_cast<std::int64_t>(u);
      }
      return Value::integer(out);
    }
    const double a = l.as_number();
    const double b = r.as_number();
    return Value::real(op == BinaryOp::Plus ? a + b : a - b);
  }

  Value unary(const Expr & e)
  {
    const Value v = eval(e.operand(0));
    if (v.is_undefined()) return v;
    if (e.unary_op == UnaryOp::Not) return Value::boolean(!v.as_boolean());
    if (v.is_real()) return Value::real(-v.as_real());
    const std::int64_t i = v.as_integer();
    if (i == INT64_MIN) return mode_.solver ? v : Value::undefined();
    return Value::integer(-i);
  }

  // Runs the body once per element with the iterator variable bound.
  template <typename F>
  bool each(const Expr & e, const Value & coll, F && f)
  {
    scope_.emplace_back(&e.variables.at(0), Value());
    for (const auto & item : elements(coll)) {
      scope_.back().second = item;
      if (!f(item, eval(e.operand(1)))) {
        scope_.pop_back();
        return false;
      }
    }
    scope_.pop_back();
    return true;
  }

  Value iterator(const Expr & e)
  {
    const Value coll = source(e);
    if (coll.is_undefined()) return coll;
    switch (e.iterator) {
      case IteratorKind::ForAll:
      case IteratorKind::Exists: {
        const bool decisive = e.iterator == IteratorKind::Exists;
        bool unknown = false;
        const bool finished = each(e, coll, [&](const Value &, const Value & b) {
          if (b.is_undefined()) {
            unknown = true;
            return true;
          }
          return b.as_boolean() != decisive;
        });
        if (!finished) return Value::boolean(decisive);
        return unknown ? Value::undefined() : Value::boolean(!decisive);
      }
      case IteratorKind::One: {
        int hits = 0;
        bool unknown = false;
        each(e, coll, [&](const Value &, const Value & b) {
          if (b.is_undefined()) {
            unknown = true;
          } else if (b.as_boolean()) {
            ++hits;
          }
          return true;
        });
        if (unknown) return Value::undefined();
        return Value::boolean(hits == 1);
      }
      case IteratorKind::Select:
      case IteratorKind::Reject: {
        const bool keep = e.iterator == IteratorKind::Select;
        std::vector<Value> items;
        bool unknown = false;
        each(e, coll, [&](const Value & item, const Value & b) {
          if (b.is_undefined()) {
            unknown = true;
            return false;
          }
          if (b.as_boolean() == keep) items.push_back(item);
          return true;
        });
        if (unknown) return Value::undefined();
        return Value::collection(result_kind(e), std::move(items));
      }
      case IteratorKind::Collect: {
        std::vector<Value> items;
        bool unknown = false;
        const bool navigation_like = e.operand(1).standard_type.element == TypeKind::Object;
        each(e, coll, [&](const Value &, const Value & b) {
          if (b.is_undefined()) {
            if (navigation_like) return true;
            unknown = true;
            return false;
          }
          if (b.is_collection()) {
            items.insert(items.end(), elements(b).begin(), elements(b).end());
          } else {
            items.push_back(b);
          }
          return true;
        });
        if (unknown) return Value::undefined();
        return Value::bag(std::move(items));
      }
      case IteratorKind::IsUnique: {
        std::vector<Value> seen;
        bool unknown = false;
        bool unique = true;
        each(e, coll, [&](const Value &, const Value & b) {
          if (b.is_undefined()) {
            unknown = true;
            return false;
          }
          for (const auto & s : seen) {
            if (ocl_equal(s, b)) {
              unique = false;
              return false;
            }
          }
          seen.push_back(b);
          return true;
        });
        if (unknown) return Value::undefined();
        return Value::boolean(unique);
      }
      case IteratorKind::Closure: {
        scope_.emplace_back(&e.variables.at(0), Value());
        const std::size_t slot = scope_.size() - 1;
        auto step = [&](const Value & item) {
          scope_[slot].second = item;
          Value b = eval(e.operand(1));
          if (b.is_undefined()) return std::vector<Value>{};
          if (b.is_collection()) return elements(b);
          return std::vector<Value>{b};
        };
        auto reached = closure(elements(coll), step);
        scope_.pop_back();
        return Value::set(std::move(reached));
      }
    }
    throw Error("EvalError", "unhandled iterator in `" + e.text + "'");
  }

  Value collection_op(const Expr & e)
  {
    const Value coll = source(e);
    if (coll.is_undefined()) return coll;
    const auto & items = elements(coll);
    Value arg;
    if (e.operands.size() > 1) {
      arg = eval(e.operand(1));
      if (arg.is_undefined()) return arg;
    }
    auto contains = [&](const Value & x) {
      return std::any_of(items.begin(), items.end(), [&](const Value & y) { return ocl_equal(x, y); });
    };
    switch (e.collection_op) {
      case CollectionOpKind::Size: return Value::integer(static_cast<std::int64_t>(items.size()));
      case CollectionOpKind::IsEmpty: return Value::boolean(items.empty());
      case CollectionOpKind::NotEmpty: return Value::boolean(!items.empty());
      case CollectionOpKind::Includes: return Value::boolean(contains(arg));
      case CollectionOpKind::Excludes: return Value::boolean(!contains(arg));
      case CollectionOpKind::Sum: return sum(items);
      case CollectionOpKind::Including: {
        auto out = items;
        out.push_back(arg);
        return Value::collection(result_kind(e), std::move(out));
      }
      case CollectionOpKind::Excluding: {
        std::vector<Value> out;
        for (const auto & x : items) {
          if (!ocl_equal(x, arg)) out.push_back(x);
        }
        return Value::collection(result_kind(e), std::move(out));
      }
      case CollectionOpKind::Union: {
        auto out = items;
        out.insert(out.end(), elements(arg).begin(), elements(arg).end());
        return Value::collection(result_kind(e), std::move(out));
      }
      case CollectionOpKind::Intersection: {
        std::vector<Value> rest = elements(arg);
        std::vector<Value> out;
        for (const auto & x : items) {
          auto it = std::find_if(rest.begin(), rest.end(), [&](const Value & y) { return ocl_equal(x, y); });
          if (it != rest.end()) {
            out.push_back(x);
            rest.erase(it);
          }
        }
        return Value::collection(result_kind(e), std::move(out));
      }
      case CollectionOpKind::AsSet: return Value::set(items);
    }
    throw Error("EvalError", "unhandled collection operation in `" + e.text + "'");
  }

  Value sum(const std::vector<Value> & items) const
  {
    const bool real = std::any_of(items.begin(), items.end(), [](const Value & v) { return v.is_real(); });
    if (real) {
      double total = 0;
      for (const auto & v : items) total += v.as_number();
      return Value::real(total);
    }
    std::int64_t total = 0;
    for (const auto & v : items) {
      if (__builtin_add_overflow(total, v.as_integer(), &total)) {
        if (!mode_.solver) return Value::undefined();
      }
      if (mode_.solver) total = wrap_to_bitwidth(total, mode_.bitwidth);
    }
    return Value::integer(total);
  }

  Value object_op(const Expr & e)
  {
    const Value v = eval(e.operand(0));
    switch (e.object_op) {
      case ObjectOpKind::IsUndefined: return Value::boolean(v.is_undefined());
      case ObjectOpKind::AsSet:
        if (v.is_undefined()) return Value::set({});
        if (v.is_collection()) return Value::set(elements(v));
        return Value::set({v});
      case ObjectOpKind::IsKindOf:
      case ObjectOpKind::AsType: {
        if (v.is_undefined()) return v;
        const bool kind = model_kind_of(v.as_object(), e.name);
        if (e.object_op == ObjectOpKind::IsKindOf) return Value::boolean(kind);
        return kind ? v : Value::undefined();
      }
    }
    throw Error("EvalError", "unhandled object operation in `" + e.text + "'");
  }

  bool model_kind_of(const std::string & object, const std::string & cls) const
  {
    const auto & extent = state_.instances_of(cls);
    return std::binary_search(extent.begin(), extent.end(), object);
  }

  const StateView & state_;
  const Bindings & bindings_;
  const EvalMode & mode_;
  std::vector<std::pair<const std::string *, Value>> scope_;
};

}  // namespace

Value eval(const Expr & expr, const StateView & state, const Bindings & bindings, const EvalMode & mode)
{
  return Evaluator(state, bindings, mode).eval(expr);
}

Value eval(const Expr & expr, const SystemState & state, const Model & model, const Bindings & bindings,
           const EvalMode & mode)
{
  const StateIndex index(state, model);
  return eval(expr, index, bindings, mode);
}

InvariantResult eval_invariant(const Invariant & inv, const StateView & state, const EvalMode & mode)
{
  InvariantResult out;
  Bindings bindings;
  for (const auto & name : state.instances_of(inv.context)) {
    bindings["self"] = Value::object(name);
    Value v = eval(*inv.body, state, bindings, mode);
    if (!v.is_boolean() || !v.as_boolean()) {
      out.holds = false;
      out.violators.push_back(name);
    }
    out.per_object.emplace(name, std::move(v));
  }
  return out;
}

InvariantResult eval_invariant(const Invariant & inv, const SystemState & state, const Model & model,
                               const EvalMode & mode)
{
  const StateIndex index(state, model);
  return eval_invariant(inv, index, mode);
}

}  // namespace bmv
