#include "bmv/typecheck.hpp"

#include <map>
#include <set>

namespace bmv
{

namespace
{

struct TypeFailure
{
  Diagnostic diagnostic;
};

struct Scope
{
  std::string name;
  OclType type;
  bool implicit = false;  // undeclared iterator variable or self
};

const std::map<std::string, IteratorKind, std::less<>> kIterators = {
  {"forAll", IteratorKind::ForAll},   {"exists", IteratorKind::Exists},     {"select", IteratorKind::Select},
  {"reject", IteratorKind::Reject},   {"collect", IteratorKind::Collect},   {"isUnique", IteratorKind::IsUnique},
  {"one", IteratorKind::One},         {"closure", IteratorKind::Closure},
};

const std::map<std::string, CollectionOpKind, std::less<>> kCollectionOps = {
  {"size", CollectionOpKind::Size},
  {"sum", CollectionOpKind::Sum},
  {"includes", CollectionOpKind::Includes},
  {"excludes", CollectionOpKind::Excludes},
  {"isEmpty", CollectionOpKind::IsEmpty},
  {"notEmpty", CollectionOpKind::NotEmpty},
  {"including", CollectionOpKind::Including},
  {"excluding", CollectionOpKind::Excluding},
  {"union", CollectionOpKind::Union},
  {"intersection", CollectionOpKind::Intersection},
  {"asSet", CollectionOpKind::AsSet},
};

// Operations that only exist on ordered collections.
const std::set<std::string, std::less<>> kOrderedOps = {
  "asSequence", "asOrderedSet", "first", "last", "at", "append", "prepend",
  "insertAt", "subSequence", "subOrderedSet", "indexOf", "reverse", "sortedBy",
};

class Typechecker
{
public:
  explicit Typechecker(const Model & model) : model_(model) {}

  std::vector<Scope> scopes;

  ExprPtr check(const ExprPtr & e)
  {
    if (e->typed) {
      return e;
    }
    switch (e->kind) {
      case ExprKind::Literal: return literal(*e);
      case ExprKind::CollectionLiteral: return collection_literal(*e);
      case ExprKind::Identifier: return identifier(*e);
      case ExprKind::Property: return feature(*e, check(e->operands.at(0)), e->name);
      case ExprKind::DotCall: return dot_call(*e);
      case ExprKind::ArrowCall: return arrow_call(*e);
      case ExprKind::Binary: return binary(*e);
      case ExprKind::Unary: return unary(*e);
      default: fail(*e, "InternalError", "unexpected node in parse tree");
    }
  }

private:
  [[noreturn]] void fail(const Expr & at, std::string code, std::string message) const
  {
    throw TypeFailure{{DiagnosticKind::Type, std::move(code), std::move(message), at.location, {}}};
  }

  static std::shared_ptr<Expr> node(const Expr & from, ExprKind kind)
  {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->location = from.location;
    e->text = from.text;
    return e;
  }

  static ExprPtr typed(std::shared_ptr<Expr> e, const OclType & t)
  {
    e->typed = true;
    e->standard_type = t;
    e->solver_type = solver_type(t);
    return e;
  }

  OclType resolve_type_name(const Expr & at, const std::string & name) const
  {
    OclType t;
    if (parse_basic_type(name, t)) return t;
    if (model_.find_class(name) != nullptr) return OclType::object(name);
    fail(at, "UnknownType", "unknown type `" + name + "'");
  }

  OclType common(const Expr & at, const OclType & a, const OclType & b, const char * what) const
  {
    auto t = model_.common_supertype(a, b);
    if (!t) {
      fail(at, "TypeMismatch", std::string("incompatible ") + what + " types " + to_string(a.element_type()) +
                                 " and " + to_string(b.element_type()));
    }
    return *t;
  }

  ExprPtr literal(const Expr & e)
  {
    auto out = node(e, ExprKind::Literal);
    out->literal = e.literal;
    OclType t;
    if (std::holds_alternative<std::int64_t>(e.literal)) {
      t = OclType::integer();
    } else if (std::holds_alternative<double>(e.literal)) {
      t = OclType::real();
    } else if (std::holds_alternative<std::string>(e.literal)) {
      t = OclType::string();
    } else {
      t = OclType::boolean();
    }
    return typed(std::move(out), t);
  }

  ExprPtr collection_literal(const Expr & e)
  {
    if (e.collection_kind == CollectionKind::Sequence || e.collection_kind == CollectionKind::OrderedSet) {
      fail(e, "UnsupportedCollection", "collection type `" + to_string(e.collection_kind) +
                                         "' is not supported; only Set and Bag are available");
    }
    auto out = node(e, ExprKind::CollectionLiteral);
    out->collection_kind = e.collection_kind;
    OclType elem = OclType::void_type();
    for (const auto & item : e.operands) {
      auto t = check(item);
      if (t->standard_type.is_collection()) {
        fail(*item, "NestedCollection", "nested collections are not supported");
      }
      elem = common(*item, elem, t->standard_type, "element");
      out->operands.push_back(std::move(t));
    }
    return typed(std::move(out), elem.with_collection(e.collection_kind));
  }

  ExprPtr variable(const Expr & at, const Scope & s, bool synthesized) const
  {
    auto out = node(at, ExprKind::Variable);
    out->name = s.name;
    if (synthesized) out->text = s.name;
    return typed(std::move(out), s.type);
  }

  ExprPtr identifier(const Expr & e)
  {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      if (it->name == e.name) return variable(e, *it, false);
    }
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      if (!it->implicit || !it->type.is_object()) continue;
      const auto & cls = it->type.class_name;
      if (model_.find_attribute(cls, e.name) != nullptr || model_.find_role(cls, e.name)) {
        return feature(e, variable(e, *it, true), e.name);
      }
    }
    if (model_.find_class(e.name) != nullptr) {
      fail(e, "UnknownIdentifier", "class name `" + e.name + "' cannot be used as a value");
    }
    fail(e, "UnknownIdentifier", "unknown identifier `" + e.name + "'");
  }

  ExprPtr feature(const Expr & e, ExprPtr source, const std::string & name)
  {
    const OclType & st = source->standard_type;
    if (st.element != TypeKind::Object) {
      fail(e, "UnknownFeature", "cannot access `" + name + "' on a value of type " + to_string(st));
    }
    const bool collect = st.is_collection();
    const auto & cls = st.class_name;
    OclType result;
    std::shared_ptr<Expr> out;
    if (const Attribute * a = model_.find_attribute(cls, name)) {
      out = node(e, ExprKind::Attribute);
      result = a->type;
    } else if (auto role = model_.find_role(cls, name)) {
      out = node(e, ExprKind::Navigation);
      out->association = role->association->name;
      out->to_end = role->to_end;
      result = OclType::object(role->target().class_name);
      if (!role->target().multiplicity.single_valued()) {
        result = result.with_collection(CollectionKind::Set);
      }
    } else {
      fail(e, "UnknownFeature", "class `" + cls + "' has no attribute or role `" + name + "'");
    }
    out->name = name;
    out->operands = {std::move(source)};
    if (collect) {
      out->implicit_collect = true;
      result = result.element_type().with_collection(CollectionKind::Bag);
    }
    return typed(std::move(out), result);
  }

  ExprPtr dot_call(const Expr & e)
  {
    const auto & src = e.operands.at(0);
    const std::size_t argc = e.operands.size() - 1;
    auto expect_args = [&](std::size_t n) {
      if (argc != n) {
        fail(e, "ArityError", "`" + e.name + "' expects " + std::to_string(n) + " argument(s), got " +
                                std::to_string(argc));
      }
    };

    if (e.name == "allInstances") {
      expect_args(0);
      if (src->kind != ExprKind::Identifier || model_.find_class(src->name) == nullptr) {
        fail(e, "UnknownClass", "allInstances() must be applied to a class name");
      }
      auto out = node(e, ExprKind::AllInstances);
      out->name = src->name;
      return typed(std::move(out), OclType::object(src->name).with_collection(CollectionKind::Set));
    }

    if (e.name == "oclIsKindOf" || e.name == "oclAsType") {
      expect_args(1);
      const auto & arg = e.operands[1];
      if (arg->kind != ExprKind::Identifier || model_.find_class(arg->name) == nullptr) {
        fail(*arg, "UnknownClass", "`" + e.name + "' expects a class name");
      }
      auto source = check(src);
      if (!source->standard_type.is_object()) {
        fail(e, "TypeMismatch", "`" + e.name + "' requires an object but got " + to_string(source->standard_type));
      }
      auto out = node(e, ExprKind::ObjectOp);
      out->name = arg->name;
      out->operands = {std::move(source)};
      const bool kind_test = e.name == "oclIsKindOf";
      out->object_op = kind_test ? ObjectOpKind::IsKindOf : ObjectOpKind::AsType;
      return typed(std::move(out), kind_test ? OclType::boolean() : OclType::object(arg->name));
    }

    if (e.name == "oclAsSet" || e.name == "oclIsUndefined") {
      expect_args(0);
      auto source = check(src);
      auto out = node(e, ExprKind::ObjectOp);
      OclType result = OclType::boolean();
      if (e.name == "oclAsSet") {
        out->object_op = ObjectOpKind::AsSet;
        result = source->standard_type.element_type().with_collection(CollectionKind::Set);
      } else {
        out->object_op = ObjectOpKind::IsUndefined;
      }
      out->operands = {std::move(source)};
      return typed(std::move(out), result);
    }

    if (kCollectionOps.count(e.name) > 0 || kIterators.count(e.name) > 0) {
      fail(e, "UnknownOperation", "`" + e.name + "' is a collection operation; use `->" + e.name + "'");
    }
    fail(e, "UnknownOperation", "unknown operation `" + e.name + "'");
  }

  ExprPtr arrow_call(const Expr & e)
  {
    if (kOrderedOps.count(e.name) > 0) {
      fail(e, "UnsupportedCollection", "operation `" + e.name +
                                         "' needs Sequence or OrderedSet, which are not supported; only Set and "
                                         "Bag are available");
    }
    auto source = check(e.operands.at(0));
    if (auto it = kIterators.find(e.name); it != kIterators.end()) {
      return iterator(e, it->second, std::move(source), 0);
    }
    auto op = kCollectionOps.find(e.name);
    if (op == kCollectionOps.end()) {
      fail(e, "UnknownOperation", "unknown collection operation `" + e.name + "'");
    }
    if (!e.variables.empty()) {
      fail(e, "SyntaxError", "`" + e.name + "' does not take iterator variables");
    }
    return collection_op(e, op->second, std::move(source));
  }

  static OclType as_collection(const OclType & t)
  {
    return t.is_collection() ? t : t.with_collection(CollectionKind::Set);
  }

  // Multiple iterator variables desugar into nested single-variable
  // iterators; `var_index` is the variable handled at this level.
  ExprPtr iterator(const Expr & e, IteratorKind kind, ExprPtr source, std::size_t var_index)
  {
    if (e.operands.size() != 2) {
      fail(e, "ArityError", "`" + e.name + "' expects exactly one body expression");
    }
    if (e.variables.size() > 1 && kind != IteratorKind::ForAll && kind != IteratorKind::Exists) {
      fail(e, "ArityError", "only forAll and exists accept several iterator variables");
    }
    const OclType coll = as_collection(source->standard_type);
    const OclType elem = coll.element_type();

    Scope scope;
    if (e.variables.empty()) {
      int depth = 1;
      for (const auto & s : scopes) {
        if (s.name.rfind("_it", 0) == 0) ++depth;
      }
      scope = Scope{"_it" + std::to_string(depth), elem, true};
    } else {
      scope = Scope{e.variables[var_index], elem, false};
      const auto & declared = e.variable_types[var_index];
      if (!declared.empty()) {
        const OclType t = resolve_type_name(e, declared);
        if (!model_.conforms(elem, t) && !model_.conforms(t, elem)) {
          fail(e, "TypeMismatch", "iterator variable `" + scope.name + "' declared as " + declared +
                                    " but the source elements are " + to_string(elem));
        }
      }
    }

    auto out = node(e, ExprKind::Iterator);
    out->iterator = kind;
    out->variables = {scope.name};
    out->implicit_set = !source->standard_type.is_collection();

    scopes.push_back(scope);
    ExprPtr body;
    if (var_index + 1 < e.variables.size()) {
      body = iterator(e, kind, source, var_index + 1);
    } else {
      body = check(e.operands[1]);
    }
    scopes.pop_back();

    const OclType & bt = body->standard_type;
    OclType result = OclType::boolean();
    switch (kind) {
      case IteratorKind::ForAll:
      case IteratorKind::Exists:
      case IteratorKind::One:
      case IteratorKind::Select:
      case IteratorKind::Reject:
        if (!bt.is(TypeKind::Boolean)) {
          fail(*e.operands[1], "TypeMismatch",
               std::string("body of ") + to_string(kind) + " must be Boolean but has type " + to_string(bt));
        }
        if (kind == IteratorKind::Select || kind == IteratorKind::Reject) result = coll;
        break;
      case IteratorKind::IsUnique:
        if (bt.is_collection()) {
          fail(*e.operands[1], "NestedCollection", "isUnique body must not be a collection");
        }
        break;
      case IteratorKind::Collect: result = bt.element_type().with_collection(CollectionKind::Bag); break;
      case IteratorKind::Closure: {
        if (bt.element != TypeKind::Object || elem.element != TypeKind::Object) {
          fail(*e.operands[1], "TypeMismatch", "closure needs objects but the body has type " + to_string(bt));
        }
        result = common(e, elem, bt, "closure").with_collection(CollectionKind::Set);
        break;
      }
    }
    out->operands = {std::move(source), std::move(body)};
    return typed(std::move(out), result);
  }

  ExprPtr collection_op(const Expr & e, CollectionOpKind kind, ExprPtr source)
  {
    const OclType coll = as_collection(source->standard_type);
    const OclType elem = coll.element_type();
    const std::size_t argc = e.operands.size() - 1;
    const bool takes_arg = kind == CollectionOpKind::Includes || kind == CollectionOpKind::Excludes ||
                           kind == CollectionOpKind::Including || kind == CollectionOpKind::Excluding ||
                           kind == CollectionOpKind::Union || kind == CollectionOpKind::Intersection;
    if (argc != (takes_arg ? 1U : 0U)) {
      fail(e, "ArityError", std::string("`") + to_string(kind) + "' expects " + (takes_arg ? "1" : "0") +
                              " argument(s), got " + std::to_string(argc));
    }

    auto out = node(e, ExprKind::CollectionOp);
    out->collection_op = kind;
    out->implicit_set = !source->standard_type.is_collection();
    out->operands.push_back(std::move(source));
    ExprPtr arg;
    if (takes_arg) {
      arg = check(e.operands[1]);
      out->operands.push_back(arg);
    }

    OclType result;
    switch (kind) {
      case CollectionOpKind::Size: result = OclType::integer(); break;
      case CollectionOpKind::IsEmpty:
      case CollectionOpKind::NotEmpty: result = OclType::boolean(); break;
      case CollectionOpKind::Sum:
        if (elem.element == TypeKind::Real) {
          result = OclType::real();
        } else if (elem.element == TypeKind::Integer || elem.element == TypeKind::Void) {
          result = OclType::integer();
        } else {
          fail(e, "TypeMismatch", "sum() needs Integer or Real elements, not " + to_string(elem));
        }
        break;
      case CollectionOpKind::Includes:
      case CollectionOpKind::Excludes:
      case CollectionOpKind::Including:
      case CollectionOpKind::Excluding: {
        if (arg->standard_type.is_collection()) {
          fail(*arg, "NestedCollection", "nested collections are not supported");
        }
        const OclType joined = common(*arg, elem, arg->standard_type, "element");
        result = (kind == CollectionOpKind::Includes || kind == CollectionOpKind::Excludes)
                   ? OclType::boolean()
                   : joined.with_collection(coll.collection);
        break;
      }
      case CollectionOpKind::Union:
      case CollectionOpKind::Intersection: {
        const OclType & other = arg->standard_type;
        if (!other.is_collection()) {
          fail(*arg, "TypeMismatch", std::string(to_string(kind)) + " expects a collection argument");
        }
        const OclType joined = common(*arg, elem, other, "element");
        const bool both_set = coll.collection == CollectionKind::Set && other.collection == CollectionKind::Set;
        const bool both_bag = coll.collection == CollectionKind::Bag && other.collection == CollectionKind::Bag;
        CollectionKind k = CollectionKind::Set;
        if (kind == CollectionOpKind::Union) {
          k = both_set ? CollectionKind::Set : CollectionKind::Bag;
        } else {
          k = both_bag ? CollectionKind::Bag : CollectionKind::Set;
        }
        result = joined.with_collection(k);
        break;
      }
      case CollectionOpKind::AsSet: result = elem.with_collection(CollectionKind::Set); break;
    }
    return typed(std::move(out), result);
  }

  ExprPtr binary(const Expr & e)
  {
    auto lhs = check(e.operands.at(0));
    auto rhs = check(e.operands.at(1));
    const OclType & l = lhs->standard_type;
    const OclType & r = rhs->standard_type;
    auto out = node(e, ExprKind::Binary);
    out->binary_op = e.binary_op;
    out->operands = {lhs, rhs};
    const std::string op = to_string(e.binary_op);
    auto mismatch = [&]() {
      fail(e, "TypeMismatch", "operator `" + op + "' is not defined for " + to_string(l) + " and " + to_string(r));
    };

    OclType result = OclType::boolean();
    switch (e.binary_op) {
      case BinaryOp::And:
      case BinaryOp::Or:
      case BinaryOp::Implies:
        if (!l.is(TypeKind::Boolean) || !r.is(TypeKind::Boolean)) mismatch();
        break;
      case BinaryOp::Equal:
      case BinaryOp::NotEqual:
        if (l.is_collection() != r.is_collection()) {
          fail(e, "TypeMismatch", "cannot compare " + to_string(l) + " with " + to_string(r));
        }
        if (!model_.common_supertype(l, r)) {
          fail(e, "TypeMismatch", "cannot compare " + to_string(l) + " with " + to_string(r));
        }
        break;
      case BinaryOp::Less:
      case BinaryOp::LessEqual:
      case BinaryOp::Greater:
      case BinaryOp::GreaterEqual:
        if (!(l.is_numeric() && r.is_numeric()) && !(l.is(TypeKind::String) && r.is(TypeKind::String))) mismatch();
        break;
      case BinaryOp::Plus:
      case BinaryOp::Minus:
        if (!l.is_numeric() || !r.is_numeric()) mismatch();
        result = l.is(TypeKind::Integer) && r.is(TypeKind::Integer) ? OclType::integer() : OclType::real();
        break;
      case BinaryOp::Times:
      case BinaryOp::Div:
        if (!l.is(TypeKind::Integer) || !r.is(TypeKind::Integer)) mismatch();
        result = OclType::integer();
        break;
    }
    return typed(std::move(out), result);
  }

  ExprPtr unary(const Expr & e)
  {
    auto operand = check(e.operands.at(0));
    const OclType t = operand->standard_type;
    auto out = node(e, ExprKind::Unary);
    out->unary_op = e.unary_op;
    out->operands = {std::move(operand)};
    if (e.unary_op == UnaryOp::Not) {
      if (!t.is(TypeKind::Boolean)) {
        fail(e, "TypeMismatch", "`not' needs a Boolean operand, not " + to_string(t));
      }
      return typed(std::move(out), OclType::boolean());
    }
    if (!t.is_numeric()) {
      fail(e, "TypeMismatch", "unary `-' needs a numeric operand, not " + to_string(t));
    }
    return typed(std::move(out), t);
  }

  const Model & model_;
};

}  // namespace

ParseResult<ExprPtr> typecheck(const ExprPtr & expr, const TypeEnv & env, const Model & model)
{
  ParseResult<ExprPtr> out;
  Typechecker tc(model);
  for (const auto & [name, type] : env.variables) {
    tc.scopes.push_back(Scope{name, type, name == "self"});
  }
  try {
    out.value = tc.check(expr);
  } catch (const TypeFailure & f) {
    out.diagnostics.push_back(f.diagnostic);
  }
  return out;
}

}  // namespace bmv
