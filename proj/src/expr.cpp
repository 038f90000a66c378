#include "bmv/expr.hpp"

#include "bmv/value.hpp"

namespace bmv
{

const char * to_string(BinaryOp op)
{
  switch (op) {
    case BinaryOp::Equal: return "=";
    case BinaryOp::NotEqual: return "<>";
    case BinaryOp::Less: return "<";
    case BinaryOp::LessEqual: return "<=";
    case BinaryOp::Greater: return ">";
    case BinaryOp::GreaterEqual: return ">=";
    case BinaryOp::Plus: return "+";
    case BinaryOp::Minus: return "-";
    case BinaryOp::Times: return "*";
    case BinaryOp::Div: return "div";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    case BinaryOp::Implies: return "implies";
  }
  return "?";
}

const char * to_string(IteratorKind k)
{
  switch (k) {
    case IteratorKind::ForAll: return "forAll";
    case IteratorKind::Exists: return "exists";
    case IteratorKind::Select: return "select";
    case IteratorKind::Reject: return "reject";
    case IteratorKind::Collect: return "collect";
    case IteratorKind::IsUnique: return "isUnique";
    case IteratorKind::One: return "one";
    case IteratorKind::Closure: return "closure";
  }
  return "?";
}

const char * to_string(CollectionOpKind k)
{
  switch (k) {
    case CollectionOpKind::Size: return "size";
    case CollectionOpKind::Sum: return "sum";
    case CollectionOpKind::Includes: return "includes";
    case CollectionOpKind::Excludes: return "excludes";
    case CollectionOpKind::IsEmpty: return "isEmpty";
    case CollectionOpKind::NotEmpty: return "notEmpty";
    case CollectionOpKind::Including: return "including";
    case CollectionOpKind::Excluding: return "excluding";
    case CollectionOpKind::Union: return "union";
    case CollectionOpKind::Intersection: return "intersection";
    case CollectionOpKind::AsSet: return "asSet";
  }
  return "?";
}

namespace
{

const char * object_op_name(ObjectOpKind k)
{
  switch (k) {
    case ObjectOpKind::IsKindOf: return "oclIsKindOf";
    case ObjectOpKind::AsType: return "oclAsType";
    case ObjectOpKind::AsSet: return "oclAsSet";
    case ObjectOpKind::IsUndefined: return "oclIsUndefined";
  }
  return "?";
}

std::string print_literal(const LiteralValue & v)
{
  if (const auto * i = std::get_if<std::int64_t>(&v)) {
    return std::to_string(*i);
  }
  if (const auto * d = std::get_if<double>(&v)) {
    return format_real(*d);
  }
  if (const auto * s = std::get_if<std::string>(&v)) {
    return to_string(Value::string(*s));
  }
  return std::get<bool>(v) ? "true" : "false";
}

std::string join_operands(const Expr & e, std::size_t first)
{
  std::string out;
  for (std::size_t i = first; i < e.operands.size(); ++i) {
    if (i > first) {
      out += ", ";
    }
    out += print_ocl(*e.operands[i]);
  }
  return out;
}

std::string print_iterator_args(const Expr & e, const char * name)
{
  std::string out = print_ocl(e.operand(0)) + "->" + name + "(";
  for (std::size_t i = 0; i < e.variables.size(); ++i) {
    out += (i > 0 ? ", " : "") + e.variables[i];
  }
  if (!e.variables.empty()) {
    out += " | ";
  }
  return out + join_operands(e, 1) + ")";
}

}  // namespace

std::string print_ocl(const Expr & e)
{
  switch (e.kind) {
    case ExprKind::Literal: return print_literal(e.literal);
    case ExprKind::CollectionLiteral: return to_string(e.collection_kind) + "{" + join_operands(e, 0) + "}";
    case ExprKind::Identifier:
    case ExprKind::Variable: return e.name;
    case ExprKind::Property:
    case ExprKind::Attribute:
    case ExprKind::Navigation: return print_ocl(e.operand(0)) + "." + e.name;
    case ExprKind::AllInstances: return e.name + ".allInstances()";
    case ExprKind::Binary:
      return "(" + print_ocl(e.operand(0)) + " " + to_string(e.binary_op) + " " + print_ocl(e.operand(1)) + ")";
    case ExprKind::Unary:
      return e.unary_op == UnaryOp::Not ? "(not " + print_ocl(e.operand(0)) + ")"
                                        : "(-" + print_ocl(e.operand(0)) + ")";
    case ExprKind::DotCall: return print_ocl(e.operand(0)) + "." + e.name + "(" + join_operands(e, 1) + ")";
    case ExprKind::ArrowCall: return print_iterator_args(e, e.name.c_str());
    case ExprKind::Iterator: return print_iterator_args(e, to_string(e.iterator));
    case ExprKind::CollectionOp:
      return print_ocl(e.operand(0)) + "->" + to_string(e.collection_op) + "(" + join_operands(e, 1) + ")";
    case ExprKind::ObjectOp: {
      std::string arg;
      if (e.object_op == ObjectOpKind::IsKindOf || e.object_op == ObjectOpKind::AsType) {
        arg = e.name;
      }
      return print_ocl(e.operand(0)) + "." + object_op_name(e.object_op) + "(" + arg + ")";
    }
  }
  return "?";
}

bool same_structure(const Expr & a, const Expr & b)
{
  if (a.kind != b.kind || a.literal != b.literal || a.name != b.name || a.variables != b.variables ||
      a.association != b.association || a.to_end != b.to_end || a.implicit_collect != b.implicit_collect ||
      a.implicit_set != b.implicit_set || a.typed != b.typed || a.standard_type != b.standard_type ||
      a.solver_type != b.solver_type || a.operands.size() != b.operands.size()) {
    return false;
  }
  switch (a.kind) {
    case ExprKind::CollectionLiteral:
      if (a.collection_kind != b.collection_kind) return false;
      break;
    case ExprKind::Binary:
      if (a.binary_op != b.binary_op) return false;
      break;
    case ExprKind::Unary:
      if (a.unary_op != b.unary_op) return false;
      break;
    case ExprKind::Iterator:
      if (a.iterator != b.iterator) return false;
      break;
    case ExprKind::CollectionOp:
      if (a.collection_op != b.collection_op) return false;
      break;
    case ExprKind::ObjectOp:
      if (a.object_op != b.object_op) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.operands.size(); ++i) {
    if (!same_structure(*a.operands[i], *b.operands[i])) {
      return false;
    }
  }
  return true;
}

}  // namespace bmv
