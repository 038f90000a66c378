// bmv/expr.hpp - OCL expression trees
//
// One node type serves both the raw parse tree and the typechecked tree.
// Parse trees use the Identifier/Property/DotCall/ArrowCall kinds; the
// typechecker resolves them into the remaining kinds and fills in
// standard_type and solver_type on every node. Trees are immutable and
// shared through ExprPtr.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "bmv/diagnostics.hpp"
#include "bmv/types.hpp"

namespace bmv
{

enum class ExprKind
{
  // parse tree only
  Identifier,
  Property,
  DotCall,
  ArrowCall,
  // both
  Literal,
  CollectionLiteral,
  Binary,
  Unary,
  // typechecked tree only
  Variable,
  Attribute,
  Navigation,
  AllInstances,
  Iterator,
  CollectionOp,
  ObjectOp,
};

enum class BinaryOp
{
  Equal, NotEqual, Less, LessEqual, Greater, GreaterEqual,
  Plus, Minus, Times, Div,
  And, Or, Implies,
};

enum class UnaryOp { Not, Negate };

enum class IteratorKind { ForAll, Exists, Select, Reject, Collect, IsUnique, One, Closure };

enum class CollectionOpKind
{
  Size, Sum, Includes, Excludes, IsEmpty, NotEmpty,
  Including, Excluding, Union, Intersection, AsSet,
};

enum class ObjectOpKind { IsKindOf, AsType, AsSet, IsUndefined };

using LiteralValue = std::variant<std::int64_t, double, std::string, bool>;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr
{
  ExprKind kind = ExprKind::Literal;
  SourceLocation location;
  std::string text;  // source slice, whitespace runs spanning lines collapsed

  LiteralValue literal;                                   // Literal
  CollectionKind collection_kind = CollectionKind::Set;   // CollectionLiteral
  BinaryOp binary_op = BinaryOp::Equal;
  UnaryOp unary_op = UnaryOp::Not;
  IteratorKind iterator = IteratorKind::ForAll;
  CollectionOpKind collection_op = CollectionOpKind::Size;
  ObjectOpKind object_op = ObjectOpKind::IsUndefined;

  // Identifier/Variable name, Property/Attribute/Navigation feature name,
  // call name, AllInstances/IsKindOf/AsType class name.
  std::string name;
  // Iterator variables; exactly one after typechecking.
  std::vector<std::string> variables;
  // Declared iterator variable types (`v : T`), parse tree only.
  std::vector<std::string> variable_types;
  // Source first (where there is one), then arguments / body / elements.
  std::vector<ExprPtr> operands;

  // Navigation target.
  std::string association;
  int to_end = -1;
  // Attribute/Navigation over a collection source (implicit collect).
  bool implicit_collect = false;
  // `->` applied to a single value: the source is wrapped as Set{x}.
  bool implicit_set = false;

  bool typed = false;
  OclType standard_type;
  OclType solver_type;

  [[nodiscard]] const Expr & operand(std::size_t i) const { return *operands.at(i); }
};

const char * to_string(BinaryOp op);
const char * to_string(IteratorKind k);
const char * to_string(CollectionOpKind k);

/// Canonical OCL text of a tree. Reparsing and retypechecking the printed
/// form of a typechecked tree yields a structurally equal tree.
std::string print_ocl(const Expr & e);

/// Structural equality ignoring source locations and text.
bool same_structure(const Expr & a, const Expr & b);

/// Pre-order traversal.
template <typename F>
void visit(const Expr & e, F && f)
{
  f(e);
  for (const auto & op : e.operands) {
    visit(*op, f);
  }
}

}  // namespace bmv
