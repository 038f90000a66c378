// bmv/typecheck.hpp - OCL typechecking with dual (standard / solver) typing
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bmv/diagnostics.hpp"
#include "bmv/expr.hpp"
#include "bmv/model.hpp"

namespace bmv
{

/// Variables in scope, outermost first. A variable named `self` is also the
/// implicit source for bare attribute and role names.
struct TypeEnv
{
  std::vector<std::pair<std::string, OclType>> variables;

  static TypeEnv for_context(const std::string & cls) { return TypeEnv{{{"self", OclType::object(cls)}}}; }
};

/// Resolves names and annotates every node with its standard OCL type and
/// the solver's interpretation of it. Navigation from a single object over
/// an end with upper bound 1 yields the class type, otherwise a Set; any
/// attribute access or navigation starting from a collection is an implicit
/// collect and yields a Bag (a Set for the solver).
///
/// Iterators without a declared variable get generated names `_it1`,
/// `_it2`, ... by nesting depth, so printing and reparsing is stable.
ParseResult<ExprPtr> typecheck(const ExprPtr & expr, const TypeEnv & env, const Model & model);

}  // namespace bmv
