// bmv/parse.hpp - textual model, OCL, and state-command parsers
//
// Model files (`.use`):
//
//   model CarRental
//   abstract class Person
//   attributes
//     age : Integer
//   end
//   class Employee < Person end
//   association Employment between
//     Employee [*] role employee
//     Branch [0..1] role employer
//   end
//   constraints
//   context Person inv NonNegativeAge: self.age >= 0
//
// State command files (`.cmd`):
//
//   !create e1 : Employee
//   !set e1.age := 30
//   !insert (e1, b1) into Employment
#pragma once

#include <string>
#include <string_view>

#include "bmv/diagnostics.hpp"
#include "bmv/expr.hpp"
#include "bmv/model.hpp"
#include "bmv/state.hpp"

namespace bmv
{

/// Parses, checks well-formedness, and typechecks every invariant body.
/// No value is returned when any diagnostic is reported.
ParseResult<Model> parse_model(std::string_view text, const std::string & file = "<input>");

/// Parses an expression and typechecks it with `self` bound to `context`.
ParseResult<ExprPtr> parse_ocl(std::string_view text, const std::string & context, const Model & model,
                               const std::string & file = "<ocl>");

/// Raw parse tree without typechecking.
ParseResult<ExprPtr> parse_ocl_untyped(std::string_view text, const std::string & file = "<ocl>");

/// Runs create/set/insert commands in order on an empty state.
ParseResult<SystemState> parse_state_commands(std::string_view text, const Model & model,
                                              const std::string & file = "<state>");

}  // namespace bmv
