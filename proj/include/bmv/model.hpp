// bmv/model.hpp - UML class models with OCL invariants
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bmv/diagnostics.hpp"
#include "bmv/expr.hpp"
#include "bmv/types.hpp"

namespace bmv
{

struct Multiplicity
{
  std::int64_t lower = 0;
  std::optional<std::int64_t> upper;  // nullopt means `*`

  [[nodiscard]] bool admits(std::int64_t n) const { return n >= lower && (!upper || n <= *upper); }
  /// True when at most one object can be reached (0..1 or 1..1).
  [[nodiscard]] bool single_valued() const { return upper && *upper <= 1; }

  bool operator==(const Multiplicity &) const = default;
};

/// `1`, `0..1`, `*`, `1..*`
std::string to_string(const Multiplicity & m);

struct Attribute
{
  std::string name;
  OclType type;
  SourceLocation location;
};

struct Class
{
  std::string name;
  bool is_abstract = false;
  std::vector<Attribute> attributes;
  std::vector<std::string> parents;
  SourceLocation location;
};

struct AssociationEnd
{
  std::string role;
  std::string class_name;
  Multiplicity multiplicity;
  SourceLocation location;
};

struct Association
{
  std::string name;
  std::array<AssociationEnd, 2> ends;
  SourceLocation location;
};

struct Invariant
{
  std::string context;
  std::string name;
  ExprPtr body;      // typechecked once the model is built by the parser
  std::string text;  // body source text
  SourceLocation location;

  [[nodiscard]] std::string qualified_name() const { return context + "::" + name; }
};

/// Navigating `role` from an object at end `from_end` reaches the objects
/// at end `to_end` of `association`.
struct RoleRef
{
  const Association * association = nullptr;
  int from_end = 0;
  int to_end = 1;

  [[nodiscard]] const AssociationEnd & target() const { return association->ends[to_end]; }
};

class Model
{
public:
  std::string name;
  std::vector<Class> classes;
  std::vector<Association> associations;
  std::vector<Invariant> invariants;
  SourceLocation location;

  [[nodiscard]] const Class * find_class(std::string_view n) const;
  [[nodiscard]] const Association * find_association(std::string_view n) const;
  [[nodiscard]] const Invariant * find_invariant(std::string_view qualified) const;

  /// Reflexive-transitive generalization. Terminates on cyclic input.
  [[nodiscard]] bool is_kind_of(std::string_view sub, std::string_view super) const;

  /// Own and inherited attributes, ancestors first, each attribute once.
  [[nodiscard]] std::vector<const Attribute *> all_attributes(std::string_view cls) const;
  [[nodiscard]] const Attribute * find_attribute(std::string_view cls, std::string_view attr) const;

  /// Role navigable from objects of `cls` (including inherited ends).
  [[nodiscard]] std::optional<RoleRef> find_role(std::string_view cls, std::string_view role) const;
  [[nodiscard]] std::vector<RoleRef> navigable_roles(std::string_view cls) const;

  [[nodiscard]] std::vector<std::string> concrete_classes() const;

  /// Whether a value of type `sub` may be used where `super` is expected.
  [[nodiscard]] bool conforms(const OclType & sub, const OclType & super) const;
  /// Least common supertype of two scalar types, if one exists.
  [[nodiscard]] std::optional<OclType> common_supertype(const OclType & a, const OclType & b) const;
};

/// Structural well-formedness: unique names, known classes, acyclic
/// generalization, sane multiplicities, unique roles and attributes.
/// Invariant bodies are not typechecked here (see typecheck.hpp).
std::vector<ModelError> check_well_formed(const Model & model);

/// Model text in the `.use` grammar accepted by parse_model.
std::string print_model(const Model & model);

/// Equality ignoring locations; invariant bodies compare structurally.
bool same_structure(const Model & a, const Model & b);

}  // namespace bmv
