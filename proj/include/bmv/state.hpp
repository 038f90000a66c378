// bmv/state.hpp - object diagrams (system states) and their exports
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bmv/diagnostics.hpp"
#include "bmv/model.hpp"
#include "bmv/value.hpp"

namespace bmv
{

struct ObjectState
{
  std::string class_name;
  std::map<std::string, Value> attributes;  // missing or undefined = unset

  bool operator==(const ObjectState &) const = default;
};

/// A link of `association`; `first` sits at end 0, `second` at end 1.
struct Link
{
  std::string association;
  std::string first;
  std::string second;

  auto operator<=>(const Link &) const = default;
};

struct SystemState
{
  std::map<std::string, ObjectState> objects;
  std::set<Link> links;

  bool operator==(const SystemState &) const = default;

  [[nodiscard]] const ObjectState * find(std::string_view name) const;
  /// Number of objects whose class is exactly `cls`.
  [[nodiscard]] std::int64_t count_of(std::string_view cls) const;
  [[nodiscard]] std::int64_t link_count(std::string_view association) const;
};

/// An object whose number of links over an association end lies outside
/// the end's multiplicity.
struct Violation
{
  std::string object;
  std::string association;
  std::string role;  // the end being counted
  std::int64_t count = 0;
  Multiplicity expected;

  [[nodiscard]] std::string message() const;
};

/// Structural validity: concrete known classes, well-typed attribute slots,
/// link endpoints that exist and conform to their ends.
std::vector<Diagnostic> check_structure(const SystemState & state, const Model & model);

/// Multiplicity check for every (object, association end) pair.
std::vector<Violation> check_model_inherent(const SystemState & state, const Model & model);

/// Graphviz text. Nodes are `name:Class` with attribute rows, edges carry
/// the association name. Output is deterministic.
std::string export_dot(const SystemState & state);

/// `{"objects": [{name, class, attrs}], "links": [{assoc, ends}]}` with
/// objects and links sorted; undefined attributes are `null`.
std::string export_json(const SystemState & state);
SystemState import_json(std::string_view text);  // throws bmv::Error

}  // namespace bmv
