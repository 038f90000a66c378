// bmv/types.hpp - OCL types (flat collections only)
#pragma once

#include <string>

namespace bmv
{

enum class TypeKind { Void, Boolean, Integer, Real, String, Object };

// Sequence and OrderedSet exist only so the parser can name them in errors;
// a typechecked expression never carries them.
enum class CollectionKind { None, Set, Bag, Sequence, OrderedSet };

/// An OCL type. Collections cannot nest: a collection type is a kind plus a
/// scalar element type. `Void` is the type of `Set{}` elements and conforms to
/// every type.
struct OclType
{
  CollectionKind collection = CollectionKind::None;
  TypeKind element = TypeKind::Void;
  std::string class_name;  // set iff element == Object

  static OclType void_type() { return {}; }
  static OclType boolean() { return {CollectionKind::None, TypeKind::Boolean, {}}; }
  static OclType integer() { return {CollectionKind::None, TypeKind::Integer, {}}; }
  static OclType real() { return {CollectionKind::None, TypeKind::Real, {}}; }
  static OclType string() { return {CollectionKind::None, TypeKind::String, {}}; }
  static OclType object(std::string cls) { return {CollectionKind::None, TypeKind::Object, std::move(cls)}; }

  [[nodiscard]] bool is_collection() const { return collection != CollectionKind::None; }
  [[nodiscard]] bool is_object() const { return !is_collection() && element == TypeKind::Object; }
  [[nodiscard]] bool is_numeric() const
  {
    return !is_collection() && (element == TypeKind::Integer || element == TypeKind::Real);
  }
  [[nodiscard]] bool is(TypeKind k) const { return !is_collection() && element == k; }

  [[nodiscard]] OclType element_type() const { return {CollectionKind::None, element, class_name}; }
  [[nodiscard]] OclType with_collection(CollectionKind kind) const { return {kind, element, class_name}; }

  bool operator==(const OclType &) const = default;
};

/// `Set(Integer)`, `Bag(Employee)`, `String`, ...
std::string to_string(const OclType & t);
std::string to_string(CollectionKind kind);

/// The type the bounded solver sees: every Bag(t) becomes Set(t).
OclType solver_type(const OclType & t);

/// Scalar type by name (`Integer`, `Real`, `String`, `Boolean`), if any.
bool parse_basic_type(const std::string & name, OclType & out);

}  // namespace bmv
