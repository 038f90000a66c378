// bmv/value.hpp - runtime values of the OCL subset
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bmv/types.hpp"

namespace bmv
{

struct Undefined
{
  bool operator==(const Undefined &) const = default;
};

struct ObjectRef
{
  std::string name;
  bool operator==(const ObjectRef &) const = default;
};

class Value;

/// Set or Bag. Elements are kept sorted (and unique for a Set), so
/// structural equality is element-wise equality.
struct Collection
{
  CollectionKind kind = CollectionKind::Set;
  std::vector<Value> elements;
};

class Value
{
public:
  using Storage = std::variant<Undefined, bool, std::int64_t, double, std::string, ObjectRef, Collection>;

  Value() = default;
  explicit Value(Storage s) : storage_(std::move(s)) {}

  static Value undefined() { return {}; }
  static Value boolean(bool b) { return Value(Storage{b}); }
  static Value integer(std::int64_t i) { return Value(Storage{i}); }
  static Value real(double d) { return Value(Storage{d}); }
  static Value string(std::string s) { return Value(Storage{std::move(s)}); }
  static Value object(std::string name) { return Value(Storage{ObjectRef{std::move(name)}}); }
  /// Builds a canonical collection: sorted, and deduplicated for Set.
  static Value collection(CollectionKind kind, std::vector<Value> elements);
  static Value set(std::vector<Value> elements) { return collection(CollectionKind::Set, std::move(elements)); }
  static Value bag(std::vector<Value> elements) { return collection(CollectionKind::Bag, std::move(elements)); }

  [[nodiscard]] bool is_undefined() const { return std::holds_alternative<Undefined>(storage_); }
  [[nodiscard]] bool is_boolean() const { return std::holds_alternative<bool>(storage_); }
  [[nodiscard]] bool is_integer() const { return std::holds_alternative<std::int64_t>(storage_); }
  [[nodiscard]] bool is_real() const { return std::holds_alternative<double>(storage_); }
  [[nodiscard]] bool is_number() const { return is_integer() || is_real(); }
  [[nodiscard]] bool is_string() const { return std::holds_alternative<std::string>(storage_); }
  [[nodiscard]] bool is_object() const { return std::holds_alternative<ObjectRef>(storage_); }
  [[nodiscard]] bool is_collection() const { return std::holds_alternative<Collection>(storage_); }

  [[nodiscard]] bool as_boolean() const { return std::get<bool>(storage_); }
  [[nodiscard]] std::int64_t as_integer() const { return std::get<std::int64_t>(storage_); }
  [[nodiscard]] double as_real() const { return std::get<double>(storage_); }
  [[nodiscard]] double as_number() const { return is_integer() ? static_cast<double>(as_integer()) : as_real(); }
  [[nodiscard]] const std::string & as_string() const { return std::get<std::string>(storage_); }
  [[nodiscard]] const std::string & as_object() const { return std::get<ObjectRef>(storage_).name; }
  [[nodiscard]] const Collection & as_collection() const { return std::get<Collection>(storage_); }

  [[nodiscard]] const Storage & storage() const { return storage_; }

private:
  Storage storage_;
};

/// Total structural order. Numbers compare numerically; an Integer sorts
/// before a Real of the same magnitude so the two stay distinguishable.
int compare(const Value & a, const Value & b);

inline bool operator==(const Value & a, const Value & b) { return compare(a, b) == 0; }
inline bool operator<(const Value & a, const Value & b) { return compare(a, b) < 0; }

/// OCL `=` on defined values: numbers across Integer/Real compare by value,
/// collections require the same kind and pairwise equal elements.
bool ocl_equal(const Value & a, const Value & b);

/// OCL literal syntax: `3`, `2.5`, `'abc'`, `true`, `b1`, `Set{1, 2}`.
std::string to_string(const Value & v);

/// Shortest text that reads back to the same double.
std::string format_real(double d);

}  // namespace bmv
