#include "bmv/types.hpp"

namespace bmv
{

namespace
{

std::string scalar_name(const OclType & t)
{
  switch (t.element) {
    case TypeKind::Void: return "OclVoid";
    case TypeKind::Boolean: return "Boolean";
    case TypeKind::Integer: return "Integer";
    case TypeKind::Real: return "Real";
    case TypeKind::String: return "String";
    case TypeKind::Object: return t.class_name;
  }
  return "?";
}

}  // namespace

std::string to_string(CollectionKind kind)
{
  switch (kind) {
    case CollectionKind::None: return "";
    case CollectionKind::Set: return "Set";
    case CollectionKind::Bag: return "Bag";
    case CollectionKind::Sequence: return "Sequence";
    case CollectionKind::OrderedSet: return "OrderedSet";
  }
  return "?";
}

std::string to_string(const OclType & t)
{
  if (!t.is_collection()) {
    return scalar_name(t);
  }
  return to_string(t.collection) + "(" + scalar_name(t) + ")";
}

OclType solver_type(const OclType & t)
{
  OclType out = t;
  if (out.collection == CollectionKind::Bag) {
    out.collection = CollectionKind::Set;
  }
  return out;
}

bool parse_basic_type(const std::string & name, OclType & out)
{
  if (name == "Integer") {
    out = OclType::integer();
  } else if (name == "Real") {
    out = OclType::real();
  } else if (name == "String") {
    out = OclType::string();
  } else if (name == "Boolean") {
    out = OclType::boolean();
  } else {
    return false;
  }
  return true;
}

}  // namespace bmv
