#include "bmv/value.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace bmv
{

namespace
{

// Rank of the alternative in the total order; Integer and Real share a rank
// so that numbers interleave by magnitude.
int rank(const Value & v)
{
  switch (v.storage().index()) {
    case 0: return 0;  // Undefined
    case 1: return 1;  // bool
    case 2:
    case 3: return 2;  // numbers
    case 4: return 3;  // string
    case 5: return 4;  // object
    default: return 5; // collection
  }
}

int sign(double d) { return d < 0 ? -1 : (d > 0 ? 1 : 0); }

int compare_numbers(const Value & a, const Value & b)
{
  if (a.is_integer() && b.is_integer()) {
    const auto x = a.as_integer();
    const auto y = b.as_integer();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  const int c = sign(a.as_number() - b.as_number());
  if (c != 0) {
    return c;
  }
  // Same magnitude: Integer before Real.
  return static_cast<int>(a.is_real()) - static_cast<int>(b.is_real());
}

}  // namespace

Value Value::collection(CollectionKind kind, std::vector<Value> elements)
{
  std::sort(elements.begin(), elements.end());
  if (kind == CollectionKind::Set) {
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  }
  return Value(Storage{Collection{kind, std::move(elements)}});
}

int compare(const Value & a, const Value & b)
{
  const int ra = rank(a);
  const int rb = rank(b);
  if (ra != rb) {
    return ra < rb ? -1 : 1;
  }
  switch (ra) {
    case 0: return 0;
    case 1: return static_cast<int>(a.as_boolean()) - static_cast<int>(b.as_boolean());
    case 2: return compare_numbers(a, b);
    case 3: return a.as_string().compare(b.as_string()) < 0 ? -1 : (a.as_string() == b.as_string() ? 0 : 1);
    case 4: return a.as_object() < b.as_object() ? -1 : (a.as_object() == b.as_object() ? 0 : 1);
    default: break;
  }
  const auto & ca = a.as_collection();
  const auto & cb = b.as_collection();
  if (ca.kind != cb.kind) {
    return ca.kind < cb.kind ? -1 : 1;
  }
  const auto n = std::min(ca.elements.size(), cb.elements.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (const int c = compare(ca.elements[i], cb.elements[i]); c != 0) {
      return c;
    }
  }
  if (ca.elements.size() == cb.elements.size()) {
    return 0;
  }
  return ca.elements.size() < cb.elements.size() ? -1 : 1;
}

bool ocl_equal(const Value & a, const Value & b)
{
  if (a.is_number() && b.is_number()) {
    return a.as_number() == b.as_number();
  }
  if (a.is_collection() && b.is_collection()) {
    const auto & ca = a.as_collection();
    const auto & cb = b.as_collection();
    if (ca.kind != cb.kind || ca.elements.size() != cb.elements.size()) {
      return false;
    }
    for (std::size_t i = 0; i < ca.elements.size(); ++i) {
      if (!ocl_equal(ca.elements[i], cb.elements[i])) {
        return false;
      }
    }
    return true;
  }
  return compare(a, b) == 0;
}

std::string format_real(double d)
{
  if (std::isnan(d)) {
    return "nan";
  }
  if (std::isinf(d)) {
    return d < 0 ? "-inf" : "inf";
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) {
    s += ".0";
  }
  return s;
}

std::string to_string(const Value & v)
{
  switch (v.storage().index()) {
    case 0: return "undefined";
    case 1: return v.as_boolean() ? "true" : "false";
    case 2: return std::to_string(v.as_integer());
    case 3: return format_real(v.as_real());
    case 4: {
      std::string out = "'";
      for (char c : v.as_string()) {
        if (c == '\'' || c == '\\') {
          out += '\\';
        }
        out += c;
      }
      return out + "'";
    }
    case 5: return v.as_object();
    default: break;
  }
  const auto & c = v.as_collection();
  std::string out = to_string(c.kind) + "{";
  for (std::size_t i = 0; i < c.elements.size(); ++i) {
    if (i > 0) {
      out += ", ";
    }
    out += to_string(c.elements[i]);
  }
  return out + "}";
}

}  // namespace bmv
