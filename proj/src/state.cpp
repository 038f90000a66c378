#include "bmv/state.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace bmv
{

using nlohmann::json;

const ObjectState * SystemState::find(std::string_view name) const
{
  auto it = objects.find(std::string(name));
  return it == objects.end() ? nullptr : &it->second;
}

std::int64_t SystemState::count_of(std::string_view cls) const
{
  return std::count_if(objects.begin(), objects.end(), [&](const auto & kv) { return kv.second.class_name == cls; });
}

std::int64_t SystemState::link_count(std::string_view association) const
{
  return std::count_if(links.begin(), links.end(), [&](const Link & l) { return l.association == association; });
}

std::string Violation::message() const
{
  return "Multiplicity violation: object `" + object + "' has " + std::to_string(count) + " link(s) at end `" +
         role + "' of association `" + association + "' (expected " + to_string(expected) + ")";
}

namespace
{

bool value_fits(const Value & v, const OclType & t)
{
  if (v.is_undefined()) return true;
  switch (t.element) {
    case TypeKind::Boolean: return v.is_boolean();
    case TypeKind::Integer: return v.is_integer();
    case TypeKind::Real: return v.is_number();
    case TypeKind::String: return v.is_string();
    default: return false;
  }
}

Diagnostic state_error(std::string code, std::string message)
{
  return Diagnostic{DiagnosticKind::State, std::move(code), std::move(message), SourceLocation{"<state>", 1, 1}, {}};
}

}  // namespace

std::vector<Diagnostic> check_structure(const SystemState & state, const Model & model)
{
  std::vector<Diagnostic> out;
  for (const auto & [name, obj] : state.objects) {
    const Class * cls = model.find_class(obj.class_name);
    if (cls == nullptr) {
      out.push_back(state_error("UnknownClass", "object `" + name + "' has unknown class `" + obj.class_name + "'"));
      continue;
    }
    if (cls->is_abstract) {
      out.push_back(state_error("AbstractInstantiation",
                                "object `" + name + "' instantiates abstract class `" + obj.class_name + "'"));
    }
    for (const auto & [attr, value] : obj.attributes) {
      const Attribute * a = model.find_attribute(obj.class_name, attr);
      if (a == nullptr) {
        out.push_back(state_error("UnknownAttribute", "class `" + obj.class_name + "' has no attribute `" + attr + "'"));
      } else if (!value_fits(value, a->type)) {
        out.push_back(state_error("TypeMismatch", "value " + to_string(value) + " of `" + name + "." + attr +
                                                    "' does not match type " + to_string(a->type)));
      }
    }
  }
  for (const Link & link : state.links) {
    const Association * assoc = model.find_association(link.association);
    if (assoc == nullptr) {
      out.push_back(state_error("UnknownAssociation", "unknown association `" + link.association + "'"));
      continue;
    }
    const std::string * names[2] = {&link.first, &link.second};
    for (int i = 0; i < 2; ++i) {
      const ObjectState * obj = state.find(*names[i]);
      if (obj == nullptr) {
        out.push_back(state_error("UnknownObject", "link of `" + link.association + "' references unknown object `" +
                                                     *names[i] + "'"));
      } else if (!model.is_kind_of(obj->class_name, assoc->ends[i].class_name)) {
        out.push_back(state_error("TypeMismatch", "object `" + *names[i] + "' of class " + obj->class_name +
                                                    " cannot be at end `" + assoc->ends[i].role + "' of `" +
                                                    assoc->name + "'"));
      }
    }
  }
  return out;
}

std::vector<Violation> check_model_inherent(const SystemState & state, const Model & model)
{
  std::vector<Violation> out;
  for (const auto & assoc : model.associations) {
    // partners[end][object] = links where `object` sits at the opposite end
    std::map<std::string, std::int64_t> partners[2];
    for (const Link & l : state.links) {
      if (l.association != assoc.name) continue;
      ++partners[1][l.first];
      ++partners[0][l.second];
    }
    for (const auto & [name, obj] : state.objects) {
      for (int end = 0; end < 2; ++end) {
        if (!model.is_kind_of(obj.class_name, assoc.ends[1 - end].class_name)) continue;
        const auto it = partners[end].find(name);
        const std::int64_t n = it == partners[end].end() ? 0 : it->second;
        if (!assoc.ends[end].multiplicity.admits(n)) {
          out.push_back(Violation{name, assoc.name, assoc.ends[end].role, n, assoc.ends[end].multiplicity});
        }
      }
    }
  }
  return out;
}

namespace
{

std::string dot_escape(const std::string & s)
{
  std::string out;
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

json value_to_json(const Value & v)
{
  if (v.is_undefined()) return nullptr;
  if (v.is_boolean()) return v.as_boolean();
  if (v.is_integer()) return v.as_integer();
  if (v.is_real()) return v.as_real();
  if (v.is_string()) return v.as_string();
  if (v.is_object()) return json{{"ref", v.as_object()}};
  const Collection & c = v.as_collection();
  json items = json::array();
  for (const auto & e : c.elements) items.push_back(value_to_json(e));
  return json{{c.kind == CollectionKind::Bag ? "bag" : "set", items}};
}

Value value_from_json(const json & j)
{
  if (j.is_null()) return Value::undefined();
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_number_float()) return Value::real(j.get<double>());
  if (j.is_string()) return Value::string(j.get<std::string>());
  if (j.is_object() && j.size() == 1) {
    if (j.contains("ref")) return Value::object(j.at("ref").get<std::string>());
    for (const char * key : {"set", "bag"}) {
      if (!j.contains(key)) continue;
      std::vector<Value> items;
      for (const auto & e : j.at(key)) items.push_back(value_from_json(e));
      return Value::collection(key[0] == 's' ? CollectionKind::Set : CollectionKind::Bag, std::move(items));
    }
  }
  throw Error("InvalidState", "unsupported attribute value " + j.dump());
}

}  // namespace

std::string export_dot(const SystemState & state)
{
  std::ostringstream os;
  os << "digraph state {\n  node [shape=box];\n";
  for (const auto & [name, obj] : state.objects) {
    std::string label = name + ":" + obj.class_name;
    for (const auto & [attr, value] : obj.attributes) {
      label += "\n" + attr + " = " + to_string(value);
    }
    os << "  \"" << dot_escape(name) << "\" [label=\"" << dot_escape(label) << "\"];\n";
  }
  for (const Link & l : state.links) {
    os << "  \"" << dot_escape(l.first) << "\" -> \"" << dot_escape(l.second) << "\" [label=\""
       << dot_escape(l.association) << "\", dir=none];\n";
  }
  os << "}\n";
  return os.str();
}

std::string export_json(const SystemState & state)
{
  json objects = json::array();
  for (const auto & [name, obj] : state.objects) {
    json attrs = json::object();
    for (const auto & [attr, value] : obj.attributes) attrs[attr] = value_to_json(value);
    objects.push_back(json{{"name", name}, {"class", obj.class_name}, {"attrs", attrs}});
  }
  json links = json::array();
  for (const Link & l : state.links) {
    links.push_back(json{{"assoc", l.association}, {"ends", json::array({l.first, l.second})}});
  }
  return json{{"objects", objects}, {"links", links}}.dump(2);
}

SystemState import_json(std::string_view text)
{
  SystemState state;
  try {
    const json doc = json::parse(text);
    for (const auto & o : doc.at("objects")) {
      const auto name = o.at("name").get<std::string>();
      ObjectState obj;
      obj.class_name = o.at("class").get<std::string>();
      if (o.contains("attrs")) {
        for (const auto & [attr, value] : o.at("attrs").items()) obj.attributes[attr] = value_from_json(value);
      }
      if (!state.objects.emplace(name, std::move(obj)).second) {
        throw Error("InvalidState", "duplicate object name `" + name + "'");
      }
    }
    for (const auto & l : doc.at("links")) {
      const auto & ends = l.at("ends");
      if (!ends.is_array() || ends.size() != 2) throw Error("InvalidState", "a link needs exactly two ends");
      state.links.insert(
        Link{l.at("assoc").get<std::string>(), ends[0].get<std::string>(), ends[1].get<std::string>()});
    }
  } catch (const json::exception & e) {
    throw Error("InvalidState", std::string("malformed state JSON: ") + e.what());
  }
  return state;
}

}  // namespace bmv
