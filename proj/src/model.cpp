#include "bmv/model.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace bmv
{

std::string to_string(const Multiplicity & m)
{
  if (!m.upper) {
    return m.lower == 0 ? "*" : std::to_string(m.lower) + "..*";
  }
  if (*m.upper == m.lower) {
    return std::to_string(m.lower);
  }
  return std::to_string(m.lower) + ".." + std::to_string(*m.upper);
}

const Class * Model::find_class(std::string_view n) const
{
  for (const auto & c : classes) {
    if (c.name == n) return &c;
  }
  return nullptr;
}

const Association * Model::find_association(std::string_view n) const
{
  for (const auto & a : associations) {
    if (a.name == n) return &a;
  }
  return nullptr;
}

const Invariant * Model::find_invariant(std::string_view qualified) const
{
  for (const auto & inv : invariants) {
    if (inv.qualified_name() == qualified) return &inv;
  }
  return nullptr;
}

bool Model::is_kind_of(std::string_view sub, std::string_view super) const
{
  if (sub == super) {
    return true;
  }
  std::set<std::string_view> seen{sub};
  std::deque<std::string_view> todo{sub};
  while (!todo.empty()) {
    const auto * c = find_class(todo.front());
    todo.pop_front();
    if (c == nullptr) continue;
    for (const auto & p : c->parents) {
      if (p == super) return true;
      if (seen.insert(p).second) todo.push_back(p);
    }
  }
  return false;
}

std::vector<const Attribute *> Model::all_attributes(std::string_view cls) const
{
  std::vector<const Attribute *> out;
  std::set<std::string_view> seen;
  std::function<void(std::string_view)> walk = [&](std::string_view name) {
    if (!seen.insert(name).second) return;
    const auto * c = find_class(name);
    if (c == nullptr) return;
    for (const auto & p : c->parents) walk(p);
    for (const auto & a : c->attributes) out.push_back(&a);
  };
  walk(cls);
  return out;
}

const Attribute * Model::find_attribute(std::string_view cls, std::string_view attr) const
{
  for (const auto * a : all_attributes(cls)) {
    if (a->name == attr) return a;
  }
  return nullptr;
}

std::vector<RoleRef> Model::navigable_roles(std::string_view cls) const
{
  std::vector<RoleRef> out;
  for (const auto & a : associations) {
    for (int from = 0; from < 2; ++from) {
      if (is_kind_of(cls, a.ends[from].class_name)) {
        out.push_back(RoleRef{&a, from, 1 - from});
      }
    }
  }
  return out;
}

std::optional<RoleRef> Model::find_role(std::string_view cls, std::string_view role) const
{
  for (const auto & r : navigable_roles(cls)) {
    if (r.target().role == role) return r;
  }
  return std::nullopt;
}

std::vector<std::string> Model::concrete_classes() const
{
  std::vector<std::string> out;
  for (const auto & c : classes) {
    if (!c.is_abstract) out.push_back(c.name);
  }
  return out;
}

bool Model::conforms(const OclType & sub, const OclType & super) const
{
  if (sub.collection != super.collection) {
    return false;
  }
  if (sub.element == TypeKind::Void) {
    return true;
  }
  if (sub.element == TypeKind::Integer && super.element == TypeKind::Real) {
    return true;
  }
  if (sub.element != super.element) {
    return false;
  }
  if (sub.element == TypeKind::Object) {
    return is_kind_of(sub.class_name, super.class_name);
  }
  return true;
}

std::optional<OclType> Model::common_supertype(const OclType & a, const OclType & b) const
{
  const OclType x = a.element_type();
  const OclType y = b.element_type();
  if (conforms(x, y)) return y;
  if (conforms(y, x)) return x;
  if (x.element != TypeKind::Object || y.element != TypeKind::Object) {
    return std::nullopt;
  }
  // Breadth-first over x's ancestors: the nearest one that y also extends.
  std::set<std::string> seen{x.class_name};
  std::deque<std::string> todo{x.class_name};
  while (!todo.empty()) {
    const auto * c = find_class(todo.front());
    todo.pop_front();
    if (c == nullptr) continue;
    for (const auto & p : c->parents) {
      if (is_kind_of(y.class_name, p)) return OclType::object(p);
      if (seen.insert(p).second) todo.push_back(p);
    }
  }
  return std::nullopt;
}

namespace
{

ModelError model_error(std::string code, std::string message, SourceLocation loc)
{
  return ModelError{DiagnosticKind::Model, std::move(code), std::move(message), std::move(loc), {}};
}

bool is_reserved_type_name(const std::string & n)
{
  OclType ignored;
  return parse_basic_type(n, ignored) || n == "Set" || n == "Bag" || n == "Sequence" || n == "OrderedSet" ||
         n == "OclAny" || n == "OclVoid";
}

// Strongly connected components of the generalization graph (Tarjan).
std::vector<std::vector<std::size_t>> generalization_cycles(const Model & model)
{
  const auto n = model.classes.size();
  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < n; ++i) index_of.emplace(model.classes[i].name, i);

  std::vector<int> index(n, -1);
  std::vector<int> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> cycles;
  int counter = 0;

  std::function<void(std::size_t)> strong = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    bool self_loop = false;
    for (const auto & p : model.classes[v].parents) {
      auto it = index_of.find(p);
      if (it == index_of.end()) continue;
      const auto w = it->second;
      if (w == v) self_loop = true;
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> component;
      std::size_t w = 0;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      if (component.size() > 1 || self_loop) {
        std::sort(component.begin(), component.end());
        cycles.push_back(std::move(component));
      }
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) strong(v);
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

}  // namespace

std::vector<ModelError> check_well_formed(const Model & model)
{
  std::vector<ModelError> errors;
  std::set<std::string> names;
  for (const auto & c : model.classes) {
    if (!names.insert(c.name).second) {
      errors.push_back(model_error("DuplicateClass", "class `" + c.name + "' is declared twice", c.location));
    }
    if (is_reserved_type_name(c.name)) {
      errors.push_back(model_error("ReservedName", "`" + c.name + "' is a predefined type name", c.location));
    }
    for (const auto & p : c.parents) {
      if (model.find_class(p) == nullptr) {
        errors.push_back(model_error("UnknownClass", "unknown class `" + p + "' in generalization of `" + c.name + "'",
                                     c.location));
      }
    }
  }

  for (const auto & cycle : generalization_cycles(model)) {
    std::string members;
    for (auto i : cycle) {
      members += (members.empty() ? "" : ", ") + model.classes[i].name;
    }
    errors.push_back(model_error("CyclicGeneralization", "cyclic generalization involving " + members,
                                 model.classes[cycle.front()].location));
  }

  std::set<std::string> assoc_names;
  bool ends_known = true;
  for (const auto & a : model.associations) {
    if (!assoc_names.insert(a.name).second || names.count(a.name) > 0) {
      errors.push_back(model_error("DuplicateAssociation", "association name `" + a.name + "' is already used",
                                   a.location));
    }
    for (const auto & end : a.ends) {
      if (model.find_class(end.class_name) == nullptr) {
        ends_known = false;
        errors.push_back(model_error("UnknownClass", "unknown class `" + end.class_name + "' at association end `" +
                                                         end.role + "' of `" + a.name + "'",
                                     end.location));
      }
      const auto & m = end.multiplicity;
      if (m.lower < 0 || (m.upper && (*m.upper < m.lower || *m.upper == 0))) {
        errors.push_back(model_error("InvalidMultiplicity",
                                     "invalid multiplicity " + to_string(m) + " at end `" + end.role + "'",
                                     end.location));
      }
    }
    if (a.ends[0].role == a.ends[1].role) {
      errors.push_back(model_error("DuplicateRole", "both ends of `" + a.name + "' are named `" + a.ends[0].role + "'",
                                   a.location));
    }
  }

  const bool acyclic = generalization_cycles(model).empty();
  if (acyclic) {
    for (const auto & c : model.classes) {
      std::map<std::string, const Attribute *> seen;
      for (const auto * attr : model.all_attributes(c.name)) {
        auto [it, fresh] = seen.emplace(attr->name, attr);
        if (!fresh && it->second != attr) {
          errors.push_back(model_error("DuplicateAttribute",
                                       "attribute `" + attr->name + "' of class `" + c.name + "' is declared twice",
                                       attr->location));
        }
      }
      if (!ends_known) continue;
      std::set<std::string> roles;
      for (const auto & r : model.navigable_roles(c.name)) {
        const auto & role = r.target().role;
        if (!roles.insert(role).second || seen.count(role) > 0) {
          errors.push_back(model_error("DuplicateRole",
                                       "role `" + role + "' is ambiguous for class `" + c.name + "'",
                                       r.association->location));
        }
      }
    }
  }

  std::set<std::string> inv_names;
  for (const auto & inv : model.invariants) {
    if (model.find_class(inv.context) == nullptr) {
      errors.push_back(model_error("UnknownClass", "unknown context class `" + inv.context + "'", inv.location));
    }
    if (!inv_names.insert(inv.qualified_name()).second) {
      errors.push_back(model_error("DuplicateInvariant",
                                   "invariant `" + inv.qualified_name() + "' is declared twice", inv.location));
    }
  }

  // The same role can be reported once per class that sees it; keep one.
  std::vector<ModelError> unique;
  std::set<std::string> reported;
  for (auto & e : errors) {
    if (reported.insert(e.code + "|" + e.message).second) unique.push_back(std::move(e));
  }
  return unique;
}

std::string print_model(const Model & model)
{
  std::string out = "model " + model.name + "\n";
  for (const auto & c : model.classes) {
    out += "\n";
    out += c.is_abstract ? "abstract class " : "class ";
    out += c.name;
    for (std::size_t i = 0; i < c.parents.size(); ++i) {
      out += (i == 0 ? " < " : ", ") + c.parents[i];
    }
    out += "\n";
    if (!c.attributes.empty()) {
      out += "attributes\n";
      for (const auto & a : c.attributes) {
        out += "  " + a.name + " : " + to_string(a.type) + "\n";
      }
    }
    out += "end\n";
  }
  for (const auto & a : model.associations) {
    out += "\nassociation " + a.name + " between\n";
    for (const auto & end : a.ends) {
      out += "  " + end.class_name + " [" + to_string(end.multiplicity) + "] role " + end.role + "\n";
    }
    out += "end\n";
  }
  if (!model.invariants.empty()) {
    out += "\nconstraints\n";
    for (const auto & inv : model.invariants) {
      out += "\ncontext " + inv.context + " inv " + inv.name + ":\n  " +
             (inv.body ? print_ocl(*inv.body) : inv.text) + "\n";
    }
  }
  return out;
}

bool same_structure(const Model & a, const Model & b)
{
  if (a.name != b.name || a.classes.size() != b.classes.size() ||
      a.associations.size() != b.associations.size() || a.invariants.size() != b.invariants.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.classes.size(); ++i) {
    const auto & x = a.classes[i];
    const auto & y = b.classes[i];
    if (x.name != y.name || x.is_abstract != y.is_abstract || x.parents != y.parents ||
        x.attributes.size() != y.attributes.size()) {
      return false;
    }
    for (std::size_t j = 0; j < x.attributes.size(); ++j) {
      if (x.attributes[j].name != y.attributes[j].name || x.attributes[j].type != y.attributes[j].type) {
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < a.associations.size(); ++i) {
    const auto & x = a.associations[i];
    const auto & y = b.associations[i];
    if (x.name != y.name) return false;
    for (int e = 0; e < 2; ++e) {
      if (x.ends[e].role != y.ends[e].role || x.ends[e].class_name != y.ends[e].class_name ||
          x.ends[e].multiplicity != y.ends[e].multiplicity) {
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < a.invariants.size(); ++i) {
    const auto & x = a.invariants[i];
    const auto & y = b.invariants[i];
    if (x.context != y.context || x.name != y.name || !x.body != !y.body) return false;
    if (x.body && !same_structure(*x.body, *y.body)) return false;
  }
  return true;
}

}  // namespace bmv
