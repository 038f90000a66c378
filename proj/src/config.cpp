#include "bmv/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace bmv
{

const char * to_string(InvariantFlag f)
{
  switch (f) {
    case InvariantFlag::Active: return "active";
    case InvariantFlag::Inactive: return "inactive";
    case InvariantFlag::Negated: return "negated";
  }
  return "?";
}

std::optional<InvariantFlag> parse_invariant_flag(std::string_view s)
{
  if (s == "active") return InvariantFlag::Active;
  if (s == "inactive") return InvariantFlag::Inactive;
  if (s == "negated") return InvariantFlag::Negated;
  return std::nullopt;
}

Bound Configuration::class_bound(const std::string & cls) const
{
  auto it = class_bounds.find(cls);
  return it == class_bounds.end() ? Bound{} : it->second;
}

Bound Configuration::association_bound(const std::string & assoc) const
{
  auto it = association_bounds.find(assoc);
  return it == association_bounds.end() ? Bound{} : it->second;
}

InvariantFlag Configuration::flag(const std::string & qualified) const
{
  auto it = invariant_flags.find(qualified);
  return it == invariant_flags.end() ? InvariantFlag::Active : it->second;
}

std::vector<std::string> Configuration::string_domain() const
{
  if (string_values) return *string_values;
  std::vector<std::string> out;
  for (std::int64_t i = 1; i <= string_count; ++i) out.push_back("string" + std::to_string(i));
  return out;
}

const Configuration * ConfigFile::find(std::string_view name) const
{
  auto it = std::find_if(configs.begin(), configs.end(), [&](const Configuration & c) { return c.name == name; });
  return it == configs.end() ? nullptr : &*it;
}

std::vector<std::string> ConfigFile::names() const
{
  std::vector<std::string> out;
  for (const auto & c : configs) out.push_back(c.name);
  return out;
}

std::string generated_object_name(const std::string & cls, std::int64_t index)
{
  std::string out;
  for (char c : cls) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out + std::to_string(index);
}

namespace
{

std::size_t edit_distance(std::string_view a, std::string_view b)
{
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

std::optional<std::string> nearest(std::string_view key, const std::vector<std::string> & candidates)
{
  std::optional<std::string> best;
  std::size_t best_distance = 0;
  for (const auto & c : candidates) {
    const std::size_t d = edit_distance(key, c);
    if (d > std::max<std::size_t>(2, key.size() / 3)) continue;
    if (!best || d < best_distance) {
      best = c;
      best_distance = d;
    }
  }
  return best;
}

namespace
{

std::string trim(std::string_view s)
{
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

bool ends_with(std::string_view s, std::string_view suffix)
{
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::optional<std::int64_t> to_int(std::string_view s)
{
  std::int64_t v = 0;
  const char * first = s.data();
  const char * last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return v;
}

std::optional<double> to_real(std::string_view s)
{
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string quote(const std::string & s)
{
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "'";
}

std::optional<std::string> unquote(std::string_view s)
{
  if (s.size() < 2 || s.front() != '\'' || s.back() != '\'') return std::nullopt;
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c == '\\') {
      if (i + 2 >= s.size()) return std::nullopt;
      c = s[++i];
      if (c == 'n') c = '\n';
    } else if (c == '\'') {
      return std::nullopt;
    }
    out += c;
  }
  return out;
}

// Splits `{a, 'b,c', d}` (or `(a, b)` with the given brackets) into items.
std::optional<std::vector<std::string>> split_list(std::string_view s, char open, char close)
{
  if (s.size() < 2 || s.front() != open || s.back() != close) return std::nullopt;
  std::vector<std::string> items;
  std::string current;
  bool in_string = false;
  bool any = false;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      current += c;
      if (c == '\\' && i + 2 < s.size()) {
        current += s[++i];
      } else if (c == '\'') {
        in_string = false;
      }
      continue;
    }
    if (c == '\'') {
      in_string = true;
      any = true;
      current += c;
    } else if (c == ',') {
      items.push_back(trim(current));
      current.clear();
      any = true;
    } else {
      if (!std::isspace(static_cast<unsigned char>(c))) any = true;
      current += c;
    }
  }
  if (in_string) return std::nullopt;
  if (any) items.push_back(trim(current));
  for (const auto & item : items) {
    if (item.empty()) return std::nullopt;
  }
  return items;
}

std::string format_value(const Value & v)
{
  if (v.is_integer()) return std::to_string(v.as_integer());
  if (v.is_real()) return format_real(v.as_real());
  if (v.is_string()) return quote(v.as_string());
  if (v.is_boolean()) return v.as_boolean() ? "true" : "false";
  return to_string(v);
}

std::optional<Value> parse_value(const std::string & item, const OclType & type)
{
  switch (type.element) {
    case TypeKind::Integer:
      if (auto i = to_int(item)) return Value::integer(*i);
      return std::nullopt;
    case TypeKind::Real:
      if (auto r = to_real(item)) return Value::real(*r);
      return std::nullopt;
    case TypeKind::String:
      if (auto s = unquote(item)) return Value::string(*s);
      return std::nullopt;
    case TypeKind::Boolean:
      if (item == "true") return Value::boolean(true);
      if (item == "false") return Value::boolean(false);
      return std::nullopt;
    default: return std::nullopt;
  }
}

const char * describe(const OclType & t)
{
  switch (t.element) {
    case TypeKind::Integer: return "integers";
    case TypeKind::Real: return "numbers";
    case TypeKind::String: return "quoted strings";
    case TypeKind::Boolean: return "true/false";
    default: return "values";
  }
}

// Resolves `<Class>_<attr>` against the model, trying every split point.
std::optional<std::pair<std::string, std::string>> resolve_attribute_key(std::string_view key, const Model & model)
{
  for (std::size_t i = key.find('_'); i != std::string_view::npos; i = key.find('_', i + 1)) {
    const std::string cls(key.substr(0, i));
    const std::string attr(key.substr(i + 1));
    if (model.find_class(cls) != nullptr && model.find_attribute(cls, attr) != nullptr) return std::make_pair(cls, attr);
  }
  return std::nullopt;
}

std::vector<std::string> valid_keys(const Model & model)
{
  std::vector<std::string> keys = {"Integer_min", "Integer_max", "String_count", "String_values",
                                   "Real_values",  "bitwidth",    "default_upper"};
  for (const auto & c : model.classes) {
    if (!c.is_abstract) {
      keys.push_back(c.name + "_min");
      keys.push_back(c.name + "_max");
    }
    for (const auto * a : model.all_attributes(c.name)) {
      keys.push_back(c.name + "_" + a->name);
      if (a->type.is(TypeKind::Integer)) {
        keys.push_back(c.name + "_" + a->name + "_min");
        keys.push_back(c.name + "_" + a->name + "_max");
      }
    }
  }
  for (const auto & a : model.associations) {
    keys.push_back(a.name + "_min");
    keys.push_back(a.name + "_max");
    keys.push_back("link::" + a.name);
  }
  for (const auto & inv : model.invariants) keys.push_back("inv::" + inv.qualified_name());
  return keys;
}

class ConfigParser
{
public:
  ConfigParser(const Model & model, std::string path) : model_(model), path_(std::move(path)) {}

  ParseResult<ConfigFile> run(std::string_view text)
  {
    ParseResult<ConfigFile> out;
    ConfigFile file;
    file.path = path_;
    std::set<std::string> seen_keys;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      loc_ = SourceLocation{path_, line_no, 1};
      const std::string line = trim(raw);
      if (line.empty() || line[0] == '#') continue;
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) {
          error("", "SyntaxError", "malformed section header `" + line + "'; expected `[name]'");
          continue;
        }
        const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
        if (name.empty()) {
          error("", "SyntaxError", "configuration name must not be empty");
          continue;
        }
        if (file.find(name) != nullptr) {
          error("", "DuplicateName", "configuration `" + name + "' is defined twice");
        }
        file.configs.push_back(Configuration{});
        file.configs.back().name = name;
        seen_keys.clear();
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        error("", "SyntaxError", "expected `key = value', got `" + line + "'");
        continue;
      }
      const std::string key = trim(std::string_view(line).substr(0, eq));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      loc_.column = static_cast<int>(raw.find_first_not_of(" \t") + 1);
      if (file.configs.empty()) {
        error(key, "SyntaxError", "key `" + key + "' appears before any `[name]' section");
        continue;
      }
      if (key.rfind("link::", 0) != 0 && !seen_keys.insert(key).second) {
        error(key, "DuplicateKey", "key `" + key + "' is set twice in configuration `" + file.configs.back().name + "'");
        continue;
      }
      assign(file.configs.back(), key, value);
    }
    out.diagnostics = std::move(errors_);
    if (out.diagnostics.empty()) out.value = std::move(file);
    return out;
  }

private:
  void error(const std::string & key, std::string code, std::string message)
  {
    errors_.push_back(ConfigError{DiagnosticKind::Config, std::move(code), std::move(message), loc_, key});
  }

  std::optional<std::int64_t> integer(const std::string & key, const std::string & value, bool nonnegative)
  {
    auto v = to_int(value);
    if (!v || (nonnegative && *v < 0)) {
      error(key, "InvalidValue", "`" + key + "' expects " + (nonnegative ? "a nonnegative integer" : "an integer") +
                                   ", got `" + value + "'");
      return std::nullopt;
    }
    return v;
  }

  void bound(Bound & b, const std::string & key, const std::string & value, bool is_max)
  {
    if (is_max) {
      if (value == "*") {
        b.max = std::nullopt;
      } else if (auto v = to_int(value); v && *v >= 0) {
        b.max = *v;
      } else {
        error(key, "InvalidValue", "`" + key + "' expects a nonnegative integer or `*', got `" + value + "'");
      }
    } else if (auto v = integer(key, value, true)) {
      b.min = *v;
    }
  }

  void assign(Configuration & c, const std::string & key, const std::string & value)
  {
    if (key == "Integer_min" || key == "Integer_max") {
      if (auto v = integer(key, value, false)) (key == "Integer_min" ? c.integer_min : c.integer_max) = *v;
      return;
    }
    if (key == "String_count") {
      if (auto v = integer(key, value, true)) c.string_count = *v;
      return;
    }
    if (key == "default_upper") {
      if (auto v = integer(key, value, true)) c.default_upper = *v;
      return;
    }
    if (key == "bitwidth") {
      auto v = to_int(value);
      if (!v || *v < 1 || *v > 63) {
        error(key, "InvalidValue", "`bitwidth' expects an integer between 1 and 63, got `" + value + "'");
      } else {
        c.bitwidth = static_cast<int>(*v);
      }
      return;
    }
    if (key == "String_values") {
      auto items = split_list(value, '{', '}');
      std::vector<std::string> strings;
      bool ok = items.has_value();
      for (const auto & item : items.value_or(std::vector<std::string>{})) {
        auto s = unquote(item);
        if (!s) {
          ok = false;
          break;
        }
        strings.push_back(*s);
      }
      if (!ok) {
        error(key, "InvalidValue", "`String_values' expects a set of quoted strings like {'a', 'b'}, got `" + value + "'");
      } else {
        c.string_values = std::move(strings);
      }
      return;
    }
    if (key == "Real_values") {
      auto items = split_list(value, '{', '}');
      std::vector<double> reals;
      bool ok = items.has_value();
      for (const auto & item : items.value_or(std::vector<std::string>{})) {
        auto r = to_real(item);
        if (!r) {
          ok = false;
          break;
        }
        reals.push_back(*r);
      }
      if (!ok) {
        error(key, "InvalidValue", "`Real_values' expects a set of numbers like {0.5, 1.0}, got `" + value + "'");
      } else {
        c.real_values = std::move(reals);
      }
      return;
    }
    if (key.rfind("inv::", 0) == 0) {
      auto f = parse_invariant_flag(value);
      if (!f) {
        error(key, "InvalidValue", "`" + key + "' expects active, inactive or negated, got `" + value + "'");
      } else {
        c.invariant_flags[key.substr(5)] = *f;
      }
      return;
    }
    if (key.rfind("link::", 0) == 0) {
      auto items = split_list(value, '(', ')');
      if (!items || items->size() != 2) {
        error(key, "InvalidValue", "`" + key + "' expects a pair of object names like (a, b), got `" + value + "'");
      } else {
        c.required_links.push_back(RequiredLink{key.substr(6), (*items)[0], (*items)[1]});
      }
      return;
    }

    const bool is_min = ends_with(key, "_min");
    const bool is_max = ends_with(key, "_max");
    if (is_min || is_max) {
      const std::string base = key.substr(0, key.size() - 4);
      if (model_.find_class(base) != nullptr) {
        bound(c.class_bounds[base], key, value, is_max);
        return;
      }
      if (model_.find_association(base) != nullptr) {
        bound(c.association_bounds[base], key, value, is_max);
        return;
      }
      if (auto attr = resolve_attribute_key(base, model_)) {
        if (auto v = integer(key, value, false)) {
          auto & d = c.attribute_domains[*attr];
          (is_min ? d.min : d.max) = *v;
        }
        return;
      }
    }
    if (auto attr = resolve_attribute_key(key, model_)) {
      const OclType type = model_.find_attribute(attr->first, attr->second)->type;
      auto items = split_list(value, '{', '}');
      std::vector<Value> values;
      bool ok = items.has_value();
      for (const auto & item : items.value_or(std::vector<std::string>{})) {
        auto v = parse_value(item, type);
        if (!v) {
          ok = false;
          break;
        }
        values.push_back(*v);
      }
      if (!ok) {
        error(key, "InvalidValue", "`" + key + "' expects a set of " + describe(type) + " like {v1, v2}, got `" +
                                     value + "'");
      } else {
        c.attribute_domains[*attr].values = std::move(values);
      }
      return;
    }
    std::string message = "unknown key `" + key + "'";
    if (auto hint = nearest(key, valid_keys(model_))) message += "; did you mean `" + *hint + "'?";
    error(key, "UnknownKey", message);
  }

  const Model & model_;
  std::string path_;
  SourceLocation loc_;
  std::vector<ConfigError> errors_;
};

}  // namespace

ParseResult<ConfigFile> parse_config_file(std::string_view text, const Model & model, const std::string & path)
{
  return ConfigParser(model, path).run(text);
}

std::string serialize_config_file(const ConfigFile & file)
{
  std::ostringstream os;
  bool first = true;
  for (const auto & c : file.configs) {
    if (!first) os << '\n';
    first = false;
    os << '[' << c.name << "]\n";
    os << "Integer_min = " << c.integer_min << '\n';
    os << "Integer_max = " << c.integer_max << '\n';
    os << "String_count = " << c.string_count << '\n';
    if (c.string_values) {
      os << "String_values = {";
      for (std::size_t i = 0; i < c.string_values->size(); ++i) os << (i ? ", " : "") << quote((*c.string_values)[i]);
      os << "}\n";
    }
    if (c.real_values) {
      os << "Real_values = {";
      for (std::size_t i = 0; i < c.real_values->size(); ++i) os << (i ? ", " : "") << format_real((*c.real_values)[i]);
      os << "}\n";
    }
    os << "bitwidth = " << c.bitwidth << '\n';
    os << "default_upper = " << c.default_upper << '\n';
    for (const auto * bounds : {&c.class_bounds, &c.association_bounds}) {
      for (const auto & [name, b] : *bounds) {
        os << name << "_min = " << b.min << '\n';
        os << name << "_max = " << (b.max ? std::to_string(*b.max) : "*") << '\n';
      }
    }
    for (const auto & [key, d] : c.attribute_domains) {
      const std::string prefix = key.first + "_" + key.second;
      if (d.values) {
        os << prefix << " = {";
        for (std::size_t i = 0; i < d.values->size(); ++i) os << (i ? ", " : "") << format_value((*d.values)[i]);
        os << "}\n";
      }
      if (d.min) os << prefix << "_min = " << *d.min << '\n';
      if (d.max) os << prefix << "_max = " << *d.max << '\n';
    }
    for (const auto & [name, flag] : c.invariant_flags) os << "inv::" << name << " = " << to_string(flag) << '\n';
    for (const auto & l : c.required_links) {
      os << "link::" << l.association << " = (" << l.first << ", " << l.second << ")\n";
    }
  }
  return os.str();
}

namespace
{

struct Validator
{
  const Configuration & config;
  const Model & model;
  const SystemState * base;
  std::vector<ConfigError> errors;

  void error(const std::string & key, std::string code, std::string message)
  {
    errors.push_back(ConfigError{DiagnosticKind::Config, std::move(code), std::move(message),
                                 SourceLocation{"<config:" + config.name + ">", 1, 1}, key});
  }

  void check_bound(const std::string & name, const Bound & b)
  {
    const std::int64_t max = config.upper(b);
    if (b.min < 0) error(name + "_min", "InvalidValue", "`" + name + "_min' must be nonnegative");
    if (b.max && *b.max < 0) error(name + "_max", "InvalidValue", "`" + name + "_max' must be nonnegative");
    if (b.min > max) {
      error(name + "_min", "MinExceedsMax",
            "`" + name + "_min' (" + std::to_string(b.min) + ") exceeds `" + name + "_max' (" + std::to_string(max) +
              (b.max ? "" : ", the default upper bound") + ")");
    }
  }

  // Class whose generated objects are named like `name`, if any.
  std::optional<std::pair<std::string, std::int64_t>> generated(const std::string & name) const
  {
    for (const auto & c : model.classes) {
      if (c.is_abstract) continue;
      const std::string prefix = generated_object_name(c.name, 0).substr(0, c.name.size());
      if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) continue;
      const std::string digits = name.substr(prefix.size());
      if (digits[0] == '0') continue;
      if (auto i = to_int(digits); i && *i > 0 && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
        return std::make_pair(c.name, *i);
      }
    }
    return std::nullopt;
  }

  void check_link(const RequiredLink & l)
  {
    const std::string key = "link::" + l.association;
    const Association * assoc = model.find_association(l.association);
    if (assoc == nullptr) {
      error(key, "UnknownAssociation", "unknown association `" + l.association + "'");
      return;
    }
    const std::string * ends[2] = {&l.first, &l.second};
    for (int i = 0; i < 2; ++i) {
      const auto & end = assoc->ends[i];
      if (base != nullptr) {
        if (const ObjectState * obj = base->find(*ends[i])) {
          if (!model.is_kind_of(obj->class_name, end.class_name)) {
            error(key, "InvalidLinkEnd", "object `" + *ends[i] + "' is a " + obj->class_name + ", not a " + end.class_name);
          }
          continue;
        }
      }
      auto g = generated(*ends[i]);
      if (!g) {
        error(key, "InvalidLinkEnd", "`" + *ends[i] + "' is neither a given object nor a generated name like `" +
                                       generated_object_name(end.class_name, 1) + "'");
        continue;
      }
      if (!model.is_kind_of(g->first, end.class_name)) {
        error(key, "InvalidLinkEnd", "`" + *ends[i] + "' is a " + g->first + ", not a " + end.class_name);
        continue;
      }
      const Bound b = config.class_bound(g->first);
      if (g->second > config.upper(b)) {
        error(key, "InvalidLinkEnd", "`" + *ends[i] + "' needs " + std::to_string(g->second) + " objects of " +
                                       g->first + " but `" + g->first + "_max' allows " +
                                       std::to_string(config.upper(b)));
      }
    }
  }

  void run()
  {
    if (config.integer_min > config.integer_max) {
      error("Integer_min", "MinExceedsMax", "`Integer_min' (" + std::to_string(config.integer_min) +
                                              ") exceeds `Integer_max' (" + std::to_string(config.integer_max) + ")");
    }
    if (config.string_count < 0) error("String_count", "InvalidValue", "`String_count' must be nonnegative");
    if (config.default_upper < 0) error("default_upper", "InvalidValue", "`default_upper' must be nonnegative");
    if (config.bitwidth < 1 || config.bitwidth > 63) {
      error("bitwidth", "InvalidValue", "`bitwidth' must lie between 1 and 63");
    }
    if (config.real_values) {
      for (double r : *config.real_values) {
        if (!std::isfinite(r)) error("Real_values", "InvalidValue", "`Real_values' must be finite numbers");
      }
    }
    for (const auto & [name, b] : config.class_bounds) {
      const Class * cls = model.find_class(name);
      if (cls == nullptr) {
        error(name + "_min", "UnknownClass", "unknown class `" + name + "'");
        continue;
      }
      if (cls->is_abstract) {
        error(name + "_min", "AbstractClassBound",
              "class `" + name + "' is abstract and cannot be instantiated; remove `" + name + "_min' and `" + name +
                "_max'");
        continue;
      }
      check_bound(name, b);
    }
    for (const auto & [name, b] : config.association_bounds) {
      if (model.find_association(name) == nullptr) {
        error(name + "_min", "UnknownAssociation", "unknown association `" + name + "'");
        continue;
      }
      check_bound(name, b);
    }
    for (const auto & [key, d] : config.attribute_domains) {
      const std::string prefix = key.first + "_" + key.second;
      const Attribute * attr = model.find_class(key.first) ? model.find_attribute(key.first, key.second) : nullptr;
      if (attr == nullptr) {
        error(prefix, "UnknownAttribute", "class `" + key.first + "' has no attribute `" + key.second + "'");
        continue;
      }
      if ((d.min || d.max) && !attr->type.is(TypeKind::Integer)) {
        error(prefix + (d.min ? "_min" : "_max"), "InvalidValue",
              "`" + prefix + "' is not an Integer attribute and cannot take a range");
      }
      if (d.min && d.max && *d.min > *d.max) {
        error(prefix + "_min", "MinExceedsMax", "`" + prefix + "_min' exceeds `" + prefix + "_max'");
      }
      if (d.values) {
        for (const auto & v : *d.values) {
          const bool fits = (attr->type.is(TypeKind::Integer) && v.is_integer()) ||
                            (attr->type.is(TypeKind::Real) && v.is_number()) ||
                            (attr->type.is(TypeKind::String) && v.is_string()) ||
                            (attr->type.is(TypeKind::Boolean) && v.is_boolean());
          if (!fits) {
            error(prefix, "TypeMismatch", "value " + to_string(v) + " in `" + prefix + "' is not of type " +
                                            to_string(attr->type));
          }
        }
      }
    }
    std::vector<std::string> invariant_names;
    for (const auto & inv : model.invariants) invariant_names.push_back(inv.qualified_name());
    for (const auto & [name, flag] : config.invariant_flags) {
      if (model.find_invariant(name) != nullptr) continue;
      std::string message = "unknown invariant `" + name + "'";
      if (auto hint = nearest(name, invariant_names)) message += "; did you mean `" + *hint + "'?";
      error("inv::" + name, "UnknownInvariant", message);
    }
    for (const auto & l : config.required_links) check_link(l);
  }
};

void check_name(const std::string & name)
{
  if (name.empty() || trim(name) != name || name.find_first_of("[]\n\r#") != std::string::npos) {
    throw Error("InvalidName", "invalid configuration name `" + name +
                                 "'; names must be nonempty, without brackets, `#' or surrounding spaces");
  }
}

std::vector<Configuration>::const_iterator require(const ConfigFile & file, const std::string & name)
{
  auto it = std::find_if(file.configs.begin(), file.configs.end(),
                         [&](const Configuration & c) { return c.name == name; });
  if (it == file.configs.end()) throw Error("UnknownConfig", "no configuration named `" + name + "'");
  return it;
}

}  // namespace

std::vector<ConfigError> validate(const Configuration & config, const Model & model, const SystemState * base)
{
  Validator v{config, model, base, {}};
  v.run();
  return std::move(v.errors);
}

Configuration default_config(const Model & model, const std::string & name)
{
  Configuration c;
  c.name = name;
  for (const auto & cls : model.classes) {
    if (!cls.is_abstract) c.class_bounds[cls.name] = Bound{};
  }
  for (const auto & a : model.associations) c.association_bounds[a.name] = Bound{};
  for (const auto & inv : model.invariants) c.invariant_flags[inv.qualified_name()] = InvariantFlag::Active;
  return c;
}

ConfigFile clone_config(const ConfigFile & file, const std::string & name, const std::optional<std::string> & new_name)
{
  auto it = require(file, name);
  std::string target;
  if (new_name) {
    target = *new_name;
  } else {
    target = name + " (copy)";
    for (int n = 2; file.find(target) != nullptr; ++n) target = name + " (copy " + std::to_string(n) + ")";
  }
  check_name(target);
  if (file.find(target) != nullptr) throw Error("DuplicateName", "configuration `" + target + "' already exists");
  ConfigFile out = file;
  Configuration copy = *it;
  copy.name = target;
  out.configs.push_back(std::move(copy));
  return out;
}

ConfigFile rename_config(const ConfigFile & file, const std::string & name, const std::string & new_name)
{
  const auto index = require(file, name) - file.configs.begin();
  check_name(new_name);
  if (new_name != name && file.find(new_name) != nullptr) {
    throw Error("DuplicateName", "configuration `" + new_name + "' already exists");
  }
  ConfigFile out = file;
  out.configs[index].name = new_name;
  return out;
}

ConfigFile delete_config(const ConfigFile & file, const std::string & name)
{
  const auto index = require(file, name) - file.configs.begin();
  ConfigFile out = file;
  out.configs.erase(out.configs.begin() + index);
  return out;
}

ConfigFile put_config(const ConfigFile & file, const Configuration & config)
{
  check_name(config.name);
  ConfigFile out = file;
  for (auto & c : out.configs) {
    if (c.name == config.name) {
      c = config;
      return out;
    }
  }
  out.configs.push_back(config);
  return out;
}

}  // namespace bmv
