// bmv/config.hpp - search-space configurations and `.properties` files
//
//   [scenario]
//   Integer_min = -10
//   Integer_max = 10
//   String_count = 10
//   Customer_min = 1
//   Customer_max = 1
//   Employment_max = *
//   Car_kilometers = {0, 100}
//   inv::Person::NonNegativeAge = active
//   link::Employment = (employee1, branch1)
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bmv/diagnostics.hpp"
#include "bmv/model.hpp"
#include "bmv/state.hpp"
#include "bmv/value.hpp"

namespace bmv
{

struct Bound
{
  std::int64_t min = 0;
  std::optional<std::int64_t> max;  // nullopt is `*`, resolved through default_upper

  bool operator==(const Bound &) const = default;
};

/// Explicit values, an integer subrange, or both (intersected).
struct AttributeDomain
{
  std::optional<std::vector<Value>> values;
  std::optional<std::int64_t> min;
  std::optional<std::int64_t> max;

  bool operator==(const AttributeDomain &) const = default;
};

enum class InvariantFlag { Active, Inactive, Negated };

const char * to_string(InvariantFlag f);
std::optional<InvariantFlag> parse_invariant_flag(std::string_view s);

struct RequiredLink
{
  std::string association;
  std::string first;
  std::string second;

  bool operator==(const RequiredLink &) const = default;
};

struct Configuration
{
  std::string name;
  std::int64_t integer_min = -10;
  std::int64_t integer_max = 10;
  std::int64_t string_count = 10;
  std::optional<std::vector<std::string>> string_values;
  std::optional<std::vector<double>> real_values;
  std::map<std::string, Bound> class_bounds;        // absent: (0, *)
  std::map<std::string, Bound> association_bounds;  // absent: (0, *)
  std::map<std::pair<std::string, std::string>, AttributeDomain> attribute_domains;
  std::map<std::string, InvariantFlag> invariant_flags;  // absent: active
  int bitwidth = 8;
  std::int64_t default_upper = 10;
  std::vector<RequiredLink> required_links;

  bool operator==(const Configuration &) const = default;

  [[nodiscard]] std::int64_t upper(const Bound & b) const { return b.max ? *b.max : default_upper; }
  [[nodiscard]] Bound class_bound(const std::string & cls) const;
  [[nodiscard]] Bound association_bound(const std::string & assoc) const;
  [[nodiscard]] InvariantFlag flag(const std::string & qualified) const;
  /// Strings attributes range over: explicit values or 'string1'..'stringN'.
  [[nodiscard]] std::vector<std::string> string_domain() const;
};

struct ConfigFile
{
  std::string path;
  std::vector<Configuration> configs;  // file order

  bool operator==(const ConfigFile &) const = default;

  [[nodiscard]] const Configuration * find(std::string_view name) const;
  [[nodiscard]] std::vector<std::string> names() const;
};

ParseResult<ConfigFile> parse_config_file(std::string_view text, const Model & model,
                                          const std::string & path = "<config>");
std::string serialize_config_file(const ConfigFile & file);

/// Every problem with `config` against `model`, keyed by the offending
/// property key. Required-link endpoints must name a `base` object or a
/// generated object such as `branch1`.
std::vector<ConfigError> validate(const Configuration & config, const Model & model,
                                  const SystemState * base = nullptr);

Configuration default_config(const Model & model, const std::string & name = "default");

/// Throw bmv::Error with code UnknownConfig, DuplicateName or InvalidName.
ConfigFile clone_config(const ConfigFile & file, const std::string & name,
                        const std::optional<std::string> & new_name = std::nullopt);
ConfigFile rename_config(const ConfigFile & file, const std::string & name, const std::string & new_name);
ConfigFile delete_config(const ConfigFile & file, const std::string & name);
ConfigFile put_config(const ConfigFile & file, const Configuration & config);  // replace or append

/// Name given to objects the finder creates: `<lowercased class><index>`.
std::string generated_object_name(const std::string & cls, std::int64_t index);

/// Closest entry of `candidates` by edit distance, if any is close enough.
std::optional<std::string> nearest(std::string_view key, const std::vector<std::string> & candidates);

}  // namespace bmv
