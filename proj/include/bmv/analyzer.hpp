// bmv/analyzer.hpp - static warnings for constructs the solver reads differently
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmv/config.hpp"
#include "bmv/diagnostics.hpp"
#include "bmv/model.hpp"

namespace bmv
{

enum class WarningKind { BagCollapse, SumOverDuplicates, TypeContradiction, BitwidthTooSmall };

const char * to_string(WarningKind k);

struct Warning
{
  WarningKind kind = WarningKind::BagCollapse;
  std::string message;  // full line, starting with `WARNING: `
  SourceLocation location;
  std::string expression_text;
  std::string invariant;  // qualified name, empty for configuration values
};

/// One warning per node typed Bag (a Set for the solver).
std::vector<Warning> warn_bag_collapse(const Model & model);
/// One warning per sum() over a Bag-typed source.
std::vector<Warning> warn_sum_over_duplicates(const Model & model);
/// One warning per `=` or `<>` between a Set and a Bag.
std::vector<Warning> warn_type_contradictions(const Model & model);
/// At most one warning, naming the value that needs the most bits.
std::vector<Warning> warn_bitwidth(const Model & model, const Configuration & config);

/// Smallest k with -2^(k-1) <= v <= 2^(k-1)-1.
int required_bitwidth(std::int64_t v);

/// All of the above; the bitwidth check only when a configuration is given.
std::vector<Warning> analyze_all(const Model & model, const Configuration * config = nullptr);

}  // namespace bmv
