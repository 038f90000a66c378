// bmv/finder.hpp - bounded search for object diagrams
//
// The search space of a configuration is explored in three layers: object
// counts per concrete class, then links per association, then attribute
// values. Multiplicities are checked forward while links are chosen, and
// invariants are evaluated (solver semantics) as soon as the parts of the
// state they read are decided.
#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bmv/config.hpp"
#include "bmv/model.hpp"
#include "bmv/state.hpp"

namespace bmv
{

class CancelToken
{
public:
  void cancel() { flag_.store(true, std::memory_order_relaxed); }
  [[nodiscard]] bool cancelled() const { return flag_.load(std::memory_order_relaxed); }

private:
  std::atomic<bool> flag_{false};
};

enum class Verdict { Sat, Unsat, Timeout };

const char * to_string(Verdict v);  // SAT, UNSAT, TIMEOUT

struct FinderOptions
{
  bool symmetry_breaking = true;
  bool early_checks = true;  // evaluate invariants on partial states
  std::uint64_t seed = 0;    // nonzero shuffles attribute value order
};

struct FinderProblem
{
  const Model * model = nullptr;
  Configuration config;
  std::optional<SystemState> base;
  std::optional<std::chrono::milliseconds> timeout;
  std::shared_ptr<CancelToken> cancel;
  FinderOptions options;
};

struct FinderStats
{
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t count_vectors = 0;  // object-count combinations tried
  double elapsed_ms = 0;
};

struct FinderResult
{
  Verdict verdict = Verdict::Unsat;
  std::optional<SystemState> state;  // set iff SAT
  FinderStats stats;
  std::vector<std::string> log;
};

/// Throws bmv::Error with code InvalidProblem when the configuration does
/// not validate or the base state is malformed or exceeds the bounds.
FinderResult find(const FinderProblem & problem);

struct Enumeration
{
  std::vector<SystemState> states;
  bool complete = true;  // false when stopped by the limit, a deadline or cancellation
  FinderStats stats;
};

/// Up to `limit` distinct satisfying states in search order. With symmetry
/// breaking on, only one state per class of isomorphic states is listed.
Enumeration enumerate_all(const FinderProblem & problem, std::size_t limit);

/// Integer values attributes may take: the configured range clipped to the
/// signed bitwidth range.
std::pair<std::int64_t, std::int64_t> integer_range(const Configuration & config);

}  // namespace bmv
