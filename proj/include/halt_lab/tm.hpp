#pragma once

// Random Turing machines on a one-way infinite binary tape.
//
// Model: states 1..n, blank symbol 0, the machine starts in state 1 on cell 0
// of an all-blank tape. Each (state, symbol) entry writes a symbol, moves
// L or R and continues in a state or HALT. A transition into HALT halts
// regardless of its move; a move L from cell 0 falls off the tape.

#include "halt_lab/census.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace halt_lab::tm {

enum class Move : std::uint8_t { L, R };

/// Next-state value meaning HALT.
inline constexpr std::uint32_t kHalt = 0;

struct Transition {
  std::uint8_t write = 0;
  Move move = Move::R;
  std::uint32_t next = kHalt;

  friend bool operator==(const Transition&, const Transition&) = default;
};

class Machine {
 public:
  /// `delta` holds 2 * states entries, indexed (state - 1) * 2 + symbol.
  Machine(std::uint32_t states, std::vector<Transition> delta, std::uint64_t seed = 0);

  std::uint32_t states() const noexcept { return states_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const Transition& at(std::uint32_t state, std::uint8_t symbol) const {
    return delta_[(state - 1) * 2 + symbol];
  }
  const std::vector<Transition>& table() const noexcept { return delta_; }

  friend bool operator==(const Machine& a, const Machine& b) {
    return a.states_ == b.states_ && a.delta_ == b.delta_;
  }

 private:
  std::uint32_t states_;
  std::vector<Transition> delta_;
  std::uint64_t seed_;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for sample `index` of a `states`-state run under `master`.
std::uint64_t sampleSeed(std::uint64_t master, std::uint32_t states, std::uint64_t index) noexcept;

/// Every entry uniform and independent: write over {0,1}, move over {L,R},
/// next over {1..states, HALT}. Deterministic per (states, seed).
Machine sampleMachine(std::uint32_t states, std::uint64_t seed);

/// Each entry has 4 * (states + 1) possible values, so there are
/// (4 * (states + 1))^(2 * states) machines; entry k of machine `code` is
/// the base-(4 * (states + 1)) digit k of `code`, least significant first.
Machine machineFromCode(std::uint32_t states, std::uint64_t code);

/// Steps count transitions: an event detected while attempting transition
/// k (1-based) is reported with steps = k.
struct Halt {
  std::uint64_t steps;
  friend bool operator==(const Halt&, const Halt&) = default;
};
struct FallOffLeft {
  std::uint64_t steps;
  friend bool operator==(const FallOffLeft&, const FallOffLeft&) = default;
};
/// The machine stands on a never-visited blank cell in a state it already
/// had on an earlier never-visited cell, and has not moved left of that
/// earlier cell in between. The run from then on is a right-shifted replay,
/// so it never halts or falls off.
struct FrontierStateRepeat {
  std::uint64_t steps;
  friend bool operator==(const FrontierStateRepeat&, const FrontierStateRepeat&) = default;
};
/// Configuration after mu transitions equals the one after mu + lambda.
struct ConfigCycle {
  std::uint64_t mu;
  std::uint64_t lambda;
  friend bool operator==(const ConfigCycle&, const ConfigCycle&) = default;
};
struct Unknown {
  std::uint64_t budget;
  friend bool operator==(const Unknown&, const Unknown&) = default;
};

using Outcome = std::variant<Halt, FallOffLeft, FrontierStateRepeat, ConfigCycle, Unknown>;

std::string describe(const Outcome& o);

/// Simulates at most `budget` transitions.
Outcome runTm(const Machine& m, std::uint64_t budget);

/// Independent re-execution check of a certified outcome.
bool verifyOutcome(const Machine& m, const Outcome& o);

struct OutcomeCounts {
  std::uint32_t states = 0;
  std::uint64_t samples = 0;
  std::uint64_t halt = 0;
  std::uint64_t fall_off = 0;
  std::uint64_t frontier_repeat = 0;
  std::uint64_t config_cycle = 0;
  std::uint64_t unknown = 0;

  void add(const Outcome& o);
  Ratio fallOffFraction() const { return {Natural(fall_off), Natural(samples)}; }
  friend bool operator==(const OutcomeCounts&, const OutcomeCounts&) = default;
};

struct FalloffParams {
  std::vector<std::uint32_t> states{1, 2, 4, 8, 16};
  std::uint64_t samples = 10'000;
  std::uint64_t seed = 42;
  std::uint64_t budget = 10'000;
  /// Re-verify every certified outcome; throws std::logic_error on failure.
  bool verify = false;
};

/// Per-state-count outcome tallies; independent of the worker count.
std::vector<OutcomeCounts> fallOffExperiment(const FalloffParams& params, unsigned workers = 1);

/// Exhaustive tallies over every machine with the given number of states.
OutcomeCounts enumerateAll(std::uint32_t states, std::uint64_t budget);

struct Interval {
  double lo;
  double hi;
};

/// Wilson score interval for k successes in n trials at normal quantile z.
Interval wilson(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

}  // namespace halt_lab::tm
