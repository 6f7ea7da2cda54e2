#pragma once

// Ground-truth classification of every instance of one size. The oracle
// reports certified lower bounds on halting and diverging counts plus the
// unknown residue; it never claims an exact h(n).

#include "halt_lab/bf.hpp"
#include "halt_lab/census.hpp"
#include "halt_lab/parallel.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace halt_lab {

/// Input alphabet for variant G instances.
enum class InputAlphabet { Binary, Bytes };

std::string_view toString(InputAlphabet a);
std::optional<InputAlphabet> parseInputAlphabet(std::string_view s);
std::string inputSymbols(InputAlphabet a);

/// A raw instance: program text (possibly not a valid program) and input.
struct Query {
  Variant variant = Variant::E;
  std::string text;
  std::string input;

  std::size_t size() const noexcept {
    return variant == Variant::G ? text.size() + input.size() : text.size();
  }

  static Query of(Variant v, std::string text, std::string input = {});

  friend bool operator<(const Query& a, const Query& b) {
    return std::tie(a.variant, a.text, a.input) < std::tie(b.variant, b.text, b.input);
  }
  friend bool operator==(const Query&, const Query&) = default;
};

/// The instance for a query whose text parses; throws otherwise.
Instance toInstance(const Query& q);

struct OraclePolicy {
  RunLimits limits{};
  InputAlphabet input_alphabet = InputAlphabet::Binary;
  /// Refuse to classify more instances than this in one census.
  std::uint64_t max_instances = 5'000'000;

  friend bool operator==(const OraclePolicy&, const OraclePolicy&) = default;
};

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of instances of joint size n; exact.
Natural instanceCount(Variant variant, std::size_t n, InputAlphabet alphabet);

/// All instances of size n: programs in shortlex order, and for G each
/// program followed by its inputs in shortlex order (shorter programs first).
/// Throws ResourceLimitError when the space exceeds `max_instances`.
std::vector<Query> enumerateInstances(Variant variant, std::size_t n, InputAlphabet alphabet,
                                      std::uint64_t max_instances);

/// Classifies instances with bf::run under a fixed policy, memoising by
/// (variant, text, input). Safe to share across threads.
class Oracle {
 public:
  explicit Oracle(OraclePolicy policy = {}) : policy_(policy) {}

  /// Throws std::invalid_argument when the query text is not a program.
  Verdict classify(const Query& q) const;
  Verdict classify(const Instance& instance) const;

  const OraclePolicy& policy() const noexcept { return policy_; }

 private:
  OraclePolicy policy_;
  mutable std::mutex mutex_;
  mutable std::map<Query, Verdict> memo_;
};

struct SizeCensus {
  Variant variant = Variant::E;
  std::size_t n = 0;
  std::uint64_t p = 0;
  std::uint64_t h_min = 0;
  std::uint64_t d_min = 0;
  std::uint64_t unknown = 0;
  std::uint64_t budget = 0;
  std::size_t tape_cap = 0;
};

struct InstanceRecord {
  Query query;
  Verdict verdict;
};

struct CensusResult {
  SizeCensus summary;
  /// Every classified instance, in enumeration order.
  std::vector<InstanceRecord> records;
};

/// Classifies every instance of size n. `workers` threads share the work;
/// the result does not depend on the worker count.
CensusResult sizeCensus(Variant variant, std::size_t n, const Oracle& oracle,
                        unsigned workers = 1);
CensusResult sizeCensus(Variant variant, std::size_t n, const OraclePolicy& policy,
                        unsigned workers = 1);

struct CumulativeRow {
  std::size_t n = 0;
  std::uint64_t P = 0;
  std::uint64_t H_min = 0;
  std::uint64_t D_min = 0;
  std::uint64_t Unknown = 0;
};

/// Prefix sums over censuses that cover sizes 0..n contiguously with one
/// variant and policy. Throws std::invalid_argument otherwise.
std::vector<CumulativeRow> cumulative(const std::vector<SizeCensus>& censuses);

/// Certified answers for every instance in a set of censuses.
class OracleTable {
 public:
  void add(const CensusResult& census);

  /// The stored verdict, or nullptr when the query was never classified.
  const Verdict* find(const Query& q) const;
  bool coversSize(Variant v, std::size_t n) const;

 private:
  std::map<Query, Verdict> verdicts_;
  std::vector<std::pair<Variant, std::size_t>> sizes_;
};

}  // namespace halt_lab
