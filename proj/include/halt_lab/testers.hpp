#pragma once

// Imperfect halting testers, the converters between tester kinds, and
// failure-rate evaluation against oracle ground truth.

#include "halt_lab/bf.hpp"
#include "halt_lab/census.hpp"
#include "halt_lab/oracle.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace halt_lab {

enum class Reply { Yes, No, Unknown };

/// Why a tester produced no yes/no reply: a three-way "I don't know", or a
/// generic-case tester that would not halt (rendered as budget exhaustion).
enum class UnknownFlavor { None, DontKnow, Nontermination };

struct Answer {
  Reply reply = Reply::Unknown;
  UnknownFlavor flavor = UnknownFlavor::DontKnow;
  /// Steps spent before replying; for Nontermination, the exhausted budget.
  std::uint64_t work = 0;

  static Answer yes(std::uint64_t work = 0) { return {Reply::Yes, UnknownFlavor::None, work}; }
  static Answer no(std::uint64_t work = 0) { return {Reply::No, UnknownFlavor::None, work}; }
  static Answer dontKnow(std::uint64_t work = 0) {
    return {Reply::Unknown, UnknownFlavor::DontKnow, work};
  }
  static Answer nonterminating(std::uint64_t budget) {
    return {Reply::Unknown, UnknownFlavor::Nontermination, budget};
  }

  bool replied() const noexcept { return reply != Reply::Unknown; }

  friend bool operator==(const Answer&, const Answer&) = default;
};

std::string_view toString(Reply r);

enum class TesterKind { ThreeWay, Generic, Approximating };

std::string_view toString(TesterKind k);

/// A tester is an immutable value: a pure function from query to answer,
/// plus its kind and a descriptive name. Copies share the implementation.
class Tester {
 public:
  using Fn = std::function<Answer(const Query&)>;

  Tester(std::string name, TesterKind kind, Fn fn);

  Answer operator()(const Query& q) const { return (*fn_)(q); }
  const std::string& name() const noexcept { return *name_; }
  TesterKind kind() const noexcept { return kind_; }
  /// Three-way and generic-case testers must never reply incorrectly.
  bool mustBeSound() const noexcept { return kind_ != TesterKind::Approximating; }

 private:
  std::shared_ptr<const std::string> name_;
  TesterKind kind_;
  std::shared_ptr<const Fn> fn_;
};

/// Yes if the instance halts within `budget` steps, No if a configuration
/// repeat is certified within it, "I don't know" otherwise. Queries whose
/// text does not compile are answered No.
Tester boundedSimTester(std::uint64_t budget, const RunLimits& base = {});

/// No when compilation fails, "I don't know" otherwise.
Tester syntaxTester();

enum class CensusMode { ThreeWay, Approximating };

std::string_view toString(CensusMode m);

struct CensusTesterParams {
  std::uint64_t i = 0;
  std::uint64_t C = 1;
  std::size_t j = 0;
  CensusMode mode = CensusMode::ThreeWay;
  /// Total interpreter steps the dovetail may spend on one size.
  std::uint64_t global_budget = 10'000'000;
};

/// For sizes below j: "I don't know" (three-way) or No (approximating).
/// Otherwise runs every instance of the query's size round-robin in
/// shortlex order, one step per instance per round, until ceil(i p(n) / C)
/// of them have halted; answers Yes for the halted ones and No or "I don't
/// know" for the rest. Exhausting the global budget, or running out of
/// instances that can still halt, yields the nontermination flavor.
/// Dovetail results are cached per (variant, size) and shared by copies.
Tester censusTester(const CensusTesterParams& params, const OraclePolicy& policy = {});

/// Answers from the oracle table for sizes <= depth where the table holds a
/// certified verdict; delegates everything else to `fallback`.
Tester tableTester(std::size_t depth, Tester fallback, std::shared_ptr<const OracleTable> table);

/// Rewrites "I don't know" (of either flavor) to `bias`.
Tester toApproximating(Tester t, Reply bias);

/// Rewrites "I don't know" into the nontermination flavor.
Tester toGeneric(Tester t);

/// Runs `t` and a direct simulation round-robin (t first in each round).
/// Whichever finishes first within `sim_budget` rounds decides: a halting
/// simulation answers Yes, a reply from t is forwarded. Otherwise the
/// result is the nontermination flavor.
Tester dovetailImprove(Tester t, std::uint64_t sim_budget, const RunLimits& base = {});

/// A generic-case tester that never replies.
Tester silentTester();

enum class Universe { Programs, RawStrings };

struct TesterStats {
  std::string tester;
  Variant variant = Variant::E;
  std::size_t n = 0;
  std::uint64_t p = 0;
  std::uint64_t easy_h = 0;
  std::uint64_t hard_h = 0;
  std::uint64_t easy_d = 0;
  std::uint64_t hard_d = 0;
  /// Yes/No replies on instances the oracle could not classify.
  std::uint64_t unverifiable = 0;
  /// Replies contradicting an oracle witness (also counted as hard).
  std::uint64_t wrong = 0;
  /// Texts of the first few wrongly answered instances.
  std::vector<std::string> wrong_examples;

  Ratio failureRate() const { return {Natural(hard_h + hard_d), Natural(p)}; }
};

/// Per-instance ground truth used for scoring.
enum class Truth { Halts, Diverges, Unknown };

struct Evaluation {
  TesterStats stats;
  std::vector<Query> queries;
  std::vector<Truth> truth;
  std::vector<Answer> answers;

  /// Oracle-certified instances the tester failed on.
  bool isHard(std::size_t k) const;
};

/// Runs `t` on every instance of the census' size and scores it against
/// the census verdicts. With Universe::RawStrings every string of that size
/// is a query and texts that fail to compile count as certified
/// non-halting. Deterministic for any worker count.
Evaluation evaluate(const Tester& t, const CensusResult& census, Universe universe = Universe::Programs,
                    unsigned workers = 1);

}  // namespace halt_lab
