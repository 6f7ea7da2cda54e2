#pragma once

// The BF toy language: syntax validation, prefix validity, one-step
// semantics and budgeted execution with cycle-certified divergence.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace halt_lab {

/// The eight instruction symbols in ascending byte order.
inline constexpr std::string_view kBfAlphabet = "+,-.<>[]";

inline constexpr bool isInstruction(char c) noexcept {
  return kBfAlphabet.find(c) != std::string_view::npos;
}

enum class EofPolicy { WriteZero, LeaveUnchanged };
enum class LeftEdgePolicy { Halt, NoOp };

struct SemanticsPolicy {
  EofPolicy eof = EofPolicy::WriteZero;
  LeftEdgePolicy left_edge = LeftEdgePolicy::Halt;

  friend bool operator==(const SemanticsPolicy&, const SemanticsPolicy&) = default;
};

std::string_view toString(EofPolicy p);
std::string_view toString(LeftEdgePolicy p);
std::optional<EofPolicy> parseEofPolicy(std::string_view s);
std::optional<LeftEdgePolicy> parseLeftEdgePolicy(std::string_view s);

struct SyntaxError {
  enum class Kind { InvalidSymbol, UnmatchedClose, UnclosedBracket };
  Kind kind;
  /// Offending position; for UnclosedBracket, the innermost unclosed `[`.
  std::size_t position;

  std::string message() const;
};

/// A validated BF program with its bracket-match table.
class Program {
 public:
  Program() = default;

  const std::string& text() const noexcept { return text_; }
  std::size_t size() const noexcept { return text_.size(); }
  bool empty() const noexcept { return text_.empty(); }
  char at(std::size_t pc) const { return text_[pc]; }

  /// Partner of the bracket at `pos`. Only meaningful for bracket positions.
  std::size_t match(std::size_t pos) const { return match_[pos]; }

  friend bool operator==(const Program& a, const Program& b) { return a.text_ == b.text_; }

 private:
  friend std::variant<Program, SyntaxError> parse(std::string_view text);
  std::string text_;
  std::vector<std::uint32_t> match_;
};

/// Returns the program, or the first syntax error. The empty text is valid.
std::variant<Program, SyntaxError> parse(std::string_view text);

/// Like parse(), but throws std::invalid_argument on a syntax error.
Program compile(std::string_view text);

/// True iff some suffix extends `text` to a valid program.
bool isPrefixValid(std::string_view text) noexcept;

enum class Variant { E, S, G };

std::string_view toString(Variant v);
std::optional<Variant> parseVariant(std::string_view s);

struct Instance {
  Variant variant = Variant::E;
  Program program;
  std::string input;

  /// |program| for E and S, |program| + |input| for G.
  std::size_t size() const noexcept;

  static Instance empty(Program p);
  static Instance self(Program p);
  static Instance given(Program p, std::string input);
};

/// Full machine state. The tape never carries trailing zero cells, so
/// field-wise equality is configuration equality. Output is not part of it.
struct Configuration {
  std::size_t pc = 0;
  std::size_t head = 0;
  std::vector<std::uint8_t> tape;
  std::size_t in_cursor = 0;

  std::uint8_t cell() const noexcept { return head < tape.size() ? tape[head] : 0; }
  bool isTerminal(const Program& p) const noexcept { return pc >= p.size(); }

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class StepStatus { Advanced, Halted, TapeCapExceeded };

/// Executes one instruction in place. Returns Halted (without touching cfg)
/// when pc is already terminal, TapeCapExceeded when `>` would move the head
/// to cell index `tape_cap` or beyond (cfg is left unchanged).
StepStatus advance(const Program& program, Configuration& cfg, std::string_view input,
                   const SemanticsPolicy& policy, std::size_t tape_cap);

/// Value form of advance() with an unbounded tape; nullopt means Halted.
std::optional<Configuration> step(const Program& program, const Configuration& cfg,
                                  std::string_view input,
                                  const SemanticsPolicy& policy = {});

struct Halts {
  std::uint64_t steps;
  friend bool operator==(const Halts&, const Halts&) = default;
};

/// Configuration after mu steps equals configuration after mu + lambda steps.
struct Diverges {
  std::uint64_t mu;
  std::uint64_t lambda;
  friend bool operator==(const Diverges&, const Diverges&) = default;
};

enum class UnknownReason { StepBudget, TapeCap, NoCycleFound };

struct Unknown {
  UnknownReason reason;
  friend bool operator==(const Unknown&, const Unknown&) = default;
};

using Verdict = std::variant<Halts, Diverges, Unknown>;

std::string_view toString(UnknownReason r);
std::string describe(const Verdict& v);

inline bool isHalts(const Verdict& v) { return std::holds_alternative<Halts>(v); }
inline bool isDiverges(const Verdict& v) { return std::holds_alternative<Diverges>(v); }
inline bool isUnknown(const Verdict& v) { return std::holds_alternative<Unknown>(v); }

struct RunLimits {
  std::uint64_t budget = 100'000;
  std::size_t tape_cap = std::size_t{1} << 16;
  SemanticsPolicy semantics{};
  /// When false, only halting is detected and budget exhaustion reports
  /// StepBudget instead of NoCycleFound.
  bool detect_cycles = true;

  friend bool operator==(const RunLimits&, const RunLimits&) = default;
};

/// Simulates at most `budget` steps. Divergence is certified by Brent-style
/// cycle finding: the configuration at each power-of-two step index is
/// saved and every later configuration is compared against it. A repeat is
/// certified only once its second occurrence is within the budget, so the
/// verdict for a given instance does not depend on the budget once decided.
Verdict run(const Instance& instance, const RunLimits& limits);

/// Step index at which run() certifies the given cycle: the first i whose
/// saved comparison point (largest power of two below i, or 0) lies inside
/// the cycle at a distance that is a multiple of lambda.
std::uint64_t certificationStep(const Diverges& d);

/// Re-executes the instance step by step and confirms the witness:
/// Halts(s) halts at exactly step s; Diverges(mu, lambda) has equal
/// configurations at mu and mu + lambda. Unknown verdicts verify trivially.
bool verify(const Instance& instance, const Verdict& verdict,
            const SemanticsPolicy& semantics = {});

}  // namespace halt_lab
