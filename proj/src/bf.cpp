#include "halt_lab/bf.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace halt_lab {

std::string_view toString(EofPolicy p) {
  return p == EofPolicy::WriteZero ? "write-zero" : "leave-unchanged";
}

std::string_view toString(LeftEdgePolicy p) {
  return p == LeftEdgePolicy::Halt ? "halt" : "no-op";
}

std::optional<EofPolicy> parseEofPolicy(std::string_view s) {
  if (s == "write-zero") return EofPolicy::WriteZero;
  if (s == "leave-unchanged") return EofPolicy::LeaveUnchanged;
  return std::nullopt;
}

std::optional<LeftEdgePolicy> parseLeftEdgePolicy(std::string_view s) {
  if (s == "halt") return LeftEdgePolicy::Halt;
  if (s == "no-op") return LeftEdgePolicy::NoOp;
  return std::nullopt;
}

std::string SyntaxError::message() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::InvalidSymbol: os << "invalid symbol at position " << position; break;
    case Kind::UnmatchedClose: os << "unmatched ']' at position " << position; break;
    case Kind::UnclosedBracket: os << "unclosed bracket opened at position " << position; break;
  }
  return os.str();
}

std::variant<Program, SyntaxError> parse(std::string_view text) {
  Program program;
  program.text_.assign(text);
  program.match_.assign(text.size(), 0);
  std::vector<std::uint32_t> open;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (!isInstruction(c)) return SyntaxError{SyntaxError::Kind::InvalidSymbol, i};
    if (c == '[') {
      open.push_back(static_cast<std::uint32_t>(i));
    } else if (c == ']') {
      if (open.empty()) return SyntaxError{SyntaxError::Kind::UnmatchedClose, i};
      const auto partner = open.back();
      open.pop_back();
      program.match_[partner] = static_cast<std::uint32_t>(i);
      program.match_[i] = partner;
    }
  }
  if (!open.empty()) return SyntaxError{SyntaxError::Kind::UnclosedBracket, open.back()};
  return program;
}

Program compile(std::string_view text) {
  auto result = parse(text);
  if (auto* err = std::get_if<SyntaxError>(&result)) throw std::invalid_argument(err->message());
  return std::get<Program>(std::move(result));
}

bool isPrefixValid(std::string_view text) noexcept {
  long depth = 0;
  for (char c : text) {
    if (!isInstruction(c)) return false;
    if (c == '[') ++depth;
    else if (c == ']' && --depth < 0) return false;
  }
  return true;
}

std::string_view toString(Variant v) {
  switch (v) {
    case Variant::E: return "E";
    case Variant::S: return "S";
    case Variant::G: return "G";
  }
  return "?";
}

std::optional<Variant> parseVariant(std::string_view s) {
  if (s == "E") return Variant::E;
  if (s == "S") return Variant::S;
  if (s == "G") return Variant::G;
  return std::nullopt;
}

std::size_t Instance::size() const noexcept {
  return variant == Variant::G ? program.size() + input.size() : program.size();
}

Instance Instance::empty(Program p) { return Instance{Variant::E, std::move(p), {}}; }

Instance Instance::self(Program p) {
  std::string input = p.text();
  return Instance{Variant::S, std::move(p), std::move(input)};
}

Instance Instance::given(Program p, std::string input) {
  return Instance{Variant::G, std::move(p), std::move(input)};
}

namespace {

void trimTape(std::vector<std::uint8_t>& tape) {
  while (!tape.empty() && tape.back() == 0) tape.pop_back();
}

void writeCell(Configuration& cfg, std::uint8_t value) {
  if (cfg.head < cfg.tape.size()) {
    cfg.tape[cfg.head] = value;
    if (value == 0 && cfg.head + 1 == cfg.tape.size()) trimTape(cfg.tape);
  } else if (value != 0) {
    cfg.tape.resize(cfg.head + 1, 0);
    cfg.tape[cfg.head] = value;
  }
}

}  // namespace

StepStatus advance(const Program& program, Configuration& cfg, std::string_view input,
                   const SemanticsPolicy& policy, std::size_t tape_cap) {
  if (cfg.isTerminal(program)) return StepStatus::Halted;
  switch (program.at(cfg.pc)) {
    case '+':
      writeCell(cfg, static_cast<std::uint8_t>(cfg.cell() + 1));
      ++cfg.pc;
      break;
    case '-':
      writeCell(cfg, static_cast<std::uint8_t>(cfg.cell() - 1));
      ++cfg.pc;
      break;
    case '>':
      if (cfg.head + 1 >= tape_cap) return StepStatus::TapeCapExceeded;
      ++cfg.head;
      ++cfg.pc;
      break;
    case '<':
      if (cfg.head > 0) {
        --cfg.head;
        ++cfg.pc;
      } else if (policy.left_edge == LeftEdgePolicy::Halt) {
        cfg.pc = program.size();
      } else {
        ++cfg.pc;
      }
      break;
    case '.':
      ++cfg.pc;
      break;
    case ',':
      if (cfg.in_cursor < input.size()) {
        writeCell(cfg, static_cast<std::uint8_t>(input[cfg.in_cursor]));
        ++cfg.in_cursor;
      } else if (policy.eof == EofPolicy::WriteZero) {
        writeCell(cfg, 0);
      }
      ++cfg.pc;
      break;
    case '[':
      cfg.pc = cfg.cell() == 0 ? program.match(cfg.pc) + 1 : cfg.pc + 1;
      break;
    case ']':
      cfg.pc = cfg.cell() != 0 ? program.match(cfg.pc) + 1 : cfg.pc + 1;
      break;
    default:
      break;
  }
  return StepStatus::Advanced;
}

std::optional<Configuration> step(const Program& program, const Configuration& cfg,
                                  std::string_view input, const SemanticsPolicy& policy) {
  Configuration next = cfg;
  if (advance(program, next, input, policy, static_cast<std::size_t>(-1)) == StepStatus::Halted)
    return std::nullopt;
  return next;
}

std::string_view toString(UnknownReason r) {
  switch (r) {
    case UnknownReason::StepBudget: return "step-budget";
    case UnknownReason::TapeCap: return "tape-cap";
    case UnknownReason::NoCycleFound: return "no-cycle-found";
  }
  return "?";
}

std::string describe(const Verdict& v) {
  std::ostringstream os;
  if (auto* h = std::get_if<Halts>(&v)) os << "Halts(" << h->steps << ")";
  else if (auto* d = std::get_if<Diverges>(&v)) os << "Diverges(" << d->mu << "," << d->lambda << ")";
  else os << "Unknown(" << toString(std::get<Unknown>(v).reason) << ")";
  return os.str();
}

namespace {

bool isPowerOfTwo(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

// Smallest mu with x_mu == x_{mu+lambda}; both walks stay inside the
// prefix already simulated, so neither can halt or hit the tape cap.
std::uint64_t findCycleStart(const Instance& inst, std::uint64_t lambda, const RunLimits& limits) {
  Configuration slow;
  Configuration fast;
  for (std::uint64_t k = 0; k < lambda; ++k)
    advance(inst.program, fast, inst.input, limits.semantics, limits.tape_cap);
  std::uint64_t mu = 0;
  while (!(slow == fast)) {
    advance(inst.program, slow, inst.input, limits.semantics, limits.tape_cap);
    advance(inst.program, fast, inst.input, limits.semantics, limits.tape_cap);
    ++mu;
  }
  return mu;
}

}  // namespace

Verdict run(const Instance& inst, const RunLimits& limits) {
  Configuration cfg;
  if (cfg.isTerminal(inst.program)) return Halts{0};
  Configuration saved = cfg;
  std::uint64_t saved_index = 0;
  for (std::uint64_t i = 1; i <= limits.budget; ++i) {
    if (advance(inst.program, cfg, inst.input, limits.semantics, limits.tape_cap) ==
        StepStatus::TapeCapExceeded)
      return Unknown{UnknownReason::TapeCap};
    if (cfg.isTerminal(inst.program)) return Halts{i};
    if (!limits.detect_cycles) continue;
    if (cfg == saved) {
      const std::uint64_t lambda = i - saved_index;
      return Diverges{findCycleStart(inst, lambda, limits), lambda};
    }
    if (isPowerOfTwo(i)) {
      saved = cfg;
      saved_index = i;
    }
  }
  return Unknown{limits.detect_cycles ? UnknownReason::NoCycleFound : UnknownReason::StepBudget};
}

std::uint64_t certificationStep(const Diverges& d) {
  for (std::uint64_t i = 1;; ++i) {
    const std::uint64_t saved = i == 1 ? 0 : std::bit_floor(i - 1);
    if (saved >= d.mu && (i - saved) % d.lambda == 0) return i;
  }
}

bool verify(const Instance& inst, const Verdict& verdict, const SemanticsPolicy& semantics) {
  if (auto* h = std::get_if<Halts>(&verdict)) {
    Configuration cfg;
    for (std::uint64_t k = 0; k < h->steps; ++k) {
      auto next = step(inst.program, cfg, inst.input, semantics);
      if (!next) return false;
      cfg = std::move(*next);
    }
    return cfg.isTerminal(inst.program);
  }
  if (auto* d = std::get_if<Diverges>(&verdict)) {
    if (d->lambda == 0) return false;
    Configuration cfg;
    for (std::uint64_t k = 0; k < d->mu; ++k) {
      auto next = step(inst.program, cfg, inst.input, semantics);
      if (!next) return false;
      cfg = std::move(*next);
    }
    Configuration later = cfg;
    for (std::uint64_t k = 0; k < d->lambda; ++k) {
      auto next = step(inst.program, later, inst.input, semantics);
      if (!next) return false;
      later = std::move(*next);
    }
    return later == cfg;
  }
  return true;
}

}  // namespace halt_lab
