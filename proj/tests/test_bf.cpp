#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "halt_lab/bf.hpp"
#include "halt_lab/census.hpp"
#include "reference.hpp"

#include <string>
#include <vector>

using namespace halt_lab;

namespace {

bool parses(std::string_view s) { return std::holds_alternative<Program>(parse(s)); }

SyntaxError errorOf(std::string_view s) { return std::get<SyntaxError>(parse(s)); }

Verdict runE(std::string_view text, std::uint64_t budget = 100'000) {
  RunLimits limits;
  limits.budget = budget;
  return run(Instance::empty(compile(text)), limits);
}

// Every valid program of sizes 0..n.
std::vector<std::string> programsUpTo(std::size_t n) {
  std::vector<std::string> all;
  for (std::size_t k = 0; k <= n; ++k)
    for (auto& s : enumeratePrograms(k)) all.push_back(std::move(s));
  return all;
}

}  // namespace

TEST_CASE("parse accepts the empty program") {
  const auto p = compile("");
  CHECK(p.size() == 0);
  CHECK(p.empty());
}

TEST_CASE("parse reports the first syntax error") {
  auto e = errorOf("]");
  CHECK(e.kind == SyntaxError::Kind::UnmatchedClose);
  CHECK(e.position == 0);

  e = errorOf("+a");
  CHECK(e.kind == SyntaxError::Kind::InvalidSymbol);
  CHECK(e.position == 1);

  e = errorOf("[[+]");
  CHECK(e.kind == SyntaxError::Kind::UnclosedBracket);
  CHECK(e.position == 0);

  CHECK_THROWS_AS(compile("[+"), std::invalid_argument);
  CHECK_FALSE(errorOf("]").message().empty());
}

TEST_CASE("parse matches brackets") {
  const auto p = compile("+[>+]");
  CHECK(p.match(1) == 4);
  CHECK(p.match(4) == 1);

  const auto q = compile("[[][]]");
  CHECK(q.match(0) == 5);
  CHECK(q.match(1) == 2);
  CHECK(q.match(3) == 4);
  CHECK(q.match(5) == 0);
}

TEST_CASE("parse agrees with bracket reduction on every string up to length 5") {
  for (std::size_t n = 0; n <= 5; ++n)
    for (const auto& s : enumerateStrings(n, kBfAlphabet)) {
      INFO(s);
      CHECK(parses(s) == ref::balancedByReduction(s));
    }
}

TEST_CASE("isPrefixValid examples") {
  CHECK(isPrefixValid("[[+"));
  CHECK_FALSE(isPrefixValid("+]"));
  CHECK(isPrefixValid("[]"));
  CHECK(isPrefixValid(""));
  CHECK_FALSE(isPrefixValid("x"));
}

TEST_CASE("isPrefixValid iff some extension parses") {
  std::vector<std::string> extensions;
  for (std::size_t k = 0; k <= 4; ++k)
    for (auto& y : enumerateStrings(k, kBfAlphabet)) extensions.push_back(std::move(y));

  std::size_t deep = 0;
  for (std::size_t n = 0; n <= 6; ++n)
    for (const auto& x : enumerateStrings(n, kBfAlphabet)) {
      bool extendable = false;
      std::string xy;
      for (const auto& y : extensions) {
        xy.assign(x).append(y);
        if (parses(xy)) {
          extendable = true;
          break;
        }
      }
      if (!extendable && isPrefixValid(x)) {
        // Open depth above 4 needs a longer closing suffix.
        int depth = 0;
        for (char c : x) depth += c == '[' ? 1 : c == ']' ? -1 : 0;
        CHECK(depth > 4);
        extendable = parses(x + std::string(depth, ']'));
        ++deep;
      }
      INFO(x);
      CHECK(isPrefixValid(x) == extendable);
    }
  CHECK(deep > 0);
}

TEST_CASE("step examples") {
  const auto plus = compile("+");
  auto c = step(plus, Configuration{}, "");
  REQUIRE(c);
  CHECK(c->pc == 1);
  CHECK(c->tape == std::vector<std::uint8_t>{1});
  CHECK_FALSE(step(plus, *c, ""));

  const auto loop = compile("+[]");
  Configuration at2{};
  at2.pc = 2;
  at2.tape = {1};
  auto next = step(loop, at2, "");
  REQUIRE(next);
  CHECK(*next == at2);

  // Reached by actually running two steps from the start.
  auto s1 = step(loop, Configuration{}, "");
  auto s2 = step(loop, *s1, "");
  CHECK(*s2 == at2);

  const auto read = compile(",");
  Configuration dirty{};
  dirty.tape = {9};
  auto r = step(read, dirty, "");
  REQUIRE(r);
  CHECK(r->pc == 1);
  CHECK(r->cell() == 0);
  CHECK(r->tape.empty());
}

TEST_CASE("cells wrap modulo 256") {
  auto c = step(compile("-"), Configuration{}, "");
  CHECK(c->cell() == 255);
}

TEST_CASE("tape cap stops the head") {
  const auto p = compile(">");
  Configuration c{};
  CHECK(advance(p, c, "", {}, 1) == StepStatus::TapeCapExceeded);
  CHECK(c == Configuration{});
  CHECK(advance(p, c, "", {}, 2) == StepStatus::Advanced);
  CHECK(c.head == 1);

  RunLimits limits;
  limits.tape_cap = 8;
  CHECK(run(Instance::empty(compile("+[>+]")), limits) == Verdict{Unknown{UnknownReason::TapeCap}});
}

TEST_CASE("run examples") {
  CHECK(runE("") == Verdict{Halts{0}});
  CHECK(runE("+") == Verdict{Halts{1}});
  CHECK(runE("+[]") == Verdict{Diverges{2, 1}});
  CHECK(runE("+[>+]", 10'000) == Verdict{Unknown{UnknownReason::NoCycleFound}});

  RunLimits plain;
  plain.detect_cycles = false;
  plain.budget = 50;
  CHECK(run(Instance::empty(compile("+[]")), plain) == Verdict{Unknown{UnknownReason::StepBudget}});
}

TEST_CASE("divergence is certified exactly at certificationStep") {
  CHECK(certificationStep(Diverges{2, 1}) == 3);
  CHECK(runE("+[]", 3) == Verdict{Diverges{2, 1}});
  CHECK(isUnknown(runE("+[]", 2)));

  for (const auto& text : programsUpTo(5)) {
    const auto v = runE(text, 5000);
    if (!isDiverges(v)) continue;
    const auto at = certificationStep(std::get<Diverges>(v));
    INFO(text);
    CHECK(runE(text, at) == v);
    CHECK(isUnknown(runE(text, at - 1)));
  }
}

TEST_CASE("left edge policy") {
  RunLimits limits;
  CHECK(run(Instance::empty(compile("<+[]")), limits) == Verdict{Halts{1}});
  limits.semantics.left_edge = LeftEdgePolicy::NoOp;
  CHECK(isDiverges(run(Instance::empty(compile("<+[]")), limits)));
}

TEST_CASE("eof policy") {
  RunLimits limits;
  CHECK(isHalts(run(Instance::empty(compile("+,[]")), limits)));
  limits.semantics.eof = EofPolicy::LeaveUnchanged;
  CHECK(isDiverges(run(Instance::empty(compile("+,[]")), limits)));
}

TEST_CASE("variants pick the input") {
  const auto p = compile(",[]");
  RunLimits limits;
  CHECK(isHalts(run(Instance::empty(p), limits)));
  // Reads ',' (44), a nonzero cell, so the loop never exits.
  CHECK(isDiverges(run(Instance::self(p), limits)));
  CHECK(isHalts(run(Instance::given(p, std::string(1, '\0')), limits)));
  CHECK(isDiverges(run(Instance::given(p, "\x01"), limits)));
  CHECK(Instance::given(p, "ab").size() == 5);
  CHECK(Instance::self(p).size() == 3);
}

TEST_CASE("single steps agree with a reference interpreter") {
  for (const bool eof_zero : {true, false})
    for (const bool left_halts : {true, false}) {
      SemanticsPolicy policy;
      policy.eof = eof_zero ? EofPolicy::WriteZero : EofPolicy::LeaveUnchanged;
      policy.left_edge = left_halts ? LeftEdgePolicy::Halt : LeftEdgePolicy::NoOp;
      for (const auto& text : programsUpTo(5)) {
        const std::string input("\x02\x00", 2);
        const auto program = compile(text);
        ref::Machine m{text, input, eof_zero, left_halts};
        Configuration c{};
        for (int s = 0; s < 300; ++s) {
          const bool ref_moved = m.tick();
          const auto status = advance(program, c, input, policy, 1 << 16);
          INFO(text << " step " << s);
          REQUIRE(ref_moved == (status == StepStatus::Advanced));
          if (!ref_moved) break;
          REQUIRE(c.pc == m.pc);
          REQUIRE(c.head == static_cast<std::size_t>(m.head));
          REQUIRE(c.in_cursor == m.in);
          REQUIRE(c.tape == m.cells());
        }
      }
    }
}

TEST_CASE("halting step counts agree with plain simulation") {
  for (const auto& text : programsUpTo(5)) {
    const auto v = runE(text, 2000);
    const auto ref_steps = ref::haltsWithin(text, "", 2000);
    INFO(text);
    if (isHalts(v)) CHECK(ref_steps == std::get<Halts>(v).steps);
    if (isDiverges(v)) CHECK_FALSE(ref::haltsWithin(text, "", 20'000));
  }
}

TEST_CASE("witnesses verify, run is deterministic and budget monotone") {
  for (const auto& text : programsUpTo(5)) {
    const auto inst = Instance::self(compile(text));
    RunLimits small, large;
    small.budget = 500;
    large.budget = 20'000;
    const auto a = run(inst, small);
    const auto b = run(inst, large);
    INFO(text);
    CHECK(run(inst, small) == a);
    CHECK(verify(inst, a));
    CHECK(verify(inst, b));
    if (!isUnknown(a)) CHECK(a == b);
  }
}

TEST_CASE("verify rejects forged witnesses") {
  const auto inst = Instance::empty(compile("+[]"));
  CHECK(verify(inst, Diverges{2, 1}));
  CHECK_FALSE(verify(inst, Diverges{1, 1}));
  CHECK_FALSE(verify(inst, Halts{3}));
  CHECK_FALSE(verify(Instance::empty(compile("+")), Halts{2}));
  CHECK(verify(Instance::empty(compile("+")), Halts{1}));
}

TEST_CASE("policy names roundtrip") {
  for (auto p : {EofPolicy::WriteZero, EofPolicy::LeaveUnchanged})
    CHECK((parseEofPolicy(toString(p)) == p));
  for (auto p : {LeftEdgePolicy::Halt, LeftEdgePolicy::NoOp})
    CHECK((parseLeftEdgePolicy(toString(p)) == p));
  for (auto v : {Variant::E, Variant::S, Variant::G}) CHECK((parseVariant(toString(v)) == v));
  CHECK_FALSE(parseVariant("X").has_value());
}
