#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "halt_lab/oracle.hpp"
#include "reference.hpp"

using namespace halt_lab;

namespace {

OraclePolicy withBudget(std::uint64_t budget) {
  OraclePolicy p;
  p.limits.budget = budget;
  return p;
}

}  // namespace

TEST_CASE("classify examples") {
  const Oracle oracle;
  CHECK(oracle.classify(Query::of(Variant::E, "+")) == Verdict{Halts{1}});
  CHECK(oracle.classify(Query::of(Variant::E, "+[]")) == Verdict{Diverges{2, 1}});
  CHECK_THROWS_AS(oracle.classify(Query::of(Variant::E, "]")), std::invalid_argument);
  // Memoised answers are stable.
  CHECK(oracle.classify(Query::of(Variant::E, "+[]")) == Verdict{Diverges{2, 1}});
}

TEST_CASE("a growing frontier never certifies a cycle") {
  auto policy = withBudget(1'000'000);
  policy.limits.tape_cap = std::size_t{1} << 20;
  CHECK(Oracle(policy).classify(Query::of(Variant::E, "+[>+]")) ==
        Verdict{Unknown{UnknownReason::NoCycleFound}});
  // With the default cap the head reaches the end of the tape first.
  CHECK(Oracle(withBudget(1'000'000)).classify(Query::of(Variant::E, "+[>+]")) ==
        Verdict{Unknown{UnknownReason::TapeCap}});
}

TEST_CASE("census examples") {
  const Oracle oracle;
  auto c0 = sizeCensus(Variant::E, 0, oracle).summary;
  CHECK(c0.p == 1);
  CHECK(c0.h_min == 1);

  auto c1 = sizeCensus(Variant::E, 1, oracle).summary;
  CHECK(c1.p == 6);
  CHECK(c1.h_min == 6);
  CHECK(c1.d_min == 0);
  CHECK(c1.unknown == 0);
  CHECK(c1.budget == 100'000);
  CHECK(c1.tape_cap == 65'536);

  const auto c3 = sizeCensus(Variant::E, 3, oracle);
  CHECK(c3.summary.d_min >= 1);
  bool found = false;
  for (const auto& r : c3.records)
    if (r.query.text == "+[]") found = isDiverges(r.verdict);
  CHECK(found);
}

TEST_CASE("census witnesses verify and counts partition p(n)") {
  const Oracle oracle;
  for (auto v : {Variant::E, Variant::S})
    for (std::size_t n = 0; n <= 5; ++n) {
      const auto c = sizeCensus(v, n, oracle);
      const auto& s = c.summary;
      CHECK(s.p == countPrograms(n));
      CHECK(s.h_min + s.d_min + s.unknown == s.p);
      CHECK(c.records.size() == s.p);
      for (const auto& r : c.records) {
        INFO(r.query.text);
        if (v == Variant::S) CHECK(r.query.input == r.query.text);
        CHECK(verify(toInstance(r.query), r.verdict));
      }
    }
}

TEST_CASE("halting verdicts agree with plain simulation") {
  const auto c = sizeCensus(Variant::E, 5, Oracle{});
  for (const auto& r : c.records) {
    const auto steps = ref::haltsWithin(r.query.text, "", 100'000);
    INFO(r.query.text);
    if (isHalts(r.verdict)) CHECK(steps == std::get<Halts>(r.verdict).steps);
    if (isDiverges(r.verdict)) CHECK_FALSE(steps.has_value());
  }
}

TEST_CASE("census is budget monotone") {
  const auto lo = sizeCensus(Variant::E, 5, withBudget(100));
  const auto hi = sizeCensus(Variant::E, 5, withBudget(100'000));
  REQUIRE(lo.records.size() == hi.records.size());
  for (std::size_t k = 0; k < lo.records.size(); ++k)
    if (!isUnknown(lo.records[k].verdict)) CHECK(lo.records[k].verdict == hi.records[k].verdict);
  CHECK(lo.summary.unknown >= hi.summary.unknown);
}

TEST_CASE("census does not depend on the worker count") {
  const auto a = sizeCensus(Variant::E, 5, OraclePolicy{}, 1);
  const auto b = sizeCensus(Variant::E, 5, OraclePolicy{}, 3);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].query == b.records[k].query);
    CHECK(a.records[k].verdict == b.records[k].verdict);
  }
  CHECK(a.summary.h_min == b.summary.h_min);
}

TEST_CASE("variant G instance space") {
  CHECK(instanceCount(Variant::G, 0, InputAlphabet::Binary) == 1);
  CHECK(instanceCount(Variant::G, 1, InputAlphabet::Binary) == 8);
  CHECK(instanceCount(Variant::G, 2, InputAlphabet::Binary) == 4 + 12 + 37);
  CHECK(instanceCount(Variant::G, 1, InputAlphabet::Bytes) == 256 + 6);
  CHECK(instanceCount(Variant::E, 4, InputAlphabet::Binary) == 1514);

  for (std::size_t n = 0; n <= 4; ++n) {
    const auto qs = enumerateInstances(Variant::G, n, InputAlphabet::Binary, 1'000'000);
    CHECK(qs.size() == instanceCount(Variant::G, n, InputAlphabet::Binary));
    for (const auto& q : qs) {
      CHECK(q.size() == n);
      CHECK(q.input.find_first_not_of(std::string("\0\1", 2)) == std::string::npos);
    }
  }

  const auto one = enumerateInstances(Variant::G, 1, InputAlphabet::Binary, 100);
  REQUIRE(one.size() == 8);
  CHECK(one[0].text.empty());
  CHECK(one[0].input == std::string(1, '\0'));
  CHECK(one[1].input == std::string(1, '\1'));
  CHECK(one[2].text == "+");

  const auto g = sizeCensus(Variant::G, 3, OraclePolicy{});
  CHECK(g.summary.p == instanceCount(Variant::G, 3, InputAlphabet::Binary));
  for (const auto& r : g.records) CHECK(verify(toInstance(r.query), r.verdict));
}

TEST_CASE("instance cap") {
  OraclePolicy p;
  p.input_alphabet = InputAlphabet::Bytes;
  p.max_instances = 1000;
  CHECK_THROWS_AS(sizeCensus(Variant::G, 2, p), ResourceLimitError);
  CHECK_NOTHROW(sizeCensus(Variant::G, 1, p));
}

TEST_CASE("cumulative") {
  const Oracle oracle;
  std::vector<SizeCensus> cs;
  for (std::size_t n = 0; n <= 2; ++n) cs.push_back(sizeCensus(Variant::E, n, oracle).summary);
  const auto rows = cumulative(cs);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].P == 1);
  CHECK(rows[1].H_min == 7);
  CHECK(rows[2].P == 44);
  CHECK(rows[2].H_min + rows[2].D_min + rows[2].Unknown == 44);

  CHECK(cumulative({cs[0]}).at(0).P == 1);
  CHECK_THROWS_AS(cumulative({cs[0], cs[2]}), std::invalid_argument);
  CHECK_THROWS_AS(cumulative({cs[1], cs[2]}), std::invalid_argument);
  auto other = cs;
  other[1].budget = 5;
  CHECK_THROWS_AS(cumulative(other), std::invalid_argument);
}

TEST_CASE("oracle table") {
  OracleTable t;
  t.add(sizeCensus(Variant::E, 3, OraclePolicy{}));
  CHECK(t.coversSize(Variant::E, 3));
  CHECK_FALSE(t.coversSize(Variant::E, 2));
  CHECK_FALSE(t.coversSize(Variant::S, 3));
  REQUIRE(t.find(Query::of(Variant::E, "+[]")));
  CHECK(isDiverges(*t.find(Query::of(Variant::E, "+[]"))));
  CHECK(t.find(Query::of(Variant::E, "+")) == nullptr);
}
