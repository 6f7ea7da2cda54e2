#include "halt_lab/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace halt_lab {

unsigned defaultWorkers() {
  if (const char* env = std::getenv("HALT_LAB_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

std::string_view toString(InputAlphabet a) { return a == InputAlphabet::Binary ? "binary" : "bytes"; }

std::optional<InputAlphabet> parseInputAlphabet(std::string_view s) {
  if (s == "binary") return InputAlphabet::Binary;
  if (s == "bytes") return InputAlphabet::Bytes;
  return std::nullopt;
}

std::string inputSymbols(InputAlphabet a) {
  std::string s;
  const int count = a == InputAlphabet::Binary ? 2 : 256;
  for (int b = 0; b < count; ++b) s.push_back(static_cast<char>(b));
  return s;
}

Query Query::of(Variant v, std::string text, std::string input) {
  Query q{v, std::move(text), std::move(input)};
  if (v == Variant::E) q.input.clear();
  if (v == Variant::S) q.input = q.text;
  return q;
}

Instance toInstance(const Query& q) {
  Program program = compile(q.text);
  switch (q.variant) {
    case Variant::E: return Instance::empty(std::move(program));
    case Variant::S: return Instance::self(std::move(program));
    case Variant::G: return Instance::given(std::move(program), q.input);
  }
  throw std::invalid_argument("unknown variant");
}

Natural instanceCount(Variant variant, std::size_t n, InputAlphabet alphabet) {
  if (variant != Variant::G) return countPrograms(n);
  const Natural k = alphabet == InputAlphabet::Binary ? 2 : 256;
  Natural total = 0;
  Natural inputs = 1;
  // Program of size n - m paired with inputs of length m.
  for (std::size_t m = 0; m <= n; ++m) {
    total += countPrograms(n - m) * inputs;
    inputs *= k;
  }
  return total;
}

std::vector<Query> enumerateInstances(Variant variant, std::size_t n, InputAlphabet alphabet,
                                      std::uint64_t max_instances) {
  const Natural count = instanceCount(variant, n, alphabet);
  if (count > max_instances) {
    std::ostringstream os;
    os << "instance space of variant " << toString(variant) << " at size " << n << " has "
       << count << " instances, above the cap of " << max_instances
       << "; lower the size, use the binary input alphabet, or raise the cap";
    throw ResourceLimitError(os.str());
  }
  std::vector<Query> out;
  out.reserve(static_cast<std::size_t>(count));
  if (variant != Variant::G) {
    ProgramEnumerator programs(n);
    while (auto text = programs.next()) out.push_back(Query::of(variant, std::move(*text)));
    return out;
  }
  const std::string symbols = inputSymbols(alphabet);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto inputs = enumerateStrings(n - k, symbols);
    ProgramEnumerator programs(k);
    while (auto text = programs.next())
      for (const auto& in : inputs) out.push_back(Query{Variant::G, *text, in});
  }
  return out;
}

Verdict Oracle::classify(const Query& q) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(q); it != memo_.end()) return it->second;
  }
  Verdict v = run(toInstance(q), policy_.limits);
  std::lock_guard lock(mutex_);
  memo_.emplace(q, v);
  return v;
}

Verdict Oracle::classify(const Instance& instance) const {
  return classify(Query{instance.variant, instance.program.text(), instance.input});
}

CensusResult sizeCensus(Variant variant, std::size_t n, const Oracle& oracle, unsigned workers) {
  const auto& policy = oracle.policy();
  auto queries = enumerateInstances(variant, n, policy.input_alphabet, policy.max_instances);

  CensusResult result;
  result.records.resize(queries.size());
  parallelFor(queries.size(), workers, [&](std::size_t i) {
    result.records[i] = InstanceRecord{queries[i], oracle.classify(queries[i])};
  });

  auto& s = result.summary;
  s.variant = variant;
  s.n = n;
  s.p = queries.size();
  s.budget = policy.limits.budget;
  s.tape_cap = policy.limits.tape_cap;
  for (const auto& r : result.records) {
    if (isHalts(r.verdict)) ++s.h_min;
    else if (isDiverges(r.verdict)) ++s.d_min;
    else ++s.unknown;
  }
  return result;
}

CensusResult sizeCensus(Variant variant, std::size_t n, const OraclePolicy& policy,
                        unsigned workers) {
  const Oracle oracle(policy);
  return sizeCensus(variant, n, oracle, workers);
}

std::vector<CumulativeRow> cumulative(const std::vector<SizeCensus>& censuses) {
  std::vector<CumulativeRow> rows;
  if (censuses.empty()) return rows;
  auto sorted = censuses;
  std::sort(sorted.begin(), sorted.end(),
            [](const SizeCensus& a, const SizeCensus& b) { return a.n < b.n; });
  CumulativeRow acc;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& c = sorted[i];
    if (c.n != i) {
      std::ostringstream os;
      os << "censuses must cover sizes 0.." << sorted.back().n << " contiguously; size " << i
         << " is missing or duplicated";
      throw std::invalid_argument(os.str());
    }
    if (c.variant != sorted[0].variant || c.budget != sorted[0].budget ||
        c.tape_cap != sorted[0].tape_cap)
      throw std::invalid_argument("censuses mix variants or policies");
    acc.n = c.n;
    acc.P += c.p;
    acc.H_min += c.h_min;
    acc.D_min += c.d_min;
    acc.Unknown += c.unknown;
    rows.push_back(acc);
  }
  return rows;
}

void OracleTable::add(const CensusResult& census) {
  for (const auto& r : census.records) verdicts_.insert_or_assign(r.query, r.verdict);
  sizes_.emplace_back(census.summary.variant, census.summary.n);
}

const Verdict* OracleTable::find(const Query& q) const {
  auto it = verdicts_.find(q);
  return it == verdicts_.end() ? nullptr : &it->second;
}

bool OracleTable::coversSize(Variant v, std::size_t n) const {
  return std::find(sizes_.begin(), sizes_.end(), std::pair{v, n}) != sizes_.end();
}

}  // namespace halt_lab
