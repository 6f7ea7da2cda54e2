#include "halt_lab/testers.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace halt_lab {

std::string_view toString(Reply r) {
  switch (r) {
    case Reply::Yes: return "yes";
    case Reply::No: return "no";
    case Reply::Unknown: return "unknown";
  }
  return "?";
}

std::string_view toString(TesterKind k) {
  switch (k) {
    case TesterKind::ThreeWay: return "three-way";
    case TesterKind::Generic: return "generic";
    case TesterKind::Approximating: return "approximating";
  }
  return "?";
}

std::string_view toString(CensusMode m) {
  return m == CensusMode::ThreeWay ? "threeway" : "approximating";
}

Tester::Tester(std::string name, TesterKind kind, Fn fn)
    : name_(std::make_shared<const std::string>(std::move(name))),
      kind_(kind),
      fn_(std::make_shared<const Fn>(std::move(fn))) {}

Tester boundedSimTester(std::uint64_t budget, const RunLimits& base) {
  if (budget == 0) throw std::invalid_argument("bounded simulation needs a budget >= 1");
  RunLimits limits = base;
  limits.budget = budget;
  limits.detect_cycles = true;
  return Tester("bounded:" + std::to_string(budget), TesterKind::ThreeWay,
                [limits](const Query& q) {
                  if (!std::holds_alternative<Program>(parse(q.text)))
                    return Answer::no(q.text.size());
                  const Verdict v = run(toInstance(q), limits);
                  if (auto* h = std::get_if<Halts>(&v)) return Answer::yes(h->steps);
                  if (auto* d = std::get_if<Diverges>(&v)) return Answer::no(certificationStep(*d));
                  return Answer::dontKnow(limits.budget);
                });
}

Tester syntaxTester() {
  return Tester("syntax", TesterKind::ThreeWay, [](const Query& q) {
    if (std::holds_alternative<SyntaxError>(parse(q.text))) return Answer::no(q.text.size());
    return Answer::dontKnow(q.text.size());
  });
}

namespace {

struct DovetailOutcome {
  bool completed = false;
  std::uint64_t steps = 0;
  std::set<Query> halted;
};

DovetailOutcome dovetail(Variant variant, std::size_t n, const CensusTesterParams& params,
                         const OraclePolicy& policy) {
  auto queries = enumerateInstances(variant, n, policy.input_alphabet, policy.max_instances);
  const Natural p = queries.size();
  const Natural target_big = (Natural(params.i) * p + params.C - 1) / params.C;
  const auto target = static_cast<std::size_t>(target_big);

  DovetailOutcome out;
  if (target == 0) {
    out.completed = true;
    return out;
  }

  struct Machine {
    std::size_t index;
    Instance instance;
    Configuration cfg;
  };
  std::vector<Machine> active;
  active.reserve(queries.size());
  for (std::size_t k = 0; k < queries.size(); ++k) {
    Machine m{k, toInstance(queries[k]), {}};
    if (m.cfg.isTerminal(m.instance.program)) {
      out.halted.insert(queries[k]);
      if (out.halted.size() == target) {
        out.completed = true;
        return out;
      }
      continue;
    }
    active.push_back(std::move(m));
  }

  const auto& limits = policy.limits;
  while (!active.empty()) {
    std::vector<Machine> still;
    still.reserve(active.size());
    for (auto& m : active) {
      if (out.steps == params.global_budget) return out;
      const auto status =
          advance(m.instance.program, m.cfg, m.instance.input, limits.semantics, limits.tape_cap);
      ++out.steps;
      if (status == StepStatus::TapeCapExceeded) continue;
      if (m.cfg.isTerminal(m.instance.program)) {
        out.halted.insert(queries[m.index]);
        if (out.halted.size() == target) {
          out.completed = true;
          return out;
        }
        continue;
      }
      still.push_back(std::move(m));
    }
    active = std::move(still);
  }
  return out;
}

struct CensusTesterState {
  std::mutex mutex;
  std::map<std::pair<Variant, std::size_t>, DovetailOutcome> outcomes;
};

}  // namespace

Tester censusTester(const CensusTesterParams& params, const OraclePolicy& policy) {
  if (params.C == 0) throw std::invalid_argument("census tester needs C >= 1");
  if (params.i > params.C) throw std::invalid_argument("census tester needs 0 <= i <= C");
  std::ostringstream name;
  name << "census:" << params.i << "," << params.C << "," << params.j << ","
       << toString(params.mode);
  const TesterKind kind =
      params.mode == CensusMode::ThreeWay ? TesterKind::ThreeWay : TesterKind::Approximating;
  auto state = std::make_shared<CensusTesterState>();
  return Tester(name.str(), kind, [params, policy, state](const Query& q) {
    const Answer miss = params.mode == CensusMode::ThreeWay ? Answer::dontKnow() : Answer::no();
    const std::size_t n = q.size();
    if (n < params.j) return miss;
    std::lock_guard lock(state->mutex);
    const auto key = std::pair{q.variant, n};
    auto it = state->outcomes.find(key);
    if (it == state->outcomes.end())
      it = state->outcomes.emplace(key, dovetail(q.variant, n, params, policy)).first;
    const auto& outcome = it->second;
    if (!outcome.completed) return Answer::nonterminating(params.global_budget);
    if (outcome.halted.count(q)) return Answer::yes(outcome.steps);
    Answer a = miss;
    a.work = outcome.steps;
    return a;
  });
}

Tester tableTester(std::size_t depth, Tester fallback, std::shared_ptr<const OracleTable> table) {
  const std::string name = "table:" + std::to_string(depth) + "+" + fallback.name();
  const TesterKind kind = fallback.kind();
  return Tester(name, kind, [depth, fallback = std::move(fallback), table](const Query& q) {
    if (q.size() <= depth) {
      if (const Verdict* v = table->find(q)) {
        if (isHalts(*v)) return Answer::yes(1);
        if (isDiverges(*v)) return Answer::no(1);
      }
    }
    return fallback(q);
  });
}

Tester toApproximating(Tester t, Reply bias) {
  if (bias == Reply::Unknown) throw std::invalid_argument("approximating bias must be yes or no");
  const std::string name = std::string("approx:") + std::string(toString(bias)) + "(" + t.name() + ")";
  return Tester(name, TesterKind::Approximating, [t = std::move(t), bias](const Query& q) {
    Answer a = t(q);
    if (!a.replied()) a = Answer{bias, UnknownFlavor::None, a.work};
    return a;
  });
}

Tester toGeneric(Tester t) {
  const std::string name = "generic(" + t.name() + ")";
  return Tester(name, TesterKind::Generic, [t = std::move(t)](const Query& q) {
    Answer a = t(q);
    if (!a.replied()) a.flavor = UnknownFlavor::Nontermination;
    return a;
  });
}

Tester dovetailImprove(Tester t, std::uint64_t sim_budget, const RunLimits& base) {
  RunLimits limits = base;
  limits.budget = sim_budget;
  limits.detect_cycles = false;
  const std::string name = "dovetail:" + std::to_string(sim_budget) + "(" + t.name() + ")";
  return Tester(name, TesterKind::Generic, [t = std::move(t), limits](const Query& q) {
    const Answer a = t(q);
    const std::uint64_t t_round = std::max<std::uint64_t>(a.work, 1);
    const bool t_done = a.replied() && t_round <= limits.budget;

    std::optional<std::uint64_t> halt_round;
    if (std::holds_alternative<Program>(parse(q.text))) {
      const Verdict v = run(toInstance(q), limits);
      if (auto* h = std::get_if<Halts>(&v)) halt_round = h->steps;
    }
    if (t_done && (!halt_round || t_round <= *halt_round)) return a;
    if (halt_round) return Answer::yes(*halt_round);
    return Answer::nonterminating(limits.budget);
  });
}

Tester silentTester() {
  return Tester("silent", TesterKind::Generic,
                [](const Query&) { return Answer::nonterminating(0); });
}

bool Evaluation::isHard(std::size_t k) const {
  switch (truth[k]) {
    case Truth::Halts: return answers[k].reply != Reply::Yes;
    case Truth::Diverges: return answers[k].reply != Reply::No;
    case Truth::Unknown: return false;
  }
  return false;
}

Evaluation evaluate(const Tester& t, const CensusResult& census, Universe universe,
                    unsigned workers) {
  const auto variant = census.summary.variant;
  const auto n = census.summary.n;

  Evaluation ev;
  auto toTruth = [](const Verdict& v) {
    return isHalts(v) ? Truth::Halts : isDiverges(v) ? Truth::Diverges : Truth::Unknown;
  };
  if (universe == Universe::Programs) {
    for (const auto& r : census.records) {
      ev.queries.push_back(r.query);
      ev.truth.push_back(toTruth(r.verdict));
    }
  } else {
    if (variant == Variant::G)
      throw std::invalid_argument("the raw-string universe is defined for variants E and S only");
    std::map<std::string, Truth> known;
    for (const auto& r : census.records) known.emplace(r.query.text, toTruth(r.verdict));
    for (auto& text : enumerateStrings(n, kBfAlphabet)) {
      auto it = known.find(text);
      // Texts that do not compile count as non-halting.
      ev.truth.push_back(it == known.end() ? Truth::Diverges : it->second);
      if (it == known.end() && std::holds_alternative<Program>(parse(text)))
        throw std::invalid_argument("census does not cover program " + text);
      ev.queries.push_back(Query::of(variant, std::move(text)));
    }
  }

  ev.answers.resize(ev.queries.size());
  parallelFor(ev.queries.size(), workers, [&](std::size_t k) { ev.answers[k] = t(ev.queries[k]); });

  auto& s = ev.stats;
  s.tester = t.name();
  s.variant = variant;
  s.n = n;
  s.p = ev.queries.size();
  for (std::size_t k = 0; k < ev.queries.size(); ++k) {
    const Reply r = ev.answers[k].reply;
    bool wrong = false;
    switch (ev.truth[k]) {
      case Truth::Halts:
        if (r == Reply::Yes) ++s.easy_h;
        else ++s.hard_h;
        wrong = r == Reply::No;
        break;
      case Truth::Diverges:
        if (r == Reply::No) ++s.easy_d;
        else ++s.hard_d;
        wrong = r == Reply::Yes;
        break;
      case Truth::Unknown:
        if (r != Reply::Unknown) ++s.unverifiable;
        break;
    }
    if (wrong) {
      ++s.wrong;
      if (s.wrong_examples.size() < 10) s.wrong_examples.push_back(ev.queries[k].text);
    }
  }
  return ev;
}

}  // namespace halt_lab
