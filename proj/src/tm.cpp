#include "halt_lab/tm.hpp"

#include "halt_lab/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace halt_lab::tm {

Machine::Machine(std::uint32_t states, std::vector<Transition> delta, std::uint64_t seed)
    : states_(states), delta_(std::move(delta)), seed_(seed) {
  if (states_ == 0) throw std::invalid_argument("a machine needs at least one state");
  if (delta_.size() != std::size_t{2} * states_)
    throw std::invalid_argument("transition table must have 2 * states entries");
  for (const auto& t : delta_)
    if (t.write > 1 || t.next > states_) throw std::invalid_argument("transition out of range");
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t sampleSeed(std::uint64_t master, std::uint32_t states, std::uint64_t index) noexcept {
  return mix64(mix64(mix64(master) ^ states) + index);
}

namespace {

// Unbiased draw from [0, k) by rejection; the output depends only on the
// engine's sequence, which the standard fixes for mt19937_64.
std::uint64_t uniformBelow(std::mt19937_64& rng, std::uint64_t k) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % k + 1) % k;
  std::uint64_t x;
  do x = rng();
  while (x > limit);
  return x % k;
}

}  // namespace

Machine sampleMachine(std::uint32_t states, std::uint64_t seed) {
  if (states == 0) throw std::invalid_argument("a machine needs at least one state");
  std::mt19937_64 rng(seed);
  std::vector<Transition> delta(std::size_t{2} * states);
  for (auto& t : delta) {
    t.write = static_cast<std::uint8_t>(uniformBelow(rng, 2));
    t.move = uniformBelow(rng, 2) == 0 ? Move::L : Move::R;
    t.next = static_cast<std::uint32_t>(uniformBelow(rng, states + 1));
  }
  return Machine(states, std::move(delta), seed);
}

Machine machineFromCode(std::uint32_t states, std::uint64_t code) {
  const std::uint64_t id = code;
  const std::uint64_t base = 4 * (std::uint64_t{states} + 1);
  std::vector<Transition> delta(std::size_t{2} * states);
  for (auto& t : delta) {
    const std::uint64_t digit = code % base;
    code /= base;
    t.write = static_cast<std::uint8_t>(digit % 2);
    t.move = (digit / 2) % 2 == 0 ? Move::L : Move::R;
    t.next = static_cast<std::uint32_t>(digit / 4);
  }
  return Machine(states, std::move(delta), id);
}

std::string describe(const Outcome& o) {
  std::ostringstream os;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Halt>) os << "Halt(" << v.steps << ")";
        else if constexpr (std::is_same_v<T, FallOffLeft>) os << "FallOffLeft(" << v.steps << ")";
        else if constexpr (std::is_same_v<T, FrontierStateRepeat>)
          os << "FrontierStateRepeat(" << v.steps << ")";
        else if constexpr (std::is_same_v<T, ConfigCycle>)
          os << "ConfigCycle(" << v.mu << "," << v.lambda << ")";
        else os << "Unknown(" << v.budget << ")";
      },
      o);
  return os.str();
}

namespace {

struct Config {
  std::uint32_t state = 1;
  std::size_t head = 0;
  std::vector<std::uint8_t> tape;  // visited cells; anything beyond is blank

  std::uint8_t read() const { return head < tape.size() ? tape[head] : 0; }
};

bool sameConfig(const Config& a, const Config& b) {
  if (a.state != b.state || a.head != b.head) return false;
  const auto& x = a.tape.size() >= b.tape.size() ? a.tape : b.tape;
  const auto& y = a.tape.size() >= b.tape.size() ? b.tape : a.tape;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (x[i] != y[i]) return false;
  for (std::size_t i = y.size(); i < x.size(); ++i)
    if (x[i] != 0) return false;
  return true;
}

enum class Event { None, Halt, FallOff };

Event transition(const Machine& m, Config& c) {
  const Transition& t = m.at(c.state, c.read());
  if (t.next == kHalt) return Event::Halt;
  if (c.head >= c.tape.size()) c.tape.resize(c.head + 1, 0);
  c.tape[c.head] = t.write;
  if (t.move == Move::L) {
    if (c.head == 0) return Event::FallOff;
    --c.head;
  } else {
    ++c.head;
  }
  c.state = t.next;
  return Event::None;
}

std::uint64_t cycleStart(const Machine& m, std::uint64_t lambda) {
  Config slow;
  Config fast;
  for (std::uint64_t k = 0; k < lambda; ++k) transition(m, fast);
  std::uint64_t mu = 0;
  while (!sameConfig(slow, fast)) {
    transition(m, slow);
    transition(m, fast);
    ++mu;
  }
  return mu;
}

}  // namespace

Outcome runTm(const Machine& m, std::uint64_t budget) {
  Config c;
  std::size_t frontier = 0;
  // Frontier visits the machine has not since moved left of; positions
  // increase from bottom to top.
  std::vector<std::pair<std::size_t, std::uint32_t>> visits;
  std::vector<std::uint32_t> live(m.states() + 1, 0);

  Config saved = c;
  std::uint64_t saved_index = 0;
  for (std::uint64_t k = 1; k <= budget; ++k) {
    if (c.head == frontier) {
      if (live[c.state] > 0) return FrontierStateRepeat{k};
      visits.emplace_back(c.head, c.state);
      ++live[c.state];
      ++frontier;
    }
    switch (transition(m, c)) {
      case Event::Halt: return Halt{k};
      case Event::FallOff: return FallOffLeft{k};
      case Event::None: break;
    }
    while (!visits.empty() && visits.back().first > c.head) {
      --live[visits.back().second];
      visits.pop_back();
    }
    if (sameConfig(c, saved)) return ConfigCycle{cycleStart(m, k - saved_index), k - saved_index};
    if (std::has_single_bit(k)) {
      saved = c;
      saved_index = k;
    }
  }
  return Unknown{budget};
}

bool verifyOutcome(const Machine& m, const Outcome& o) {
  // Plain re-execution of `count` transitions; records (head, state) after
  // 0, 1, ... transitions and leaves the final configuration in `c`.
  struct Trace {
    std::vector<std::pair<std::size_t, std::uint32_t>> points;
    Config c;
  };
  auto simulate = [&](std::uint64_t count, Trace& tr) -> Event {
    tr.points.emplace_back(tr.c.head, tr.c.state);
    for (std::uint64_t k = 0; k < count; ++k) {
      const Event e = transition(m, tr.c);
      if (e != Event::None) return e;
      tr.points.emplace_back(tr.c.head, tr.c.state);
    }
    return Event::None;
  };
  auto endsWith = [&](std::uint64_t steps, Event expected) {
    Trace tr;
    return steps >= 1 && simulate(steps - 1, tr) == Event::None && transition(m, tr.c) == expected;
  };

  if (auto* h = std::get_if<Halt>(&o)) return endsWith(h->steps, Event::Halt);
  if (auto* f = std::get_if<FallOffLeft>(&o)) return endsWith(f->steps, Event::FallOff);
  if (auto* r = std::get_if<FrontierStateRepeat>(&o)) {
    if (r->steps < 2) return false;
    Trace tr;
    if (simulate(r->steps - 1, tr) != Event::None) return false;
    const auto& t = tr.points;
    const std::size_t last = t.size() - 1;
    // Fresh at index i: the head stands right of every earlier head position.
    std::vector<bool> fresh(t.size(), true);
    for (std::size_t i = 1, max_head = t[0].first; i < t.size(); ++i) {
      fresh[i] = t[i].first > max_head;
      max_head = std::max(max_head, t[i].first);
    }
    if (!fresh[last]) return false;
    std::size_t min_after = t[last].first;  // min head over [i, last]
    for (std::size_t i = last; i-- > 0;) {
      min_after = std::min(min_after, t[i].first);
      if (fresh[i] && t[i].second == t[last].second && min_after >= t[i].first) return true;
    }
    return false;
  }
  if (auto* cyc = std::get_if<ConfigCycle>(&o)) {
    if (cyc->lambda == 0) return false;
    Trace first;
    if (simulate(cyc->mu, first) != Event::None) return false;
    Trace second{{}, first.c};
    if (simulate(cyc->lambda, second) != Event::None) return false;
    return sameConfig(first.c, second.c);
  }
  return true;
}

void OutcomeCounts::add(const Outcome& o) {
  ++samples;
  if (std::holds_alternative<Halt>(o)) ++halt;
  else if (std::holds_alternative<FallOffLeft>(o)) ++fall_off;
  else if (std::holds_alternative<FrontierStateRepeat>(o)) ++frontier_repeat;
  else if (std::holds_alternative<ConfigCycle>(o)) ++config_cycle;
  else ++unknown;
}

std::vector<OutcomeCounts> fallOffExperiment(const FalloffParams& params, unsigned workers) {
  if (params.samples == 0) throw std::invalid_argument("fall-off experiment needs samples >= 1");
  std::vector<OutcomeCounts> result;
  for (const auto states : params.states) {
    std::vector<Outcome> outcomes(params.samples, Unknown{0});
    parallelFor(params.samples, workers, [&](std::size_t index) {
      const Machine m = sampleMachine(states, sampleSeed(params.seed, states, index));
      outcomes[index] = runTm(m, params.budget);
      if (params.verify && !verifyOutcome(m, outcomes[index]))
        throw std::logic_error("outcome failed re-verification: " + describe(outcomes[index]));
    });
    OutcomeCounts counts;
    counts.states = states;
    for (const auto& o : outcomes) counts.add(o);
    result.push_back(counts);
  }
  return result;
}

OutcomeCounts enumerateAll(std::uint32_t states, std::uint64_t budget) {
  const std::uint64_t base = 4 * (std::uint64_t{states} + 1);
  std::uint64_t total = 1;
  for (std::uint32_t e = 0; e < 2 * states; ++e) {
    if (total > std::numeric_limits<std::uint64_t>::max() / base)
      throw std::invalid_argument("machine space too large to enumerate");
    total *= base;
  }
  OutcomeCounts counts;
  counts.states = states;
  for (std::uint64_t code = 0; code < total; ++code)
    counts.add(runTm(machineFromCode(states, code), budget));
  return counts;
}

Interval wilson(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {center - half, center + half};
}

}  // namespace halt_lab::tm
