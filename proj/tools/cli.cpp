#include "cli.hpp"

#include "halt_lab/report.hpp"
#include "halt_lab/tm.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace halt_lab::cli {

namespace {

std::uint64_t parseNumber(std::string_view s, std::string_view what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos)
    throw SpecError("expected a number for " + std::string(what) + ", got '" + std::string(s) + "'");
  try {
    return std::stoull(std::string(s));
  } catch (const std::out_of_range&) {
    throw SpecError("number out of range for " + std::string(what) + ": " + std::string(s));
  }
}

// Recursive descent over the tester grammar; `pos` advances past what it consumed.
class SpecParser {
 public:
  SpecParser(std::string_view text, const TesterContext& ctx) : text_(text), ctx_(ctx) {}

  Tester parseAll() {
    Tester t = parseTester();
    if (pos_ != text_.size()) fail("unexpected trailing text");
    return t;
  }

 private:
  [[noreturn]] void fail(std::string_view why) const {
    throw SpecError("bad tester spec '" + std::string(text_) + "' at offset " +
                    std::to_string(pos_) + ": " + std::string(why));
  }

  bool accept(std::string_view token) {
    if (text_.substr(pos_).substr(0, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::string_view word(std::string_view stops) {
    const auto start = pos_;
    while (pos_ < text_.size() && stops.find(text_[pos_]) == std::string_view::npos) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::uint64_t number(std::string_view what) {
    const auto start = pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    if (start == pos_) fail("expected a number for " + std::string(what));
    return parseNumber(text_.substr(start, pos_ - start), what);
  }

  Tester parseTester() {
    if (accept("bounded:")) {
      const auto budget = number("bounded budget");
      if (budget == 0) fail("bounded budget must be >= 1");
      return boundedSimTester(budget, ctx_.oracle.limits);
    }
    if (accept("syntax")) return syntaxTester();
    if (accept("silent")) return silentTester();
    if (accept("census:")) {
      CensusTesterParams params;
      params.i = number("census i");
      expect(",");
      params.C = number("census C");
      expect(",");
      params.j = number("census j");
      expect(",");
      const auto mode = word(")");
      if (mode == "threeway") params.mode = CensusMode::ThreeWay;
      else if (mode == "approximating") params.mode = CensusMode::Approximating;
      else fail("census mode must be threeway or approximating");
      if (params.C == 0 || params.i > params.C) fail("census needs C >= 1 and i <= C");
      params.global_budget = ctx_.census_budget;
      return censusTester(params, ctx_.oracle);
    }
    if (accept("table:")) {
      const auto depth = number("table depth");
      expect("+");
      Tester fallback = parseTester();
      if (!ctx_.table) fail("no oracle table available");
      return tableTester(depth, std::move(fallback), ctx_.table(depth));
    }
    if (accept("approx:")) {
      Reply bias;
      if (accept("yes")) bias = Reply::Yes;
      else if (accept("no")) bias = Reply::No;
      else fail("approx bias must be yes or no");
      expect("(");
      Tester inner = parseTester();
      expect(")");
      return toApproximating(std::move(inner), bias);
    }
    if (accept("generic(")) {
      Tester inner = parseTester();
      expect(")");
      return toGeneric(std::move(inner));
    }
    if (accept("dovetail:")) {
      const auto budget = number("dovetail budget");
      expect("(");
      Tester inner = parseTester();
      expect(")");
      return dovetailImprove(std::move(inner), budget, ctx_.oracle.limits);
    }
    fail("unknown tester");
  }

  std::string_view text_;
  const TesterContext& ctx_;
  std::size_t pos_ = 0;
};

struct PolicyFlags {
  std::uint64_t budget = 100'000;
  std::size_t tape_cap = std::size_t{1} << 16;
  std::string eof = "write-zero";
  std::string left_edge = "halt";
  std::string input_alphabet = "binary";
  std::uint64_t max_instances = 5'000'000;

  void attach(CLI::App& app) {
    app.add_option("--budget", budget, "Oracle step budget")->check(CLI::PositiveNumber);
    app.add_option("--tape-cap", tape_cap, "Oracle tape cap in cells")->check(CLI::PositiveNumber);
    app.add_option("--eof", eof, "EOF policy for ','")
        ->check(CLI::IsMember({"write-zero", "leave-unchanged"}));
    app.add_option("--left-edge", left_edge, "Policy for '<' at cell 0")
        ->check(CLI::IsMember({"halt", "no-op"}));
    app.add_option("--input-alphabet", input_alphabet, "Variant G input alphabet")
        ->check(CLI::IsMember({"binary", "bytes"}));
    app.add_option("--max-instances", max_instances, "Refuse larger instance spaces");
  }

  OraclePolicy policy() const {
    OraclePolicy p;
    p.limits.budget = budget;
    p.limits.tape_cap = tape_cap;
    p.limits.semantics.eof = *parseEofPolicy(eof);
    p.limits.semantics.left_edge = *parseLeftEdgePolicy(left_edge);
    p.input_alphabet = *parseInputAlphabet(input_alphabet);
    p.max_instances = max_instances;
    return p;
  }
};

struct SizeFlags {
  std::optional<std::size_t> size;
  std::optional<std::size_t> max_size;

  void attach(CLI::App& app) {
    auto* s = app.add_option("--size", size, "Single instance size");
    auto* m = app.add_option("--max-size", max_size, "All sizes 0..N");
    s->excludes(m);
  }

  std::vector<std::size_t> sizes() const {
    if (size) return {*size};
    if (!max_size) throw CLI::ValidationError("one of --size or --max-size is required");
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n <= *max_size; ++n) out.push_back(n);
    return out;
  }

  void describe(report::RunConfig& config) const {
    if (size) config.set("size", std::to_string(*size));
    else if (max_size) config.set("max_size", std::to_string(*max_size));
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::string readFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

Tester parseTesterSpec(std::string_view spec, const TesterContext& ctx) {
  return SpecParser(spec, ctx).parseAll();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Empirical laboratory for imperfect halting testers", "halt-lab"};
  app.require_subcommand(1);

  unsigned workers = defaultWorkers();
  std::string out_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--workers", workers, "Worker threads (default $HALT_LAB_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out_path, "Write the artifact here instead of stdout");
  };

  // count
  std::size_t max_n = 16;
  auto* count = app.add_subcommand("count", "Exact program / prefix counts per size");
  count->add_option("--max-n", max_n, "Largest size tabulated")->check(CLI::Range(2, 4096));
  common(count);

  // census
  std::string census_variant = "E";
  PolicyFlags census_policy;
  SizeFlags census_sizes;
  std::string log_path;
  bool census_verify = false;
  auto* census = app.add_subcommand("census", "Oracle classification of every instance of a size");
  census->add_option("--variant", census_variant)->check(CLI::IsMember({"E", "S", "G"}));
  census_sizes.attach(*census);
  census_policy.attach(*census);
  census->add_option("--log", log_path, "Per-instance JSON-lines witness log");
  census->add_flag("--verify", census_verify, "Re-verify every witness by re-execution");
  common(census);

  // eval
  std::string eval_variant = "E";
  std::string tester_spec;
  std::string universe = "programs";
  std::uint64_t census_budget = 10'000'000;
  PolicyFlags eval_policy;
  SizeFlags eval_sizes;
  auto* eval = app.add_subcommand("eval", "Score a tester against the oracle");
  eval->add_option("--tester", tester_spec, "Tester expression")->required();
  eval->add_option("--variant", eval_variant)->check(CLI::IsMember({"E", "S", "G"}));
  eval->add_option("--universe", universe, "programs, or strings (all 8^n texts)")
      ->check(CLI::IsMember({"programs", "strings"}));
  eval->add_option("--census-budget", census_budget, "Dovetail step budget of census testers");
  eval_sizes.attach(*eval);
  eval_policy.attach(*eval);
  common(eval);

  // tm falloff
  tm::FalloffParams falloff;
  std::vector<std::uint32_t> falloff_states;
  auto* tm_cmd = app.add_subcommand("tm", "Random Turing machine experiments");
  tm_cmd->require_subcommand(1);
  auto* fall = tm_cmd->add_subcommand("falloff", "Outcome fractions of random machines");
  fall->add_option("--states", falloff_states, "State counts")->delimiter(',')->check(CLI::PositiveNumber);
  fall->add_option("--samples", falloff.samples)->check(CLI::PositiveNumber);
  fall->add_option("--seed", falloff.seed);
  fall->add_option("--budget", falloff.budget)->check(CLI::PositiveNumber);
  fall->add_flag("--verify", falloff.verify, "Re-verify every certified outcome");
  common(fall);

  // report
  std::vector<std::string> inputs;
  auto* rep = app.add_subcommand("report", "Merge census/eval artifacts with cumulative columns");
  rep->add_option("inputs", inputs, "Artifact paths")->required();
  common(rep);

  if (!args.empty() && !args[0].empty() && args[0][0] != '-' &&
      app.get_subcommand_no_throw(args[0]) == nullptr) {
    err << "halt-lab: unknown subcommand: " << args[0] << "\n";
    return kUsage;
  }

  std::vector<const char*> argv{"halt-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "halt-lab: " << e.what() << "\n";
    return kUsage;
  }

  try {
    report::RunConfig config;
    if (count->parsed()) {
      config.set("command", "count").set("max_n", std::to_string(max_n));
      const auto table = vanishingReport(max_n);
      emit(report::countCsv(table, config), out_path, out);
      if (!table.prefix_inequality_holds) {
        err << "halt-lab: prefix inequality violated\n";
        return kSoundness;
      }
      return kOk;
    }

    if (census->parsed()) {
      const auto policy = census_policy.policy();
      const auto variant = *parseVariant(census_variant);
      config.set("command", "census").set("variant", census_variant);
      census_sizes.describe(config);
      report::describePolicy(config, policy);
      config.set("max_instances", std::to_string(policy.max_instances));
      const Oracle oracle(policy);
      std::vector<SizeCensus> rows;
      std::vector<CensusResult> results;
      bool sound = true;
      for (auto n : census_sizes.sizes()) {
        auto result = sizeCensus(variant, n, oracle, workers);
        if (census_verify) {
          for (const auto& r : result.records) {
            if (!verify(toInstance(r.query), r.verdict, policy.limits.semantics)) {
              err << "halt-lab: witness failed re-verification: " << r.query.text << " "
                  << describe(r.verdict) << "\n";
              sound = false;
            }
          }
        }
        rows.push_back(result.summary);
        if (!log_path.empty()) results.push_back(std::move(result));
      }
      emit(report::censusCsv(rows, config), out_path, out);
      if (!log_path.empty()) emit(report::censusLog(results, policy.input_alphabet), log_path, out);
      return sound ? kOk : kSoundness;
    }

    if (eval->parsed()) {
      const auto policy = eval_policy.policy();
      const auto variant = *parseVariant(eval_variant);
      const Oracle oracle(policy);
      TesterContext ctx;
      ctx.oracle = policy;
      ctx.census_budget = census_budget;
      ctx.table = [&](std::size_t depth) {
        auto table = std::make_shared<OracleTable>();
        for (std::size_t n = 0; n <= depth; ++n) table->add(sizeCensus(variant, n, oracle, workers));
        return std::shared_ptr<const OracleTable>(std::move(table));
      };
      Tester tester = [&] {
        try {
          return parseTesterSpec(tester_spec, ctx);
        } catch (const SpecError& e) {
          throw CLI::ValidationError(e.what());
        }
      }();
      config.set("command", "eval").set("tester", tester.name()).set("variant", eval_variant);
      config.set("universe", universe);
      eval_sizes.describe(config);
      report::describePolicy(config, policy);
      config.set("census_budget", std::to_string(census_budget));
      config.set("max_instances", std::to_string(policy.max_instances));

      const Universe u = universe == "strings" ? Universe::RawStrings : Universe::Programs;
      std::vector<TesterStats> rows;
      bool sound = true;
      for (auto n : eval_sizes.sizes()) {
        const auto census_result = sizeCensus(variant, n, oracle, workers);
        auto ev = evaluate(tester, census_result, u, workers);
        if (tester.mustBeSound() && ev.stats.wrong > 0) {
          sound = false;
          err << "halt-lab: tester " << tester.name() << " answered " << ev.stats.wrong
              << " instance(s) of size " << n << " wrongly, e.g.";
          for (const auto& w : ev.stats.wrong_examples) err << " '" << w << "'";
          err << "\n";
        }
        rows.push_back(std::move(ev.stats));
      }
      emit(report::evalCsv(rows, config), out_path, out);
      return sound ? kOk : kSoundness;
    }

    if (fall->parsed()) {
      if (!falloff_states.empty()) falloff.states = falloff_states;
      std::string states;
      for (auto s : falloff.states) states += (states.empty() ? "" : ",") + std::to_string(s);
      config.set("command", "tm-falloff").set("states", states);
      config.set("samples", std::to_string(falloff.samples)).set("seed", std::to_string(falloff.seed));
      config.set("budget", std::to_string(falloff.budget));
      config.set("tape", "one-way-binary").set("halt", "transition-target");
      config.set("repeat", "frontier-state").set("move_into_halt", "halts");
      try {
        emit(report::falloffCsv(tm::fallOffExperiment(falloff, workers), config), out_path, out);
      } catch (const std::logic_error& e) {
        err << "halt-lab: " << e.what() << "\n";
        return kSoundness;
      }
      return kOk;
    }

    if (rep->parsed()) {
      std::vector<report::Artifact> artifacts;
      std::string names;
      for (const auto& path : inputs) {
        artifacts.push_back(report::parseArtifact(readFile(path)));
        names += (names.empty() ? "" : ",") + path;
      }
      config.set("command", "report").set("inputs", names);
      emit(report::combine(artifacts, config), out_path, out);
      return kOk;
    }
  } catch (const CLI::ParseError& e) {
    err << "halt-lab: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "halt-lab: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace halt_lab::cli
