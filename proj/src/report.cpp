#include "halt_lab/report.hpp"

#include "json.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>

namespace halt_lab::report {

RunConfig& RunConfig::set(std::string key, std::string value) {
  for (auto& [k, v] : params) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  params.emplace_back(std::move(key), std::move(value));
  return *this;
}

std::string RunConfig::get(std::string_view key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return {};
}

std::string RunConfig::render() const {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

RunConfig RunConfig::parse(std::string_view rendered) {
  RunConfig config;
  while (!rendered.empty()) {
    const auto end = rendered.find(';');
    const auto item = rendered.substr(0, end);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ReportError("malformed config entry: " + std::string(item));
    config.params.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (end == std::string_view::npos) break;
    rendered.remove_prefix(end + 1);
  }
  return config;
}

void describePolicy(RunConfig& config, const OraclePolicy& policy) {
  config.set("budget", std::to_string(policy.limits.budget));
  config.set("tape_cap", std::to_string(policy.limits.tape_cap));
  config.set("eof", std::string(toString(policy.limits.semantics.eof)));
  config.set("left_edge", std::string(toString(policy.limits.semantics.left_edge)));
  config.set("input_alphabet", std::string(toString(policy.input_alphabet)));
}

std::string csvField(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> splitCsvLine(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw ReportError("unterminated quote in CSV line");
  return fields;
}

namespace {

void preamble(std::ostream& os, const RunConfig& config, std::string_view header) {
  os << "# halt-lab artifact format=" << kFormatVersion << "\n";
  os << "# config: " << config.render() << "\n";
  os << header << "\n";
}

}  // namespace

std::string countCsv(const VanishingReport& report, const RunConfig& config) {
  std::ostringstream os;
  preamble(os, config, kCountHeader);
  for (const auto& r : report.rows) {
    os << r.n << ',' << r.p << ',' << r.q << ',' << r.sigma_pow << ',' << r.pRatio().decimal(15)
       << ',' << r.qRatio().decimal(15) << "\n";
  }
  return os.str();
}

std::string censusCsv(const std::vector<SizeCensus>& rows, const RunConfig& config) {
  std::ostringstream os;
  preamble(os, config, kCensusHeader);
  for (const auto& c : rows) {
    os << toString(c.variant) << ',' << c.n << ',' << c.p << ',' << c.h_min << ',' << c.d_min << ','
       << c.unknown << ',' << c.budget << ',' << c.tape_cap << "\n";
  }
  return os.str();
}

std::string evalCsv(const std::vector<TesterStats>& rows, const RunConfig& config) {
  std::ostringstream os;
  preamble(os, config, kEvalHeader);
  for (const auto& s : rows) {
    os << csvField(s.tester) << ',' << toString(s.variant) << ',' << s.n << ',' << s.p << ','
       << s.easy_h << ',' << s.hard_h << ',' << s.easy_d << ',' << s.hard_d << ','
       << s.unverifiable << ',' << s.wrong << ',' << s.failureRate().str() << "\n";
  }
  return os.str();
}

std::string falloffCsv(const std::vector<tm::OutcomeCounts>& rows, const RunConfig& config) {
  std::ostringstream os;
  preamble(os, config, kFalloffHeader);
  for (const auto& c : rows) {
    os << c.states << ',' << c.samples << ',' << c.halt << ',' << c.fall_off << ','
       << c.frontier_repeat << ',' << c.config_cycle << ',' << c.unknown << "\n";
  }
  return os.str();
}

namespace {

std::string hex(std::string_view bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  for (unsigned char b : bytes) {
    out += digits[b >> 4];
    out += digits[b & 15];
  }
  return out;
}

}  // namespace

std::string censusLog(const std::vector<CensusResult>& censuses, InputAlphabet alphabet) {
  std::ostringstream os;
  const ShortlexCodec inputs(inputSymbols(alphabet));
  for (const auto& census : censuses) {
    for (const auto& r : census.records) {
      nlohmann::ordered_json j;
      j["variant"] = std::string(toString(r.query.variant));
      j["n"] = census.summary.n;
      j["program"] = r.query.text;
      if (r.query.variant == Variant::G) {
        j["input_hex"] = hex(r.query.input);
        j["pair_index"] =
            cantorPair(shortlexIndex(r.query.text), inputs.index(r.query.input)).str();
      }
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Halts>) {
              j["verdict"] = "halts";
              j["steps"] = v.steps;
            } else if constexpr (std::is_same_v<T, Diverges>) {
              j["verdict"] = "diverges";
              j["mu"] = v.mu;
              j["lambda"] = v.lambda;
            } else {
              j["verdict"] = "unknown";
              j["reason"] = std::string(toString(v.reason));
            }
          },
          r.verdict);
      os << j.dump() << "\n";
    }
  }
  return os.str();
}

Artifact parseArtifact(std::istream& in) {
  Artifact a;
  std::string line;
  bool seen_config = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kConfig = "# config: ";
      if (line.rfind(kConfig, 0) == 0) {
        a.config = RunConfig::parse(std::string_view(line).substr(kConfig.size()));
        seen_config = true;
      }
      continue;
    }
    if (a.header.empty()) a.header = splitCsvLine(line);
    else a.rows.push_back(splitCsvLine(line));
  }
  if (!seen_config) throw ReportError("artifact carries no config provenance line");
  if (a.header.empty()) throw ReportError("artifact has no CSV header");
  for (const auto& row : a.rows)
    if (row.size() != a.header.size()) throw ReportError("CSV row width does not match header");
  return a;
}

Artifact parseArtifact(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parseArtifact(in);
}

namespace {

std::string headerOf(const Artifact& a) {
  std::string h;
  for (const auto& f : a.header) {
    if (!h.empty()) h += ',';
    h += f;
  }
  return h;
}

// Provenance keys that must agree across merged inputs.
constexpr std::string_view kPolicyKeys[] = {"variant", "budget",    "tape_cap",
                                            "eof",     "left_edge", "input_alphabet"};

std::uint64_t toU64(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw ReportError("not a number: " + s);
    return v;
  } catch (const std::logic_error&) {
    throw ReportError("not a number: " + s);
  }
}

}  // namespace

std::string combine(const std::vector<Artifact>& inputs, const RunConfig& config) {
  if (inputs.empty()) throw ReportError("report needs at least one input artifact");
  const Artifact& first = inputs.front();
  for (const auto& a : inputs) {
    for (auto key : kPolicyKeys) {
      if (a.config.get(key) != first.config.get(key))
        throw ReportError("inputs disagree on " + std::string(key) + ": '" + first.config.get(key) +
                          "' vs '" + a.config.get(key) + "'");
    }
  }

  std::vector<SizeCensus> censuses;
  struct EvalRow {
    std::string tester;
    std::size_t n;
    std::uint64_t p, hard_h, hard_d;
  };
  std::vector<EvalRow> evals;
  for (const auto& a : inputs) {
    const std::string h = headerOf(a);
    if (h == kCensusHeader) {
      for (const auto& r : a.rows) {
        SizeCensus c;
        const auto v = parseVariant(r[0]);
        if (!v) throw ReportError("unknown variant " + r[0]);
        c.variant = *v;
        c.n = toU64(r[1]);
        c.p = toU64(r[2]);
        c.h_min = toU64(r[3]);
        c.d_min = toU64(r[4]);
        c.unknown = toU64(r[5]);
        c.budget = toU64(r[6]);
        c.tape_cap = toU64(r[7]);
        censuses.push_back(c);
      }
    } else if (h == kEvalHeader) {
      for (const auto& r : a.rows)
        evals.push_back({r[0], toU64(r[2]), toU64(r[3]), toU64(r[5]), toU64(r[7])});
    } else {
      throw ReportError("report accepts census and eval artifacts only; got header " + h);
    }
  }

  std::ostringstream os;
  os << "# halt-lab artifact format=" << kFormatVersion << "\n";
  RunConfig out_config = config;
  for (auto key : kPolicyKeys) out_config.set(std::string(key), first.config.get(key));
  os << "# config: " << out_config.render() << "\n";

  if (!censuses.empty()) {
    std::vector<CumulativeRow> cum;
    try {
      cum = cumulative(censuses);
    } catch (const std::invalid_argument& e) {
      throw ReportError(e.what());
    }
    std::sort(censuses.begin(), censuses.end(),
              [](const SizeCensus& a, const SizeCensus& b) { return a.n < b.n; });
    os << "variant,n,p,h_min,d_min,unknown,P,H_min,D_min,Unknown,h_min_ratio,h_min_trend\n";
    int last_direction = 0;
    std::size_t direction_changes = 0;
    for (std::size_t i = 0; i < censuses.size(); ++i) {
      const auto& c = censuses[i];
      const Ratio ratio{Natural(c.h_min), Natural(c.p)};
      std::string trend;
      if (i > 0) {
        const auto& prev = censuses[i - 1];
        const Ratio before{Natural(prev.h_min), Natural(prev.p)};
        const int direction = before < ratio ? 1 : ratio < before ? -1 : 0;
        trend = direction > 0 ? "up" : direction < 0 ? "down" : "flat";
        if (direction != 0) {
          if (last_direction != 0 && direction != last_direction) ++direction_changes;
          last_direction = direction;
        }
      }
      os << toString(c.variant) << ',' << c.n << ',' << c.p << ',' << c.h_min << ',' << c.d_min
         << ',' << c.unknown << ',' << cum[i].P << ',' << cum[i].H_min << ',' << cum[i].D_min << ','
         << cum[i].Unknown << ',' << ratio.decimal(12) << ',' << trend << "\n";
    }
    os << "# h_min/p trajectory direction changes: " << direction_changes
       << (direction_changes > 0 ? " (non-monotonic)" : " (monotonic)") << "\n";
  }

  if (!evals.empty()) {
    std::map<std::string, std::vector<EvalRow>> by_tester;
    for (auto& e : evals) by_tester[e.tester].push_back(e);
    os << "tester,n,p,hard_h,hard_d,failure_rate,P,hard_H,hard_D,cumulative_failure_rate\n";
    for (auto& [tester, rows] : by_tester) {
      std::sort(rows.begin(), rows.end(), [](const EvalRow& a, const EvalRow& b) { return a.n < b.n; });
      std::uint64_t P = 0, H = 0, D = 0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (i > 0 && rows[i - 1].n == r.n)
          throw ReportError("duplicate size " + std::to_string(r.n) + " for tester " + tester);
        P += r.p;
        H += r.hard_h;
        D += r.hard_d;
        const Ratio rate{Natural(r.hard_h + r.hard_d), Natural(r.p)};
        const Ratio cum_rate{Natural(H + D), Natural(P)};
        os << csvField(tester) << ',' << r.n << ',' << r.p << ',' << r.hard_h << ',' << r.hard_d << ','
           << rate.str() << ',' << P << ',' << H << ',' << D << ',' << cum_rate.str() << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace halt_lab::report
