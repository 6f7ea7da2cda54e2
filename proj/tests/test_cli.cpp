#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cli.hpp"
#include "halt_lab/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace halt_lab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result runCli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("halt-lab-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

cli::TesterContext context() {
  cli::TesterContext ctx;
  ctx.table = [](std::size_t depth) {
    auto t = std::make_shared<OracleTable>();
    for (std::size_t n = 0; n <= depth; ++n) t->add(sizeCensus(Variant::E, n, OraclePolicy{}));
    return std::shared_ptr<const OracleTable>(t);
  };
  return ctx;
}

}  // namespace

TEST_CASE("run config and csv helpers") {
  report::RunConfig c;
  c.set("a", "1").set("b", "x,y").set("a", "2");
  CHECK(c.get("a") == "2");
  CHECK(c.get("missing").empty());
  CHECK(c.render() == "a=2;b=x,y");
  CHECK(report::RunConfig::parse(c.render()) == c);
  CHECK_THROWS_AS(report::RunConfig::parse("novalue"), report::ReportError);

  CHECK(report::csvField("plain") == "plain");
  CHECK(report::csvField("a,b") == "\"a,b\"");
  CHECK(report::csvField("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(report::splitCsvLine("\"a,b\",c,\"d\"\"e\"") == std::vector<std::string>{"a,b", "c", "d\"e"});
  CHECK(report::splitCsvLine("") == std::vector<std::string>{""});
}

TEST_CASE("artifacts parse back") {
  const auto text = runCli({"census", "--variant", "E", "--max-size", "2"}).out;
  const auto a = report::parseArtifact(text);
  CHECK(a.config.get("variant") == "E");
  CHECK(a.config.get("budget") == "100000");
  CHECK(a.header.size() == 8);
  CHECK(a.rows.size() == 3);
  CHECK_THROWS_AS(report::parseArtifact("n,p\n1,2\n"), report::ReportError);
  CHECK_THROWS_AS(report::parseArtifact("# config: a=1\nn,p\n1\n"), report::ReportError);
}

TEST_CASE("count dispatch") {
  const auto r = runCli({"count", "--max-n", "12"});
  REQUIRE(r.code == cli::kOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3 + 13);
  CHECK(ls[0] == "# halt-lab artifact format=1");
  CHECK(ls[1].rfind("# config: ", 0) == 0);
  CHECK(ls[2] == report::kCountHeader);
  CHECK(ls[5].rfind("2,37,50,64,", 0) == 0);
}

TEST_CASE("census dispatch") {
  const auto r = runCli({"census", "--variant", "E", "--size", "4", "--budget", "100000"});
  REQUIRE(r.code == cli::kOk);
  const auto ls = lines(r.out);
  CHECK(ls[2] == report::kCensusHeader);
  CHECK(ls[3] == "E,4,1514,1490,24,0,100000,65536");
}

TEST_CASE("census log") {
  TempDir dir;
  const auto r = runCli({"census", "--variant", "G", "--size", "1", "--verify", "--out", dir / "c.csv",
                      "--log", dir / "c.jsonl"});
  REQUIRE(r.code == cli::kOk);
  const auto log = lines(slurp(dir / "c.jsonl"));
  REQUIRE(log.size() == 8);
  CHECK(log[0].find("\"input_hex\":\"00\"") != std::string::npos);
  CHECK(log[0].find("\"pair_index\"") != std::string::npos);
}

TEST_CASE("eval dispatch") {
  const auto r = runCli({"eval", "--tester", "bounded:1000", "--variant", "S", "--size", "4"});
  REQUIRE(r.code == cli::kOk);
  const auto ls = lines(r.out);
  CHECK(ls[2] == report::kEvalHeader);
  CHECK(ls[3].rfind("bounded:1000,S,4,1514,", 0) == 0);

  const auto raw = runCli({"eval", "--tester", "syntax", "--universe", "strings", "--size", "1"});
  REQUIRE(raw.code == cli::kOk);
  CHECK(lines(raw.out)[3] == "syntax,E,1,8,0,6,2,0,0,0,6/8");

  const auto table = runCli({"eval", "--tester", "table:2+silent", "--max-size", "3"});
  REQUIRE(table.code == cli::kOk);
  CHECK(lines(table.out)[6].find(",E,3,") != std::string::npos);
}

TEST_CASE("tm falloff dispatch") {
  const auto r = runCli({"tm", "falloff", "--states", "1,2", "--samples", "200", "--verify"});
  REQUIRE(r.code == cli::kOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[2] == report::kFalloffHeader);
  CHECK(ls[3].rfind("1,200,", 0) == 0);
}

TEST_CASE("usage errors name the offending token") {
  auto r = runCli({"census", "--bogus-flag", "1", "--size", "1"});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("--bogus-flag") != std::string::npos);

  r = runCli({"frobnicate"});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("frobnicate") != std::string::npos);

  CHECK(runCli({}).code == cli::kUsage);
  CHECK(runCli({"census", "--variant", "X", "--size", "1"}).code == cli::kUsage);
  CHECK(runCli({"census", "--variant", "E"}).code == cli::kUsage);
  CHECK(runCli({"count", "--max-n", "1"}).code == cli::kUsage);

  r = runCli({"eval", "--tester", "bounded:x", "--size", "1"});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("bounded:x") != std::string::npos);
  CHECK(runCli({"--help"}).code == cli::kOk);
}

TEST_CASE("instance cap is reported") {
  const auto r = runCli({"census", "--variant", "G", "--size", "3", "--input-alphabet", "bytes",
                      "--max-instances", "1000"});
  CHECK(r.code == cli::kUsage);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("tester expressions") {
  const auto ctx = context();
  auto t = cli::parseTesterSpec("dovetail:100(generic(bounded:5))", ctx);
  CHECK(t.kind() == TesterKind::Generic);
  t = cli::parseTesterSpec("approx:yes(syntax)", ctx);
  CHECK(t.kind() == TesterKind::Approximating);
  CHECK(t(Query::of(Variant::E, "+")).reply == Reply::Yes);
  t = cli::parseTesterSpec("census:1,1,0,threeway", ctx);
  CHECK(t(Query::of(Variant::E, "+")).reply == Reply::Yes);
  t = cli::parseTesterSpec("table:3+silent", ctx);
  CHECK(t(Query::of(Variant::E, "+[]")).reply == Reply::No);

  for (const char* bad : {"", "bounded:", "bounded:0", "bounded:5x", "nope", "approx:maybe(syntax)",
                          "generic(syntax", "census:2,1,0,threeway", "census:1,0,0,threeway",
                          "census:1,1,0,sometimes", "dovetail:5 (silent)"}) {
    INFO(bad);
    CHECK_THROWS_AS(cli::parseTesterSpec(bad, ctx), cli::SpecError);
  }
}

TEST_CASE("report merges census artifacts") {
  TempDir dir;
  for (int n = 0; n <= 2; ++n)
    REQUIRE(runCli({"census", "--size", std::to_string(n), "--out", dir / ("c" + std::to_string(n))}).code ==
            cli::kOk);
  auto r = runCli({"report", dir / "c2", dir / "c0", dir / "c1"});
  REQUIRE(r.code == cli::kOk);
  const auto a = report::parseArtifact(r.out);
  REQUIRE(a.rows.size() == 3);
  CHECK(a.rows[2][0] == "E");
  CHECK(a.rows[2][1] == "2");
  CHECK(a.rows[2][6] == "44");

  REQUIRE(runCli({"census", "--max-size", "2", "--out", dir / "all"}).code == cli::kOk);
  r = runCli({"report", dir / "all"});
  REQUIRE(r.code == cli::kOk);
  CHECK(report::parseArtifact(r.out).rows.size() == 3);

  REQUIRE(runCli({"census", "--size", "1", "--budget", "99", "--out", dir / "other"}).code == cli::kOk);
  r = runCli({"report", dir / "c0", dir / "other", dir / "c2"});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("budget") != std::string::npos);

  r = runCli({"report", dir / "c0", dir / "c2"});
  CHECK(r.code == cli::kUsage);

  REQUIRE(runCli({"eval", "--tester", "bounded:3", "--max-size", "2", "--out", dir / "e"}).code == cli::kOk);
  r = runCli({"report", dir / "all", dir / "e"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("cumulative_failure_rate") != std::string::npos);
}

TEST_CASE("artifacts do not depend on the worker count") {
  TempDir dir;
  const std::vector<std::vector<std::string>> commands = {
      {"count", "--max-n", "20"},
      {"census", "--variant", "S", "--max-size", "5", "--log", "LOG"},
      {"eval", "--tester", "dovetail:50(generic(bounded:7))", "--max-size", "5"},
      {"tm", "falloff", "--states", "1,3", "--samples", "300"},
  };
  int k = 0;
  for (const auto& base : commands) {
    std::vector<std::string> outputs;
    for (const char* workers : {"1", "3"}) {
      auto args = base;
      const auto tag = std::to_string(k) + "-" + workers;
      for (auto& a : args)
        if (a == "LOG") a = dir / ("log" + tag);
      args.insert(args.end(), {"--workers", workers, "--out", dir / ("out" + tag)});
      REQUIRE(runCli(args).code == cli::kOk);
      outputs.push_back(slurp(dir / ("out" + tag)));
      if (base[0] == "census") outputs.back() += slurp(dir / ("log" + tag));
    }
    INFO(base[0]);
    CHECK(outputs[0] == outputs[1]);
    CHECK(outputs[0].find("workers") == std::string::npos);
    ++k;
  }
}
