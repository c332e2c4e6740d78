#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "skewci/cli.hpp"

using namespace skewci;
namespace sc = skewci::cli;
namespace fs = std::filesystem;

namespace {

sc::JobConfig example_job(const std::string& command) {
  sc::JobConfig c;
  c.command = command;
  c.ring = nlohmann::json::parse(fixtures::kExample);
  c.modules["M"] = {{"quotient", {"x1"}}};
  c.M = "M";
  c.N = "k";
  return c;
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("skewci_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

nlohmann::json without_cache(nlohmann::json j) {
  j.erase("cache");
  return j;
}

}  // namespace

TEST(Cli, ParseErrorReportsLineAndColumn) {
  try {
    sc::parse_config("{\n  \"command\": \"support\",\n  \"ring\": {,}\n}");
    FAIL() << "expected a parse error";
  } catch (const sc::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3, column 12"), std::string::npos) << e.what();
  }
}

TEST(Cli, RejectsBadConfigs) {
  auto c = example_job("support");
  c.M = "missing";
  EXPECT_THROW(sc::validate_config(c), sc::ConfigError);
  c = example_job("frobnicate");
  EXPECT_THROW(sc::validate_config(c), sc::ConfigError);
  c = example_job("ext");
  c.window.cmax = 0;
  EXPECT_THROW(sc::validate_config(c), sc::ConfigError);
  EXPECT_EQ(sc::run(c).status, 2);
}

TEST(Cli, WindowFlag) {
  sc::WindowParams w;
  sc::apply_window(w, "c=5,D=12,h=3");
  EXPECT_EQ(w.cmax, 5);
  EXPECT_EQ(w.Dmax, 12);
  EXPECT_EQ(w.hmax, 3);
  sc::apply_window(w, "D=4");
  EXPECT_EQ(w.Dmax, 4);
  EXPECT_EQ(w.cmax, 5);
  EXPECT_THROW(sc::apply_window(w, "c=x"), sc::ConfigError);
  EXPECT_THROW(sc::apply_window(w, "q=1"), sc::ConfigError);
}

TEST(Cli, ExampleSupport) {
  auto r = sc::run(example_job("support"));
  ASSERT_EQ(r.status, 0) << r.text;
  EXPECT_EQ(r.report["result"]["ideal"], nlohmann::json({"θ2"}));
  EXPECT_EQ(r.report["result"]["dimension"], 1);
  EXPECT_EQ(r.report["result"]["semantics"], "fiber");
  EXPECT_EQ(r.report["window"]["cmax"], 8);
  EXPECT_EQ(r.report["schema"], sc::kReportSchema);
}

TEST(Cli, FullSemanticsIsLabelled) {
  auto c = example_job("support");
  c.N = {{"quotient", {"x2"}}};
  c.semantics = "full";
  auto r = sc::run(c);
  ASSERT_EQ(r.status, 0) << r.text;
  EXPECT_EQ(r.report["result"]["semantics"], "truncated-full");
  EXPECT_EQ(r.report["semantics"], "full");
}

TEST(Cli, NonRegularRingFailsCheck) {
  sc::JobConfig c;
  c.command = "check";
  c.ring = nlohmann::json::parse(R"({"n":2,"m":2,"qexp":[[0,1],[1,0]],"relations":["x1^2","x1*x2"]})");
  auto r = sc::run(c);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.text.find("Hilbert function mismatch"), std::string::npos) << r.text;
}

TEST(Cli, BettiOfResidueField) {
  auto c = example_job("betti");
  c.M = "k";
  c.imax = 6;
  auto r = sc::run(c);
  ASSERT_EQ(r.status, 0) << r.text;
  EXPECT_EQ(r.report["result"]["totals"], nlohmann::json({1, 2, 3, 4, 5, 6, 7}));
}

TEST(Cli, EveryCommandRuns) {
  for (const auto& cmd : sc::commands()) {
    auto c = example_job(cmd);
    c.window = {6, 6, -1};
    auto r = sc::run(c);
    EXPECT_EQ(r.status, 0) << cmd << ": " << r.text;
    EXPECT_EQ(r.report["status"], "ok") << cmd;
  }
}

TEST(Cli, AppendixSelftestWithoutRing) {
  sc::JobConfig c;
  c.command = "selftest-appendix";
  auto r = sc::run(c);
  ASSERT_EQ(r.status, 0) << r.text;
  EXPECT_EQ(r.report["result"].size(), 3u);
}

TEST(Cli, CacheRoundtripIsByteIdentical) {
  for (auto js : {fixtures::kHyper, fixtures::kExample, fixtures::kThree, fixtures::kSkewHyper, fixtures::kCube}) {
    RingSpec R = fixtures::ring(js);
    auto K = finite_koszul_resolution(R, residue_field(R));
    std::string a = dge_to_json(R, K.P).dump();
    EXPECT_EQ(dge_to_json(R, sc::cache_roundtrip(R, K.P)).dump(), a);
  }
}

TEST(Cli, SecondRunHitsCache) {
  auto dir = fresh_dir("hit");
  auto c = example_job("poincare");
  c.cache = dir.string();
  auto r1 = sc::run(c);
  auto r2 = sc::run(c);
  ASSERT_EQ(r1.status, 0);
  EXPECT_EQ(r1.report["cache"]["misses"], 1);
  EXPECT_EQ(r2.report["cache"]["hits"], 1);
  EXPECT_EQ(r2.report["cache"]["misses"], 0);
  EXPECT_EQ(without_cache(r1.report), without_cache(r2.report));
  fs::remove_all(dir);
}

TEST(Cli, FlippedBitIsDetectedAndRecomputed) {
  auto dir = fresh_dir("flip");
  RingSpec R = fixtures::ring(fixtures::kExample);
  auto M = residue_field(R);
  sc::ResolutionCache cache(dir);
  auto K = cache.get(R, M);
  auto path = cache.entry_path(sc::ResolutionCache::key(R, M, {}));
  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  // flip a bit inside the payload, once in a digit and once in a key
  for (auto needle : {"\"truncation\":", "\"hdeg\""}) {
    std::string b = bytes;
    size_t pos = b.find(needle);
    ASSERT_NE(pos, std::string::npos);
    pos += std::string(needle).size() - 1;
    b[pos] ^= 1;
    {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << b;
    }
    sc::ResolutionCache again(dir);
    auto K2 = again.get(R, M);
    EXPECT_EQ(again.stats().corrupt, 1);
    EXPECT_EQ(dge_to_json(R, K2.P).dump(), dge_to_json(R, K.P).dump());
    sc::ResolutionCache third(dir);
    third.get(R, M);
    EXPECT_EQ(third.stats().hits, 1);
  }
  fs::remove_all(dir);
}

TEST(Cli, Sha256KnownValue) {
  EXPECT_EQ(sc::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, RenderAlignsBidegrees) {
  std::map<std::pair<int, long>, long> cells{{{0, 0}, 1}, {{1, 1}, 12}};
  EXPECT_EQ(sc::render_bigraded(cells, "i\\j"), "i\\j   0   1\n  0   1   .\n  1   .  12\n");
}
