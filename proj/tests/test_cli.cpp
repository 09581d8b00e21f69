#include "doctest.h"
#include "helpers.hpp"

#include "linklab/cli.hpp"
#include "linklab/log.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace linklab;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  const int code = run_command(args, out);
  return {code, out.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("exit codes") {
  testing::TempDir dir;
  const auto data = (dir / "d.json").string();
  REQUIRE(run({"synth", "--issues", "120", "--labels", "3", "--seed", "1", "--out", data}).code == 0);
  CHECK(run({"recover", "--data", data, "--model", "svm"}).code == 2);
  CHECK(run({"recover", "--data", data, "--bogus"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"recover", "--data", data, "--encoder", "none"}).code == 2);
  CHECK(run({"recover", "--data", (dir / "missing.json").string()}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("stats") {
  testing::TempDir dir;
  const auto data = (dir / "flex.json").string();
  save_dataset(testing::dataset_from_counts(testing::kFlex), data);
  const auto r = run({"stats", "--data", data, "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["links"] == 247);
  CHECK(j["linked_issue_ratio"] == 1.0);
  CHECK(j["filtered"]["links"] == 208);
  CHECK(j["filtered"]["zeror_f1"].get<double>() == doctest::Approx(0.281).epsilon(5e-4 / 0.281));
  CHECK(j["labels"]["relates to"]["count"] == 94);
  CHECK(run({"stats", "--data", data, "--format", "csv"}).out.rfind("label,count,fraction,kept\n", 0) == 0);
  CHECK(run({"stats", "--data", data, "--format", "yaml"}).code == 2);
}

TEST_CASE("load reports violations") {
  testing::TempDir dir;
  auto d = testing::dataset_from_counts({{"blocks", 2}});
  save_dataset(d, dir / "ok.json");
  CHECK(run({"load", "--data", (dir / "ok.json").string()}).code == 0);
  d.links.push_back({"P-0", "P-0", "blocks"});
  save_dataset(d, dir / "bad.json");
  const auto r = run({"load", "--data", (dir / "bad.json").string()});
  CHECK(r.code == 1);
  CHECK(json::parse(r.out)["violations"].size() == 1);
}

TEST_CASE("synth is byte-identical per seed") {
  testing::TempDir dir;
  for (const char* name : {"a.json", "b.json"}) {
    REQUIRE(run({"synth", "--issues", "300", "--seed", "9", "--out", (dir / name).string()}).code == 0);
  }
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(run({"synth", "--noise", "1.5"}).code == 2);
}

TEST_CASE("recover and predict-future reports") {
  testing::TempDir dir;
  const auto data = (dir / "d.json").string();
  REQUIRE(run({"synth", "--issues", "300", "--labels", "3", "--seed", "2", "--out", data}).code == 0);
  const std::vector<std::string> recover{"recover", "--data", data,  "--encoder",      "tfidf",
                                         "--meta",  "--model", "lr", "--smote",        "--tune",
                                         "2",       "--seed", "7",   "--no-timestamp", "--min-label-count",
                                         "5"};
  const auto a = run(recover), b = run(recover);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = json::parse(a.out);
  for (const char* key : {"weighted_f1", "per_label", "confusion", "config", "seed", "folds"}) CHECK(j.contains(key));
  CHECK(j["seed"] == 7);
  CHECK(j["config"]["model"] == "lr");
  CHECK(j["config"]["chosen"].size() == 5);
  CHECK_FALSE(j.contains("generated_at"));

  auto to_file = recover;
  to_file.insert(to_file.end(), {"--out", (dir / "r1.json").string()});
  REQUIRE(run(to_file).code == 0);
  to_file.back() = (dir / "r2.json").string();
  REQUIRE(run(to_file).code == 0);
  CHECK(slurp(dir / "r1.json") == slurp(dir / "r2.json"));

  auto timed = recover;
  timed.erase(std::find(timed.begin(), timed.end(), "--no-timestamp"));
  CHECK(json::parse(run(timed).out).contains("generated_at"));

  const auto p = run({"predict-future", "--data", data, "--meta", "--split", "80-20", "--seed", "3", "--no-timestamp",
                      "--min-label-count", "5"});
  REQUIRE(p.code == 0);
  CHECK(json::parse(p.out).contains("split"));
  CHECK(run({"predict-future", "--data", data, "--split", "70-30"}).code == 2);
}

TEST_CASE("config file precedence") {
  testing::TempDir dir;
  const auto data = (dir / "d.json").string();
  REQUIRE(run({"synth", "--issues", "200", "--labels", "2", "--seed", "4", "--out", data}).code == 0);
  std::ofstream(dir / "cfg.json") << json{{"data", data}, {"model", "zeror"}, {"seed", 11}, {"no-timestamp", true},
                                          {"min-label-count", 5}}
                                         .dump();
  const auto cfg = (dir / "cfg.json").string();
  const auto from_file = json::parse(run({"recover", "--config", cfg}).out);
  CHECK(from_file["config"]["model"] == "zeror");
  CHECK(from_file["seed"] == 11);
  const auto overridden = json::parse(run({"recover", "--config", cfg, "--seed", "12"}).out);
  CHECK(overridden["seed"] == 12);
  CHECK(overridden["config"]["model"] == "zeror");

  std::ofstream(dir / "broken.json") << "{\"seed\": ";
  CHECK(run({"recover", "--config", (dir / "broken.json").string()}).code == 2);
}

TEST_CASE("save-model and suggest") {
  testing::TempDir dir;
  const auto data = (dir / "d.json").string();
  const auto bundle = (dir / "m.json").string();
  REQUIRE(run({"synth", "--issues", "150", "--labels", "3", "--seed", "5", "--out", data}).code == 0);
  REQUIRE(run({"recover", "--data", data, "--model", "zeror", "--meta", "--min-label-count", "5", "--save-model", bundle,
               "--out", (dir / "r.json").string()})
              .code == 0);
  const auto r = run({"suggest", "--bundle", bundle, "--data", data, "--source", "SYN-1", "--target", "SYN-2", "--top-k",
                      "5"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  REQUIRE(j.size() == 3);
  CHECK(j[0]["probability"] == 1.0);
  CHECK(run({"suggest", "--bundle", bundle, "--data", data, "--source", "SYN-1", "--target", "NOPE-1"}).code == 1);
}

TEST_CASE("train-embeddings") {
  testing::TempDir dir;
  const auto out = (dir / "v.vec").string();
  REQUIRE(run({"train-embeddings", "--corpus", LINKLAB_TOY_CORPUS, "--dims", "8", "--epochs", "1", "--min-count", "1",
               "--buckets", "1000", "--out", out})
              .code == 0);
  std::ifstream in(out);
  std::size_t words = 0, dims = 0;
  in >> words >> dims;
  CHECK(words > 10);
  CHECK(dims == 8);
  CHECK(run({"train-embeddings", "--corpus", (dir / "none.txt").string(), "--out", out}).code == 1);
}
