#include "doctest.h"
#include "helpers.hpp"

#include "linklab/textprep.hpp"

using namespace linklab;

TEST_CASE("split_camel_case") {
  CHECK(split_camel_case("getValueFromDB") == TokenList{"get", "value", "from", "db"});
  CHECK(split_camel_case("hello") == TokenList{"hello"});
  CHECK(split_camel_case("HTTPServer") == TokenList{"http", "server"});
  CHECK(split_camel_case("parseV2Config") == TokenList{"parse", "v2", "config"});
  CHECK(split_camel_case("").empty());
}

TEST_CASE("normalize_text") {
  const auto config = NormalizationConfig::from_text("the\n", "failed\tfail\ntests\ttest\n");
  CHECK(normalize_text("The QuickTests failed!", config) == TokenList{"quick", "test", "fail"});
  CHECK(normalize_text("", config).empty());
  const auto bare = NormalizationConfig::from_text("", "");
  CHECK(normalize_text("a-b_c", bare) == TokenList{"a", "b", "c"});

  SUBCASE("idempotent on its own output") {
    const auto bundled = NormalizationConfig::bundled();
    for (const char* text : {"NullPointerException thrown when the HiveServer2 restarts!", "Fix DAGScheduler_tests",
                             "rows were dropped; queries failing"}) {
      const auto once = normalize_text(text, bundled);
      std::string joined;
      for (const auto& t : once) joined += t + " ";
      CHECK(normalize_text(joined, bundled) == once);
    }
  }
  SUBCASE("tokens are lowercase alphanumerics outside the stopword list") {
    const auto bundled = NormalizationConfig::bundled();
    for (const auto& t : normalize_text("Über-cool: IS it WORKING?? (see #1234) and The_End", bundled)) {
      CHECK_FALSE(t.empty());
      CHECK(std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::islower(c) || std::isdigit(c); }));
      CHECK_FALSE(bundled.stopwords.contains(t));
    }
  }
}

TEST_CASE("preprocess_issue") {
  const auto config = NormalizationConfig::bundled();
  REQUIRE(config.stopwords.contains("in"));
  auto issue = testing::make_issue("HIVE-1", 0, "Bug", "NullPointerException in HiveServer");
  const auto t = preprocess_issue(issue, config);
  CHECK(t.id == "HIVE-1");
  CHECK(t.summary_tokens == TokenList{"null", "pointer", "exception", "hive", "server"});
  CHECK(t.description_tokens.empty());
  issue.summary = "the and of in";
  CHECK(preprocess_issue(issue, config).summary_tokens.empty());
}

TEST_CASE("normalization resources") {
  const auto bundled = NormalizationConfig::bundled();
  CHECK(bundled.stopwords.size() > 100);
  CHECK_FALSE(bundled.lemmas.empty());
  testing::TempDir dir;
  CHECK_THROWS_AS(NormalizationConfig::from_files(dir / "missing.txt", ""), Error);
  const auto fallback = NormalizationConfig::from_files("", "");
  CHECK(fallback.stopwords == bundled.stopwords);
}
