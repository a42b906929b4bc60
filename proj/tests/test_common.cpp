#include <doctest.h>

#include <cmath>
#include <random>

#include "texturalyze/common.hpp"
#include "texturalyze/csvio.hpp"
#include "texturalyze/sha256.hpp"

using namespace texturalyze;

TEST_CASE("pairwise_sum matches long-double accumulation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> values(1000);
  long double exact = 0.0;
  for (auto& v : values) {
    v = dist(rng);
    exact += v;
  }
  CHECK(std::fabs(pairwise_sum(values) - static_cast<double>(exact)) < 1e-12);
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    double v = dist(rng) * std::pow(10.0, (i % 13) - 6);
    double back;
    REQUIRE(csvio::parse_double(format_double(v), back));
    CHECK(back == v);
  }
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("normalize_attribute lowercases and collapses whitespace") {
  CHECK(normalize_attribute("  Holds   Together ") == "holds together");
  CHECK(normalize_attribute("Crumbly/Grainy") == "crumbly/grainy");
  CHECK(normalize_attribute("\tchewy\n") == "chewy");
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  // 56 bytes forces the two-block padding path.
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("error categories drive the exit-code contract") {
  CHECK(category_of(ErrorCode::NonMonotonicTime) == ErrorCategory::Input);
  CHECK(category_of(ErrorCode::ConfigInvalid) == ErrorCategory::Config);
  CHECK(category_of(ErrorCode::ZeroVariance) == ErrorCategory::Analysis);
  Error e(ErrorCode::OutOfRangeLikert, "bad", "survey.csv", 4, "overall_liking");
  CHECK(e.row() == 4);
  CHECK(e.column() == "overall_liking");
  CHECK(std::string(e.what()).find("survey.csv") != std::string::npos);
}

TEST_CASE("flat key-value parser") {
  auto kv = csvio::parse_flat_kv("a = 1\n# comment\n B=two words \n", "x");
  REQUIRE(kv.size() == 2);
  CHECK(kv[0].first == "a");
  CHECK(kv[0].second == "1");
  CHECK(kv[1].first == "b");
  CHECK(kv[1].second == "two words");
  CHECK_THROWS_AS(csvio::parse_flat_kv("no equals sign", "x"), Error);
}
