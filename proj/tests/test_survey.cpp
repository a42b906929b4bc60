#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "texturalyze/common.hpp"
#include "texturalyze/survey.hpp"
#include "texturalyze/synth.hpp"

using namespace texturalyze;

namespace {

StudyConfig small_config() {
  StudyConfig cfg = StudyConfig::defaults();
  cfg.cata_vocabulary = {"firm", "mushy", "springy"};
  return cfg;
}

SurveyRecord make_record(const std::string& pid, const std::string& bid,
                         int liking, std::vector<std::string> cata) {
  SurveyRecord rec;
  rec.participant_id = pid;
  rec.burger_id = bid;
  rec.overall_liking = liking;
  rec.flavor_liking = liking;
  rec.texture_liking = liking;
  rec.attribute_ratings = {3, 3, 3, 3, 3};
  std::sort(cata.begin(), cata.end());
  rec.cata_selections = std::move(cata);
  return rec;
}

}  // namespace

TEST_CASE("contingency table") {
  StudyConfig cfg = small_config();

  SUBCASE("single live cell survives pruning") {
    std::vector<SurveyRecord> records = {
        make_record("p1", "a", 4, {"firm"}), make_record("p1", "b", 4, {}),
        make_record("p2", "a", 4, {"firm"}), make_record("p2", "b", 4, {}),
        make_record("p3", "a", 4, {"firm"}), make_record("p3", "b", 4, {})};
    auto table = survey::build_contingency(records, cfg);
    REQUIRE(table.rows() == 1);
    REQUIRE(table.cols() == 1);
    CHECK(table.row_labels[0] == "a");
    CHECK(table.col_labels[0] == "firm");
    CHECK(table.at(0, 0) == 3);
    CHECK(table.pruned_rows == std::vector<std::string>{"b"});
    CHECK(table.pruned_cols == std::vector<std::string>{"mushy", "springy"});
  }

  SUBCASE("no selections at all is an EmptyTable") {
    std::vector<SurveyRecord> records = {make_record("p1", "a", 4, {}),
                                         make_record("p2", "b", 3, {})};
    CHECK_THROWS_AS(survey::build_contingency(records, cfg), Error);
    try {
      survey::build_contingency(records, cfg);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyTable);
    }
  }

  SUBCASE("randomized survey matches a brute-force recount") {
    synth::SyntheticSurveySpec spec;
    spec.participants = 23;
    spec.burgers = 5;
    spec.seed = 99;
    spec.cata_vocabulary = cfg.cata_vocabulary;
    spec.cata_probabilities.assign(5 * 3, 0.0);
    for (size_t i = 0; i < spec.cata_probabilities.size(); ++i)
      spec.cata_probabilities[i] = 0.1 + 0.05 * static_cast<double>(i % 7);
    auto [records, truth] = synth::gen_survey(spec);
    auto table = survey::build_contingency(records, cfg);

    // Independent tally straight off the raw records.
    std::map<std::pair<std::string, std::string>, long long> tally;
    for (const auto& rec : records)
      for (const auto& attr : rec.cata_selections)
        ++tally[{rec.burger_id, attr}];
    long long total = 0;
    for (size_t i = 0; i < table.rows(); ++i)
      for (size_t j = 0; j < table.cols(); ++j) {
        auto it = tally.find({table.row_labels[i], table.col_labels[j]});
        long long expected = it == tally.end() ? 0 : it->second;
        CHECK(table.at(i, j) == expected);
        total += table.at(i, j);
      }
    CHECK(table.total == total);
    // Each count is bounded by the number of participants.
    for (long long v : table.counts)
      CHECK(v <= static_cast<long long>(spec.participants));
  }

  SUBCASE("invariant to record order and participant relabeling") {
    synth::SyntheticSurveySpec spec;
    spec.participants = 11;
    spec.burgers = 4;
    spec.seed = 5;
    spec.cata_vocabulary = cfg.cata_vocabulary;
    spec.cata_probabilities.assign(4 * 3, 0.5);
    auto [records, truth] = synth::gen_survey(spec);
    auto base = survey::build_contingency(records, cfg);

    auto shuffled = records;
    std::mt19937_64 rng(3);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto again = survey::build_contingency(shuffled, cfg);
    CHECK(again.counts == base.counts);
    CHECK(again.row_labels == base.row_labels);

    auto relabeled = records;
    for (auto& rec : relabeled) rec.participant_id = "x" + rec.participant_id;
    auto third = survey::build_contingency(relabeled, cfg);
    CHECK(third.counts == base.counts);
  }
}

TEST_CASE("likert summaries") {
  StudyConfig cfg = small_config();

  SUBCASE("constant ratings") {
    std::vector<SurveyRecord> records = {make_record("p1", "a", 4, {}),
                                         make_record("p2", "a", 4, {}),
                                         make_record("p3", "a", 4, {})};
    auto summary = survey::likert_summary(records, "overall_liking", cfg);
    REQUIRE(summary.rows.size() == 1);
    CHECK(summary.rows[0].mean == 4.0);
    CHECK(summary.rows[0].sd == 0.0);
    CHECK(summary.rows[0].count == 3);
  }

  SUBCASE("two-point sample sd") {
    std::vector<SurveyRecord> records = {make_record("p1", "a", 1, {}),
                                         make_record("p2", "a", 7, {})};
    auto summary = survey::likert_summary(records, "overall_liking", cfg);
    CHECK(summary.rows[0].mean == 4.0);
    CHECK(summary.rows[0].sd == doctest::Approx(4.242640687119285).epsilon(1e-12));
  }

  SUBCASE("unknown question") {
    std::vector<SurveyRecord> records = {make_record("p1", "a", 4, {})};
    CHECK_THROWS_AS(survey::likert_summary(records, "saltiness", cfg), Error);
  }

  SUBCASE("attribute questions read the ratings vector") {
    auto rec = make_record("p1", "a", 4, {});
    rec.attribute_ratings = {1, 2, 3, 4, 5};
    auto summary = survey::likert_summary({&rec, 1}, "fattiness", cfg);
    CHECK(summary.rows[0].mean == 3.0);
  }
}

TEST_CASE("z-scoring") {
  StudyConfig cfg = small_config();

  auto matrix_of = [&](std::vector<double> values) {
    survey::RatingsMatrix m;
    m.question = "overall_liking";
    for (size_t i = 0; i < values.size(); ++i)
      m.observations.push_back({"p" + std::to_string(i), "a", values[i]});
    return m;
  };

  SUBCASE("constant ratings have no z-score") {
    CHECK_THROWS_AS(survey::zscore(matrix_of({4, 4, 4})), Error);
  }

  SUBCASE("symmetric three-point case") {
    auto z = survey::zscore(matrix_of({1, 2, 3}));
    REQUIRE(z.observations.size() == 3);
    CHECK(z.observations[0].value == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(z.observations[1].value == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(z.observations[2].value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(z.transform->mean == 2.0);
    CHECK(z.transform->sd == 1.0);
  }

  SUBCASE("z-scored output has mean 0 and sample sd 1") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> dist(1, 7);
    std::vector<double> values(101 * 6);
    for (auto& v : values) v = dist(rng);
    auto z = survey::zscore(matrix_of(values));
    std::vector<double> zv;
    for (const auto& o : z.observations) zv.push_back(o.value);
    CHECK(std::fabs(mean(zv)) < 1e-12);
    CHECK(std::fabs(sample_sd(zv) - 1.0) < 1e-12);
  }

  SUBCASE("inverse undoes the transform") {
    auto raw = matrix_of({3, 5, 1, 7, 2, 2, 6});
    auto z = survey::zscore(raw);
    auto back = survey::zscore_inverse(z);
    for (size_t i = 0; i < raw.observations.size(); ++i)
      CHECK(std::fabs(back.observations[i].value -
                      raw.observations[i].value) < 1e-12);
  }
}
