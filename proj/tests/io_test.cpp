#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "pandora/errors.hpp"
#include "pandora/io.hpp"
#include "pandora/rng.hpp"

using namespace pandora;

namespace {

const std::filesystem::path kData = PANDORA_TEST_DATA;

std::string error_of(const std::string& text, PredictionFormat fmt) {
  std::istringstream in(text);
  try {
    read_predictions(in, fmt, "f");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Predictions, ReadJsonLines) {
  const auto recs = read_predictions_file(kData / "oct.jsonl");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].probs, (std::vector<double>{0.1, 0.1, 0.2, 0.6}));
  EXPECT_EQ(recs[0].label, 2u);
  EXPECT_EQ(recs[0].id, "worked");
}

TEST(Predictions, CsvMatchesJsonLines) {
  EXPECT_EQ(read_predictions_file(kData / "oct.csv"), read_predictions_file(kData / "oct.jsonl"));
}

TEST(Predictions, HeaderlessCsv) {
  std::istringstream in("1,0.25,0.75\n0,0.5,0.5\n");
  const auto recs = read_predictions(in, PredictionFormat::kCsv);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].label, 1u);
  EXPECT_EQ(recs[0].probs, (std::vector<double>{0.25, 0.75}));
  EXPECT_FALSE(recs[0].id.has_value());
}

TEST(Predictions, ErrorsCarryLineNumbers) {
  EXPECT_NE(error_of("{\"probs\":[0.5,0.5],\"label\":0}\n{\"probs\":[0.5,0.5],\"label\":\n", PredictionFormat::kJsonLines)
                .find("f:2:"),
            std::string::npos);
  EXPECT_NE(error_of("{\"probs\":[0.5,0.5],\"label\":0}\n\n{\"probs\":[0.5,0.6],\"label\":0}\n",
                     PredictionFormat::kJsonLines)
                .find("f:3:"),
            std::string::npos);
  EXPECT_NE(error_of("{\"probs\":[0.5,0.5],\"label\":2}\n", PredictionFormat::kJsonLines).find("f:1:"),
            std::string::npos);
  EXPECT_NE(error_of("{\"probs\":[0.5,0.5]}\n", PredictionFormat::kJsonLines).find("label"), std::string::npos);
  EXPECT_NE(error_of("label,p0,p1\n0,0.5,abc\n", PredictionFormat::kCsv).find("f:2:"), std::string::npos);
  EXPECT_NE(error_of("label,p0,p1\n0,0.5\n", PredictionFormat::kCsv).find("f:2:"), std::string::npos);
  EXPECT_NE(error_of("0,0.5,0.5\n-1,0.5,0.5\n", PredictionFormat::kCsv).find("f:2:"), std::string::npos);
}

TEST(Predictions, DatasetRejectsMixedK) {
  const auto recs = read_predictions_file(kData / "k_mismatch.jsonl");
  EXPECT_THROW(to_dataset(recs), ConfigError);
}

TEST(Predictions, RoundTripIsExact) {
  Rng rng(51);
  std::vector<PredictionRecord> recs;
  for (int i = 0; i < 200; ++i) {
    PredictionRecord r;
    r.probs = rng.dirichlet(5, 0.3);
    r.label = rng.below(5);
    if (i % 3 == 0) r.id = "case \"" + std::to_string(i) + "\"";
    recs.push_back(r);
  }
  std::ostringstream out;
  write_predictions(out, recs, PredictionFormat::kJsonLines);
  std::istringstream in(out.str());
  EXPECT_EQ(read_predictions(in, PredictionFormat::kJsonLines), recs);

  for (auto& r : recs) r.id = std::to_string(r.label * 1000 + r.probs.size());
  std::ostringstream csv;
  write_predictions(csv, recs, PredictionFormat::kCsv);
  std::istringstream csv_in(csv.str());
  EXPECT_EQ(read_predictions(csv_in, PredictionFormat::kCsv), recs);
}

TEST(CostConfig, ShippedDerma) {
  const CostConfig c = load_cost_config(shipped_config_dir() / "dermamnist.json");
  ASSERT_EQ(c.size(), 7u);
  const std::vector<double> expected = {75.15, 240.82, 106.01, 75.15, 383.77, 75.15, 75.15};
  for (std::size_t k = 0; k < 7; ++k) EXPECT_EQ(c.base_costs[k], expected[k]);
  EXPECT_EQ(c.class_names[4], "Melanoma");
  EXPECT_FALSE(c.test_characteristics.has_value());
}

TEST(CostConfig, ShippedOct) {
  const CostConfig c = load_cost_config(shipped_config_dir() / "octmnist.json");
  ASSERT_EQ(c.size(), 4u);
  const std::vector<double> expected = {343.91, 343.91, 186.71, 149.64};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(c.base_costs[k], expected[k]);
  EXPECT_EQ(c.class_names, (std::vector<std::string>{"CNV", "DME", "Drusen", "Normal"}));
}

TEST(CostConfig, TestCharacteristics) {
  const CostConfig c = load_cost_config(kData / "oct_perfect_tests.json");
  ASSERT_TRUE(c.test_characteristics.has_value());
  EXPECT_EQ(c.test_characteristics->sensitivity, std::vector<double>(4, 1.0));
}

TEST(CostConfig, Rejects) {
  EXPECT_THROW(parse_cost_config("[]"), ConfigError);
  EXPECT_THROW(parse_cost_config("{\"classes\":[{\"name\":\"a\",\"cost\":1}]}"), ConfigError);
  EXPECT_THROW(parse_cost_config("{\"classes\":[{\"name\":\"a\",\"cost\":1},{\"name\":\"a\",\"cost\":2}]}"),
               ConfigError);
  EXPECT_THROW(parse_cost_config("{\"classes\":[{\"name\":\"a\",\"cost\":0},{\"name\":\"b\",\"cost\":2}]}"),
               ConfigError);
  EXPECT_THROW(parse_cost_config("{\"classes\":[{\"name\":\"a\",\"cost\":1,\"sensitivity\":0.9},"
                                 "{\"name\":\"b\",\"cost\":2}]}"),
               ConfigError);
  EXPECT_THROW(parse_cost_config("{\"classes\":[{\"name\":\"a\",\"cost\":1,\"sensitivity\":0},"
                                 "{\"name\":\"b\",\"cost\":2,\"sensitivity\":1}]}"),
               ConfigError);
  EXPECT_THROW(load_cost_config(kData / "missing.json"), ConfigError);
}

TEST(ZooSpec, ParseDefaultsAndOverrides) {
  const ModelZooSpec d = load_zoo_spec(shipped_config_dir() / "zoo_default.json");
  EXPECT_EQ(d.n_models, 20u);
  EXPECT_EQ(d.num_classes, 7u);
  EXPECT_EQ(d.n_instances, 2000u);
  EXPECT_EQ(d.seed, 42u);
  const ModelZooSpec s = parse_zoo_spec("{\"n_models\": 12, \"seed\": 3}");
  EXPECT_EQ(s.n_models, 12u);
  EXPECT_EQ(s.n_instances, 2000u);
  EXPECT_THROW(parse_zoo_spec("{\"n_model\": 12}"), ConfigError);
  EXPECT_THROW(parse_zoo_spec("{\"n_models\": 3}"), ConfigError);
  EXPECT_THROW(parse_zoo_spec("{\"n_models\": \"x\"}"), ConfigError);
}

TEST(ZooDirectory, Loads) {
  const ModelZoo zoo = load_zoo_from_directory(kData / "zoo_dir");
  ASSERT_EQ(zoo.models.size(), 4u);
  EXPECT_EQ(zoo.models[0].name, "model_0");
  EXPECT_EQ(zoo.labels.size(), 120u);
  EXPECT_TRUE(zoo.truth.empty());
  EXPECT_THROW(load_zoo_from_directory(kData / "nope"), ConfigError);
}
