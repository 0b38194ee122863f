#pragma once

// File formats: prediction records (JSON lines or CSV), clinical cost
// configurations and synthetic zoo configurations. Every reader reports the
// offending line number through ConfigError.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pandora/forecast.hpp"
#include "pandora/ranking.hpp"
#include "pandora/scoring.hpp"
#include "pandora/search.hpp"

namespace pandora {

struct PredictionRecord {
  std::vector<double> probs;
  std::size_t label = 0;
  std::optional<std::string> id;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

enum class PredictionFormat { kJsonLines, kCsv };

// ".csv" selects CSV; anything else is read as JSON lines.
PredictionFormat format_for_path(const std::filesystem::path& path);

// JSON lines: {"probs": [...], "label": k, "id": "..."} per line, blank lines
// skipped. CSV: optional header naming the columns (label, id, p0, p1, ...);
// without a header each row is label, p0, p1, ...
std::vector<PredictionRecord> read_predictions(std::istream& in, PredictionFormat format,
                                               const std::string& source = "<stream>");
std::vector<PredictionRecord> read_predictions_file(const std::filesystem::path& path);

// Probabilities are written with 17 significant digits so reading the output
// back reproduces every record exactly.
void write_predictions(std::ostream& out, std::span<const PredictionRecord> records, PredictionFormat format);

// Checks that every record has the same K and converts to forecasts.
std::vector<LabeledForecast> to_dataset(std::span<const PredictionRecord> records, const std::string& source = "");

struct CostConfig {
  std::string name;
  std::string currency;
  std::vector<std::string> class_names;
  BaseCosts base_costs;
  std::optional<TestCharacteristics> test_characteristics;

  std::size_t size() const { return class_names.size(); }
};

// {"name", "currency", "classes": [{"name", "cost", "sensitivity"?,
//  "false_positive_rate"?, "confirm_cost"?}, ...]}. Characteristics are all
// or nothing across classes.
CostConfig parse_cost_config(const std::string& text, const std::string& source = "<string>");
CostConfig load_cost_config(const std::filesystem::path& path);

// Keys of ModelZooSpec; absent keys keep their defaults.
ModelZooSpec parse_zoo_spec(const std::string& text, const std::string& source = "<string>");
ModelZooSpec load_zoo_spec(const std::filesystem::path& path);

// One prediction file per model; file stems become model names. All files
// must agree on labels and K.
ModelZoo load_zoo_from_directory(const std::filesystem::path& dir);

// Directory holding the shipped cost configurations.
std::filesystem::path shipped_config_dir();

}  // namespace pandora
