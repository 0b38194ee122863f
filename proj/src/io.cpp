#include "pandora/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "pandora/errors.hpp"

namespace pandora {
namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& source, std::size_t line, const std::string& what) {
  throw ConfigError(fmt::format("{}:{}: {}", source, line, what));
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, const std::string& source, std::size_t line) {
  if (cell.empty()) fail_at(source, line, "empty numeric field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE) fail_at(source, line, "not a number: '" + cell + "'");
  return v;
}

std::size_t parse_label(const std::string& cell, const std::string& source, std::size_t line) {
  if (cell.empty() || cell.find_first_not_of("0123456789") != std::string::npos) {
    fail_at(source, line, "label must be a nonnegative integer, got '" + cell + "'");
  }
  return static_cast<std::size_t>(std::stoull(cell));
}

void check_record(const PredictionRecord& rec, const std::string& source, std::size_t line) {
  try {
    LabeledForecast(Forecast(rec.probs), rec.label);
  } catch (const DomainError& e) {
    fail_at(source, line, e.what());
  }
}

PredictionRecord parse_json_record(const std::string& text, const std::string& source, std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail_at(source, line, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail_at(source, line, "record must be a JSON object");
  if (!j.contains("probs") || !j["probs"].is_array()) fail_at(source, line, "missing 'probs' array");
  if (!j.contains("label") || !j["label"].is_number_integer() || j["label"].get<long long>() < 0) {
    fail_at(source, line, "missing or invalid 'label'");
  }
  PredictionRecord rec;
  for (const auto& p : j["probs"]) {
    if (!p.is_number()) fail_at(source, line, "'probs' must contain numbers");
    rec.probs.push_back(p.get<double>());
  }
  rec.label = j["label"].get<std::size_t>();
  if (j.contains("id")) {
    if (j["id"].is_string()) {
      rec.id = j["id"].get<std::string>();
    } else if (j["id"].is_number_integer()) {
      rec.id = std::to_string(j["id"].get<long long>());
    } else if (!j["id"].is_null()) {
      fail_at(source, line, "'id' must be a string");
    }
  }
  return rec;
}

std::string g17(double v) { return fmt::format("{:.17g}", v); }

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

PredictionFormat format_for_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? PredictionFormat::kCsv : PredictionFormat::kJsonLines;
}

std::vector<PredictionRecord> read_predictions(std::istream& in, PredictionFormat format, const std::string& source) {
  std::vector<PredictionRecord> records;
  std::string raw;
  std::size_t line = 0;
  // CSV column layout; -1 marks an absent column.
  long label_col = 0;
  long id_col = -1;
  std::vector<std::size_t> prob_cols;
  bool layout_known = false;

  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (format == PredictionFormat::kJsonLines) {
      PredictionRecord rec = parse_json_record(text, source, line);
      check_record(rec, source, line);
      records.push_back(std::move(rec));
      continue;
    }

    const std::vector<std::string> cells = split_csv(text);
    if (!layout_known) {
      layout_known = true;
      const bool header = std::any_of(cells.begin(), cells.end(), [](const std::string& c) { return c == "label"; });
      if (header) {
        label_col = -1;
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (cells[c] == "label") {
            label_col = static_cast<long>(c);
          } else if (cells[c] == "id") {
            id_col = static_cast<long>(c);
          } else if (!cells[c].empty() && cells[c][0] == 'p') {
            prob_cols.push_back(c);
          } else {
            fail_at(source, line, "unknown CSV column '" + cells[c] + "'");
          }
        }
        continue;
      }
      for (std::size_t c = 1; c < cells.size(); ++c) prob_cols.push_back(c);
    }
    const std::size_t expected = prob_cols.size() + 1 + (id_col >= 0 ? 1 : 0);
    if (cells.size() != expected) {
      fail_at(source, line, fmt::format("expected {} columns, found {}", expected, cells.size()));
    }
    PredictionRecord rec;
    rec.label = parse_label(cells[static_cast<std::size_t>(label_col)], source, line);
    if (id_col >= 0) rec.id = cells[static_cast<std::size_t>(id_col)];
    for (std::size_t c : prob_cols) rec.probs.push_back(parse_number(cells[c], source, line));
    check_record(rec, source, line);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<PredictionRecord> read_predictions_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_predictions(in, format_for_path(path), path.string());
}

void write_predictions(std::ostream& out, std::span<const PredictionRecord> records, PredictionFormat format) {
  if (format == PredictionFormat::kJsonLines) {
    for (const auto& rec : records) {
      std::vector<std::string> probs;
      for (double p : rec.probs) probs.push_back(g17(p));
      out << "{\"probs\":[" << fmt::format("{}", fmt::join(probs, ",")) << "],\"label\":" << rec.label;
      if (rec.id) out << ",\"id\":" << json(*rec.id).dump();
      out << "}\n";
    }
    return;
  }
  if (records.empty()) return;
  const bool ids = std::any_of(records.begin(), records.end(), [](const auto& r) { return r.id.has_value(); });
  if (ids) out << "id,";
  out << "label";
  for (std::size_t k = 0; k < records.front().probs.size(); ++k) out << ",p" << k;
  out << "\n";
  for (const auto& rec : records) {
    if (ids) out << rec.id.value_or("") << ",";
    out << rec.label;
    for (double p : rec.probs) out << "," << g17(p);
    out << "\n";
  }
}

std::vector<LabeledForecast> to_dataset(std::span<const PredictionRecord> records, const std::string& source) {
  std::vector<LabeledForecast> out;
  out.reserve(records.size());
  for (std::size_t n = 0; n < records.size(); ++n) {
    if (records[n].probs.size() != records.front().probs.size()) {
      throw ConfigError(fmt::format("{}record {}: K={} differs from K={} of the first record", source.empty() ? "" : source + ": ", n + 1,
                                    records[n].probs.size(), records.front().probs.size()));
    }
    out.emplace_back(Forecast(records[n].probs), records[n].label);
  }
  return out;
}

CostConfig parse_cost_config(const std::string& text, const std::string& source) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError(source + ": cost config must be a JSON object");
  if (!j.contains("classes") || !j["classes"].is_array() || j["classes"].size() < 2) {
    throw ConfigError(source + ": cost config needs a 'classes' array with at least 2 entries");
  }
  std::vector<std::string> names;
  std::vector<double> costs;
  TestCharacteristics tc;
  std::size_t with_tc = 0;
  std::set<std::string> seen;
  for (const auto& c : j["classes"]) {
    if (!c.is_object() || !c.contains("name") || !c["name"].is_string()) {
      throw ConfigError(source + ": every class needs a string 'name'");
    }
    const std::string name = c["name"].get<std::string>();
    if (!seen.insert(name).second) throw ConfigError(source + ": duplicate class name '" + name + "'");
    if (!c.contains("cost") || !c["cost"].is_number() || !(c["cost"].get<double>() > 0.0)) {
      throw ConfigError(source + ": class '" + name + "' needs a positive 'cost'");
    }
    names.push_back(name);
    costs.push_back(c["cost"].get<double>());
    const bool has = c.contains("sensitivity") || c.contains("false_positive_rate") || c.contains("confirm_cost");
    if (has) {
      ++with_tc;
      tc.sensitivity.push_back(c.value("sensitivity", 1.0));
      tc.false_positive_rate.push_back(c.value("false_positive_rate", 0.0));
      tc.confirm_cost.push_back(c.value("confirm_cost", 0.0));
    }
  }
  if (with_tc != 0 && with_tc != names.size()) {
    throw ConfigError(source + ": test characteristics must be given for every class or for none");
  }
  CostConfig cfg{j.value("name", std::string()), j.value("currency", std::string()), std::move(names),
                 BaseCosts(std::move(costs)), std::nullopt};
  if (with_tc != 0) {
    try {
      tc.validate();
    } catch (const DomainError& e) {
      throw ConfigError(source + ": " + e.what());
    }
    cfg.test_characteristics = std::move(tc);
  }
  return cfg;
}

CostConfig load_cost_config(const std::filesystem::path& path) { return parse_cost_config(slurp(path), path.string()); }

ModelZooSpec parse_zoo_spec(const std::string& text, const std::string& source) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError(source + ": zoo config must be a JSON object");
  static const std::set<std::string> known = {"n_models", "num_classes", "n_instances", "dirichlet_concentration",
                                              "max_noise_scale", "max_log_temperature", "seed"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError(source + ": unknown zoo config key '" + key + "'");
  }
  ModelZooSpec spec;
  try {
    spec.n_models = j.value("n_models", spec.n_models);
    spec.num_classes = j.value("num_classes", spec.num_classes);
    spec.n_instances = j.value("n_instances", spec.n_instances);
    spec.dirichlet_concentration = j.value("dirichlet_concentration", spec.dirichlet_concentration);
    spec.max_noise_scale = j.value("max_noise_scale", spec.max_noise_scale);
    spec.max_log_temperature = j.value("max_log_temperature", spec.max_log_temperature);
    spec.seed = j.value("seed", spec.seed);
  } catch (const json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  spec.validate();
  return spec;
}

ModelZooSpec load_zoo_spec(const std::filesystem::path& path) { return parse_zoo_spec(slurp(path), path.string()); }

ModelZoo load_zoo_from_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto ext = entry.path().extension().string();
    if (entry.is_regular_file() && (ext == ".jsonl" || ext == ".csv")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.size() < 2) throw ConfigError(dir.string() + ": need at least 2 model prediction files");

  ModelZoo zoo;
  for (const auto& path : files) {
    const auto records = read_predictions_file(path);
    if (records.empty()) throw ConfigError(path.string() + ": no records");
    std::vector<std::size_t> labels;
    for (const auto& r : records) labels.push_back(r.label);
    if (zoo.models.empty()) {
      zoo.labels = labels;
    } else if (labels != zoo.labels) {
      throw ConfigError(path.string() + ": labels differ from " + files.front().string());
    }
    ModelPredictions model;
    model.name = path.stem().string();
    for (auto& lf : to_dataset(records, path.string())) model.forecasts.push_back(std::move(lf.forecast));
    if (!zoo.models.empty() && model.forecasts.front().size() != zoo.models.front().forecasts.front().size()) {
      throw ConfigError(path.string() + ": K differs from the other models");
    }
    zoo.models.push_back(std::move(model));
  }
  return zoo;
}

std::filesystem::path shipped_config_dir() {
  if (const char* env = std::getenv("PANDORA_CONFIG_DIR")) return env;
  return PANDORA_CONFIG_DIR;
}

}  // namespace pandora
