#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "permmap/geo.hpp"
#include "permmap/ingest.hpp"
#include "permmap/sequence.hpp"
#include "permmap/spectral.hpp"

namespace permmap::cli {

enum class LayerMode { geo, two_layer, three_layer };
enum class BorderModel { linear, probability };

std::string_view to_string(LayerMode mode) noexcept;
std::string_view to_string(BorderModel model) noexcept;

struct SplitRuleConfig {
  std::string group;
  std::string attribute;
  std::string comparator;
  double threshold = 0.0;
  std::string suffix;
};

struct RunConfig {
  std::filesystem::path events;     // absolute after loading
  std::filesystem::path adjacency;  // may be empty for geo runs with zero cost
  std::filesystem::path output;

  ColumnMap columns;
  std::set<std::string> categories = default_violent_categories();
  int rounding = kDefaultRounding;

  LayerMode layers = LayerMode::geo;
  BorderModel border_model = BorderModel::linear;
  double cost_km = kDefaultBorderCostKm;
  double probability = kDefaultBorderProbability;
  double multiplier = kDefaultInversionMultiplier;
  int k = 2;

  std::vector<std::string> groups;
  std::vector<SplitRuleConfig> split_rules;

  std::vector<double> sweep_costs;
  std::vector<double> sweep_probabilities;

  SolverOptions solver;
  bool export_matrix = false;

  /// Rules in library form; throws ConfigError if one is malformed.
  std::vector<GroupSplitRule> rules() const;
};

/// Applies `key=value` overrides to a parsed JSON document. Keys are dotted
/// paths (`border.cost_km`); the value is read as JSON when it parses and as
/// a plain string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Builds a config from JSON. Relative paths resolve against `base_dir`.
/// Throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

enum class Command { summarize, embed, sweep };

/// Cross-field checks that depend on the command being run.
void validate(const RunConfig& config, Command command);

/// The config as JSON with absolute paths; parse_config reads it back unchanged.
nlohmann::json to_json(const RunConfig& config);

}  // namespace permmap::cli
