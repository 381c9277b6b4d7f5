#include "permmap/cli/config.hpp"

#include <cmath>
#include <fstream>

#include "permmap/errors.hpp"

namespace permmap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(LayerMode mode) noexcept {
  switch (mode) {
    case LayerMode::geo: return "geo";
    case LayerMode::two_layer: return "two-layer";
    case LayerMode::three_layer: return "three-layer";
  }
  return "?";
}

std::string_view to_string(BorderModel model) noexcept {
  return model == BorderModel::linear ? "linear" : "probability";
}

std::vector<GroupSplitRule> RunConfig::rules() const {
  std::vector<GroupSplitRule> out;
  for (const auto& r : split_rules) {
    out.push_back(GroupSplitRule::parse(r.group, r.attribute, r.comparator, r.threshold, r.suffix));
  }
  return out;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

namespace {

// Reads typed fields and reports the dotted key on failure.
class Fields {
 public:
  Fields(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) throw ConfigError(name("") + " must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

  template <class T>
  T get(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    try {
      return obj_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(name(key) + " has the wrong type");
    }
  }

  const json& at(const std::string& key) const { return obj_.at(key); }

  void reject_unknown(std::initializer_list<std::string_view> known) const {
    for (const auto& [key, value] : obj_.items()) {
      bool ok = false;
      for (auto k : known) ok = ok || key == k;
      if (!ok) throw ConfigError("unknown config key '" + name(key) + "'");
    }
  }

  std::string name(const std::string& key) const {
    if (prefix_.empty()) return key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

 private:
  const json& obj_;
  std::string prefix_;
};

fs::path resolve(const std::string& text, const fs::path& base) {
  if (text.empty()) return {};
  fs::path p(text);
  if (p.is_relative()) p = base / p;
  return p.lexically_normal();
}

double finite(double v, const std::string& key) {
  if (!std::isfinite(v)) throw ConfigError(key + " must be finite");
  return v;
}

}  // namespace

RunConfig parse_config(const json& doc, const fs::path& base_dir) {
  Fields top(doc, "");
  top.reject_unknown({"events", "adjacency", "output", "columns", "categories", "rounding", "layers", "border",
                      "multiplier", "k", "groups", "split_rules", "sweep", "solver", "export_matrix", "manifest"});
  const fs::path base = fs::absolute(base_dir);

  RunConfig c;
  c.events = resolve(top.get<std::string>("events", ""), base);
  c.adjacency = resolve(top.get<std::string>("adjacency", ""), base);
  c.output = resolve(top.get<std::string>("output", ""), base);

  if (top.has("columns")) {
    Fields cols(top.at("columns"), "columns");
    cols.reject_unknown({"date", "actor", "latitude", "longitude", "country", "admin1", "event_type", "fatalities"});
    c.columns.date = cols.get("date", c.columns.date);
    c.columns.actor = cols.get("actor", c.columns.actor);
    c.columns.latitude = cols.get("latitude", c.columns.latitude);
    c.columns.longitude = cols.get("longitude", c.columns.longitude);
    c.columns.country = cols.get("country", c.columns.country);
    c.columns.admin1 = cols.get("admin1", c.columns.admin1);
    c.columns.event_type = cols.get("event_type", c.columns.event_type);
    c.columns.fatalities = cols.get("fatalities", c.columns.fatalities);
  }
  if (top.has("categories")) {
    const auto list = top.get<std::vector<std::string>>("categories", {});
    if (list.empty()) throw ConfigError("categories must not be empty");
    c.categories = std::set<std::string>(list.begin(), list.end());
  }
  c.rounding = top.get("rounding", c.rounding);

  const std::string layers = top.get<std::string>("layers", "geo");
  if (layers == "geo") {
    c.layers = LayerMode::geo;
  } else if (layers == "two-layer") {
    c.layers = LayerMode::two_layer;
  } else if (layers == "three-layer") {
    c.layers = LayerMode::three_layer;
  } else {
    throw ConfigError("layers must be one of geo, two-layer, three-layer (got '" + layers + "')");
  }

  if (top.has("border")) {
    Fields b(top.at("border"), "border");
    b.reject_unknown({"model", "cost_km", "p"});
    const std::string model = b.get<std::string>("model", "");
    if (model == "linear") {
      if (b.has("p")) throw ConfigError("border: a linear model takes cost_km, not p");
      c.border_model = BorderModel::linear;
      c.cost_km = finite(b.get("cost_km", c.cost_km), "border.cost_km");
    } else if (model == "probability") {
      if (b.has("cost_km")) throw ConfigError("border: a probability model takes p, not cost_km");
      c.border_model = BorderModel::probability;
      c.probability = finite(b.get("p", c.probability), "border.p");
    } else {
      throw ConfigError("border.model must be linear or probability");
    }
  } else {
    c.border_model = c.layers == LayerMode::geo ? BorderModel::linear : BorderModel::probability;
  }

  c.multiplier = finite(top.get("multiplier", c.multiplier), "multiplier");
  c.k = top.get("k", c.k);
  c.groups = top.get<std::vector<std::string>>("groups", {});

  if (top.has("split_rules")) {
    const json& rules = top.at("split_rules");
    if (!rules.is_array()) throw ConfigError("split_rules must be an array");
    for (std::size_t i = 0; i < rules.size(); ++i) {
      Fields r(rules[i], "split_rules[" + std::to_string(i) + "]");
      r.reject_unknown({"group", "attribute", "comparator", "threshold", "suffix"});
      SplitRuleConfig rule;
      rule.group = r.get<std::string>("group", "");
      rule.attribute = r.get<std::string>("attribute", "");
      rule.comparator = r.get<std::string>("comparator", "");
      if (!r.has("threshold")) throw ConfigError(r.name("threshold") + " is required");
      rule.threshold = finite(r.get("threshold", 0.0), r.name("threshold"));
      rule.suffix = r.get<std::string>("suffix", "");
      c.split_rules.push_back(std::move(rule));
    }
    (void)c.rules();  // surfaces malformed rules now
  }

  if (top.has("sweep")) {
    Fields s(top.at("sweep"), "sweep");
    s.reject_unknown({"costs", "probabilities"});
    c.sweep_costs = s.get<std::vector<double>>("costs", {});
    c.sweep_probabilities = s.get<std::vector<double>>("probabilities", {});
  }

  if (top.has("solver")) {
    Fields s(top.at("solver"), "solver");
    s.reject_unknown({"dense_limit", "tolerance", "max_iterations", "seed"});
    c.solver.dense_limit = s.get("dense_limit", c.solver.dense_limit);
    c.solver.tolerance = finite(s.get("tolerance", c.solver.tolerance), "solver.tolerance");
    c.solver.max_iterations = s.get("max_iterations", c.solver.max_iterations);
    c.solver.seed = s.get("seed", c.solver.seed);
  }
  c.export_matrix = top.get("export_matrix", c.export_matrix);
  return c;
}

RunConfig load_config(const fs::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config " + path.string() + " is not valid JSON");
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc, fs::absolute(path).parent_path());
}

void validate(const RunConfig& c, Command command) {
  if (c.events.empty()) throw ConfigError("events path is required");
  if (c.output.empty()) throw ConfigError("output directory is required (config 'output' or --out)");
  if (c.rounding < 0 || c.rounding > 6) throw ConfigError("rounding must be between 0 and 6");
  if (command == Command::summarize) return;

  if (c.k < 1 || c.k > 3) throw ConfigError("k must be 1, 2 or 3");
  if (!(c.multiplier > 1.0)) throw ConfigError("multiplier must exceed 1");
  if (c.layers == LayerMode::geo && c.border_model != BorderModel::linear) {
    throw ConfigError("geo runs use the linear border model");
  }
  if (c.layers != LayerMode::geo && c.border_model != BorderModel::probability) {
    throw ConfigError(std::string(to_string(c.layers)) + " runs use the probability border model");
  }

  auto check_cost = [](double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("border cost must be a finite value >= 0");
  };
  auto check_p = [](double v) {
    if (!(v > 0.0 && v <= 1.0)) throw ConfigError("border probability must lie in (0, 1]");
  };

  bool needs_adjacency = c.layers != LayerMode::geo;
  if (command == Command::sweep) {
    if (c.layers == LayerMode::geo) {
      if (c.sweep_costs.empty()) throw ConfigError("sweep.costs must be non-empty for a geo sweep");
      for (double v : c.sweep_costs) {
        check_cost(v);
        needs_adjacency = needs_adjacency || v != 0.0;
      }
    } else {
      if (c.sweep_probabilities.empty()) {
        throw ConfigError("sweep.probabilities must be non-empty for a multilayer sweep");
      }
      for (double v : c.sweep_probabilities) check_p(v);
    }
  } else if (c.layers == LayerMode::geo) {
    check_cost(c.cost_km);
    needs_adjacency = c.cost_km != 0.0;
  } else {
    check_p(c.probability);
  }
  if (needs_adjacency && c.adjacency.empty()) throw ConfigError("adjacency path is required for border models");

  if (c.layers == LayerMode::three_layer && c.groups.empty()) {
    throw ConfigError("three-layer runs need a non-empty groups list");
  }
  if (c.solver.dense_limit < 1) throw ConfigError("solver.dense_limit must be positive");
  if (!(c.solver.tolerance > 0.0)) throw ConfigError("solver.tolerance must be positive");
  if (c.solver.max_iterations < 1) throw ConfigError("solver.max_iterations must be positive");
}

json to_json(const RunConfig& c) {
  json doc;
  doc["events"] = c.events.string();
  if (!c.adjacency.empty()) doc["adjacency"] = c.adjacency.string();
  doc["output"] = c.output.string();
  doc["columns"] = {{"date", c.columns.date},         {"actor", c.columns.actor},
                    {"latitude", c.columns.latitude}, {"longitude", c.columns.longitude},
                    {"country", c.columns.country},   {"admin1", c.columns.admin1},
                    {"event_type", c.columns.event_type}, {"fatalities", c.columns.fatalities}};
  doc["categories"] = std::vector<std::string>(c.categories.begin(), c.categories.end());
  doc["rounding"] = c.rounding;
  doc["layers"] = std::string(to_string(c.layers));
  if (c.border_model == BorderModel::linear) {
    doc["border"] = {{"model", "linear"}, {"cost_km", c.cost_km}};
  } else {
    doc["border"] = {{"model", "probability"}, {"p", c.probability}};
  }
  doc["multiplier"] = c.multiplier;
  doc["k"] = c.k;
  doc["groups"] = c.groups;
  doc["split_rules"] = json::array();
  for (const auto& r : c.split_rules) {
    doc["split_rules"].push_back({{"group", r.group},
                                  {"attribute", r.attribute},
                                  {"comparator", r.comparator},
                                  {"threshold", r.threshold},
                                  {"suffix", r.suffix}});
  }
  doc["sweep"] = {{"costs", c.sweep_costs}, {"probabilities", c.sweep_probabilities}};
  doc["solver"] = {{"dense_limit", c.solver.dense_limit},
                   {"tolerance", c.solver.tolerance},
                   {"max_iterations", c.solver.max_iterations},
                   {"seed", c.solver.seed}};
  doc["export_matrix"] = c.export_matrix;
  return doc;
}

}  // namespace permmap::cli
