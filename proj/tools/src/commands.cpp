#include "permmap/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "permmap/csv.hpp"
#include "permmap/errors.hpp"
#include "permmap/format.hpp"
#include "permmap/graphs.hpp"
#include "permmap/layers.hpp"
#include "permmap/matrix_io.hpp"

#ifndef PERMMAP_VERSION
#define PERMMAP_VERSION "unknown"
#endif

namespace permmap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Error tagged with the pipeline stage it came from.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::exception& cause, bool usage)
      : std::runtime_error(stage + ": " + cause.what()), usage_(usage) {}
  bool usage() const noexcept { return usage_; }

 private:
  bool usage_;
};

template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const ConfigError& e) {
    throw StageError(name, e, true);
  } catch (const std::exception& e) {
    throw StageError(name, e, false);
  }
}

// Writes next to the target and renames, so readers never see a partial file.
void write_atomic(const fs::path& target, const std::string& content) {
  static thread_local std::mt19937_64 salt{std::random_device{}()};
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(salt() % 1000000);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + target.string() + ": " + ec.message());
  }
}

template <class F>
void write_csv(const fs::path& target, F&& fill) {
  std::ostringstream out;
  fill(out);
  write_atomic(target, out.str());
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

struct Prepared {
  ParseResult parsed;
  std::vector<EventRecord> events;  // filtered, split when rules apply
  LocationIndex index;
  std::vector<std::string> warnings;
};

Prepared prepare(const RunConfig& config, bool apply_splits) {
  Prepared p;
  stage("ingest", [&] {
    std::ifstream in(config.events, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open events file " + config.events.string());
    p.parsed = parse_events(in, config.columns);
    p.events = filter_violent(p.parsed.events, config.categories);
  });
  if (apply_splits && !config.split_rules.empty()) {
    stage("sequence", [&] {
      auto split = split_groups(p.events, config.rules());
      p.events = std::move(split.events);
      for (auto& w : split.warnings) p.warnings.push_back(std::move(w));
    });
  }
  if (!p.events.empty()) {
    stage("ingest", [&] { p.index = build_locations(p.events, config.rounding); });
  }
  return p;
}

void write_rejections(const fs::path& dir, const ParseResult& parsed) {
  write_csv(dir / "rejections.csv", [&](std::ostream& out) {
    out << "line,reason\n";
    for (const auto& r : parsed.rejections) out << r.line << ',' << csv::escape(r.reason) << '\n';
  });
}

CountryBorderGraph load_borders(const fs::path& path) {
  return stage("geo", [&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open adjacency file " + path.string());
    return CountryBorderGraph::read_csv(in);
  });
}

/// Selected groups plus the virtual groups split off from them.
std::vector<std::string> sequence_groups(const RunConfig& config) {
  std::vector<std::string> out;
  auto add = [&](const std::string& g) {
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  };
  for (const auto& g : config.groups) {
    add(g);
    for (const auto& r : config.split_rules)
      if (r.group == g) add(g + r.suffix);
  }
  return out;
}

struct EmbedOutcome {
  Embedding embedding;
  std::size_t points = 0;
};

// Runs one embedding with the border value already set in `config` and
// writes its files into `dir`. Shared by embed and sweep so both produce the
// same bytes for the same value.
EmbedOutcome embed_into(const RunConfig& config, const Prepared& prep, const CountryBorderGraph* borders,
                        const fs::path& dir, std::ostream& err) {
  const auto& locations = prep.index.locations;
  if (locations.size() < 2) {
    throw StageError("ingest",
                     std::runtime_error("need at least 2 locations after filtering, found " +
                                        std::to_string(locations.size())),
                     false);
  }
  std::vector<std::string> warnings = prep.warnings;
  EmbedOutcome outcome;
  std::optional<DisplacementReport> report;
  SparseMatrix exported;

  if (config.layers == LayerMode::geo) {
    // Same steps as embed_geo, split so failures name the stage and the
    // weight matrix is at hand for export.
    const WeightMatrix weights = stage("geo", [&] {
      WeightMatrix d = distance_matrix(locations);
      if (config.cost_km != 0.0) d = linear_border_distances(d, crossings_matrix(locations, *borders), config.cost_km);
      return invert_distances(d, config.multiplier);
    });
    outcome.embedding = stage("spectral", [&] { return embed(weights, config.k, config.solver); });
    if (config.export_matrix) exported = weights.values().sparseView();
  } else {
    MultiLayerRun run;
    if (config.layers == LayerMode::two_layer) {
      run = stage("layers", [&] {
        return embed_two_layer(locations, *borders, config.probability, config.k, config.multiplier, config.solver);
      });
    } else {
      const auto groups = sequence_groups(config);
      auto seq = stage("sequence", [&] {
        return sequence_adjacency(prep.events, prep.index.event_location, locations.size(), groups);
      });
      for (auto& w : seq.warnings) warnings.push_back(std::move(w));
      run = stage("layers", [&] {
        return embed_three_layer(locations, *borders, config.probability, seq.adjacency, config.k,
                                 config.multiplier, config.solver);
      });
    }
    outcome.embedding = std::move(run.embedding);
    report = std::move(run.displacement);
    exported = std::move(run.system.assembled);
  }
  outcome.points = outcome.embedding.n_points();

  stage("output", [&] {
    fs::create_directories(dir);
    write_csv(dir / "embedding.csv",
              [&](std::ostream& out) { write_embedding_csv(out, outcome.embedding, locations); });
    write_csv(dir / "eigenvalues.csv", [&](std::ostream& out) { write_eigenvalues_csv(out, outcome.embedding); });
    if (report) {
      write_csv(dir / "displacement.csv", [&](std::ostream& out) { write_displacement_csv(out, *report, locations); });
    }
    if (config.export_matrix) {
      write_csv(dir / "matrix.txt", [&](std::ostream& out) { write_coordinate_list(out, exported); });
    }
    write_rejections(dir, prep.parsed);

    json manifest = to_json(config);
    manifest["output"] = dir.string();
    json files = {"embedding.csv", "eigenvalues.csv"};
    if (report) files.push_back("displacement.csv");
    if (config.export_matrix) files.push_back("matrix.txt");
    files.push_back("rejections.csv");
    manifest["manifest"] = {{"command", "embed"},
                            {"version", PERMMAP_VERSION},
                            {"events_read", prep.parsed.events.size()},
                            {"events_rejected", prep.parsed.rejections.size()},
                            {"events_used", prep.events.size()},
                            {"locations", locations.size()},
                            {"points", outcome.points},
                            {"files", files},
                            {"warnings", warnings}};
    write_atomic(dir / "manifest.json", dump(manifest));
  });
  for (const auto& w : warnings) err << "permmap: warning: " << w << '\n';
  return outcome;
}

int report_failure(const std::string& command, const std::exception& e, std::ostream& err) {
  err << "permmap " << command << ": " << e.what() << '\n';
  if (const auto* s = dynamic_cast<const StageError*>(&e)) return s->usage() ? kExitUsage : kExitFailure;
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) return kExitUsage;
  return kExitFailure;
}

std::string value_dir(const RunConfig& config, double value) {
  return (config.layers == LayerMode::geo ? "cost_" : "p_") + format_double(value);
}

}  // namespace

int cmd_summarize(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    stage("config", [&] { validate(config, Command::summarize); });
    const Prepared prep = prepare(config, false);
    SummaryStats stats;
    if (!prep.events.empty()) stats = summarize(prep.events, prep.index);
    const auto& locations = prep.index.locations;

    stage("output", [&] {
      fs::create_directories(config.output);
      write_csv(config.output / "attacks_per_location.csv", [&](std::ostream& o) {
        o << "location_id,country,admin1,latitude,longitude,attacks\n";
        for (std::size_t i = 0; i < stats.attacks_per_location.size(); ++i) {
          const auto& l = locations[i];
          o << l.id << ',' << csv::escape(l.country) << ',' << csv::escape(l.admin_key) << ','
            << format_double(l.latitude) << ',' << format_double(l.longitude) << ','
            << stats.attacks_per_location[i] << '\n';
        }
      });
      write_csv(config.output / "groups_per_location.csv", [&](std::ostream& o) {
        o << "location_id,groups\n";
        for (std::size_t i = 0; i < stats.groups_per_location.size(); ++i)
          o << i << ',' << stats.groups_per_location[i] << '\n';
      });
      write_csv(config.output / "fatalities_by_country_year.csv", [&](std::ostream& o) {
        o << "country,year,fatalities\n";
        for (const auto& [key, deaths] : stats.fatalities_by_country_year)
          o << csv::escape(key.first) << ',' << key.second << ',' << deaths << '\n';
      });
      write_rejections(config.output, prep.parsed);
      json manifest = to_json(config);
      manifest["manifest"] = {{"command", "summarize"},
                              {"version", PERMMAP_VERSION},
                              {"events_read", prep.parsed.events.size()},
                              {"events_rejected", prep.parsed.rejections.size()},
                              {"events_used", stats.total_events},
                              {"groups", stats.total_groups},
                              {"locations", stats.total_locations},
                              {"files",
                               {"attacks_per_location.csv", "groups_per_location.csv",
                                "fatalities_by_country_year.csv", "rejections.csv"}}};
      write_atomic(config.output / "manifest.json", dump(manifest));
    });

    const double mean = stats.total_locations == 0 ? 0.0 : stats.mean_attacks_per_location();
    const std::size_t max = stats.total_locations == 0 ? 0 : stats.max_attacks_per_location();
    out << "events=" << stats.total_events << " groups=" << stats.total_groups
        << " locations=" << stats.total_locations << '\n';
    out << "attacks_per_location mean=" << format_double(mean) << " max=" << max << '\n';
    if (!prep.parsed.rejections.empty()) out << "rejected_rows=" << prep.parsed.rejections.size() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    return report_failure("summarize", e, err);
  }
}

int cmd_embed(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    stage("config", [&] { validate(config, Command::embed); });
    const Prepared prep = prepare(config, config.layers == LayerMode::three_layer);
    std::optional<CountryBorderGraph> borders;
    if (!config.adjacency.empty()) borders = load_borders(config.adjacency);
    const auto outcome = embed_into(config, prep, borders ? &*borders : nullptr, config.output, err);
    out << "embedded " << outcome.points << " points in " << config.k << "D from "
        << prep.index.locations.size() << " locations -> " << config.output.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    return report_failure("embed", e, err);
  }
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    stage("config", [&] { validate(config, Command::sweep); });
    const Prepared prep = prepare(config, config.layers == LayerMode::three_layer);
    std::optional<CountryBorderGraph> borders;
    if (!config.adjacency.empty()) borders = load_borders(config.adjacency);

    const bool geo = config.layers == LayerMode::geo;
    const auto& values = geo ? config.sweep_costs : config.sweep_probabilities;
    std::vector<std::pair<double, double>> ratios;
    json runs = json::array();
    std::size_t failed = 0;
    for (double v : values) {
      RunConfig one = config;
      (geo ? one.cost_km : one.probability) = v;
      const std::string name = value_dir(config, v);
      try {
        const auto outcome = embed_into(one, prep, borders ? &*borders : nullptr, config.output / name, err);
        const double ratio =
            stage("layers", [&] { return separation_ratio(outcome.embedding, prep.index.locations); });
        ratios.emplace_back(v, ratio);
        runs.push_back({{"value", v}, {"dir", name}, {"status", "ok"}, {"separation_ratio", ratio}});
        out << name << " ratio=" << format_double(ratio) << '\n';
      } catch (const std::exception& e) {
        ++failed;
        err << "permmap sweep: " << name << ": " << e.what() << '\n';
        runs.push_back({{"value", v}, {"dir", name}, {"status", "failed"}, {"error", e.what()}});
      }
    }

    stage("output", [&] {
      fs::create_directories(config.output);
      write_csv(config.output / "separation.csv", [&](std::ostream& o) {
        o << "value,ratio\n";
        for (const auto& [v, r] : ratios) o << format_double(v) << ',' << format_double(r) << '\n';
      });
      json manifest = to_json(config);
      manifest["manifest"] = {{"command", "sweep"},
                              {"version", PERMMAP_VERSION},
                              {"parameter", geo ? "cost_km" : "p"},
                              {"runs", runs}};
      write_atomic(config.output / "manifest.json", dump(manifest));
    });
    if (failed > 0) {
      err << "permmap sweep: " << failed << " of " << values.size() << " values failed\n";
      return kExitFailure;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return report_failure("sweep", e, err);
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Permeability maps of attack locations by spectral embedding", "permmap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PERMMAP_VERSION);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "Output directory (replaces the config's output)");
    sub->add_option("--override", overrides, "key=value, dotted keys, value parsed as JSON if possible")
        ->take_all()
        ->allow_extra_args(false);
  };
  CLI::App* summarize_cmd = app.add_subcommand("summarize", "Event and location totals");
  CLI::App* embed_cmd = app.add_subcommand("embed", "One spectral embedding");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Embeddings over a list of border costs or probabilities");
  for (auto* sub : {summarize_cmd, embed_cmd, sweep_cmd}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunConfig config;
  try {
    config = load_config(config_path, overrides);
    if (!out_dir.empty()) config.output = fs::absolute(out_dir).lexically_normal();
  } catch (const std::exception& e) {
    err << "permmap: config: " << e.what() << '\n';
    return kExitUsage;
  }
  if (summarize_cmd->parsed()) return cmd_summarize(config, out, err);
  if (embed_cmd->parsed()) return cmd_embed(config, out, err);
  return cmd_sweep(config, out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace permmap::cli
