#include "permmap/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <tuple>

#include "permmap/csv.hpp"
#include "permmap/errors.hpp"

namespace permmap {

namespace {

using namespace std::chrono;

template <class T>
bool parse_number(std::string_view text, T& out) {
  text = csv::trim(text);
  if (text.empty()) return false;
  if constexpr (std::is_integral_v<T>) {
    // ACLED occasionally writes integral counts as "3.0".
    double d = 0.0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (ec != std::errc{} || p != text.data() + text.size()) return false;
    if (!std::isfinite(d) || d != std::floor(d)) return false;
    out = static_cast<T>(d);
    return true;
  } else {
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && p == text.data() + text.size() && std::isfinite(out);
  }
}

int month_from_name(std::string_view name) {
  static constexpr std::array<std::string_view, 12> kNames = {
      "january", "february", "march",     "april",   "may",      "june",
      "july",    "august",   "september", "october", "november", "december"};
  const std::string n = csv::lower(name);
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (n == kNames[i] || (n.size() == 3 && kNames[i].substr(0, 3) == n)) {
      return static_cast<int>(i) + 1;
    }
  }
  return 0;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

year_month_day make_date(int y, int m, int d, std::string_view text) {
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (m < 1 || m > 12 || d < 1 || !ymd.ok()) {
    throw ArgumentError("invalid date '" + std::string(text) + "'");
  }
  return ymd;
}

bool is_battle_category(std::string_view folded) { return folded == "battle" || folded == "battles"; }

}  // namespace

year_month_day parse_date(std::string_view text) {
  const std::string_view t = csv::trim(text);
  int y = 0, m = 0, d = 0;
  if (auto parts = split_on(t, '-'); parts.size() == 3 && parts[0].size() == 4) {
    if (parse_number(parts[0], y) && parse_number(parts[1], m) && parse_number(parts[2], d)) {
      return make_date(y, m, d, t);
    }
  } else if (auto slashed = split_on(t, '/'); slashed.size() == 3) {
    if (parse_number(slashed[0], d) && parse_number(slashed[1], m) && parse_number(slashed[2], y) &&
        slashed[2].size() == 4) {
      return make_date(y, m, d, t);
    }
  } else {
    std::vector<std::string_view> words;
    for (auto w : split_on(t, ' ')) {
      if (!w.empty()) words.push_back(w);
    }
    if (words.size() == 3 && parse_number(words[0], d) && parse_number(words[2], y)) {
      m = month_from_name(words[1]);
      if (m != 0) return make_date(y, m, d, t);
    }
  }
  throw ArgumentError("unparseable date '" + std::string(t) + "'");
}

ParseResult parse_events(std::istream& source, const ColumnMap& columns) {
  csv::Reader reader(source);
  auto header = reader.next();
  if (!header) throw ConfigError("event file is empty (no header row)");

  auto column_index = [&](const std::string& name) {
    const std::string wanted = csv::lower(csv::trim(name));
    for (std::size_t i = 0; i < header->fields.size(); ++i) {
      if (csv::lower(csv::trim(header->fields[i])) == wanted) return i;
    }
    throw ConfigError("missing mapped column '" + name + "' in event file header");
  };
  const std::size_t c_date = column_index(columns.date);
  const std::size_t c_actor = column_index(columns.actor);
  const std::size_t c_lat = column_index(columns.latitude);
  const std::size_t c_lon = column_index(columns.longitude);
  const std::size_t c_country = column_index(columns.country);
  const std::size_t c_admin = column_index(columns.admin1);
  const std::size_t c_type = column_index(columns.event_type);
  const std::size_t c_fat = column_index(columns.fatalities);
  const std::size_t needed = std::max({c_date, c_actor, c_lat, c_lon, c_country, c_admin, c_type, c_fat});

  ParseResult result;
  while (auto record = reader.next()) {
    const auto& f = record->fields;
    auto reject = [&](std::string reason) {
      result.rejections.push_back({record->line, std::move(reason)});
    };
    if (f.size() <= needed) {
      reject("too few fields (" + std::to_string(f.size()) + ")");
      continue;
    }

    EventRecord e;
    e.source_row = record->line;
    try {
      e.event_date = parse_date(f[c_date]);
    } catch (const ArgumentError&) {
      reject("unparseable date");
      continue;
    }
    e.group_id = std::string(csv::trim(f[c_actor]));
    if (e.group_id.empty()) {
      reject("empty group");
      continue;
    }
    if (!parse_number(f[c_lat], e.latitude)) {
      reject("unparseable latitude");
      continue;
    }
    if (e.latitude < -90.0 || e.latitude > 90.0) {
      reject("latitude out of range");
      continue;
    }
    if (!parse_number(f[c_lon], e.longitude)) {
      reject("unparseable longitude");
      continue;
    }
    if (e.longitude < -180.0 || e.longitude > 180.0) {
      reject("longitude out of range");
      continue;
    }
    if (!parse_number(f[c_fat], e.fatalities) || e.fatalities < 0) {
      reject("invalid fatalities");
      continue;
    }
    e.country = std::string(csv::trim(f[c_country]));
    e.admin1 = std::string(csv::trim(f[c_admin]));
    e.event_type = std::string(csv::trim(f[c_type]));
    result.events.push_back(std::move(e));
  }
  return result;
}

std::set<std::string> default_violent_categories() {
  return {"Battle", "Riots/Protests", "Riots and protests", "Violence against civilians",
          "Remote violence"};
}

std::vector<EventRecord> filter_violent(std::span<const EventRecord> events,
                                        const std::set<std::string>& categories) {
  if (categories.empty()) throw ArgumentError("filter_violent: category set is empty");
  std::set<std::string> exact;
  bool battles = false;
  for (const auto& c : categories) {
    std::string folded = csv::lower(csv::trim(c));
    if (is_battle_category(folded)) battles = true;
    exact.insert(std::move(folded));
  }

  std::vector<EventRecord> kept;
  for (const auto& e : events) {
    const std::string type = csv::lower(csv::trim(e.event_type));
    if (exact.contains(type) || (battles && type.starts_with("battle"))) kept.push_back(e);
  }
  return kept;
}

LocationIndex build_locations(std::span<const EventRecord> events, int rounding) {
  if (events.empty()) throw ArgumentError("build_locations: no events");
  if (rounding < 0 || rounding > 6) throw ArgumentError("build_locations: rounding must be in [0, 6]");
  const double scale = std::pow(10.0, rounding);

  using Key = std::tuple<std::string, std::string, long long, long long>;
  std::map<Key, std::size_t> ids;
  LocationIndex index;
  index.event_location.reserve(events.size());
  for (const auto& e : events) {
    Key key{e.country, e.admin1, std::llround(e.latitude * scale), std::llround(e.longitude * scale)};
    auto [it, inserted] = ids.try_emplace(std::move(key), index.locations.size());
    if (inserted) {
      index.locations.push_back({it->second, e.latitude, e.longitude, e.country, e.admin1});
    }
    index.event_location.push_back(it->second);
  }
  return index;
}

double SummaryStats::mean_attacks_per_location() const {
  if (attacks_per_location.empty()) return 0.0;
  return static_cast<double>(total_events) / static_cast<double>(attacks_per_location.size());
}

std::size_t SummaryStats::max_attacks_per_location() const {
  if (attacks_per_location.empty()) return 0;
  return *std::max_element(attacks_per_location.begin(), attacks_per_location.end());
}

SummaryStats summarize(std::span<const EventRecord> events, const LocationIndex& index) {
  if (index.event_location.size() != events.size()) {
    throw ArgumentError("summarize: location map does not cover every event");
  }
  const std::size_t n = index.locations.size();
  SummaryStats s;
  s.attacks_per_location.assign(n, 0);
  s.groups_per_location.assign(n, 0);
  std::vector<std::set<std::string>> groups_at(n);
  std::set<std::string> all_groups;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::size_t loc = index.event_location[i];
    if (loc >= n) throw ArgumentError("summarize: location id out of range");
    const std::string group(csv::trim(events[i].group_id));
    ++s.attacks_per_location[loc];
    groups_at[loc].insert(group);
    all_groups.insert(group);
    const int year = static_cast<int>(events[i].event_date.year());
    s.fatalities_by_country_year[{events[i].country, year}] += events[i].fatalities;
  }
  for (std::size_t l = 0; l < n; ++l) s.groups_per_location[l] = groups_at[l].size();
  s.total_events = events.size();
  s.total_groups = all_groups.size();
  s.total_locations = n;
  return s;
}

}  // namespace permmap
