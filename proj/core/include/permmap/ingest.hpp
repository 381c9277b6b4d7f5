#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace permmap {

/// One violent incident as read from an event file.
struct EventRecord {
  std::chrono::year_month_day event_date{};
  std::string group_id;
  double latitude = 0.0;
  double longitude = 0.0;
  std::string country;
  std::string admin1;
  std::string event_type;
  std::int64_t fatalities = 0;
  std::size_t source_row = 0;  // line of the record in its input file
};

/// Header names of the columns an event file must provide. Defaults follow
/// the ACLED export layout.
struct ColumnMap {
  std::string date = "event_date";
  std::string actor = "actor1";
  std::string latitude = "latitude";
  std::string longitude = "longitude";
  std::string country = "country";
  std::string admin1 = "admin1";
  std::string event_type = "event_type";
  std::string fatalities = "fatalities";
};

struct RowRejection {
  std::size_t line = 0;
  std::string reason;
};

struct ParseResult {
  std::vector<EventRecord> events;
  std::vector<RowRejection> rejections;
};

/// Reads a header row followed by event rows. Rows that fail to parse are
/// collected in `rejections` and do not abort the read; a header that lacks a
/// mapped column throws ConfigError.
///
/// Dates are accepted as `YYYY-MM-DD`, `DD/MM/YYYY`, or `D Month YYYY`
/// (full or three-letter English month names).
ParseResult parse_events(std::istream& source, const ColumnMap& columns = {});

/// Parses a single date in any of the accepted layouts. Throws ArgumentError.
std::chrono::year_month_day parse_date(std::string_view text);

/// The violent categories: battles (any "Battle..." subtype, i.e. with and
/// without change of territory), riots and protests, violence against
/// civilians, and remote violence.
std::set<std::string> default_violent_categories();

/// Keeps events whose trimmed, case-folded type equals one of `categories`.
/// A category spelled "Battle" also matches every type starting with "battle".
std::vector<EventRecord> filter_violent(std::span<const EventRecord> events,
                                        const std::set<std::string>& categories);

struct Location {
  std::size_t id = 0;
  double latitude = 0.0;
  double longitude = 0.0;
  std::string country;
  std::string admin_key;
};

struct LocationIndex {
  std::vector<Location> locations;
  std::vector<std::size_t> event_location;  // parallel to the input events
};

inline constexpr int kDefaultRounding = 4;

/// Deduplicates attack sites on (country, admin1, coordinates rounded to
/// `rounding` decimals). Ids follow first appearance; a location keeps the
/// coordinates of the first event seen at its key.
LocationIndex build_locations(std::span<const EventRecord> events, int rounding = kDefaultRounding);

struct SummaryStats {
  std::vector<std::size_t> attacks_per_location;
  std::vector<std::size_t> groups_per_location;
  std::map<std::pair<std::string, int>, std::int64_t> fatalities_by_country_year;
  std::size_t total_events = 0;
  std::size_t total_groups = 0;
  std::size_t total_locations = 0;

  double mean_attacks_per_location() const;
  std::size_t max_attacks_per_location() const;
};

/// Each row is one attack by its single attacker group.
SummaryStats summarize(std::span<const EventRecord> events, const LocationIndex& index);

}  // namespace permmap
