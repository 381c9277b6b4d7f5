#pragma once

#include <span>
#include <string>
#include <vector>

#include "permmap/ingest.hpp"
#include "permmap/weight_matrix.hpp"

namespace permmap {

/// Moves a group's events that fall on one side of a latitude or longitude
/// line into a virtual group named `group_id + virtual_suffix`.
struct GroupSplitRule {
  enum class Attribute { latitude, longitude };
  enum class Comparator { less, greater_equal };

  std::string group_id;
  Attribute attribute = Attribute::latitude;
  Comparator comparator = Comparator::less;
  double threshold = 0.0;
  std::string virtual_suffix;

  /// Builds a rule from config text ("latitude"/"longitude", "<"/">=").
  /// Throws ConfigError on anything malformed.
  static GroupSplitRule parse(std::string group_id, std::string_view attribute,
                              std::string_view comparator, double threshold,
                              std::string virtual_suffix);

  void validate() const;
  bool matches(const EventRecord& event) const;
};

struct SplitResult {
  std::vector<EventRecord> events;
  std::vector<std::string> warnings;
};

SplitResult split_groups(std::span<const EventRecord> events,
                         std::span<const GroupSplitRule> rules);

/// Events of one group ordered by date, then by source row.
std::vector<EventRecord> order_events(std::span<const EventRecord> events, const std::string& group);

struct SequenceResult {
  WeightMatrix adjacency;  // directed; entry (i, j) counts moves i -> j
  std::vector<std::string> warnings;
};

/// Counts, over the selected groups, how often a group's attack at location i
/// was immediately followed by its next attack at a different location j. `event_location` maps
/// each event to its location id in [0, n_locations).
SequenceResult sequence_adjacency(std::span<const EventRecord> events,
                                  std::span<const std::size_t> event_location,
                                  std::size_t n_locations,
                                  std::span<const std::string> groups);

}  // namespace permmap
