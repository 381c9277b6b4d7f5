#include "permmap/sequence.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "permmap/csv.hpp"
#include "permmap/errors.hpp"

namespace permmap {

GroupSplitRule GroupSplitRule::parse(std::string group_id, std::string_view attribute,
                                     std::string_view comparator, double threshold,
                                     std::string virtual_suffix) {
  GroupSplitRule rule;
  rule.group_id = std::move(group_id);
  const std::string attr = csv::lower(csv::trim(attribute));
  if (attr == "latitude" || attr == "lat") {
    rule.attribute = Attribute::latitude;
  } else if (attr == "longitude" || attr == "lon") {
    rule.attribute = Attribute::longitude;
  } else {
    throw ConfigError("split rule: unknown attribute '" + std::string(attribute) + "'");
  }
  const std::string_view cmp = csv::trim(comparator);
  if (cmp == "<") {
    rule.comparator = Comparator::less;
  } else if (cmp == ">=") {
    rule.comparator = Comparator::greater_equal;
  } else {
    throw ConfigError("split rule: comparator must be '<' or '>=', got '" + std::string(comparator) + "'");
  }
  rule.threshold = threshold;
  rule.virtual_suffix = std::move(virtual_suffix);
  rule.validate();
  return rule;
}

void GroupSplitRule::validate() const {
  if (csv::trim(group_id).empty()) throw ConfigError("split rule: empty group id");
  if (virtual_suffix.empty()) throw ConfigError("split rule for '" + group_id + "': empty suffix");
  const double bound = attribute == Attribute::latitude ? 90.0 : 180.0;
  if (!(threshold >= -bound && threshold <= bound)) {
    throw ConfigError("split rule for '" + group_id + "': threshold out of coordinate range");
  }
}

bool GroupSplitRule::matches(const EventRecord& event) const {
  if (event.group_id != group_id) return false;
  const double value = attribute == Attribute::latitude ? event.latitude : event.longitude;
  return comparator == Comparator::less ? value < threshold : value >= threshold;
}

SplitResult split_groups(std::span<const EventRecord> events, std::span<const GroupSplitRule> rules) {
  for (const auto& r : rules) r.validate();
  SplitResult out;
  out.events.assign(events.begin(), events.end());

  std::set<std::string> present;
  for (const auto& e : events) present.insert(e.group_id);
  for (const auto& r : rules) {
    if (!present.contains(r.group_id)) out.warnings.push_back("split rule names unknown group '" + r.group_id + "'");
  }

  // Rules see the original ids, so a renamed event is never split twice.
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (const auto& r : rules) {
      if (r.matches(events[i])) {
        out.events[i].group_id = events[i].group_id + r.virtual_suffix;
        break;
      }
    }
  }
  return out;
}

namespace {

bool chronological(const EventRecord& a, const EventRecord& b) {
  if (a.event_date != b.event_date) return a.event_date < b.event_date;
  return a.source_row < b.source_row;
}

}  // namespace

std::vector<EventRecord> order_events(std::span<const EventRecord> events, const std::string& group) {
  std::vector<EventRecord> selected;
  for (const auto& e : events) {
    if (e.group_id == group) selected.push_back(e);
  }
  std::stable_sort(selected.begin(), selected.end(), chronological);
  return selected;
}

SequenceResult sequence_adjacency(std::span<const EventRecord> events,
                                  std::span<const std::size_t> event_location, std::size_t n_locations,
                                  std::span<const std::string> groups) {
  if (event_location.size() != events.size()) {
    throw ArgumentError("sequence_adjacency: location map does not cover every event");
  }
  if (groups.empty()) throw ArgumentError("sequence_adjacency: no groups selected");

  std::map<std::string, std::vector<std::size_t>> by_group;
  for (const auto& g : groups) by_group.try_emplace(g);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (event_location[i] >= n_locations) throw ArgumentError("sequence_adjacency: location id out of range");
    auto it = by_group.find(events[i].group_id);
    if (it != by_group.end()) it->second.push_back(i);
  }

  SequenceResult out;
  const auto n = static_cast<Eigen::Index>(n_locations);
  DenseMatrix counts = DenseMatrix::Zero(n, n);
  for (auto& [group, members] : by_group) {
    if (members.empty()) {
      out.warnings.push_back("group '" + group + "' has no events");
      continue;
    }
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return chronological(events[a], events[b]);
    });
    for (std::size_t t = 0; t + 1 < members.size(); ++t) {
      const auto from = static_cast<Eigen::Index>(event_location[members[t]]);
      const auto to = static_cast<Eigen::Index>(event_location[members[t + 1]]);
      if (from != to) counts(from, to) += 1.0;
    }
  }
  out.adjacency = WeightMatrix(std::move(counts), MatrixKind::directed);
  return out;
}

}  // namespace permmap
