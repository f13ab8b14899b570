#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lawsmells/cluster.hpp"
#include "lawsmells/corpus.hpp"
#include "lawsmells/dupex.hpp"

namespace lawsmells {

enum class EntityType { money, percentage, time_period, time_point, term, reference, committee };

inline constexpr EntityType kAllEntityTypes[] = {
    EntityType::money, EntityType::percentage, EntityType::time_period, EntityType::time_point,
    EntityType::term,  EntityType::reference,  EntityType::committee,
};

/// The four data types of the density view.
inline constexpr EntityType kDataEntityTypes[] = {
    EntityType::money, EntityType::percentage, EntityType::time_period, EntityType::time_point};

std::string_view to_string(EntityType t);
EntityType entity_type_from_string(std::string_view name);
/// Placeholder token, e.g. "{money}". Committees have none and yield "".
std::string_view placeholder(EntityType t);

struct Money {
  std::uint64_t amount = 0;  // whole currency units
  bool operator==(const Money&) const = default;
};

/// numerator / denominator of the fraction; "50 percent" is 50/100.
struct Percentage {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  bool operator==(const Percentage& o) const {
    return numerator * o.denominator == o.numerator * denominator;
  }
};

enum class PeriodUnit { day, week, month, year };

struct TimePeriod {
  std::uint64_t count = 0;
  PeriodUnit unit = PeriodUnit::day;
  bool operator==(const TimePeriod&) const = default;
};

struct TimePoint {
  int month = 1;  // 1..12
  int day = 1;
  std::optional<int> year;
  bool operator==(const TimePoint&) const = default;
};

struct DefinedTerm {
  std::string text;
  bool operator==(const DefinedTerm&) const = default;
};

struct ReferenceLabel {
  std::string kind;  // section, chapter, ...
  std::string label;
  std::optional<std::string> title;
  bool operator==(const ReferenceLabel&) const = default;
};

struct Committee {
  std::string topic;
  std::string parent;  // "senate" or "house of representatives"
  /// Parent initial plus topic, e.g. "S: finance".
  std::string abbreviation() const;
  std::string full_name() const;
  bool operator==(const Committee&) const = default;
};

using EntityValue =
    std::variant<Money, Percentage, TimePeriod, TimePoint, DefinedTerm, ReferenceLabel, Committee>;

/// Canonical surface form of a normalized value ("$1,000", "30 days", ...).
std::string surface_form(const EntityValue& v);

struct EntityMention {
  EntityType type = EntityType::money;
  std::string element;
  Span span;  // into the element's own text
  std::string raw;
  EntityValue value;
};

struct EntityPattern {
  EntityType type;
  /// ECMAScript regex applied to lowercased text. If it has a capture group,
  /// group 1 is the mention span; otherwise the whole match is.
  std::string pattern;
  /// Higher wins when substituted spans of different types overlap.
  int priority = 0;
};

/// Compiled extraction catalog.
class EntityCatalog {
 public:
  static EntityCatalog builtin();
  static EntityCatalog from_json(const nlohmann::json& j);
  static EntityCatalog load(const std::filesystem::path& path);
  explicit EntityCatalog(std::vector<EntityPattern> patterns);

  const std::vector<EntityPattern>& patterns() const { return patterns_; }
  int priority(EntityType t) const;
  nlohmann::json to_json() const;

  /// Mentions in one text, document order. Within a type the longest match
  /// wins; time periods overlapping a time point are dropped.
  std::vector<EntityMention> extract(std::string_view text, std::span<const EntityType> types,
                                     std::string_view element = {}) const;

  /// Does `text` as a whole match one of the patterns for `type`?
  bool matches_whole(EntityType type, std::string_view text) const;

 private:
  std::vector<EntityPattern> patterns_;
  std::vector<std::shared_ptr<const std::regex>> compiled_;
};

/// Parses a raw mention of the given type; nullopt if it does not normalize.
std::optional<EntityValue> normalize(EntityType type, std::string_view raw);

std::vector<EntityMention> extract_entities(const Snapshot& s, std::span<const EntityType> types,
                                            const EntityCatalog& catalog = EntityCatalog::builtin());

struct PlaceholderBinding {
  std::string placeholder;
  std::size_t mention = 0;  // index into the mentions passed in
  EntityValue value;
};

struct Substitution {
  std::string text;
  std::vector<PlaceholderBinding> bindings;
  /// Mentions that lost an overlap to a higher-priority type.
  std::vector<std::size_t> dropped;
};

/// Replaces each substitutable mention's span by its placeholder. A space is
/// inserted where the placeholder would otherwise fuse with a neighbouring
/// word, so tokenizing yields exactly one token per placeholder.
Substitution substitute_placeholders(std::string_view text,
                                     const std::vector<EntityMention>& mentions,
                                     const EntityCatalog& catalog = EntityCatalog::builtin());

/// Placeholder-substituted token stream of an element (and its descendants):
/// the miner input.
TokenStream parametrized_tokens(const Snapshot& s, std::string_view id, bool include_descendants,
                                const EntityCatalog& catalog = EntityCatalog::builtin());

struct DensityMatrix {
  std::vector<std::string> scopes;  // root element ids
  std::vector<EntityType> types;
  std::vector<std::size_t> scope_tokens;
  std::vector<std::vector<std::size_t>> counts;              // [scope][type]
  std::vector<std::vector<std::optional<double>>> per_1000;  // absent for empty scopes
  double cap = 0.0;  // 99th percentile of the present cells, nearest rank
};

DensityMatrix entity_density(const Snapshot& s, std::span<const EntityType> types,
                             const EntityCatalog& catalog = EntityCatalog::builtin());

struct CommitteeRecord {
  std::string abbrev;
  std::string full_name;
  std::string parent;
  std::optional<int> active_from;
  std::optional<int> active_to;
};

class CommitteeRegistry {
 public:
  /// CSV with header: abbrev, full name, parent, active_from, active_to.
  static CommitteeRegistry load(const std::filesystem::path& path);
  static CommitteeRegistry from_csv(std::istream& in);

  const CommitteeRecord* find(const Committee& c) const;
  /// Defunct when the record's active_to precedes `year` (or, without a
  /// year, whenever active_to is set).
  bool defunct(const Committee& c, std::optional<int> year) const;

  std::vector<CommitteeRecord> records;
};

/// Mined phrases of one scope. Each phrase contributes its committee
/// mentions times its usage in the final cover, so a mention nested in
/// several phrases is counted once.
struct ScopePhrases {
  std::string scope;  // element id in the snapshot
  std::vector<DupexPhrase> phrases;
};

struct CommitteeProfile {
  std::vector<std::string> rows;       // abbreviations
  std::vector<std::string> row_names;  // full names
  std::vector<bool> defunct;
  std::vector<std::string> columns;    // scope ids
  std::vector<std::vector<double>> cells;  // [row][column], mentions per 1,000 tokens
  std::optional<Dendrogram> row_clustering;
  std::optional<Dendrogram> column_clustering;
};

CommitteeProfile committee_profiles(const std::vector<ScopePhrases>& scopes, const Snapshot& s,
                                    const CommitteeRegistry* registry = nullptr,
                                    const EntityCatalog& catalog = EntityCatalog::builtin());

nlohmann::json to_json(const EntityValue& v);
nlohmann::json to_json(const DensityMatrix& m);
nlohmann::json to_json(const CommitteeProfile& p);

}  // namespace lawsmells
