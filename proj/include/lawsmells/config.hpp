#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lawsmells/entities.hpp"
#include "lawsmells/finding.hpp"
#include "lawsmells/lengths.hpp"
#include "lawsmells/syntax.hpp"

namespace lawsmells {

inline constexpr const char* kToolVersion = "0.1.0";

struct CorpusSpec {
  std::string label;  // empty: the file's own label
  std::string path;
  bool operator==(const CorpusSpec&) const = default;
};

struct RelativeConfig {
  std::string scope_kind;
  RelativeRule rule;
};

/// Effective settings of one run. Config files hold the same keys as
/// to_json emits; a file may be a fragment and only overrides what it names.
struct RunConfig {
  std::vector<CorpusSpec> corpora;
  std::vector<SmellKind> smells{std::begin(kAllSmells), std::end(kAllSmells)};

  // long element
  std::size_t page_tokens = 500;
  std::string length_kind = "section";
  std::optional<RelativeConfig> relative;

  // reference trees
  std::size_t max_node_tokens = 1000;
  std::size_t chain_x = 3;
  std::optional<std::size_t> size_x;
  std::string sequence_kind = "section";

  // duplicated phrases
  std::size_t max_failures = 10000;
  std::size_t min_pair_count = 2;
  std::size_t min_report_len = 2;
  std::size_t phrase_min_len = 5;
  std::size_t phrase_min_count = 10;

  // syntax
  std::size_t gap = 50;
  std::size_t sample_n = 100;

  // entities
  std::vector<EntityType> nlo_types{std::begin(kDataEntityTypes), std::end(kDataEntityTypes)};

  std::optional<std::string> syntax_catalog;
  std::optional<std::string> entity_catalog;
  std::optional<std::string> committee_registry;

  DanglingPolicy on_dangling = DanglingPolicy::error;
  std::uint64_t seed = 0;
  std::map<SmellKind, std::size_t> fail_on;

  // Runtime only; neither fingerprinted nor echoed.
  std::string out = ".";
  std::size_t jobs = 0;  // 0: hardware concurrency
  bool dump_code_table = false;

  bool enabled(SmellKind k) const;
};

/// Applies a (possibly partial) config object over `base`. Unknown keys and
/// ill-typed values throw Error.
RunConfig apply_config(const nlohmann::json& fragment, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Every result-affecting setting, canonical key order.
nlohmann::json to_json(const RunConfig& cfg);

/// "<kind>:<count>".
std::pair<SmellKind, std::size_t> parse_fail_on(std::string_view spec);
/// "<label>=<path>"; a bare path keeps the label stored in the file.
CorpusSpec parse_corpus_spec(std::string_view spec);

/// Catalogs resolved from the config paths or the built-in defaults.
struct Catalogs {
  std::vector<SyntaxPattern> syntax;
  EntityCatalog entities = EntityCatalog::builtin();
  std::optional<CommitteeRegistry> registry;

  nlohmann::json to_json() const;
};

Catalogs load_catalogs(const RunConfig& cfg);

/// Hex SHA-256 of the canonical config plus the catalogs in use.
std::string fingerprint(const RunConfig& cfg, const Catalogs& catalogs);
std::string sha256_hex(std::string_view data);

}  // namespace lawsmells
