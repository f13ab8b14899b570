#include "lawsmells/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include <openssl/evp.h>

namespace lawsmells {

using nlohmann::json;

namespace {

std::string_view mode_name(RelativeRule::Mode m) {
  switch (m) {
    case RelativeRule::Mode::quantile: return "quantile";
    case RelativeRule::Mode::tokens: return "tokens";
    case RelativeRule::Mode::max_of_both: return "max_of_both";
  }
  return "quantile";
}

RelativeRule::Mode mode_from(std::string_view s) {
  for (auto m : {RelativeRule::Mode::quantile, RelativeRule::Mode::tokens, RelativeRule::Mode::max_of_both}) {
    if (mode_name(m) == s) return m;
  }
  throw Error("unknown relative rule mode '" + std::string(s) + "'");
}

std::size_t positive(const json& v, std::string_view key) {
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
    throw Error("config key '" + std::string(key) + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::size_t non_negative(const json& v, std::string_view key) {
  if (!v.is_number_unsigned()) {
    throw Error("config key '" + std::string(key) + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string text(const json& v, std::string_view key) {
  if (!v.is_string()) throw Error("config key '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_text(const json& v, std::string_view key) {
  if (v.is_null()) return std::nullopt;
  return text(v, key);
}

}  // namespace

bool RunConfig::enabled(SmellKind k) const {
  return std::find(smells.begin(), smells.end(), k) != smells.end();
}

RunConfig apply_config(const json& j, RunConfig c) {
  if (!j.is_object()) throw Error("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "corpora") {
      if (!v.is_array()) throw Error("config key 'corpora' must be an array");
      c.corpora.clear();
      for (const auto& e : v) {
        if (!e.is_object()) throw Error("corpora entries must be objects with label and path");
        c.corpora.push_back({text(e.at("label"), "corpora.label"), text(e.at("path"), "corpora.path")});
      }
    } else if (key == "smells") {
      if (!v.is_array()) throw Error("config key 'smells' must be an array");
      c.smells.clear();
      for (const auto& e : v) c.smells.push_back(smell_from_string(text(e, "smells")));
    } else if (key == "page_tokens") {
      c.page_tokens = positive(v, key);
    } else if (key == "length_kind") {
      c.length_kind = text(v, key);
    } else if (key == "relative") {
      if (v.is_null()) {
        c.relative.reset();
        continue;
      }
      RelativeConfig r;
      r.scope_kind = text(v.at("scope_kind"), "relative.scope_kind");
      r.rule.mode = mode_from(text(v.value("mode", json("quantile")), "relative.mode"));
      if (v.contains("q")) {
        if (!v.at("q").is_number()) throw Error("config key 'relative.q' must be a number");
        r.rule.q = v.at("q").get<double>();
        if (!(r.rule.q > 0.0 && r.rule.q <= 1.0)) throw Error("relative.q must lie in (0, 1]");
      }
      if (v.contains("n")) r.rule.n = positive(v.at("n"), "relative.n");
      c.relative = r;
    } else if (key == "max_node_tokens") {
      c.max_node_tokens = positive(v, key);
    } else if (key == "chain_x") {
      c.chain_x = positive(v, key);
    } else if (key == "size_x") {
      c.size_x = v.is_null() ? std::nullopt : std::optional<std::size_t>(positive(v, key));
    } else if (key == "sequence_kind") {
      c.sequence_kind = text(v, key);
    } else if (key == "max_failures") {
      c.max_failures = positive(v, key);
    } else if (key == "min_pair_count") {
      c.min_pair_count = positive(v, key);
      if (c.min_pair_count < 2) throw Error("config key 'min_pair_count' must be at least 2");
    } else if (key == "min_report_len") {
      c.min_report_len = positive(v, key);
      if (c.min_report_len < 2) throw Error("config key 'min_report_len' must be at least 2");
    } else if (key == "phrase_min_len") {
      c.phrase_min_len = positive(v, key);
    } else if (key == "phrase_min_count") {
      c.phrase_min_count = positive(v, key);
    } else if (key == "gap") {
      c.gap = non_negative(v, key);
    } else if (key == "sample_n") {
      c.sample_n = positive(v, key);
    } else if (key == "nlo_types") {
      if (!v.is_array()) throw Error("config key 'nlo_types' must be an array");
      c.nlo_types.clear();
      for (const auto& e : v) c.nlo_types.push_back(entity_type_from_string(text(e, key)));
    } else if (key == "syntax_catalog") {
      c.syntax_catalog = optional_text(v, key);
    } else if (key == "entity_catalog") {
      c.entity_catalog = optional_text(v, key);
    } else if (key == "committee_registry") {
      c.committee_registry = optional_text(v, key);
    } else if (key == "on_dangling") {
      const auto policy = text(v, key);
      if (policy == "error") {
        c.on_dangling = DanglingPolicy::error;
      } else if (policy == "drop") {
        c.on_dangling = DanglingPolicy::drop;
      } else {
        throw Error("on_dangling must be 'error' or 'drop'");
      }
    } else if (key == "dump_code_table") {
      if (!v.is_boolean()) throw Error("config key 'dump_code_table' must be a boolean");
      c.dump_code_table = v.get<bool>();
    } else if (key == "seed") {
      c.seed = non_negative(v, key);
    } else if (key == "fail_on") {
      if (!v.is_object()) throw Error("config key 'fail_on' must map smell kinds to counts");
      c.fail_on.clear();
      for (const auto& [kind, n] : v.items()) c.fail_on[smell_from_string(kind)] = non_negative(n, key);
    } else if (key == "out") {
      c.out = text(v, key);
    } else if (key == "jobs") {
      c.jobs = non_negative(v, key);
    } else {
      throw Error("unknown config key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("malformed config file " + path.string() + ": " + e.what());
  }
  try {
    return apply_config(j, std::move(base));
  } catch (const json::exception& e) {
    throw Error("invalid config file " + path.string() + ": " + e.what());
  }
}

json to_json(const RunConfig& c) {
  json corpora = json::array();
  for (const auto& s : c.corpora) corpora.push_back({{"label", s.label}, {"path", s.path}});
  json smells = json::array();
  for (auto k : c.smells) smells.push_back(to_string(k));
  json types = json::array();
  for (auto t : c.nlo_types) types.push_back(to_string(t));
  json fail_on = json::object();
  for (const auto& [k, n] : c.fail_on) fail_on[std::string(to_string(k))] = n;
  json relative = nullptr;
  if (c.relative) {
    relative = {{"scope_kind", c.relative->scope_kind},
                {"mode", mode_name(c.relative->rule.mode)},
                {"q", c.relative->rule.q},
                {"n", c.relative->rule.n}};
  }
  auto opt = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
  return {{"corpora", std::move(corpora)},
          {"smells", std::move(smells)},
          {"page_tokens", c.page_tokens},
          {"length_kind", c.length_kind},
          {"relative", std::move(relative)},
          {"max_node_tokens", c.max_node_tokens},
          {"chain_x", c.chain_x},
          {"size_x", c.size_x ? json(*c.size_x) : json(nullptr)},
          {"sequence_kind", c.sequence_kind},
          {"max_failures", c.max_failures},
          {"min_pair_count", c.min_pair_count},
          {"min_report_len", c.min_report_len},
          {"phrase_min_len", c.phrase_min_len},
          {"phrase_min_count", c.phrase_min_count},
          {"gap", c.gap},
          {"sample_n", c.sample_n},
          {"nlo_types", std::move(types)},
          {"syntax_catalog", opt(c.syntax_catalog)},
          {"entity_catalog", opt(c.entity_catalog)},
          {"committee_registry", opt(c.committee_registry)},
          {"on_dangling", c.on_dangling == DanglingPolicy::drop ? "drop" : "error"},
          {"seed", c.seed},
          {"fail_on", std::move(fail_on)}};
}

std::pair<SmellKind, std::size_t> parse_fail_on(std::string_view spec) {
  const auto colon = spec.rfind(':');
  if (colon == std::string_view::npos) {
    throw Error("--fail-on expects <smell>:<count>, got '" + std::string(spec) + "'");
  }
  const auto kind = smell_from_string(spec.substr(0, colon));
  const auto num = spec.substr(colon + 1);
  std::size_t n = 0;
  auto res = std::from_chars(num.data(), num.data() + num.size(), n);
  if (num.empty() || res.ec != std::errc{} || res.ptr != num.data() + num.size()) {
    throw Error("--fail-on count must be a non-negative integer, got '" + std::string(num) + "'");
  }
  return {kind, n};
}

CorpusSpec parse_corpus_spec(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos) {
    return {"", std::string(spec)};
  }
  if (eq == 0 || eq + 1 == spec.size()) {
    throw Error("--corpus expects <label>=<path>, got '" + std::string(spec) + "'");
  }
  return {std::string(spec.substr(0, eq)), std::string(spec.substr(eq + 1))};
}

json Catalogs::to_json() const {
  json registry_json = nullptr;
  if (registry) {
    registry_json = json::array();
    for (const auto& r : registry->records) {
      registry_json.push_back({r.abbrev, r.full_name, r.parent,
                               r.active_from ? json(*r.active_from) : json(nullptr),
                               r.active_to ? json(*r.active_to) : json(nullptr)});
    }
  }
  return {{"syntax", lawsmells::to_json(syntax)},
          {"entities", entities.to_json()},
          {"committee_registry", std::move(registry_json)}};
}

Catalogs load_catalogs(const RunConfig& cfg) {
  Catalogs c;
  c.syntax = cfg.syntax_catalog ? load_syntax_catalog(*cfg.syntax_catalog) : builtin_syntax_catalog();
  set_gap(c.syntax, cfg.gap);
  if (cfg.entity_catalog) c.entities = EntityCatalog::load(*cfg.entity_catalog);
  if (cfg.committee_registry) c.registry = CommitteeRegistry::load(*cfg.committee_registry);
  return c;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string fingerprint(const RunConfig& cfg, const Catalogs& catalogs) {
  const json doc = {{"config", to_json(cfg)}, {"catalogs", catalogs.to_json()}, {"version", kToolVersion}};
  return sha256_hex(doc.dump());
}

}  // namespace lawsmells
