#include "lawsmells/entities.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "lawsmells/csv.hpp"

namespace lawsmells {

using nlohmann::json;

namespace {

constexpr std::string_view kMonths[] = {"january", "february", "march",     "april",
                                        "may",     "june",     "july",      "august",
                                        "september", "october", "november", "december"};

constexpr std::string_view kNumberWords[] = {
    "one",     "two",     "three",     "four",     "five",    "six",     "seven",
    "eight",   "nine",    "ten",       "eleven",   "twelve",  "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};

constexpr std::pair<std::string_view, int> kTens[] = {
    {"thirty", 30}, {"forty", 40}, {"fifty", 50}, {"sixty", 60},
    {"seventy", 70}, {"eighty", 80}, {"ninety", 90}};

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\n\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

std::optional<std::uint64_t> parse_digits(std::string_view s) {
  std::string digits;
  for (char c : s) {
    if (c == ',') continue;
    if (c < '0' || c > '9') return std::nullopt;
    digits.push_back(c);
  }
  if (digits.empty()) return std::nullopt;
  std::uint64_t v = 0;
  auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (res.ec != std::errc{}) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_count(std::string_view word) {
  if (auto v = parse_digits(word)) return v;
  // "twenty-four", "thirty one"
  if (auto sep = word.find_first_of(" -"); sep != std::string_view::npos) {
    auto tens = parse_count(word.substr(0, sep));
    auto unit = parse_count(word.substr(sep + 1));
    if (tens && unit && *tens >= 20 && *tens % 10 == 0 && *unit < 10) return *tens + *unit;
    return std::nullopt;
  }
  for (std::size_t i = 0; i < std::size(kNumberWords); ++i) {
    if (word == kNumberWords[i]) return i + 1;
  }
  for (auto [w, v] : kTens) {
    if (word == w) return static_cast<std::uint64_t>(v);
  }
  return std::nullopt;
}

std::string group_thousands(std::uint64_t v) {
  auto digits = std::to_string(v);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

std::string_view unit_name(PeriodUnit u) {
  switch (u) {
    case PeriodUnit::day: return "day";
    case PeriodUnit::week: return "week";
    case PeriodUnit::month: return "month";
    case PeriodUnit::year: return "year";
  }
  return "day";
}

std::string number_alternation() {
  std::string tens = "(?:twenty";
  for (auto [w, v] : kTens) tens += "|" + std::string(w);
  tens += ")";
  std::string units = "(?:";
  for (std::size_t i = 0; i < 9; ++i) units += (i ? "|" : "") + std::string(kNumberWords[i]);
  units += ")";
  std::string out = R"((?:\d{1,3}(?:,\d{3})+|\d+|)" + tens + "[- ]" + units;
  for (auto w : kNumberWords) out += "|" + std::string(w);
  for (auto [w, v] : kTens) out += "|" + std::string(w);
  return out + ")";
}

std::string month_alternation() {
  std::string out = "(?:";
  for (std::size_t i = 0; i < std::size(kMonths); ++i) {
    if (i) out += "|";
    out += kMonths[i];
  }
  return out + ")";
}

// Placeholder substitution ranks below any data type.
constexpr int kCommitteePriority = 0;

}  // namespace

std::string_view to_string(EntityType t) {
  switch (t) {
    case EntityType::money: return "money";
    case EntityType::percentage: return "percentage";
    case EntityType::time_period: return "time_period";
    case EntityType::time_point: return "time_point";
    case EntityType::term: return "term";
    case EntityType::reference: return "reference";
    case EntityType::committee: return "committee";
  }
  return "unknown";
}

EntityType entity_type_from_string(std::string_view name) {
  for (auto t : kAllEntityTypes) {
    if (to_string(t) == name) return t;
  }
  throw Error("unknown entity type '" + std::string(name) + "'");
}

std::string_view placeholder(EntityType t) {
  switch (t) {
    case EntityType::money: return "{money}";
    case EntityType::percentage: return "{percentage}";
    case EntityType::time_period: return "{period}";
    case EntityType::time_point: return "{date}";
    case EntityType::term: return "{term}";
    case EntityType::reference: return "{reference}";
    case EntityType::committee: return "";
  }
  return "";
}

std::string Committee::abbreviation() const {
  const char initial = parent.empty() ? '?' : static_cast<char>(std::toupper(parent[0]));
  return std::string(1, initial) + ": " + topic;
}

std::string Committee::full_name() const {
  return "committee on " + topic + " of the " + parent;
}

std::string surface_form(const EntityValue& v) {
  struct Visitor {
    std::string operator()(const Money& m) const { return "$" + group_thousands(m.amount); }
    std::string operator()(const Percentage& p) const {
      // denominator is 100 * 10^k
      std::uint64_t scale = p.denominator / 100;
      std::size_t decimals = 0;
      while (scale > 1) {
        scale /= 10;
        ++decimals;
      }
      auto digits = std::to_string(p.numerator);
      if (decimals > 0) {
        if (digits.size() <= decimals) digits.insert(0, decimals - digits.size() + 1, '0');
        digits.insert(digits.size() - decimals, ".");
      }
      return digits + " percent";
    }
    std::string operator()(const TimePeriod& t) const {
      return std::to_string(t.count) + " " + std::string(unit_name(t.unit)) +
             (t.count == 1 ? "" : "s");
    }
    std::string operator()(const TimePoint& t) const {
      std::string m(kMonths[static_cast<std::size_t>(t.month - 1)]);
      m[0] = static_cast<char>(std::toupper(m[0]));
      auto out = m + " " + std::to_string(t.day);
      if (t.year) out += ", " + std::to_string(*t.year);
      return out;
    }
    std::string operator()(const DefinedTerm& t) const { return "the term \"" + t.text + "\""; }
    std::string operator()(const ReferenceLabel& r) const {
      auto out = r.kind + " " + r.label;
      if (r.title) out += " of title " + *r.title;
      return out;
    }
    std::string operator()(const Committee& c) const { return c.full_name(); }
  };
  return std::visit(Visitor{}, v);
}

std::optional<EntityValue> normalize(EntityType type, std::string_view raw_in) {
  const auto raw = collapse_spaces(ascii_lower(raw_in));
  switch (type) {
    case EntityType::money: {
      if (raw.empty() || raw[0] != '$') return std::nullopt;
      auto v = parse_digits(std::string_view(raw).substr(1));
      if (!v) return std::nullopt;
      return Money{*v};
    }
    case EntityType::percentage: {
      std::size_t i = 0;
      while (i < raw.size() && (std::isdigit(static_cast<unsigned char>(raw[i])) || raw[i] == ',' ||
                                raw[i] == '.')) {
        ++i;
      }
      auto number = raw.substr(0, i);
      auto dot = number.find('.');
      std::string whole = number.substr(0, dot);
      std::string frac = dot == std::string::npos ? "" : number.substr(dot + 1);
      auto num = parse_digits(whole + frac);
      if (!num || frac.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
      std::uint64_t den = 100;
      for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
      return Percentage{*num, den};
    }
    case EntityType::time_period: {
      auto sep = raw.find_last_of(" -");  // the unit is the last word
      if (sep == std::string::npos) return std::nullopt;
      auto count = parse_count(std::string_view(raw).substr(0, sep));
      if (!count) return std::nullopt;
      auto unit = raw.substr(sep + 1);
      if (unit.ends_with("s")) unit.pop_back();
      for (auto u : {PeriodUnit::day, PeriodUnit::week, PeriodUnit::month, PeriodUnit::year}) {
        if (unit == unit_name(u)) return TimePeriod{*count, u};
      }
      return std::nullopt;
    }
    case EntityType::time_point: {
      for (std::size_t m = 0; m < std::size(kMonths); ++m) {
        if (!raw.starts_with(kMonths[m]) || raw.size() <= kMonths[m].size() ||
            raw[kMonths[m].size()] != ' ') {
          continue;
        }
        std::string_view rest = std::string_view(raw).substr(kMonths[m].size() + 1);
        auto comma = rest.find(',');
        auto day = parse_digits(rest.substr(0, comma));
        if (!day || *day < 1 || *day > 31) return std::nullopt;
        TimePoint tp{static_cast<int>(m + 1), static_cast<int>(*day), std::nullopt};
        if (comma != std::string_view::npos) {
          auto year = parse_digits(trim(rest.substr(comma + 1)));
          if (!year) return std::nullopt;
          tp.year = static_cast<int>(*year);
        }
        return tp;
      }
      return std::nullopt;
    }
    case EntityType::term: {
      // Keep the original case of the defined term.
      std::string_view s = raw_in;
      auto t = trim(s);
      s = t;
      if (ascii_lower(s.substr(0, 8)) == "the term") s = s.substr(8);
      auto inner = trim(s);
      for (auto [open, close] : {std::pair<std::string_view, std::string_view>{"\"", "\""},
                                 {"'", "'"},
                                 {"\xE2\x80\x98", "\xE2\x80\x99"},
                                 {"\xE2\x80\x9C", "\xE2\x80\x9D"}}) {
        if (inner.size() > open.size() + close.size() && std::string_view(inner).starts_with(open) &&
            std::string_view(inner).ends_with(close)) {
          return DefinedTerm{inner.substr(open.size(), inner.size() - open.size() - close.size())};
        }
      }
      return std::nullopt;
    }
    case EntityType::reference: {
      std::istringstream in(raw);
      ReferenceLabel r;
      if (!(in >> r.kind >> r.label)) return std::nullopt;
      std::string of, title_word, title;
      if (in >> of) {
        if (of != "of" || !(in >> title_word >> title) || title_word != "title") return std::nullopt;
        r.title = title;
      }
      return r;
    }
    case EntityType::committee: {
      constexpr std::string_view prefix = "committee on ";
      if (!raw.starts_with(prefix)) return std::nullopt;
      for (std::string_view parent : {"senate", "house of representatives"}) {
        const auto suffix = " of the " + std::string(parent);
        if (raw.ends_with(suffix) && raw.size() > prefix.size() + suffix.size()) {
          auto topic = trim(std::string_view(raw).substr(prefix.size(),
                                                         raw.size() - prefix.size() - suffix.size()));
          // Token-joined phrase text detaches commas.
          for (auto at = topic.find(" ,"); at != std::string::npos; at = topic.find(" ,")) {
            topic.erase(at, 1);
          }
          return Committee{std::move(topic), std::string(parent)};
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

EntityCatalog EntityCatalog::builtin() {
  const auto number = number_alternation();
  std::vector<EntityPattern> p = {
      {EntityType::money, R"(\$(?:\d{1,3}(?:,\d{3})+|\d+)(?!\d|,\d|\.\d))", 4},
      {EntityType::percentage,
       R"(\b(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?(?:\s+percent\b|\s+per\s+centum\b|\s*%))", 3},
      {EntityType::time_period, R"(\b)" + number + R"((?:\s+|-)(?:day|week|month|year)s?\b)", 2},
      {EntityType::time_point,
       R"(\b)" + month_alternation() + R"(\s+\d{1,2}\b(?:,\s*\d{4}\b)?)", 1},
      {EntityType::term,
       "\\bthe term\\s+(\"[^\"]{1,200}\"|'[^']{1,200}'|"
       "\xE2\x80\x98(?:(?!\xE2\x80\x99)[\\s\\S]){1,400}\xE2\x80\x99|"
       "\xE2\x80\x9C(?:(?!\xE2\x80\x9D)[\\s\\S]){1,400}\xE2\x80\x9D)",
       5},
      {EntityType::reference,
       R"(\b(?:section|subchapter|chapter|part|title)\s+(?:\d+[a-z]*(?:-\d+[a-z]*)*(?:\([a-z0-9]+\))*|(?:x{1,3}(?:ix|iv|v?i{0,3})|ix|iv|v?i{1,3}|v)\b)(?:\s+of\s+title\s+\d+\b)?)",
       6},
      {EntityType::committee,
       R"(\bcommittee on (?:(?:(?!committee\b)[a-z,'\-]+\s+){1,10}?)of the (?:senate|house of representatives)\b)",
       kCommitteePriority},
  };
  return EntityCatalog(std::move(p));
}

EntityCatalog::EntityCatalog(std::vector<EntityPattern> patterns) : patterns_(std::move(patterns)) {
  for (const auto& p : patterns_) {
    try {
      compiled_.push_back(std::make_shared<const std::regex>(p.pattern, std::regex::ECMAScript |
                                                                            std::regex::optimize));
    } catch (const std::regex_error& e) {
      throw Error("invalid " + std::string(to_string(p.type)) + " pattern: " + e.what());
    }
  }
}

EntityCatalog EntityCatalog::from_json(const json& j) {
  if (!j.is_array()) throw Error("entity catalog must be a JSON array");
  std::vector<EntityPattern> p;
  try {
    for (const auto& e : j) {
      p.push_back({entity_type_from_string(e.at("type").get<std::string>()),
                   e.at("pattern").get<std::string>(), e.value("priority", 0)});
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed entity catalog: ") + e.what());
  }
  return EntityCatalog(std::move(p));
}

EntityCatalog EntityCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open entity catalog " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error("malformed entity catalog " + path.string() + ": " + e.what());
  }
}

json EntityCatalog::to_json() const {
  json out = json::array();
  for (const auto& p : patterns_) {
    out.push_back({{"type", to_string(p.type)}, {"pattern", p.pattern}, {"priority", p.priority}});
  }
  return out;
}

int EntityCatalog::priority(EntityType t) const {
  int best = std::numeric_limits<int>::min();
  for (const auto& p : patterns_) {
    if (p.type == t) best = std::max(best, p.priority);
  }
  return best == std::numeric_limits<int>::min() ? 0 : best;
}

bool EntityCatalog::matches_whole(EntityType type, std::string_view text) const {
  const auto lowered = ascii_lower(text);
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    if (patterns_[i].type == type && std::regex_match(lowered, *compiled_[i])) return true;
  }
  return false;
}

std::vector<EntityMention> EntityCatalog::extract(std::string_view text,
                                                  std::span<const EntityType> types,
                                                  std::string_view element) const {
  const auto lowered = ascii_lower(text);
  std::vector<EntityMention> out;
  for (auto type : types) {
    std::vector<EntityMention> found;
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
      if (patterns_[i].type != type) continue;
      const auto& re = *compiled_[i];
      for (std::sregex_iterator it(lowered.begin(), lowered.end(), re), end; it != end; ++it) {
        const auto& m = *it;
        const bool group = re.mark_count() >= 1 && m[1].matched;
        const auto begin = static_cast<std::size_t>(group ? m.position(1) : m.position(0));
        const auto len = static_cast<std::size_t>(group ? m.length(1) : m.length(0));
        if (len == 0) continue;
        std::string raw(text.substr(begin, len));
        auto value = normalize(type, raw);
        if (!value) continue;
        found.push_back({type, std::string(element), {begin, begin + len}, std::move(raw),
                         std::move(*value)});
      }
    }
    // Longest match wins inside a type.
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
      if (a.span.size() != b.span.size()) return a.span.size() > b.span.size();
      return a.span.begin < b.span.begin;
    });
    std::vector<EntityMention> kept;
    for (auto& m : found) {
      bool clash = std::any_of(kept.begin(), kept.end(),
                               [&](const auto& k) { return k.span.overlaps(m.span); });
      if (!clash) kept.push_back(std::move(m));
    }
    for (auto& m : kept) out.push_back(std::move(m));
  }

  // A month name settles period-vs-point overlaps in favour of the point.
  std::vector<Span> points;
  for (const auto& m : out) {
    if (m.type == EntityType::time_point) points.push_back(m.span);
  }
  if (!points.empty()) {
    std::erase_if(out, [&](const EntityMention& m) {
      return m.type == EntityType::time_period &&
             std::any_of(points.begin(), points.end(), [&](const Span& p) { return p.overlaps(m.span); });
    });
  }

  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
    return static_cast<int>(a.type) < static_cast<int>(b.type);
  });
  return out;
}

std::vector<EntityMention> extract_entities(const Snapshot& s, std::span<const EntityType> types,
                                            const EntityCatalog& catalog) {
  std::vector<EntityMention> out;
  for (const auto& e : s.elements()) {
    if (e.text.empty()) continue;
    auto found = catalog.extract(e.text, types, e.id);
    out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  return out;
}

Substitution substitute_placeholders(std::string_view text, const std::vector<EntityMention>& mentions,
                                     const EntityCatalog& catalog) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    if (!placeholder(mentions[i].type).empty()) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto pa = catalog.priority(mentions[a].type);
    const auto pb = catalog.priority(mentions[b].type);
    if (pa != pb) return pa > pb;
    if (mentions[a].span.begin != mentions[b].span.begin) {
      return mentions[a].span.begin < mentions[b].span.begin;
    }
    return mentions[a].span.size() > mentions[b].span.size();
  });

  Substitution out;
  std::vector<std::size_t> kept;
  for (auto i : order) {
    const auto& span = mentions[i].span;
    if (span.end > text.size()) throw Error("mention span outside the text");
    bool clash = std::any_of(kept.begin(), kept.end(),
                             [&](std::size_t k) { return mentions[k].span.overlaps(span); });
    if (clash) {
      out.dropped.push_back(i);
    } else {
      kept.push_back(i);
    }
  }
  std::sort(kept.begin(), kept.end(),
            [&](std::size_t a, std::size_t b) { return mentions[a].span.begin < mentions[b].span.begin; });

  std::size_t pos = 0;
  for (auto i : kept) {
    const auto& m = mentions[i];
    out.text.append(text.substr(pos, m.span.begin - pos));
    if (!ends_at_boundary(out.text)) out.text.push_back(' ');
    const auto ph = placeholder(m.type);
    out.text.append(ph);
    if (!boundary_at(text, m.span.end)) out.text.push_back(' ');
    out.bindings.push_back({std::string(ph), i, m.value});
    pos = m.span.end;
  }
  out.text.append(text.substr(pos));
  return out;
}

TokenStream parametrized_tokens(const Snapshot& s, std::string_view id, bool include_descendants,
                                const EntityCatalog& catalog) {
  const auto first = s.index_of(id);
  if (first == Snapshot::npos) throw CorpusError("unknown element id '" + std::string(id) + "'");
  const auto last = include_descendants ? s.subtree_end(first) : first + 1;
  static constexpr EntityType substitutable[] = {
      EntityType::reference, EntityType::term,        EntityType::money,
      EntityType::percentage, EntityType::time_period, EntityType::time_point};
  TokenStream out;
  out.origin = std::string(id);
  std::size_t offset = 0;
  for (auto i = first; i < last; ++i) {
    const auto& text = s.at(i).text;
    auto sub = substitute_placeholders(text, catalog.extract(text, substitutable, s.at(i).id), catalog);
    auto part = tokenize(sub.text);
    out.tokens.insert(out.tokens.end(), std::make_move_iterator(part.tokens.begin()),
                      std::make_move_iterator(part.tokens.end()));
    for (const auto& sp : part.spans) out.spans.push_back({sp.begin + offset, sp.end + offset});
    offset += sub.text.size() + 1;
  }
  return out;
}

DensityMatrix entity_density(const Snapshot& s, std::span<const EntityType> types,
                             const EntityCatalog& catalog) {
  DensityMatrix m;
  m.types.assign(types.begin(), types.end());
  std::map<std::size_t, std::size_t> row_of_root;
  for (const auto& r : s.roots()) {
    const auto idx = s.index_of(r);
    row_of_root[idx] = m.scopes.size();
    m.scopes.push_back(r);
    m.scope_tokens.push_back(s.inclusive_tokens(idx));
    m.counts.emplace_back(types.size(), 0);
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.at(i).text.empty()) continue;
    const auto row = row_of_root.at(s.root_index(i));
    for (const auto& mention : catalog.extract(s.at(i).text, types)) {
      const auto col = static_cast<std::size_t>(
          std::find(m.types.begin(), m.types.end(), mention.type) - m.types.begin());
      ++m.counts[row][col];
    }
  }
  std::vector<double> present;
  for (std::size_t r = 0; r < m.scopes.size(); ++r) {
    std::vector<std::optional<double>> row;
    for (std::size_t c = 0; c < types.size(); ++c) {
      if (m.scope_tokens[r] == 0) {
        row.emplace_back(std::nullopt);
      } else {
        const double v = 1000.0 * static_cast<double>(m.counts[r][c]) /
                         static_cast<double>(m.scope_tokens[r]);
        row.emplace_back(v);
        present.push_back(v);
      }
    }
    m.per_1000.push_back(std::move(row));
  }
  if (!present.empty()) {
    std::sort(present.begin(), present.end());
    auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(present.size())));
    rank = std::clamp<std::size_t>(rank, 1, present.size());
    m.cap = present[rank - 1];
  }
  return m;
}

CommitteeRegistry CommitteeRegistry::from_csv(std::istream& in) {
  CommitteeRegistry reg;
  auto rows = csv::read(in);
  auto parse_year = [](const std::string& s) -> std::optional<int> {
    auto t = trim(s);
    if (t.empty()) return std::nullopt;
    int v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
      throw Error("committee registry: bad year '" + t + "'");
    }
    return v;
  };
  for (std::size_t i = 1; i < rows.size(); ++i) {  // header first
    const auto& r = rows[i];
    if (r.size() == 1 && trim(r[0]).empty()) continue;
    if (r.size() < 5) throw Error("committee registry: row " + std::to_string(i + 1) + " needs 5 columns");
    reg.records.push_back({trim(r[0]), trim(r[1]), trim(r[2]), parse_year(r[3]), parse_year(r[4])});
  }
  return reg;
}

CommitteeRegistry CommitteeRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open committee registry " + path.string());
  return from_csv(in);
}

const CommitteeRecord* CommitteeRegistry::find(const Committee& c) const {
  const auto full = c.full_name();
  const auto abbrev = ascii_lower(c.abbreviation());
  for (const auto& r : records) {
    if (collapse_spaces(ascii_lower(r.full_name)) == full || ascii_lower(r.abbrev) == abbrev) return &r;
  }
  return nullptr;
}

bool CommitteeRegistry::defunct(const Committee& c, std::optional<int> year) const {
  const auto* r = find(c);
  if (!r || !r->active_to) return false;
  return !year || *r->active_to < *year;
}

CommitteeProfile committee_profiles(const std::vector<ScopePhrases>& scopes, const Snapshot& s,
                                    const CommitteeRegistry* registry, const EntityCatalog& catalog) {
  static constexpr EntityType committee_only[] = {EntityType::committee};
  std::map<std::string, Committee> committees;             // by abbreviation
  std::map<std::string, std::vector<double>> raw_counts;   // abbreviation -> per scope
  std::vector<std::size_t> tokens;
  for (const auto& scope : scopes) tokens.push_back(s.inclusive_tokens(scope.scope));

  for (std::size_t col = 0; col < scopes.size(); ++col) {
    for (const auto& phrase : scopes[col].phrases) {
      for (const auto& m : catalog.extract(phrase.text(), committee_only)) {
        const auto& c = std::get<Committee>(m.value);
        const auto key = c.abbreviation();
        committees.emplace(key, c);
        auto& row = raw_counts[key];
        row.resize(scopes.size(), 0.0);
        row[col] += static_cast<double>(phrase.usage);
      }
    }
  }

  std::vector<std::size_t> live_cols;
  for (std::size_t col = 0; col < scopes.size(); ++col) {
    bool any = tokens[col] > 0 && std::any_of(raw_counts.begin(), raw_counts.end(),
                                              [&](const auto& kv) { return kv.second[col] > 0; });
    if (any) live_cols.push_back(col);
  }

  std::optional<int> year;
  {
    int y = 0;
    const auto& label = s.label();
    auto res = std::from_chars(label.data(), label.data() + label.size(), y);
    if (res.ec == std::errc{} && res.ptr == label.data() + label.size()) year = y;
  }

  CommitteeProfile p;
  for (auto col : live_cols) p.columns.push_back(scopes[col].scope);
  for (const auto& [abbrev, counts] : raw_counts) {
    std::vector<double> row;
    for (auto col : live_cols) {
      row.push_back(1000.0 * counts[col] / static_cast<double>(tokens[col]));
    }
    if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) continue;
    const auto& c = committees.at(abbrev);
    p.rows.push_back(abbrev);
    p.row_names.push_back(c.full_name());
    p.defunct.push_back(registry ? registry->defunct(c, year) : false);
    p.cells.push_back(std::move(row));
  }

  if (p.rows.size() >= 2 && p.columns.size() >= 2) {
    auto corr = [](const auto& a, const auto& b) { return correlation_distance(a, b); };
    p.row_clustering = agglomerate(pairwise(p.cells, corr), Linkage::average);
    std::vector<std::vector<double>> transposed(p.columns.size(), std::vector<double>(p.rows.size()));
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
      for (std::size_t c = 0; c < p.columns.size(); ++c) transposed[c][r] = p.cells[r][c];
    }
    p.column_clustering = agglomerate(pairwise(transposed, corr), Linkage::average);
  }
  return p;
}

json to_json(const EntityValue& v) {
  struct Visitor {
    json operator()(const Money& m) const { return {{"amount", m.amount}}; }
    json operator()(const Percentage& p) const {
      return {{"numerator", p.numerator}, {"denominator", p.denominator}};
    }
    json operator()(const TimePeriod& t) const {
      return {{"count", t.count}, {"unit", unit_name(t.unit)}};
    }
    json operator()(const TimePoint& t) const {
      return {{"month", t.month}, {"day", t.day}, {"year", t.year ? json(*t.year) : json(nullptr)}};
    }
    json operator()(const DefinedTerm& t) const { return {{"term", t.text}}; }
    json operator()(const ReferenceLabel& r) const {
      return {{"kind", r.kind}, {"label", r.label}, {"title", r.title ? json(*r.title) : json(nullptr)}};
    }
    json operator()(const Committee& c) const {
      return {{"topic", c.topic}, {"parent", c.parent}, {"abbreviation", c.abbreviation()}};
    }
  };
  auto out = std::visit(Visitor{}, v);
  out["surface"] = surface_form(v);
  return out;
}

json to_json(const DensityMatrix& m) {
  json types = json::array();
  for (auto t : m.types) types.push_back(to_string(t));
  json cells = json::array();
  for (const auto& row : m.per_1000) {
    json r = json::array();
    for (const auto& c : row) r.push_back(c ? json(*c) : json(nullptr));
    cells.push_back(std::move(r));
  }
  return {{"scopes", m.scopes}, {"types", std::move(types)}, {"scope_tokens", m.scope_tokens},
          {"counts", m.counts}, {"per_1000", std::move(cells)}, {"cap", m.cap}};
}

json to_json(const CommitteeProfile& p) {
  json defunct = json::array();
  for (bool d : p.defunct) defunct.push_back(d);
  return {{"rows", p.rows},
          {"row_names", p.row_names},
          {"defunct", std::move(defunct)},
          {"columns", p.columns},
          {"cells", p.cells},
          {"row_clustering", p.row_clustering ? to_json(*p.row_clustering) : json(nullptr)},
          {"column_clustering", p.column_clustering ? to_json(*p.column_clustering) : json(nullptr)}};
}

}  // namespace lawsmells
