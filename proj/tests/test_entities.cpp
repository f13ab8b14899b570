#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "lawsmells/entities.hpp"

using namespace lawsmells;
using fixtures::elem;
using fixtures::words;

namespace {

const std::vector<EntityType> kAll(std::begin(kAllEntityTypes), std::end(kAllEntityTypes));

std::vector<EntityMention> extract(const std::string& text, std::vector<EntityType> types = kAll) {
  return EntityCatalog::builtin().extract(text, types, "e");
}

template <typename T>
T only_value(const std::string& text, EntityType type) {
  auto ms = extract(text, {type});
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].type == type);
  return std::get<T>(ms[0].value);
}

std::string substituted(const std::string& text) {
  return substitute_placeholders(text, extract(text)).text;
}

DupexPhrase phrase_of(const std::string& text, std::size_t usage) {
  DupexPhrase p;
  p.terms = tokenize(text).tokens;
  p.usage = usage;
  p.abs_count = usage;
  return p;
}

}  // namespace

TEST_CASE("data exemplars normalize") {
  CHECK(only_value<Money>("$1,000", EntityType::money).amount == 1000);
  CHECK(only_value<Money>("a fine of $5,000,000 or", EntityType::money).amount == 5000000);
  auto pct = only_value<Percentage>("50 percent", EntityType::percentage);
  CHECK(pct == Percentage{50, 100});
  CHECK(pct == Percentage{1, 2});
  CHECK(only_value<Percentage>("12.5 per centum", EntityType::percentage) == Percentage{125, 1000});
  CHECK(only_value<Percentage>("7%", EntityType::percentage) == Percentage{7, 100});
  CHECK(only_value<TimePeriod>("30 days", EntityType::time_period) == TimePeriod{30, PeriodUnit::day});
  CHECK(only_value<TimePeriod>("one year", EntityType::time_period) == TimePeriod{1, PeriodUnit::year});
  CHECK(only_value<TimePeriod>("twenty-four months", EntityType::time_period) == TimePeriod{24, PeriodUnit::month});
  CHECK(only_value<TimePoint>("January 1", EntityType::time_point) == TimePoint{1, 1, std::nullopt});
  CHECK(only_value<TimePoint>("before October 1, 2019,", EntityType::time_point) == TimePoint{10, 1, 2019});
}

TEST_CASE("committee and other types") {
  auto c = only_value<Committee>("the committee on homeland security and governmental affairs of the senate",
                                 EntityType::committee);
  CHECK(c.topic == "homeland security and governmental affairs");
  CHECK(c.parent == "senate");
  CHECK(c.abbreviation() == "S: homeland security and governmental affairs");
  auto h = only_value<Committee>("the Committee on Ways and Means of the House of Representatives",
                                 EntityType::committee);
  CHECK(h.topic == "ways and means");
  CHECK(h.parent == "house of representatives");
  CHECK(h.abbreviation() == "H: ways and means");
  auto r = only_value<ReferenceLabel>("under section 5538 of title 12", EntityType::reference);
  CHECK(r.kind == "section");
  CHECK(r.label == "5538");
  CHECK(r.title == std::optional<std::string>("12"));
  CHECK(only_value<DefinedTerm>("the term \"covered loan\" means", EntityType::term).text == "covered loan");
}

TEST_CASE("conservative bounds") {
  CHECK(extract("5,000 dollars", {EntityType::money}).empty());
  CHECK(extract("thirtydays", {EntityType::time_period}).empty());
  CHECK(extract("Januaryx 1", {EntityType::time_point}).empty());
  CHECK(extract("the committee on finance", {EntityType::committee}).empty());
}

TEST_CASE("overlaps") {
  SUBCASE("a point beats an overlapping period") {
    auto ms = extract("by January 30 days", {EntityType::time_period, EntityType::time_point});
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].type == EntityType::time_point);
  }
  SUBCASE("higher priority wins on substitution") {
    const std::string text = "see section 5 percent";
    auto ms = extract(text, {EntityType::reference, EntityType::percentage});
    REQUIRE(ms.size() == 2);
    auto sub = substitute_placeholders(text, ms);
    CHECK(sub.text == "see {reference} percent");
    CHECK(sub.dropped.size() == 1);
    CHECK(sub.bindings.size() == 1);
  }
  SUBCASE("longest match within a type") {
    auto ms = extract("January 1, 2020", {EntityType::time_point});
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].raw == "January 1, 2020");
  }
}

TEST_CASE("placeholder substitution") {
  CHECK(substituted("not later than 30 days after January 1") == "not later than {period} after {date}");
  CHECK(substituted("nothing to see here") == "nothing to see here");
  CHECK(substituted("the term \xE2\x80\x98X\xE2\x80\x99 means") == "the term {term} means");
  CHECK(substituted("the term 'covered loan' means") == "the term {term} means");
  CHECK(substituted("pay $1,000.") == "pay {money}.");
  auto sub = substitute_placeholders("within 30 days", extract("within 30 days"));
  REQUIRE(sub.bindings.size() == 1);
  CHECK(sub.bindings[0].placeholder == "{period}");
  CHECK(std::get<TimePeriod>(sub.bindings[0].value) == TimePeriod{30, PeriodUnit::day});
  CHECK(placeholder(EntityType::committee).empty());
}

TEST_CASE("property: one token per placeholder, counts equal mentions") {
  std::mt19937_64 rng(13);
  const std::vector<std::string> pieces = {"$1,000", "50 percent", "30 days", "January 1", "section 12",
                                           "the term 'foo' means", "shall", "not later than", "after", "or",
                                           "x", ",", "$25", "3 years", "March 15, 2001", "chapter 7"};
  const std::set<std::string> placeholders = {"{money}", "{percentage}", "{period}", "{date}", "{term}", "{reference}"};
  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    for (int i = 0; i < 12; ++i) text += pieces[rng() % pieces.size()] + (rng() % 4 ? " " : "");
    auto ms = extract(text);
    auto sub = substitute_placeholders(text, ms);
    std::map<std::string, std::size_t> tokens, bound;
    for (const auto& t : tokenize(sub.text).tokens) {
      if (placeholders.count(t)) tokens[t]++;
    }
    for (const auto& b : sub.bindings) bound[b.placeholder]++;
    CHECK(tokens == bound);
    std::size_t substitutable = 0;
    for (const auto& m : ms) substitutable += !placeholder(m.type).empty();
    CHECK(sub.bindings.size() + sub.dropped.size() == substitutable);
  }
}

TEST_CASE("property: normalized values re-serialize to matching text") {
  std::mt19937_64 rng(19);
  const auto& cat = EntityCatalog::builtin();
  const std::vector<std::string> samples = {"$1,000",    "$3",          "50 percent",   "2.5%",
                                            "30 days",   "one week",    "six months",   "January 1",
                                            "June 30, 1999", "section 101", "chapter 3 of title 42",
                                            "the term 'x' means", "committee on finance of the senate"};
  for (const auto& s : samples) {
    auto ms = extract(s);
    REQUIRE_FALSE(ms.empty());
    for (const auto& m : ms) {
      const auto surface = surface_form(m.value);
      CHECK_MESSAGE(cat.matches_whole(m.type, surface), surface);
      auto again = normalize(m.type, surface);
      REQUIRE(again.has_value());
      CHECK(*again == m.value);
    }
  }
  for (int i = 0; i < 200; ++i) {
    Money m{rng() % 100000000};
    CHECK(cat.matches_whole(EntityType::money, surface_form(m)));
    CHECK(std::get<Money>(*normalize(EntityType::money, surface_form(m))) == m);
    TimePeriod p{1 + rng() % 500, static_cast<PeriodUnit>(rng() % 4)};
    CHECK(std::get<TimePeriod>(*normalize(EntityType::time_period, surface_form(p))) == p);
  }
}

TEST_CASE("snapshot extraction and parametrized tokens") {
  auto s = fixtures::snapshot("d", {"t"},
                              {elem("t", "title", "", {"a", "b"}), elem("a", "section", "pay $1,000 within 30 days"),
                               elem("b", "section", "by January 1, 2020")});
  std::vector<EntityType> data(std::begin(kDataEntityTypes), std::end(kDataEntityTypes));
  auto ms = extract_entities(s, data);
  REQUIRE(ms.size() == 3);
  CHECK(ms[0].element == "a");
  CHECK(ms[2].element == "b");
  CHECK(s.at("a").text.substr(ms[0].span.begin, ms[0].span.size()) == "$1,000");
  auto toks = parametrized_tokens(s, "t", true);
  CHECK(toks.tokens == std::vector<std::string>{"pay", "{money}", "within", "{period}", "by", "{date}"});
}

TEST_CASE("entity density") {
  SUBCASE("arithmetic and absent scopes") {
    auto s = fixtures::snapshot("d", {"t1", "t2"},
                                {elem("t1", "title", "$5 and $6 " + words(3997)), elem("t2", "title", "")});
    std::vector<EntityType> types = {EntityType::money};
    auto m = entity_density(s, types);
    REQUIRE(m.scopes == std::vector<std::string>{"t1", "t2"});
    CHECK(m.counts[0][0] == 2);
    CHECK(m.scope_tokens[0] == 4000);
    CHECK(*m.per_1000[0][0] == doctest::Approx(0.5));
    CHECK_FALSE(m.per_1000[1][0].has_value());
    CHECK(m.cap == doctest::Approx(0.5));
  }
  SUBCASE("brute-force recount") {
    std::mt19937_64 rng(2);
    const std::vector<std::string> pieces = {"$7", "10 percent", "2 weeks", "May 4", "w", "x y", "z"};
    std::vector<Element> es;
    std::vector<std::string> roots;
    for (int r = 0; r < 5; ++r) {
      std::string text;
      for (int i = 0; i < 40; ++i) text += pieces[rng() % pieces.size()] + " ";
      roots.push_back("r" + std::to_string(r));
      es.push_back(elem(roots.back(), "title", text));
    }
    auto s = fixtures::snapshot("d", roots, es);
    std::vector<EntityType> data(std::begin(kDataEntityTypes), std::end(kDataEntityTypes));
    auto m = entity_density(s, data);
    for (std::size_t r = 0; r < roots.size(); ++r) {
      const auto& text = s.at(roots[r]).text;
      for (std::size_t t = 0; t < data.size(); ++t) {
        std::size_t count = 0;
        const std::string needle = std::vector<std::string>{"$7", "10 percent", "2 weeks", "May 4"}[t];
        for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++count;
        CHECK(m.counts[r][t] == count);
        CHECK(*m.per_1000[r][t] == doctest::Approx(1000.0 * count / s.inclusive_tokens(roots[r])));
      }
    }
  }
}

TEST_CASE("committee registry") {
  auto reg = CommitteeRegistry::load(std::filesystem::path(LAWSMELLS_DATA_DIR) / "committee_registry.csv");
  Committee old{"governmental affairs", "senate"};
  Committee current{"homeland security and governmental affairs", "senate"};
  REQUIRE(reg.find(old) != nullptr);
  CHECK(reg.find(old)->active_to == std::optional<int>(2004));
  CHECK(reg.defunct(old, 2019));
  CHECK_FALSE(reg.defunct(old, 2003));
  CHECK(reg.defunct(old, std::nullopt));
  CHECK_FALSE(reg.defunct(current, 2019));
  CHECK_FALSE(reg.defunct(Committee{"unknown", "senate"}, 2019));
  std::istringstream bad("abbrev,full_name,parent,active_from,active_to\nS: x,Committee on x of the Senate,senate,19x9,\n");
  CHECK_THROWS_AS(CommitteeRegistry::from_csv(bad), Error);
}

TEST_CASE("committee profiles") {
  auto scope_snapshot = [](const std::vector<std::string>& ids) {
    std::vector<Element> es;
    for (const auto& id : ids) es.push_back(elem(id, "title", words(1000)));
    return fixtures::snapshot("2019", ids, es);
  };
  const std::string fin = "committee on finance of the senate";
  const std::string arm = "committee on armed services of the senate";
  const std::string wam = "committee on ways and means of the house of representatives";
  const std::string jud = "committee on the judiciary of the house of representatives";
  SUBCASE("single committee in a single scope") {
    auto s = scope_snapshot({"t1"});
    auto p = committee_profiles({{"t1", {phrase_of("reported by the " + fin, 3)}}}, s);
    REQUIRE(p.rows.size() == 1);
    REQUIRE(p.columns.size() == 1);
    CHECK(p.cells[0][0] == doctest::Approx(3.0));
    CHECK_FALSE(p.row_clustering.has_value());
    CHECK_FALSE(p.column_clustering.has_value());
  }
  SUBCASE("zero rows and columns are dropped") {
    auto s = scope_snapshot({"t1", "t2"});
    auto p = committee_profiles({{"t1", {phrase_of(fin, 2)}}, {"t2", {phrase_of("no committees here", 9)}}}, s);
    CHECK(p.columns == std::vector<std::string>{"t1"});
  }
  SUBCASE("collinear columns merge at distance zero") {
    auto s = scope_snapshot({"a", "b", "c"});
    auto p = committee_profiles({{"a", {phrase_of(fin, 1), phrase_of(arm, 2), phrase_of(wam, 3)}},
                                 {"b", {phrase_of(fin, 3), phrase_of(arm, 1), phrase_of(wam, 2)}},
                                 {"c", {phrase_of(fin, 2), phrase_of(arm, 4), phrase_of(wam, 6)}}},
                                s);
    REQUIRE(p.column_clustering.has_value());
    const auto& m = p.column_clustering->merges[0];
    CHECK(m.distance == doctest::Approx(0.0));
    CHECK(std::set<std::size_t>{m.left, m.right} == std::set<std::size_t>{0, 2});
  }
  SUBCASE("planted 4x4 blocks") {
    auto s = scope_snapshot({"a", "b", "c", "d"});
    auto p = committee_profiles({{"a", {phrase_of(fin, 5), phrase_of(arm, 4)}},
                                 {"b", {phrase_of(fin, 3), phrase_of(arm, 6)}},
                                 {"c", {phrase_of(wam, 7), phrase_of(jud, 2)}},
                                 {"d", {phrase_of(wam, 1), phrase_of(jud, 5)}}},
                                s);
    REQUIRE(p.rows.size() == 4);
    REQUIRE(p.row_clustering.has_value());
    REQUIRE(p.column_clustering.has_value());
    auto first_two = [](const Dendrogram& d) {
      std::set<std::set<std::size_t>> out;
      for (int i = 0; i < 2; ++i) out.insert({d.merges[i].left, d.merges[i].right});
      return out;
    };
    std::map<std::string, std::size_t> row;
    for (std::size_t i = 0; i < p.rows.size(); ++i) row[p.rows[i]] = i;
    CHECK(first_two(*p.row_clustering) ==
          std::set<std::set<std::size_t>>{{row["S: finance"], row["S: armed services"]},
                                          {row["H: ways and means"], row["H: the judiciary"]}});
    CHECK(first_two(*p.column_clustering) == std::set<std::set<std::size_t>>{{0, 1}, {2, 3}});
  }
  SUBCASE("nested usage counts once and defunct flags come from the registry") {
    auto reg = CommitteeRegistry::load(std::filesystem::path(LAWSMELLS_DATA_DIR) / "committee_registry.csv");
    auto s = scope_snapshot({"a"});
    auto p = committee_profiles(
        {{"a", {phrase_of("committee on governmental affairs of the senate", 4), phrase_of(fin, 0)}}}, s, &reg);
    REQUIRE(p.rows.size() == 1);
    CHECK(p.rows[0] == "S: governmental affairs");
    CHECK(p.defunct[0]);
    CHECK(p.cells[0][0] == doctest::Approx(4.0));
  }
}

TEST_CASE("catalog round-trip and shipped file") {
  const auto& cat = EntityCatalog::builtin();
  auto again = EntityCatalog::from_json(cat.to_json());
  CHECK(again.to_json() == cat.to_json());
  auto shipped = EntityCatalog::load(std::filesystem::path(LAWSMELLS_DATA_DIR) / "entity_catalog.json");
  CHECK(shipped.to_json() == cat.to_json());
  CHECK(cat.priority(EntityType::reference) > cat.priority(EntityType::term));
  CHECK(cat.priority(EntityType::term) > cat.priority(EntityType::money));
  CHECK(cat.priority(EntityType::money) > cat.priority(EntityType::percentage));
  CHECK(cat.priority(EntityType::percentage) > cat.priority(EntityType::time_period));
  CHECK(cat.priority(EntityType::time_period) > cat.priority(EntityType::time_point));
  CHECK_THROWS_AS(EntityCatalog::from_json(nlohmann::json::parse(R"([{"type": "money"}])")), Error);
  CHECK_THROWS_AS(EntityCatalog::from_json(nlohmann::json::parse(R"([{"type": "money", "pattern": "("}])")), Error);
}
