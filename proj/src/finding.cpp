#include "lawsmells/finding.hpp"

namespace lawsmells {

using nlohmann::json;

std::string_view to_string(SmellKind k) {
  switch (k) {
    case SmellKind::duplicated_phrase: return "duplicated_phrase";
    case SmellKind::long_element: return "long_element";
    case SmellKind::ambiguous_syntax: return "ambiguous_syntax";
    case SmellKind::large_reference_tree: return "large_reference_tree";
    case SmellKind::long_reference_chain: return "long_reference_chain";
    case SmellKind::nlo: return "nlo";
  }
  return "unknown";
}

SmellKind smell_from_string(std::string_view name) {
  for (auto k : kAllSmells) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown smell '" + std::string(name) + "'");
}

json to_json(const SmellFinding& f) {
  json j;
  j["kind"] = to_string(f.kind);
  j["snapshot"] = f.snapshot;
  j["element"] = f.element;
  j["span"] = f.span ? json::array({f.span->begin, f.span->end}) : json(nullptr);
  j["metrics"] = f.metrics;
  j["excerpt"] = f.excerpt;
  j["annotation"] = f.annotation;
  j["order"] = f.order;
  return j;
}

SmellFinding finding_from_json(const json& j) {
  SmellFinding f;
  f.kind = smell_from_string(j.at("kind").get<std::string>());
  f.snapshot = j.at("snapshot").get<std::string>();
  f.element = j.at("element").get<std::string>();
  if (j.contains("span") && j.at("span").is_array()) {
    f.span = Span{j.at("span").at(0).get<std::size_t>(), j.at("span").at(1).get<std::size_t>()};
  }
  f.metrics = j.at("metrics").get<std::map<std::string, double>>();
  f.excerpt = j.value("excerpt", "");
  f.annotation = j.value("annotation", "");
  f.order = j.value("order", std::size_t{0});
  return f;
}

namespace {

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

}  // namespace

std::string excerpt_around(std::string_view text, Span span, std::size_t context) {
  std::size_t begin = span.begin > context ? span.begin - context : 0;
  std::size_t end = std::min(text.size(), span.end + context);
  while (begin > 0 && is_continuation(static_cast<unsigned char>(text[begin]))) --begin;
  while (end < text.size() && is_continuation(static_cast<unsigned char>(text[end]))) ++end;
  return std::string(text.substr(begin, end - begin));
}

}  // namespace lawsmells
