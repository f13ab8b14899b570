#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lawsmells/corpus.hpp"

namespace lawsmells {

enum class SmellKind {
  duplicated_phrase,
  long_element,
  ambiguous_syntax,
  large_reference_tree,
  long_reference_chain,
  nlo,
};

inline constexpr SmellKind kAllSmells[] = {
    SmellKind::duplicated_phrase,    SmellKind::long_element,
    SmellKind::ambiguous_syntax,     SmellKind::large_reference_tree,
    SmellKind::long_reference_chain, SmellKind::nlo,
};

std::string_view to_string(SmellKind k);
/// Throws Error on unknown names.
SmellKind smell_from_string(std::string_view name);

/// Uniform record emitted by every detector.
///
/// Metric keys are fixed per kind:
///   duplicated_phrase    length, abs_count, rel_per_1000, bits_gained
///   long_element         tokens, threshold
///   ambiguous_syntax     begin, end
///   large_reference_tree size, tree_edges, cycle_edges, depth, weight,
///                        distinct_sequence, distinct_top, threshold
///   long_reference_chain depth, size, threshold
///   nlo                  mentions plus one count per entity type present
struct SmellFinding {
  SmellKind kind = SmellKind::long_element;
  std::string snapshot;
  std::string element;
  std::optional<Span> span;
  std::map<std::string, double> metrics;
  std::string excerpt;
  std::string annotation;
  /// Document position of `element`, used only for ordering.
  std::size_t order = 0;

  bool operator==(const SmellFinding&) const = default;
};

nlohmann::json to_json(const SmellFinding& f);
SmellFinding finding_from_json(const nlohmann::json& j);

/// Excerpt of `text` around [span) with `context` bytes on each side, cut on
/// UTF-8 code point boundaries.
std::string excerpt_around(std::string_view text, Span span, std::size_t context = 40);

}  // namespace lawsmells
