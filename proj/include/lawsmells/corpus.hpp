#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace lawsmells {

/// Base class for every error raised by the library. The CLI maps these to
/// exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorpusError : public Error {
 public:
  using Error::Error;
};

/// Half-open byte range [begin, end) into some source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool overlaps(const Span& o) const { return begin < o.end && o.begin < end; }
  bool operator==(const Span&) const = default;
};

struct Element {
  std::string id;
  std::string kind;
  std::string label;
  std::optional<std::string> heading;
  std::string text;  // own text only
  std::vector<std::string> children;
  std::optional<std::string> parent;

  bool operator==(const Element&) const = default;
};

struct Reference {
  std::string source;
  std::string target;
  std::string raw;

  bool operator==(const Reference&) const = default;
};

struct TokenStream {
  std::vector<std::string> tokens;
  std::vector<Span> spans;
  std::string origin;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

/// Lowercases, splits on whitespace and detaches punctuation. Comma-grouped
/// digit runs ("5,000") stay whole.
TokenStream tokenize(std::string_view text, std::string origin = {});

/// True when a token boundary (whitespace or detached punctuation) starts at
/// byte `i`, or `i` is the end of the text.
bool boundary_at(std::string_view text, std::size_t i);
/// True when the text is empty or its last code point is whitespace or
/// detached punctuation.
bool ends_at_boundary(std::string_view text);

enum class DanglingPolicy { error, drop };

struct LoadReport {
  std::size_t dropped_references = 0;
  std::size_t self_references = 0;
};

/// One dated version of a legal corpus: a forest of elements plus resolved
/// references. Immutable after construction.
///
/// Elements are stored in document order (pre-order of each root, roots in
/// the listed order), so an element's index doubles as its document position.
class Snapshot {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Snapshot() = default;

  /// Validates the raw parts and builds the token index. Element `parent`
  /// fields are ignored on input and recomputed from `children`.
  static Snapshot build(std::string label, std::vector<std::string> roots,
                        std::vector<Element> elements,
                        std::vector<Reference> references,
                        DanglingPolicy on_dangling = DanglingPolicy::error,
                        LoadReport* report = nullptr);

  const std::string& label() const { return label_; }
  const std::vector<std::string>& roots() const { return roots_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Reference>& references() const { return references_; }
  std::size_t size() const { return elements_.size(); }

  bool contains(std::string_view id) const;
  /// Document position of `id`, or npos.
  std::size_t index_of(std::string_view id) const;
  const Element& at(std::string_view id) const;
  const Element& at(std::size_t index) const { return elements_.at(index); }

  std::size_t parent_index(std::size_t index) const { return parent_[index]; }
  const std::vector<std::size_t>& child_indices(std::size_t index) const {
    return children_[index];
  }
  /// Index of the forest root above `index` (itself for roots).
  std::size_t root_index(std::size_t index) const { return root_[index]; }
  /// One past the last descendant of `index` in document order.
  std::size_t subtree_end(std::size_t index) const { return subtree_end_[index]; }
  std::size_t depth(std::size_t index) const { return depth_[index]; }
  /// Nearest ancestor-or-self of the given kind, or npos.
  std::size_t ancestor_of_kind(std::size_t index, std::string_view kind) const;

  std::size_t own_tokens(std::size_t index) const { return own_tokens_[index]; }
  std::size_t inclusive_tokens(std::size_t index) const {
    return inclusive_tokens_[index];
  }
  std::size_t own_tokens(std::string_view id) const {
    return own_tokens_[checked_index(id)];
  }
  std::size_t inclusive_tokens(std::string_view id) const {
    return inclusive_tokens_[checked_index(id)];
  }
  std::size_t total_tokens() const;

  /// Elements of `kind` in document order. Sequence edges are implied by this
  /// order for the sequence kind.
  std::vector<std::size_t> elements_of_kind(std::string_view kind) const;

  bool operator==(const Snapshot& o) const {
    return label_ == o.label_ && roots_ == o.roots_ && elements_ == o.elements_ &&
           references_ == o.references_;
  }

 private:
  std::size_t checked_index(std::string_view id) const;

  std::string label_;
  std::vector<std::string> roots_;
  std::vector<Element> elements_;
  std::vector<Reference> references_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> parent_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> root_;
  std::vector<std::size_t> subtree_end_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> own_tokens_;
  std::vector<std::size_t> inclusive_tokens_;
};

Snapshot snapshot_from_json(const nlohmann::json& doc,
                            DanglingPolicy on_dangling = DanglingPolicy::error,
                            LoadReport* report = nullptr);
nlohmann::json snapshot_to_json(const Snapshot& s);

Snapshot load_snapshot(const std::filesystem::path& path,
                       DanglingPolicy on_dangling = DanglingPolicy::error,
                       LoadReport* report = nullptr);
void save_snapshot(const Snapshot& s, const std::filesystem::path& path);

/// Tokens of the element's own text, and optionally of all descendants in
/// pre-order.
TokenStream element_tokens(const Snapshot& s, std::string_view id,
                           bool include_descendants);

/// Own texts of the element (and descendants) joined by '\n' in document
/// order; the coordinate system of element_tokens spans.
std::string element_text(const Snapshot& s, std::string_view id, bool include_descendants);

}  // namespace lawsmells
