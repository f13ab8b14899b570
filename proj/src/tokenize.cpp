#include "lawsmells/corpus.hpp"

#include <array>
#include <cctype>

namespace lawsmells {

namespace {

// Multi-byte UTF-8 punctuation that is always detached: § – — ‘ ’ “ ”
constexpr std::array<std::string_view, 7> kWidePunct = {
    "\xC2\xA7", "\xE2\x80\x93", "\xE2\x80\x94", "\xE2\x80\x98",
    "\xE2\x80\x99", "\xE2\x80\x9C", "\xE2\x80\x9D"};

constexpr std::string_view kNarrowPunct = ".,;:!?()[]\"'/-";

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_space_at(std::string_view text, std::size_t i, std::size_t& width) {
  const char c = text[i];
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
    width = 1;
    return true;
  }
  // no-break space
  if (text.substr(i, 2) == "\xC2\xA0") {
    width = 2;
    return true;
  }
  return false;
}

bool is_punct_at(std::string_view text, std::size_t i, std::size_t& width) {
  if (kNarrowPunct.find(text[i]) != std::string_view::npos) {
    width = 1;
    return true;
  }
  for (auto p : kWidePunct) {
    if (text.substr(i, p.size()) == p) {
      width = p.size();
      return true;
    }
  }
  return false;
}

std::string lowered(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

bool boundary_at(std::string_view text, std::size_t i) {
  if (i >= text.size()) return true;
  std::size_t width = 0;
  return is_space_at(text, i, width) || is_punct_at(text, i, width);
}

bool ends_at_boundary(std::string_view text) {
  if (text.empty()) return true;
  for (std::size_t back = 1; back <= 3 && back <= text.size(); ++back) {
    const auto i = text.size() - back;
    std::size_t width = 0;
    if ((is_space_at(text, i, width) || is_punct_at(text, i, width)) && i + width == text.size()) {
      return true;
    }
  }
  return false;
}

TokenStream tokenize(std::string_view text, std::string origin) {
  TokenStream out;
  out.origin = std::move(origin);

  std::size_t word_begin = std::string_view::npos;
  auto flush = [&](std::size_t end) {
    if (word_begin != std::string_view::npos && end > word_begin) {
      out.tokens.push_back(lowered(text.substr(word_begin, end - word_begin)));
      out.spans.push_back({word_begin, end});
    }
    word_begin = std::string_view::npos;
  };

  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t width = 0;
    if (is_space_at(text, i, width)) {
      flush(i);
      i += width;
      continue;
    }
    if (text[i] == ',' && word_begin != std::string_view::npos && i > 0 &&
        is_digit(text[i - 1]) && i + 1 < text.size() && is_digit(text[i + 1])) {
      ++i;  // grouped digits, e.g. 5,000
      continue;
    }
    if (is_punct_at(text, i, width)) {
      flush(i);
      out.tokens.push_back(lowered(text.substr(i, width)));
      out.spans.push_back({i, i + width});
      i += width;
      continue;
    }
    if (word_begin == std::string_view::npos) word_begin = i;
    ++i;
  }
  flush(text.size());
  return out;
}

}  // namespace lawsmells
