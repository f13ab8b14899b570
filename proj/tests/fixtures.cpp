#include "fixtures.hpp"

#include <filesystem>
#include <fstream>

#include <unistd.h>

namespace fixtures {

using namespace lawsmells;
namespace fs = std::filesystem;

Element elem(std::string id, std::string kind, std::string text, std::vector<std::string> children,
             std::optional<std::string> heading) {
  Element e;
  e.label = id;
  e.id = std::move(id);
  e.kind = std::move(kind);
  e.text = std::move(text);
  e.children = std::move(children);
  e.heading = std::move(heading);
  return e;
}

Snapshot snapshot(std::string label, std::vector<std::string> roots, std::vector<Element> elements,
                  std::vector<Reference> refs) {
  return Snapshot::build(std::move(label), std::move(roots), std::move(elements), std::move(refs));
}

std::string words(std::size_t n, const std::string& stem) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out.push_back(' ');
    out += stem + std::to_string(i);
  }
  return out;
}

Snapshot toy_document() {
  std::vector<Element> es = {
      elem("X", "document", "", {"A", "B"}, "Toy document"),
      elem("A", "part", "", {"I", "II"}, "Part A"),
      elem("I", "chapter", "", {"s1", "s2", "s3"}, "Chapter I"),
      elem("II", "chapter", "", {"s4", "s5"}, "Chapter II"),
      elem("B", "part", "", {"s6", "s7", "s8", "s9"}, "Part B"),
  };
  for (int k = 1; k <= 9; ++k) {
    const auto id = "s" + std::to_string(k);
    es.push_back(elem(id, "section", words(static_cast<std::size_t>(k + 1), id + "w"), {}, "Section " + std::to_string(k)));
  }
  std::vector<Reference> refs = {
      {"s2", "s5", "section 5"}, {"s7", "I", "chapter I"}, {"s9", "s1", "section 1"}, {"s8", "B", "part B"}};
  return Snapshot::build("toy", {"X"}, std::move(es), std::move(refs));
}

Snapshot flat_graph(std::size_t count, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                    std::size_t tokens, const std::string& label) {
  std::vector<Element> es;
  std::vector<std::string> kids;
  for (std::size_t i = 0; i < count; ++i) kids.push_back("n" + std::to_string(i));
  es.push_back(elem("doc", "title", "", kids));
  for (std::size_t i = 0; i < count; ++i) es.push_back(elem(kids[i], "section", words(tokens, kids[i] + "w")));
  std::vector<Reference> refs;
  for (auto [a, b] : edges) refs.push_back({kids[a], kids[b], "ref"});
  return Snapshot::build(label, {"doc"}, std::move(es), std::move(refs));
}

std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t length, std::size_t vocab,
                                       const std::string& stem) {
  std::uniform_int_distribution<std::size_t> pick(0, vocab - 1);
  std::vector<std::string> out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.push_back(stem + std::to_string(pick(rng)));
  return out;
}

TokenStream as_stream(std::vector<std::string> tokens) {
  TokenStream s;
  std::size_t pos = 0;
  for (const auto& t : tokens) {
    s.spans.push_back({pos, pos + t.size()});
    pos += t.size() + 1;
  }
  s.tokens = std::move(tokens);
  s.origin = "synthetic";
  return s;
}

std::string temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("lawsmells_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto dir = fs::temp_directory_path() / ("lawsmells_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto path = dir / name;
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

}  // namespace fixtures
