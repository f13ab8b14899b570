#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lawsmells/corpus.hpp"

namespace fixtures {

lawsmells::Element elem(std::string id, std::string kind, std::string text,
                        std::vector<std::string> children = {},
                        std::optional<std::string> heading = std::nullopt);

lawsmells::Snapshot snapshot(std::string label, std::vector<std::string> roots,
                             std::vector<lawsmells::Element> elements,
                             std::vector<lawsmells::Reference> refs = {});

/// n space-separated tokens "<stem>0 <stem>1 ...".
std::string words(std::size_t n, const std::string& stem = "w");

/// Toy document X: part A holds chapters I (s1-s3) and II (s4-s5), part B
/// holds s6-s9. Section s<k> has k+1 tokens of own text. References:
/// s2->s5, s7->I, s9->s1, s8->B.
lawsmells::Snapshot toy_document();

/// A title "doc" whose sections n0..n{count-1} each carry `tokens` tokens,
/// with the given reference edges between sections.
lawsmells::Snapshot flat_graph(std::size_t count, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                               std::size_t tokens = 5, const std::string& label = "g");

/// Uniform random tokens "t<k>" with k < vocab.
std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t length, std::size_t vocab,
                                       const std::string& stem = "t");

lawsmells::TokenStream as_stream(std::vector<std::string> tokens);

/// Writes `content` to a fresh file under the temp directory and returns its path.
std::string temp_file(const std::string& name, const std::string& content);
std::string temp_dir(const std::string& name);

}  // namespace fixtures
