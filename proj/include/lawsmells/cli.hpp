#pragma once

#include <string>
#include <vector>

#include "lawsmells/config.hpp"
#include "lawsmells/corpus.hpp"

namespace lawsmells::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOverBudget = 1;
inline constexpr int kExitInputError = 2;

/// Entry point. `args` excludes the program name.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

/// Loads every corpus of the config; a non-empty spec label replaces the
/// label stored in the file.
std::vector<Snapshot> load_corpora(const RunConfig& cfg);

}  // namespace lawsmells::cli
