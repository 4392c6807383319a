// Exhaustive and random formula corpora.

#ifndef DENSESAT_CORPUS_HPP
#define DENSESAT_CORPUS_HPP

#include "densesat/formula.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace densesat {

/// Conjunctions flattened, deduplicated and sorted by printed form; double
/// negations removed.  Equivalent to f and never longer.
Formula canonical(Formula f);

struct CorpusConfig {
    std::vector<std::string> atoms{"p", "q"};
    int max_length = 7;
    int max_depth = 2;
    int random_count = 100;
    int random_depth = 3;
    int random_length = 14;
    std::uint64_t seed = 1;
};

/// Canonical representatives of every core formula within the bounds,
/// ordered by length, then printed form.
std::vector<Formula> exhaustive_corpus(const CorpusConfig &config);

/// Depth <= max_depth, length <= max_length, over the given atoms.
Formula random_formula(std::mt19937_64 &rng, const std::vector<std::string> &atoms, int max_depth,
                       int max_length);

/// Exhaustive part followed by the random part, duplicates removed.
std::vector<Formula> full_corpus(const CorpusConfig &config);

} // namespace densesat

#endif // DENSESAT_CORPUS_HPP
