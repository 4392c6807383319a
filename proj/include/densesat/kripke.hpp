// Finite Kripke models and the semantic oracles.

#ifndef DENSESAT_KRIPKE_HPP
#define DENSESAT_KRIPKE_HPP

#include "densesat/formula.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace densesat {

struct UnknownWorld : Error {
    using Error::Error;
};

struct KripkeModel {
    int worlds = 0;
    std::vector<std::pair<int, int>> relation;
    std::map<std::string, std::vector<int>> valuation;

    /// Throws UnknownWorld on a dangling reference.
    void validate() const;
    std::vector<std::vector<int>> successors() const;
    bool holds(const std::string &atom, int w) const;
};

bool model_check(const KripkeModel &m, int w, Formula f);
bool model_check(const KripkeModel &m, int w, const FormulaSet &s);

/// Independent evaluator: extensions computed bottom-up over the subformulas.
bool evaluate_extension(const KripkeModel &m, int w, Formula f);

/// R ⊆ Rⁿ
bool is_n_dense(const KripkeModel &m, int n);

KripkeModel disjoint_union(const KripkeModel &a, const KripkeModel &b);

struct PointedModel {
    KripkeModel model;
    int world = 0;
};

/// Exhaustive search over n-dense models with 1..max_worlds worlds.
std::optional<PointedModel> brute_force_sat(Formula f, int n, int max_worlds = 4);

enum class TableauOutcome { Saturated, Closed, Exhausted };

struct TableauResult {
    TableauOutcome outcome = TableauOutcome::Exhausted;
    /// Present iff Saturated; world 0 carries s.
    std::optional<KripkeModel> model;
    std::uint64_t nodes_created = 0;
};

/// Naive tableau with intermediary insertion; budget counts node creations.
TableauResult naive_tableau(const FormulaSet &s, int n, std::uint64_t budget);

/// Satisfiability in K over all frames.
bool k_sat(Formula f);

} // namespace densesat

#endif // DENSESAT_KRIPKE_HPP
