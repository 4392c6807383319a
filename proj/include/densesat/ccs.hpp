// Classically consistent saturations (CCS) and the box-stripping operators.

#ifndef DENSESAT_CCS_HPP
#define DENSESAT_CCS_HPP

#include "densesat/formula.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <unordered_map>
#include <vector>

namespace densesat {

/// The five closure conditions.
bool is_ccs(const FormulaSet &u);

/// {φ : □φ ∈ u}
FormulaSet box_minus(const FormulaSet &u);

/// Union of box_minus^{1+j(m-1)}(u) over j >= 0: what every successor of a
/// world satisfying u must satisfy in an m-dense model.
FormulaSet box_minus_closure(const FormulaSet &u, int density);

enum class CcsMode {
    /// Open branches of the classical tableau over s.
    Minimal,
    /// Every CCS between s and SF(s) ∪ ~SF(s); exponential, for differential tests.
    Exhaustive,
};

/// Return false to stop the enumeration.
using CcsVisitor = std::function<bool(const FormulaSet &)>;

/// Streams CCS(s) in canonical order.  Returns false iff the visitor stopped it.
bool enumerate_ccs(const FormulaSet &s, const CcsVisitor &visit, CcsMode mode = CcsMode::Minimal);

std::vector<FormulaSet> collect_ccs(const FormulaSet &s, CcsMode mode = CcsMode::Minimal,
                                    std::size_t limit = std::numeric_limits<std::size_t>::max());

/// Tableau branches of base ∪ extra where base is already a CCS: only the
/// formulas of extra (and what they generate) are decomposed.
std::vector<FormulaSet> extend_ccs(const FormulaSet &base, const FormulaSet &extra);

/// CCS(s) ≠ ∅
bool classically_consistent(const FormulaSet &s);

/// Memoizing front-end for extend_ccs, owned by one solver instance.
class CcsCache {
  public:
    const std::vector<FormulaSet> &extend(const FormulaSet &base, const FormulaSet &extra);
    const std::vector<FormulaSet> &of(const FormulaSet &s) { return extend({}, s); }
    bool consistent(const FormulaSet &s);
    std::size_t size() const { return table_.size(); }

  private:
    struct Key {
        FormulaSet base;
        FormulaSet extra;
        bool operator==(const Key &) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key &k) const noexcept {
            return k.base.hash() * 31 + k.extra.hash();
        }
    };
    std::unordered_map<Key, std::vector<FormulaSet>, KeyHash> table_;
    std::unordered_map<FormulaSet, bool> consistent_;
};

} // namespace densesat

#endif // DENSESAT_CCS_HPP
