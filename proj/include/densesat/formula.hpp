// Interned modal formulas over bot, atoms, ~, & and [].
//
// Structurally equal formulas share one dense identifier; the canonical order
// of formulas is interning order.  The table is append-only and stored in
// fixed chunks, so readers never take the lock.

#ifndef DENSESAT_FORMULA_HPP
#define DENSESAT_FORMULA_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace densesat {

// ── Errors ──────────────────────────────────────────────────────────────────

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    ParseError(const std::string &msg, int line, int column);
    int line;
    int column;
};

// ── Formula ─────────────────────────────────────────────────────────────────

enum class Kind : std::uint8_t { Bottom, Atom, Neg, Conj, Box };

using FormulaId = std::uint32_t;

class Formula {
  public:
    Formula() = default;

    static Formula bottom();
    static Formula atom(std::string_view name);
    static Formula neg(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula box(Formula f);

    // Sugar, eliminated on construction.
    static Formula top() { return neg(bottom()); }
    static Formula disj(Formula a, Formula b) { return neg(conj(neg(a), neg(b))); }
    static Formula implies(Formula a, Formula b) { return neg(conj(a, neg(b))); }
    static Formula diamond(Formula f) { return neg(box(neg(f))); }

    FormulaId id() const noexcept { return id_; }
    Kind kind() const;
    bool valid() const noexcept { return id_ != kInvalid; }

    /// Child of Neg/Box, left child of Conj.
    Formula child() const;
    Formula left() const { return child(); }
    Formula right() const;
    /// Atom name; only valid for Kind::Atom.
    const std::string &name() const;

    bool is(Kind k) const { return kind() == k; }
    /// ¬□φ, the only shape that demands a successor.
    bool is_diamond() const { return is(Kind::Neg) && child().is(Kind::Box); }

    friend bool operator==(Formula a, Formula b) noexcept { return a.id_ == b.id_; }
    friend auto operator<=>(Formula a, Formula b) noexcept { return a.id_ <=> b.id_; }

  private:
    static constexpr FormulaId kInvalid = 0xFFFFFFFFu;
    explicit Formula(FormulaId id) : id_(id) {}
    FormulaId id_ = kInvalid;
    friend class FormulaStore;
};

/// Number of formulas interned so far (monotone).
std::size_t interned_count();

// ── FormulaSet ──────────────────────────────────────────────────────────────
//
// Sorted, duplicate-free vector of formulas in canonical (interning) order.

class FormulaSet {
  public:
    FormulaSet() = default;
    FormulaSet(std::initializer_list<Formula> fs);
    explicit FormulaSet(std::vector<Formula> fs);

    static FormulaSet from_sorted_unique(std::vector<Formula> fs);

    bool contains(Formula f) const;
    bool subset_of(const FormulaSet &other) const;
    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }

    void insert(Formula f);
    FormulaSet united(const FormulaSet &other) const;
    FormulaSet minus(const FormulaSet &other) const;

    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }
    std::span<const Formula> items() const noexcept { return items_; }

    std::size_t hash() const noexcept;

    friend bool operator==(const FormulaSet &, const FormulaSet &) = default;
    friend auto operator<=>(const FormulaSet &a, const FormulaSet &b) { return a.items_ <=> b.items_; }

  private:
    std::vector<Formula> items_;
};

// ── Metrics and subformulas ─────────────────────────────────────────────────

/// Modal degree d(φ).
int depth(Formula f);
/// Maximum degree over the set; 0 for the empty set.
int depth(const FormulaSet &s);

/// |φ| with |p|=|⊥|=1, |¬φ|=|□φ|=1+|φ|, |φ∧ψ|=|φ|+|ψ|.
std::size_t length(Formula f);
std::size_t length(const FormulaSet &s);

/// SF(s): closed under immediate subterms, contains s.
FormulaSet subformulas(const FormulaSet &s);
/// CSF(s): like SF but boxed formulas are treated as atoms.
FormulaSet classical_subformulas(const FormulaSet &s);

/// Atom names occurring in f, sorted by name.
std::vector<std::string> atoms_of(Formula f);
bool occurs(std::string_view atom, Formula f);

// ── Text form ───────────────────────────────────────────────────────────────

/// Parse the ASCII grammar; sugar is eliminated.
Formula parse(std::string_view text);
/// Canonical fully parenthesized form; parse(print(f)) == f.
std::string print(Formula f);
std::string print(const FormulaSet &s);

} // namespace densesat

template <> struct std::hash<densesat::Formula> {
    std::size_t operator()(densesat::Formula f) const noexcept { return f.id(); }
};

template <> struct std::hash<densesat::FormulaSet> {
    std::size_t operator()(const densesat::FormulaSet &s) const noexcept { return s.hash(); }
};

#endif // DENSESAT_FORMULA_HPP
