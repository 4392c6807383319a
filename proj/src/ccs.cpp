#include "densesat/ccs.hpp"

#include <algorithm>
#include <set>

namespace densesat {

namespace {

// ~f in u, found without interning ~f.
template <class Range> bool has_negation(const Range &u, Formula f) {
    for (Formula g : u)
        if (g.is(Kind::Neg) && g.child() == f)
            return true;
    return false;
}

} // namespace

bool is_ccs(const FormulaSet &u) {
    for (Formula f : u) {
        switch (f.kind()) {
        case Kind::Bottom:
            return false;
        case Kind::Conj:
            if (!u.contains(f.left()) || !u.contains(f.right()))
                return false;
            break;
        case Kind::Neg: {
            Formula g = f.child();
            if (u.contains(g))
                return false;
            if (g.is(Kind::Neg) && !u.contains(g.child()))
                return false;
            if (g.is(Kind::Conj) && !has_negation(u, g.left()) && !has_negation(u, g.right()))
                return false;
            break;
        }
        default:
            break;
        }
    }
    return true;
}

FormulaSet box_minus(const FormulaSet &u) {
    std::vector<Formula> out;
    for (Formula f : u)
        if (f.is(Kind::Box))
            out.push_back(f.child());
    return FormulaSet(std::move(out));
}

FormulaSet box_minus_closure(const FormulaSet &u, int density) {
    int stride = std::max(1, density - 1);
    FormulaSet result;
    FormulaSet level = box_minus(u);
    int step = 1;
    while (!level.empty()) {
        if ((step - 1) % stride == 0)
            result = result.united(level);
        level = box_minus(level);
        ++step;
    }
    return result;
}

namespace {

// Depth-first full tableau.  `pending` lists formulas still to decompose; the
// beta rule fires once on every negated conjunction that reaches the agenda.
class Tableau {
  public:
    explicit Tableau(std::set<FormulaSet> &out) : out_(out) {}

    void run(std::vector<Formula> members, std::vector<Formula> pending) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (Formula f : members)
            if (clashes(members, f))
                return;
        std::sort(pending.begin(), pending.end(), std::greater<>());
        pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
        expand(members, pending);
    }

  private:
    std::set<FormulaSet> &out_;

    static bool has(const std::vector<Formula> &m, Formula f) {
        return std::binary_search(m.begin(), m.end(), f);
    }

    static bool clashes(const std::vector<Formula> &m, Formula f) {
        if (f.is(Kind::Bottom))
            return true;
        if (f.is(Kind::Neg) && has(m, f.child()))
            return true;
        return has_negation(m, f);
    }

    // Adds f; returns false on a clash.  New formulas join the agenda.
    static bool add(std::vector<Formula> &m, std::vector<Formula> &pending, Formula f) {
        if (has(m, f))
            return true;
        if (clashes(m, f))
            return false;
        m.insert(std::lower_bound(m.begin(), m.end(), f), f);
        pending.insert(std::lower_bound(pending.begin(), pending.end(), f, std::greater<>()), f);
        return true;
    }

    void expand(std::vector<Formula> m, std::vector<Formula> pending) {
        while (!pending.empty()) {
            Formula f = pending.back();
            pending.pop_back();
            if (f.is(Kind::Conj)) {
                if (!add(m, pending, f.left()) || !add(m, pending, f.right()))
                    return;
            } else if (f.is(Kind::Neg) && f.child().is(Kind::Neg)) {
                if (!add(m, pending, f.child().child()))
                    return;
            } else if (f.is(Kind::Neg) && f.child().is(Kind::Conj)) {
                Formula g = f.child();
                for (Formula branch : {Formula::neg(g.left()), Formula::neg(g.right())}) {
                    auto m2 = m;
                    auto p2 = pending;
                    if (add(m2, p2, branch))
                        expand(std::move(m2), std::move(p2));
                }
                return;
            }
        }
        out_.insert(FormulaSet::from_sorted_unique(std::move(m)));
    }
};

std::vector<FormulaSet> minimal_ccs(const FormulaSet &base, const FormulaSet &extra) {
    std::set<FormulaSet> out;
    std::vector<Formula> members(base.begin(), base.end());
    std::vector<Formula> pending;
    for (Formula f : extra)
        if (!base.contains(f)) {
            members.push_back(f);
            pending.push_back(f);
        }
    Tableau(out).run(std::move(members), std::move(pending));
    return {out.begin(), out.end()};
}

std::vector<FormulaSet> exhaustive_ccs(const FormulaSet &s, std::size_t limit) {
    FormulaSet sf = subformulas(s);
    std::vector<Formula> universe(sf.begin(), sf.end());
    for (Formula f : sf)
        universe.push_back(Formula::neg(f));
    FormulaSet pool(universe);
    std::vector<Formula> optional;
    for (Formula f : pool)
        if (!s.contains(f))
            optional.push_back(f);
    if (optional.size() > 24)
        throw Error("exhaustive CCS enumeration over " + std::to_string(optional.size()) +
                    " optional formulas");
    std::vector<FormulaSet> out;
    std::uint64_t total = std::uint64_t{1} << optional.size();
    for (std::uint64_t mask = 0; mask < total && out.size() < limit; ++mask) {
        std::vector<Formula> items(s.begin(), s.end());
        for (std::size_t i = 0; i < optional.size(); ++i)
            if (mask >> i & 1)
                items.push_back(optional[i]);
        FormulaSet u(std::move(items));
        if (is_ccs(u))
            out.push_back(std::move(u));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

bool enumerate_ccs(const FormulaSet &s, const CcsVisitor &visit, CcsMode mode) {
    auto all = mode == CcsMode::Minimal ? minimal_ccs({}, s) : exhaustive_ccs(s, SIZE_MAX);
    for (const auto &u : all)
        if (!visit(u))
            return false;
    return true;
}

std::vector<FormulaSet> collect_ccs(const FormulaSet &s, CcsMode mode, std::size_t limit) {
    auto all = mode == CcsMode::Minimal ? minimal_ccs({}, s) : exhaustive_ccs(s, limit);
    if (all.size() > limit)
        all.resize(limit);
    return all;
}

std::vector<FormulaSet> extend_ccs(const FormulaSet &base, const FormulaSet &extra) {
    return minimal_ccs(base, extra);
}

bool classically_consistent(const FormulaSet &s) { return !minimal_ccs({}, s).empty(); }

const std::vector<FormulaSet> &CcsCache::extend(const FormulaSet &base, const FormulaSet &extra) {
    Key key{base, extra};
    auto it = table_.find(key);
    if (it == table_.end())
        it = table_.emplace(std::move(key), minimal_ccs(base, extra)).first;
    return it->second;
}

bool CcsCache::consistent(const FormulaSet &s) {
    auto it = consistent_.find(s);
    if (it != consistent_.end())
        return it->second;
    bool ok = !of(s).empty();
    consistent_.emplace(s, ok);
    return ok;
}

} // namespace densesat
