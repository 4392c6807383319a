#include "densesat/kripke.hpp"

#include "densesat/ccs.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_map>

namespace densesat {

void KripkeModel::validate() const {
    if (worlds < 0)
        throw UnknownWorld("negative world count");
    for (auto [a, b] : relation)
        if (a < 0 || a >= worlds || b < 0 || b >= worlds)
            throw UnknownWorld("relation pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    for (const auto &[atom, ws] : valuation)
        for (int w : ws)
            if (w < 0 || w >= worlds)
                throw UnknownWorld("world " + std::to_string(w) + " in the valuation of " + atom);
}

std::vector<std::vector<int>> KripkeModel::successors() const {
    std::vector<std::vector<int>> out(worlds);
    for (auto [a, b] : relation)
        out[a].push_back(b);
    for (auto &s : out) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return out;
}

bool KripkeModel::holds(const std::string &atom, int w) const {
    auto it = valuation.find(atom);
    return it != valuation.end() && std::find(it->second.begin(), it->second.end(), w) != it->second.end();
}

// ── Model checking ──────────────────────────────────────────────────────────

namespace {

bool eval(const KripkeModel &m, const std::vector<std::vector<int>> &succ, int w, Formula f) {
    switch (f.kind()) {
    case Kind::Bottom:
        return false;
    case Kind::Atom:
        return m.holds(f.name(), w);
    case Kind::Neg:
        return !eval(m, succ, w, f.child());
    case Kind::Conj:
        return eval(m, succ, w, f.left()) && eval(m, succ, w, f.right());
    case Kind::Box:
        for (int v : succ[w])
            if (!eval(m, succ, v, f.child()))
                return false;
        return true;
    }
    return false;
}

void check_world(const KripkeModel &m, int w) {
    if (w < 0 || w >= m.worlds)
        throw UnknownWorld("world " + std::to_string(w) + " of " + std::to_string(m.worlds));
}

} // namespace

bool model_check(const KripkeModel &m, int w, Formula f) {
    m.validate();
    check_world(m, w);
    return eval(m, m.successors(), w, f);
}

bool model_check(const KripkeModel &m, int w, const FormulaSet &s) {
    m.validate();
    check_world(m, w);
    auto succ = m.successors();
    return std::all_of(s.begin(), s.end(), [&](Formula f) { return eval(m, succ, w, f); });
}

bool evaluate_extension(const KripkeModel &m, int w, Formula f) {
    m.validate();
    check_world(m, w);
    std::vector<std::vector<bool>> rel(m.worlds, std::vector<bool>(m.worlds, false));
    for (auto [a, b] : m.relation)
        rel[a][b] = true;
    std::unordered_map<Formula, std::vector<bool>> ext;
    FormulaSet sf = subformulas(FormulaSet{f});
    for (Formula g : sf) {
        std::vector<bool> e(m.worlds, false);
        for (int x = 0; x < m.worlds; ++x) {
            switch (g.kind()) {
            case Kind::Bottom:
                break;
            case Kind::Atom: {
                auto it = m.valuation.find(g.name());
                if (it != m.valuation.end())
                    for (int y : it->second)
                        if (y == x)
                            e[x] = true;
                break;
            }
            case Kind::Neg:
                e[x] = !ext.at(g.child())[x];
                break;
            case Kind::Conj:
                e[x] = ext.at(g.left())[x] && ext.at(g.right())[x];
                break;
            case Kind::Box: {
                bool all = true;
                for (int y = 0; y < m.worlds; ++y)
                    if (rel[x][y] && !ext.at(g.child())[y])
                        all = false;
                e[x] = all;
                break;
            }
            }
        }
        ext.emplace(g, std::move(e));
    }
    return ext.at(f)[w];
}

// ── Frames ──────────────────────────────────────────────────────────────────

namespace {

using Matrix = std::vector<std::vector<bool>>;

Matrix compose(const Matrix &a, const Matrix &b) {
    std::size_t n = a.size();
    Matrix c(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (a[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (b[k][j])
                        c[i][j] = true;
    return c;
}

// Successor masks of a frame with at most 8 worlds.
using Frame = std::vector<std::uint8_t>;

bool frame_dense(const Frame &r, int n) {
    int size = static_cast<int>(r.size());
    Frame power = r;
    for (int step = 1; step < n; ++step) {
        Frame next(size, 0);
        for (int i = 0; i < size; ++i)
            for (int k = 0; k < size; ++k)
                if (power[i] >> k & 1)
                    next[i] |= r[k];
        power = std::move(next);
    }
    for (int i = 0; i < size; ++i)
        if ((r[i] & ~power[i]) != 0)
            return false;
    return true;
}

std::uint32_t frame_code(const Frame &r) {
    std::uint32_t code = 0;
    int size = static_cast<int>(r.size());
    for (int i = 0; i < size; ++i)
        code |= static_cast<std::uint32_t>(r[i]) << (i * size);
    return code;
}

// Canonical (minimal-code) dense frames of one size, one per isomorphism class.
const std::vector<Frame> &dense_frames(int n, int size) {
    static std::mutex lock;
    static std::map<std::pair<int, int>, std::vector<Frame>> cache;
    std::lock_guard<std::mutex> guard(lock);
    auto key = std::make_pair(n, size);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    std::vector<std::vector<int>> perms;
    std::vector<int> perm(size);
    std::iota(perm.begin(), perm.end(), 0);
    do
        perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<Frame> out;
    std::uint32_t total = std::uint32_t{1} << (size * size);
    std::uint32_t row = (std::uint32_t{1} << size) - 1;
    for (std::uint32_t code = 0; code < total; ++code) {
        Frame r(size);
        for (int i = 0; i < size; ++i)
            r[i] = static_cast<std::uint8_t>(code >> (i * size) & row);
        if (!frame_dense(r, n))
            continue;
        bool minimal = true;
        for (const auto &p : perms) {
            Frame q(size, 0);
            for (int i = 0; i < size; ++i)
                for (int j = 0; j < size; ++j)
                    if (r[i] >> j & 1)
                        q[p[i]] |= static_cast<std::uint8_t>(1u << p[j]);
            if (frame_code(q) < code) {
                minimal = false;
                break;
            }
        }
        if (minimal)
            out.push_back(std::move(r));
    }
    return cache.emplace(key, std::move(out)).first->second;
}

// Bit b of valuation index i, packed into 64-bit words.
std::vector<std::uint64_t> atom_pattern(int b, std::size_t words, std::uint64_t valuations) {
    std::vector<std::uint64_t> out(words, 0);
    for (std::size_t j = 0; j < words; ++j) {
        if (b >= 6) {
            out[j] = (j >> (b - 6) & 1) ? ~std::uint64_t{0} : 0;
        } else {
            std::uint64_t word = 0;
            for (int t = 0; t < 64; ++t)
                if (t >> b & 1)
                    word |= std::uint64_t{1} << t;
            out[j] = word;
        }
    }
    if (valuations < 64)
        out[0] &= (std::uint64_t{1} << valuations) - 1;
    return out;
}

} // namespace

bool is_n_dense(const KripkeModel &m, int n) {
    if (n < 1)
        throw Error("density index must be at least 1");
    m.validate();
    Matrix r(m.worlds, std::vector<bool>(m.worlds, false));
    for (auto [a, b] : m.relation)
        r[a][b] = true;
    Matrix power = r;
    for (int i = 1; i < n; ++i)
        power = compose(power, r);
    for (auto [a, b] : m.relation)
        if (!power[a][b])
            return false;
    return true;
}

KripkeModel disjoint_union(const KripkeModel &a, const KripkeModel &b) {
    KripkeModel u;
    u.worlds = a.worlds + b.worlds;
    u.relation = a.relation;
    for (auto [x, y] : b.relation)
        u.relation.push_back({x + a.worlds, y + a.worlds});
    u.valuation = a.valuation;
    for (const auto &[atom, ws] : b.valuation)
        for (int w : ws)
            u.valuation[atom].push_back(w + a.worlds);
    return u;
}

std::optional<PointedModel> brute_force_sat(Formula f, int n, int max_worlds) {
    if (max_worlds < 1 || max_worlds > 4)
        throw Error("max_worlds must lie in 1..4");
    std::vector<std::string> atoms = atoms_of(f);
    FormulaSet sf = subformulas(FormulaSet{f});
    std::vector<Formula> order(sf.begin(), sf.end());
    std::unordered_map<Formula, std::size_t> slot;
    for (std::size_t i = 0; i < order.size(); ++i)
        slot.emplace(order[i], i);
    int na = static_cast<int>(atoms.size());

    for (int size = 1; size <= max_worlds; ++size) {
        int bits = size * na;
        if (bits > 24)
            throw Error("valuation space of 2^" + std::to_string(bits) + " is too large");
        std::uint64_t valuations = std::uint64_t{1} << bits;
        std::size_t words = std::max<std::size_t>(1, valuations / 64);
        std::vector<std::vector<std::uint64_t>> atom_bits(bits);
        for (int b = 0; b < bits; ++b)
            atom_bits[b] = atom_pattern(b, words, valuations);
        std::vector<std::uint64_t> ones(words, ~std::uint64_t{0});
        if (valuations < 64)
            ones[0] = (std::uint64_t{1} << valuations) - 1;

        // ext[formula][world] is a bitset over valuations.
        std::vector<std::vector<std::vector<std::uint64_t>>> ext(
            order.size(), std::vector<std::vector<std::uint64_t>>(size, std::vector<std::uint64_t>(words)));
        for (const Frame &frame : dense_frames(n, size)) {
            for (std::size_t i = 0; i < order.size(); ++i) {
                Formula g = order[i];
                for (int w = 0; w < size; ++w) {
                    auto &e = ext[i][w];
                    switch (g.kind()) {
                    case Kind::Bottom:
                        std::fill(e.begin(), e.end(), 0);
                        break;
                    case Kind::Atom: {
                        int a = static_cast<int>(std::find(atoms.begin(), atoms.end(), g.name()) - atoms.begin());
                        e = atom_bits[a * size + w];
                        break;
                    }
                    case Kind::Neg: {
                        const auto &c = ext[slot.at(g.child())][w];
                        for (std::size_t j = 0; j < words; ++j)
                            e[j] = ~c[j] & ones[j];
                        break;
                    }
                    case Kind::Conj: {
                        const auto &l = ext[slot.at(g.left())][w];
                        const auto &r = ext[slot.at(g.right())][w];
                        for (std::size_t j = 0; j < words; ++j)
                            e[j] = l[j] & r[j];
                        break;
                    }
                    case Kind::Box: {
                        e = ones;
                        std::size_t c = slot.at(g.child());
                        for (int v = 0; v < size; ++v)
                            if (frame[w] >> v & 1)
                                for (std::size_t j = 0; j < words; ++j)
                                    e[j] &= ext[c][v][j];
                        break;
                    }
                    }
                }
            }
            const auto &top = ext[slot.at(f)];
            for (int w = 0; w < size; ++w)
                for (std::size_t j = 0; j < words; ++j) {
                    if (!top[w][j])
                        continue;
                    std::uint64_t index = j * 64 + static_cast<std::uint64_t>(__builtin_ctzll(top[w][j]));
                    PointedModel pm;
                    pm.world = w;
                    pm.model.worlds = size;
                    for (int x = 0; x < size; ++x)
                        for (int y = 0; y < size; ++y)
                            if (frame[x] >> y & 1)
                                pm.model.relation.push_back({x, y});
                    for (int a = 0; a < na; ++a) {
                        auto &ws = pm.model.valuation[atoms[a]];
                        for (int x = 0; x < size; ++x)
                            if (index >> (a * size + x) & 1)
                                ws.push_back(x);
                    }
                    return pm;
                }
        }
    }
    return std::nullopt;
}

// ── Naive tableau ───────────────────────────────────────────────────────────

namespace {

struct Task {
    enum Kind { Diamond, Dense } kind;
    int x;
    int y;
    Formula formula;
};

struct TableauState {
    std::vector<FormulaSet> label;
    std::vector<std::vector<int>> succ;
    std::set<std::pair<int, int>> edges;
    std::deque<Task> tasks;
    // Pending box propagations x -> y, handled before any other task.
    std::deque<std::pair<int, int>> propagate;
};

class NaiveTableau {
  public:
    NaiveTableau(int n, std::uint64_t budget) : n_(n), budget_(budget) {}

    TableauResult run(const FormulaSet &s) {
        TableauResult result;
        const auto &roots = ccs_.of(s);
        bool exhausted = false;
        for (const auto &u : roots) {
            TableauState st;
            if (!create(st, u)) {
                exhausted = true;
                break;
            }
            TableauOutcome o = search(std::move(st));
            if (o == TableauOutcome::Saturated) {
                result.outcome = o;
                result.model = model_;
                result.nodes_created = created_;
                return result;
            }
            if (o == TableauOutcome::Exhausted)
                exhausted = true;
            if (exhausted)
                break;
        }
        result.outcome = exhausted ? TableauOutcome::Exhausted : TableauOutcome::Closed;
        result.nodes_created = created_;
        return result;
    }

  private:
    int n_;
    std::uint64_t budget_;
    std::uint64_t created_ = 0;
    CcsCache ccs_;
    KripkeModel model_;

    bool create(TableauState &st, const FormulaSet &label) {
        if (++created_ > budget_)
            return false;
        int x = static_cast<int>(st.label.size());
        st.label.push_back(label);
        st.succ.emplace_back();
        for (Formula g : label)
            if (g.is_diamond())
                st.tasks.push_back({Task::Diamond, x, -1, g});
        return true;
    }

    void add_edge(TableauState &st, int x, int y) {
        if (st.edges.insert({x, y}).second) {
            st.succ[x].push_back(y);
            st.tasks.push_back({Task::Dense, x, y, {}});
            st.propagate.push_back({x, y});
        }
    }

    bool in_power(const TableauState &st, int x, int y) const {
        std::vector<int> frontier{x};
        for (int step = 0; step < n_; ++step) {
            std::vector<bool> next(st.label.size(), false);
            for (int a : frontier)
                for (int b : st.succ[a])
                    next[b] = true;
            frontier.clear();
            for (std::size_t b = 0; b < next.size(); ++b)
                if (next[b])
                    frontier.push_back(static_cast<int>(b));
        }
        return std::find(frontier.begin(), frontier.end(), y) != frontier.end();
    }

    // Replaces the label of y by each extension in turn and continues.
    TableauOutcome branch(TableauState &st, int y, const std::vector<FormulaSet> &choices,
                          const FormulaSet &before) {
        if (choices.empty())
            return TableauOutcome::Closed;
        bool exhausted = false;
        for (std::size_t i = 0; i < choices.size(); ++i) {
            TableauState next;
            if (i + 1 == choices.size())
                next = std::move(st);
            else
                next = st;
            next.label[y] = choices[i];
            for (Formula g : choices[i])
                if (g.is_diamond() && !before.contains(g))
                    next.tasks.push_back({Task::Diamond, y, -1, g});
            for (int z : next.succ[y])
                next.propagate.push_back({y, z});
            TableauOutcome o = search(std::move(next));
            if (o == TableauOutcome::Saturated)
                return o;
            if (o == TableauOutcome::Exhausted)
                exhausted = true;
            if (created_ > budget_)
                return TableauOutcome::Exhausted;
        }
        return exhausted ? TableauOutcome::Exhausted : TableauOutcome::Closed;
    }

    TableauOutcome search(TableauState st) {
        for (;;) {
            if (!st.propagate.empty()) {
                auto [x, y] = st.propagate.front();
                st.propagate.pop_front();
                FormulaSet need = box_minus(st.label[x]);
                if (need.subset_of(st.label[y]))
                    continue;
                FormulaSet before = st.label[y];
                return branch(st, y, ccs_.extend(before, need), before);
            }
            if (st.tasks.empty())
                break;
            Task t = st.tasks.front();
            st.tasks.pop_front();
            if (t.kind == Task::Diamond) {
                int y = static_cast<int>(st.label.size());
                if (!create(st, {}))
                    return TableauOutcome::Exhausted;
                st.succ[t.x].push_back(y);
                st.edges.insert({t.x, y});
                st.tasks.push_back({Task::Dense, t.x, y, {}});
                FormulaSet need = box_minus(st.label[t.x]);
                need.insert(Formula::neg(t.formula.child().child()));
                return branch(st, y, ccs_.of(need), {});
            }
            if (in_power(st, t.x, t.y))
                continue;
            int prev = t.x;
            for (int i = 1; i < n_; ++i) {
                int w = static_cast<int>(st.label.size());
                if (!create(st, {}))
                    return TableauOutcome::Exhausted;
                add_edge(st, prev, w);
                prev = w;
            }
            add_edge(st, prev, t.y);
        }
        model_ = KripkeModel{};
        model_.worlds = static_cast<int>(st.label.size());
        model_.relation.assign(st.edges.begin(), st.edges.end());
        for (int x = 0; x < model_.worlds; ++x)
            for (Formula g : st.label[x])
                if (g.is(Kind::Atom))
                    model_.valuation[g.name()].push_back(x);
        return TableauOutcome::Saturated;
    }
};

} // namespace

TableauResult naive_tableau(const FormulaSet &s, int n, std::uint64_t budget) {
    if (n < 2)
        throw Error("density index must be at least 2");
    return NaiveTableau(n, budget).run(s);
}

// ── K tableau ───────────────────────────────────────────────────────────────

namespace {

class KTableau {
  public:
    bool sat(const FormulaSet &u) {
        if (auto it = memo_.find(u); it != memo_.end())
            return it->second;
        bool ok = true;
        FormulaSet boxed = box_minus(u);
        for (Formula g : u) {
            if (!g.is_diamond())
                continue;
            FormulaSet need = boxed;
            need.insert(Formula::neg(g.child().child()));
            const auto &choices = ccs_.of(need);
            if (std::none_of(choices.begin(), choices.end(), [&](const FormulaSet &v) { return sat(v); })) {
                ok = false;
                break;
            }
        }
        memo_.emplace(u, ok);
        return ok;
    }

    CcsCache ccs_;

  private:
    std::unordered_map<FormulaSet, bool> memo_;
};

} // namespace

bool k_sat(Formula f) {
    KTableau t;
    const auto &roots = t.ccs_.of(FormulaSet{f});
    return std::any_of(roots.begin(), roots.end(), [&](const FormulaSet &u) { return t.sat(u); });
}

} // namespace densesat
