// Hand-rolled generators shared by the unit tests.

#ifndef DENSESAT_TESTS_SUPPORT_HPP
#define DENSESAT_TESTS_SUPPORT_HPP

#include "densesat/formula.hpp"
#include "densesat/kripke.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using densesat::Formula;
using densesat::KripkeModel;

// Syntax tree kept on the test side, independent of the interning table.
struct Tree {
    enum Op { Bot, Atom, Not, And, Or, Imp, Box, Dia } op;
    std::string name;
    std::shared_ptr<Tree> a, b;
};
using TreePtr = std::shared_ptr<Tree>;

inline TreePtr leaf(Tree::Op op, std::string name = "") {
    return std::make_shared<Tree>(Tree{op, std::move(name), nullptr, nullptr});
}
inline TreePtr node(Tree::Op op, TreePtr a, TreePtr b = nullptr) {
    return std::make_shared<Tree>(Tree{op, "", std::move(a), std::move(b)});
}

class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int below(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
    bool coin() { return below(2) == 0; }

    // Sugared tree over the given atoms, modal depth <= depth.
    TreePtr tree(int depth, int size, const std::vector<std::string> &atoms, bool sugar = true) {
        if (size <= 1) {
            int i = below(static_cast<int>(atoms.size()) + 1);
            return i == 0 ? leaf(Tree::Bot) : leaf(Tree::Atom, atoms[i - 1]);
        }
        int op = below(sugar ? 7 : 4);
        switch (op) {
        case 0:
            return node(Tree::Not, tree(depth, size - 1, atoms, sugar));
        case 1:
        case 4:
        case 5: {
            int l = 1 + below(std::max(1, size - 2));
            Tree::Op o = op == 1 ? Tree::And : op == 4 ? Tree::Or : Tree::Imp;
            return node(o, tree(depth, l, atoms, sugar), tree(depth, std::max(1, size - 1 - l), atoms, sugar));
        }
        case 2:
        case 6:
            if (depth == 0)
                return node(Tree::Not, tree(depth, size - 1, atoms, sugar));
            return node(op == 2 ? Tree::Box : Tree::Dia, tree(depth - 1, size - 1, atoms, sugar));
        default:
            return tree(depth, 1, atoms, sugar);
        }
    }

    Formula formula(int depth, int size, const std::vector<std::string> &atoms = {"p", "q"}) {
        return build(*tree(depth, size, atoms, false));
    }

    KripkeModel model(int max_worlds, const std::vector<std::string> &atoms = {"p", "q"}) {
        KripkeModel m;
        m.worlds = 1 + below(max_worlds);
        for (int x = 0; x < m.worlds; ++x)
            for (int y = 0; y < m.worlds; ++y)
                if (below(3) == 0)
                    m.relation.push_back({x, y});
        for (const auto &a : atoms) {
            auto &ws = m.valuation[a];
            for (int x = 0; x < m.worlds; ++x)
                if (coin())
                    ws.push_back(x);
        }
        return m;
    }

    static Formula build(const Tree &t) {
        switch (t.op) {
        case Tree::Bot:
            return Formula::bottom();
        case Tree::Atom:
            return Formula::atom(t.name);
        case Tree::Not:
            return Formula::neg(build(*t.a));
        case Tree::And:
            return Formula::conj(build(*t.a), build(*t.b));
        case Tree::Or:
            return Formula::neg(Formula::conj(Formula::neg(build(*t.a)), Formula::neg(build(*t.b))));
        case Tree::Imp:
            return Formula::neg(Formula::conj(build(*t.a), Formula::neg(build(*t.b))));
        case Tree::Box:
            return Formula::box(build(*t.a));
        case Tree::Dia:
            return Formula::neg(Formula::box(Formula::neg(build(*t.a))));
        }
        return Formula::bottom();
    }

  private:
    std::mt19937_64 rng_;
};

// Text form in the input grammar, fully parenthesized.
inline std::string text(const Tree &t) {
    switch (t.op) {
    case Tree::Bot:
        return "bot";
    case Tree::Atom:
        return t.name;
    case Tree::Not:
        return "~(" + text(*t.a) + ")";
    case Tree::And:
        return "(" + text(*t.a) + " & " + text(*t.b) + ")";
    case Tree::Or:
        return "(" + text(*t.a) + " | " + text(*t.b) + ")";
    case Tree::Imp:
        return "(" + text(*t.a) + " -> " + text(*t.b) + ")";
    case Tree::Box:
        return "[](" + text(*t.a) + ")";
    case Tree::Dia:
        return "<>(" + text(*t.a) + ")";
    }
    return "";
}

// Degree and length of the desugared tree, computed on the tree itself.
inline int tree_depth(const Tree &t) {
    switch (t.op) {
    case Tree::Bot:
    case Tree::Atom:
        return 0;
    case Tree::Not:
        return tree_depth(*t.a);
    case Tree::And:
    case Tree::Or:
    case Tree::Imp:
        return std::max(tree_depth(*t.a), tree_depth(*t.b));
    case Tree::Box:
    case Tree::Dia:
        return 1 + tree_depth(*t.a);
    }
    return 0;
}

inline std::size_t tree_length(const Tree &t) {
    switch (t.op) {
    case Tree::Bot:
    case Tree::Atom:
        return 1;
    case Tree::Not:
        return 1 + tree_length(*t.a);
    case Tree::And:
        return tree_length(*t.a) + tree_length(*t.b);
    case Tree::Or:
        // ~(~a & ~b)
        return 3 + tree_length(*t.a) + tree_length(*t.b);
    case Tree::Imp:
        // ~(a & ~b)
        return 2 + tree_length(*t.a) + tree_length(*t.b);
    case Tree::Box:
        return 1 + tree_length(*t.a);
    case Tree::Dia:
        // ~[]~a
        return 3 + tree_length(*t.a);
    }
    return 0;
}

// Truth of a formula by direct recursion over an adjacency matrix.
inline bool truth(const KripkeModel &m, int w, Formula f) {
    using densesat::Kind;
    switch (f.kind()) {
    case Kind::Bottom:
        return false;
    case Kind::Atom:
        return m.holds(f.name(), w);
    case Kind::Neg:
        return !truth(m, w, f.child());
    case Kind::Conj:
        return truth(m, w, f.left()) && truth(m, w, f.right());
    case Kind::Box:
        for (auto [a, b] : m.relation)
            if (a == w && !truth(m, b, f.child()))
                return false;
        return true;
    }
    return false;
}

inline Formula boxes(int n, Formula f) {
    for (int i = 0; i < n; ++i)
        f = Formula::box(f);
    return f;
}

} // namespace testsupport

#endif // DENSESAT_TESTS_SUPPORT_HPP
