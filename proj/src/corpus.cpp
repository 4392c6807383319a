#include "densesat/corpus.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace densesat {

namespace {

void flatten(Formula f, std::vector<Formula> &out) {
    if (f.is(Kind::Conj)) {
        flatten(f.left(), out);
        flatten(f.right(), out);
    } else if (Formula c = canonical(f); c.is(Kind::Conj)) {
        flatten(c, out);
    } else {
        out.push_back(c);
    }
}

bool by_text(Formula a, Formula b) {
    std::size_t la = length(a), lb = length(b);
    if (la != lb)
        return la < lb;
    return print(a) < print(b);
}

} // namespace

Formula canonical(Formula f) {
    switch (f.kind()) {
    case Kind::Bottom:
    case Kind::Atom:
        return f;
    case Kind::Neg: {
        Formula c = canonical(f.child());
        return c.is(Kind::Neg) ? c.child() : Formula::neg(c);
    }
    case Kind::Box:
        return Formula::box(canonical(f.child()));
    case Kind::Conj: {
        std::vector<Formula> items;
        flatten(f, items);
        std::sort(items.begin(), items.end(), by_text);
        items.erase(std::unique(items.begin(), items.end()), items.end());
        Formula out = items[0];
        for (std::size_t i = 1; i < items.size(); ++i)
            out = Formula::conj(out, items[i]);
        return out;
    }
    }
    return f;
}

std::vector<Formula> exhaustive_corpus(const CorpusConfig &config) {
    std::vector<std::vector<Formula>> by_length(config.max_length + 1);
    if (config.max_length >= 1) {
        by_length[1].push_back(Formula::bottom());
        for (const auto &a : config.atoms)
            by_length[1].push_back(Formula::atom(a));
    }
    for (int l = 2; l <= config.max_length; ++l) {
        auto &out = by_length[l];
        for (Formula g : by_length[l - 1]) {
            out.push_back(Formula::neg(g));
            if (depth(g) < config.max_depth)
                out.push_back(Formula::box(g));
        }
        for (int a = 1; a <= l - 2; ++a)
            for (Formula x : by_length[a])
                for (Formula y : by_length[l - 1 - a])
                    out.push_back(Formula::conj(x, y));
    }
    std::set<Formula> seen;
    std::vector<Formula> corpus;
    for (const auto &layer : by_length)
        for (Formula f : layer)
            if (seen.insert(canonical(f)).second)
                corpus.push_back(canonical(f));
    std::sort(corpus.begin(), corpus.end(), by_text);
    return corpus;
}

Formula random_formula(std::mt19937_64 &rng, const std::vector<std::string> &atoms, int max_depth,
                       int max_length) {
    auto pick = [&](int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)); };
    if (max_length <= 1) {
        int i = pick(static_cast<int>(atoms.size()) + 1);
        return i == 0 ? Formula::bottom() : Formula::atom(atoms[i - 1]);
    }
    int choice = max_length <= 2 ? pick(3) : 1 + pick(5);
    switch (std::min(choice, 3)) {
    case 0:
        return random_formula(rng, atoms, max_depth, 1);
    case 1:
        return Formula::neg(random_formula(rng, atoms, max_depth, max_length - 1));
    case 2:
        if (max_depth > 0)
            return Formula::box(random_formula(rng, atoms, max_depth - 1, max_length - 1));
        return Formula::neg(random_formula(rng, atoms, max_depth, max_length - 1));
    default: {
        int left = 1 + pick(max_length - 2);
        Formula a = random_formula(rng, atoms, max_depth, left);
        Formula b = random_formula(rng, atoms, max_depth, max_length - 1 - left);
        return Formula::conj(a, b);
    }
    }
}

std::vector<Formula> full_corpus(const CorpusConfig &config) {
    std::vector<Formula> corpus = exhaustive_corpus(config);
    std::set<Formula> seen(corpus.begin(), corpus.end());
    std::mt19937_64 rng(config.seed);
    int added = 0;
    for (int attempt = 0; added < config.random_count && attempt < 100 * config.random_count; ++attempt) {
        Formula f = canonical(random_formula(rng, config.atoms, config.random_depth, config.random_length));
        if (seen.insert(f).second) {
            ++added;
            corpus.push_back(f);
        }
    }
    return corpus;
}

} // namespace densesat
