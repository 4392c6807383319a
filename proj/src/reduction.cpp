#include "densesat/reduction.hpp"

#include <unordered_map>

namespace densesat {

namespace {

Formula translate(Formula guard, Formula f, std::unordered_map<Formula, Formula> &memo) {
    if (auto it = memo.find(f); it != memo.end())
        return it->second;
    Formula out;
    switch (f.kind()) {
    case Kind::Bottom:
    case Kind::Atom:
        out = f;
        break;
    case Kind::Neg:
        out = Formula::neg(translate(guard, f.child(), memo));
        break;
    case Kind::Conj:
        out = Formula::conj(translate(guard, f.left(), memo), translate(guard, f.right(), memo));
        break;
    case Kind::Box:
        out = Formula::box(Formula::implies(guard, translate(guard, f.child(), memo)));
        break;
    }
    memo.emplace(f, out);
    return out;
}

} // namespace

Formula tau(std::string_view p, Formula f) {
    if (occurs(p, f))
        throw AtomOccurs("atom " + std::string(p) + " occurs in " + print(f));
    std::unordered_map<Formula, Formula> memo;
    return translate(Formula::atom(p), f, memo);
}

bool tau_size_check(std::string_view p, Formula f) {
    return length(tau(p, f)) <= static_cast<std::size_t>(kTauSizeConstant) * length(f);
}

} // namespace densesat
