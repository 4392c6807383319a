// The guarded-box translation relativizing every box to a fresh atom.

#ifndef DENSESAT_REDUCTION_HPP
#define DENSESAT_REDUCTION_HPP

#include "densesat/formula.hpp"

#include <string_view>

namespace densesat {

struct AtomOccurs : Error {
    using Error::Error;
};

/// |tau(p, f)| <= kTauSizeConstant * |f| in the core encoding.
inline constexpr int kTauSizeConstant = 5;

/// tau(p, []f) = [](~(p & ~tau(p, f))); other connectives are kept.
Formula tau(std::string_view p, Formula f);

bool tau_size_check(std::string_view p, Formula f);

} // namespace densesat

#endif // DENSESAT_REDUCTION_HPP
