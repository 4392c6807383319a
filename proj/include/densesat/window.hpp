// Recursive windows for m-dense logics.
//
// A window of nesting budget k > 0 and length len over density m stores a
// flat chain of len*(m-1)+1 nodes N[0..P] and one subwindow per chain edge.
// Positions that are multiples of m-1 are successors of the anchor; the
// others are intermediaries.  Chain edges run N[p+1] -> N[p], and subs[p] is
// a window for the anchor N[p+1] whose first node is N[p].  Segment i of the
// tuple view covers positions i*(m-1) .. (i+1)*(m-1).

#ifndef DENSESAT_WINDOW_HPP
#define DENSESAT_WINDOW_HPP

#include "densesat/ccs.hpp"
#include "densesat/formula.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace densesat {

struct ShapeMismatch : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct PreconditionViolated : Error {
    using Error::Error;
};

enum class LambdaKind { Depth, ReportedChi };

struct WindowParams {
    int k = 0;
    int len = 0;
    int density = 2;
    LambdaKind lambda = LambdaKind::Depth;
};

class Window {
  public:
    /// The empty window, the only window of budget 0.
    Window() = default;

    static Window make(int k, int density, std::vector<FormulaSet> nodes, std::vector<Window> subs);

    bool empty() const noexcept { return !rep_; }
    int k() const;
    int density() const;
    /// Number of segments.
    int length() const;
    /// Index of the last node, length()*(density()-1).
    int last() const;

    const FormulaSet &node(int p) const;
    const Window &sub(int p) const;
    /// Tuple view: node j of segment i.
    const FormulaSet &node(int segment, int offset) const;

    const std::vector<FormulaSet> &nodes() const;
    const std::vector<Window> &subs() const;

    bool is_successor_position(int p) const;

    std::size_t hash() const noexcept;
    friend bool operator==(const Window &a, const Window &b);

    /// Live composite windows on the calling thread.
    static std::size_t live_count();

  private:
    struct Rep;
    std::shared_ptr<const Rep> rep_;
};

/// Validity against (u, v0): v0 ⊆ N[0].  Subwindows must start exactly at
/// their parent's node.
bool check_window(const Window &w, const FormulaSet &u, const FormulaSet &v0, const WindowParams &p);
/// Same, but N[0] must equal v0.
bool check_window_exact(const Window &w, const FormulaSet &u, const FormulaSet &v0,
                        const WindowParams &p);
/// Reason for the first failing clause, or empty when valid.
std::string explain_window(const Window &w, const FormulaSet &u, const FormulaSet &v0,
                           const WindowParams &p, bool exact_first);

/// Every node set of the window and of its subwindows, recursively.
std::vector<FormulaSet> members(const Window &w);

/// Segments a..b; requires 0 <= a < b <= length().
Window partial(const Window &w, int a, int b);

bool pointwise_included(const Window &s1, const Window &s2, int k);

bool is_continuation(const Window &w1, const Window &w2, const FormulaSet &u, int k);

/// First segment of w1 followed by all of w2.
Window glue(const Window &w1, const Window &w2, const FormulaSet &u, int k);

/// depth(N2[segment i-1] \ N1[segment i]) for 1 <= i <= length.
int degree_gap(const Window &w1, const Window &w2, const FormulaSet &u, int i);

/// max(0, d(u) + i - (len + 1))
int degree_gap_bound(const FormulaSet &u, int i, int len);

using WindowVisitor = std::function<bool(const Window &)>;

struct GenerationStats {
    std::size_t windows = 0;
    std::size_t nodes = 0;
};

/// Window generator with per-instance memo tables.
class WindowGenerator {
  public:
    explicit WindowGenerator(int density);

    /// Windows of budget k and length k for (u, v0), built back to front.
    /// Returns false iff the visitor stopped the stream.
    bool windows(const FormulaSet &u, const FormulaSet &v0, int k, const WindowVisitor &visit);

    /// Windows W' of the same shape with is_continuation(w, W').
    bool continuations(const Window &w, const FormulaSet &u, int k, const WindowVisitor &visit);

    int density() const { return density_; }
    const GenerationStats &stats() const { return stats_; }
    CcsCache &ccs() { return ccs_; }

  private:
    struct Open;
    struct Frame;

    bool fill(Frame &f, int p, const std::function<bool(Frame &)> &done);
    bool subwindows(const FormulaSet &anchor, int k, const Window *tmpl,
                    const std::function<bool(const std::shared_ptr<Open> &)> &visit);
    const FormulaSet &closure(const FormulaSet &u);
    static Window close(const std::shared_ptr<Open> &o, const FormulaSet &first, int density);

    int density_;
    CcsCache ccs_;
    GenerationStats stats_;
    std::unordered_map<FormulaSet, FormulaSet> closure_;
};

bool enumerate_windows(const FormulaSet &u, const FormulaSet &v0, int k, int density,
                       const WindowVisitor &visit);
bool enumerate_continuations(const Window &w, const FormulaSet &u, int k, const WindowVisitor &visit);

// ── Bounds ───────────────────────────────────────────────────────────────────────────────────────────────────────────────────────

using BigInt = boost::multiprecision::cpp_int;

/// Constant c_sf with |v| <= c_sf * |u| for every member v.
inline constexpr int kCsf = 2;

/// s(0) = 1, s(k) = D + D * s(k-1) with D = density * len.
BigInt member_bound(int k, int len, int density);

/// 2^(c_sf * |u| * s(k)) + density * d(u)
BigInt chi_bound(const FormulaSet &u, int k, int density);

/// The exponent c_sf * |u| * s(k) of chi_bound.
BigInt chi_exponent(const FormulaSet &u, int k, int density);

/// n <= chi_bound(u, k, density), without materializing the power.
bool within_chi_bound(const FormulaSet &u, int k, int density, std::uint64_t n);

} // namespace densesat

template <> struct std::hash<densesat::Window> {
    std::size_t operator()(const densesat::Window &w) const noexcept { return w.hash(); }
};

#endif // DENSESAT_WINDOW_HPP
