#include "densesat/window.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <iostream>

using namespace densesat;
using testsupport::Gen;

namespace {

Formula p() { return Formula::atom("p"); }
Formula q() { return Formula::atom("q"); }
Formula bq() { return Formula::box(q()); }

// u = {<>p, []q}
FormulaSet diamond_u() {
    Formula dp = Formula::diamond(p());
    return FormulaSet{dp, bq()};
}

Window small_window(const FormulaSet &last) {
    return Window::make(1, 2, {FormulaSet{p(), q()}, last}, {Window()});
}

// Density 3, length 2, every node {[]q, q}; subwindows of budget 1.
FormulaSet flat() { return FormulaSet{bq(), q()}; }

Window flat_sub(const FormulaSet &first) { return Window::make(1, 3, {first, {q()}, {q()}}, {Window(), Window()}); }

Window flat_window(const FormulaSet &first) {
    std::vector<FormulaSet> nodes{first, flat(), flat(), flat(), flat()};
    std::vector<Window> subs{flat_sub(first), flat_sub(flat()), flat_sub(flat()), flat_sub(flat())};
    return Window::make(2, 3, nodes, subs);
}

FormulaSet nested_u() { return FormulaSet{Formula::box(bq())}; }

// Random CCS anchors of depth 1..3 drawn from random formulas.
std::vector<FormulaSet> anchors(Gen &g, int count, int max_depth) {
    std::vector<FormulaSet> out;
    while (static_cast<int>(out.size()) < count) {
        Formula f = g.formula(max_depth, 4 + g.below(10));
        for (const auto &u : collect_ccs({f}))
            if (depth(u) >= 1 && static_cast<int>(out.size()) < count)
                out.push_back(u);
    }
    return out;
}

int brute_members(const Window &w, std::vector<FormulaSet> &acc) {
    if (w.empty())
        return 0;
    for (const auto &v : w.nodes())
        acc.push_back(v);
    for (const auto &s : w.subs())
        brute_members(s, acc);
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    return static_cast<int>(acc.size());
}

} // namespace

TEST(CheckWindow, EmptyWindowAtBudgetZero) {
    EXPECT_TRUE(check_window(Window(), diamond_u(), {}, {0, 0, 2}));
    EXPECT_FALSE(check_window(Window(), diamond_u(), {}, {1, 1, 2}));
}

TEST(CheckWindow, DepthOneExample) {
    FormulaSet u = diamond_u();
    EXPECT_TRUE(check_window(small_window({q()}), u, {p(), q()}, {1, 1, 2}));
    EXPECT_FALSE(check_window(small_window({Formula::atom("r")}), u, {p(), q()}, {1, 1, 2}));
}

TEST(CheckWindow, RejectsNonSaturatedNodeAndWrongShape) {
    FormulaSet u = diamond_u();
    Window bad = Window::make(1, 2, {FormulaSet{Formula::conj(p(), q()), q()}, {q()}}, {Window()});
    EXPECT_FALSE(check_window(bad, u, {}, {1, 1, 2}));
    EXPECT_FALSE(check_window(small_window({q()}), u, {p(), q()}, {1, 2, 2}));
    EXPECT_FALSE(check_window(small_window({q()}), u, {p(), q()}, {1, 1, 3}));
    EXPECT_FALSE(check_window(small_window({q()}), u, {p(), q()}, {1, 1, 2, LambdaKind::ReportedChi}));
}

TEST(Window, MakeValidatesShape) {
    EXPECT_THROW(Window::make(1, 2, {{}, {}}, {}), ShapeMismatch);
    EXPECT_THROW(Window::make(0, 2, {{}, {}}, {Window()}), ShapeMismatch);
    EXPECT_THROW(Window::make(1, 3, {{}, {}}, {Window()}), ShapeMismatch);
    EXPECT_THROW(small_window({q()}).node(2), IndexOutOfRange);
}

TEST(Members, Examples) {
    EXPECT_TRUE(members(Window()).empty());
    auto m = members(small_window({q()}));
    std::vector<FormulaSet> want{{p(), q()}, {q()}};
    std::sort(want.begin(), want.end());
    EXPECT_EQ(m, want);
}

TEST(Partial, Slicing) {
    Window w = flat_window(flat());
    EXPECT_EQ(partial(w, 0, 2), w);
    Window head = partial(w, 0, 1);
    EXPECT_EQ(head.length(), 1);
    EXPECT_EQ(head.nodes(), std::vector<FormulaSet>(w.nodes().begin(), w.nodes().begin() + 3));
    EXPECT_THROW(partial(w, 1, 0), IndexOutOfRange);
    EXPECT_THROW(partial(w, 0, 3), IndexOutOfRange);
}

TEST(PointwiseInclusion, Examples) {
    EXPECT_TRUE(pointwise_included(Window(), Window(), 0));
    Window w = flat_window(flat());
    EXPECT_TRUE(pointwise_included(w, w, 2));
    std::vector<FormulaSet> nodes = w.nodes();
    nodes[3] = FormulaSet{q()};
    Window smaller = Window::make(2, 3, nodes, w.subs());
    EXPECT_FALSE(pointwise_included(w, smaller, 2));
    EXPECT_THROW(pointwise_included(w, partial(w, 0, 1), 2), ShapeMismatch);
}

TEST(Continuation, ConstantWindowContinuesItself) {
    FormulaSet u = nested_u();
    Window w = flat_window(flat());
    ASSERT_TRUE(check_window(w, u, flat(), {2, 2, 3}));
    EXPECT_TRUE(is_continuation(w, w, u, 2));
    Window g = glue(w, w, u, 2);
    EXPECT_TRUE(check_window(g, u, flat(), {2, 3, 3}));
    EXPECT_EQ(members(g), members(w));
    for (int i = 1; i <= 2; ++i)
        EXPECT_EQ(degree_gap(w, w, u, i), 0);
}

TEST(Continuation, DensityThreeShiftedPair) {
    FormulaSet u = nested_u();
    Window w1 = flat_window(flat());
    FormulaSet bigger{bq(), q(), p()};
    Window w2 = flat_window(bigger);
    ASSERT_TRUE(check_window(w2, u, bigger, {2, 2, 3}));
    EXPECT_TRUE(is_continuation(w1, w2, u, 2));
    Window g = glue(w1, w2, u, 2);
    EXPECT_EQ(g.length(), 3);
    EXPECT_EQ(g.node(2), bigger);
    EXPECT_TRUE(check_window(g, u, flat(), {2, 3, 3}));
    for (int i = 1; i <= 2; ++i)
        EXPECT_LE(degree_gap(w1, w2, u, i), degree_gap_bound(u, i, 2));
}

TEST(Continuation, Errors) {
    FormulaSet u = nested_u();
    Window w = flat_window(flat());
    EXPECT_THROW(is_continuation(w, partial(w, 0, 1), u, 2), ShapeMismatch);
    std::vector<FormulaSet> nodes = w.nodes();
    nodes[2] = FormulaSet{bq()};
    Window shrunk = Window::make(2, 3, nodes, w.subs());
    EXPECT_FALSE(is_continuation(w, shrunk, u, 2));
    EXPECT_THROW(glue(w, shrunk, u, 2), PreconditionViolated);
    EXPECT_THROW(degree_gap(w, w, u, 0), IndexOutOfRange);
    EXPECT_THROW(degree_gap(w, w, u, 3), IndexOutOfRange);
}

TEST(Tuples, SharedEndpoints) {
    Window w = flat_window(flat());
    for (int i = 0; i + 1 < w.length(); ++i)
        EXPECT_EQ(&w.node(i, 2), &w.node(i + 1, 0));
    EXPECT_TRUE(w.is_successor_position(0));
    EXPECT_FALSE(w.is_successor_position(1));
    EXPECT_TRUE(w.is_successor_position(2));
}

TEST(EnumerateWindows, Examples) {
    int n = 0;
    enumerate_windows(diamond_u(), {p(), q()}, 0, 2, [&](const Window &w) {
        EXPECT_TRUE(w.empty());
        ++n;
        return true;
    });
    EXPECT_EQ(n, 1);

    bool found = false;
    enumerate_windows(diamond_u(), {p(), q()}, 1, 2, [&](const Window &w) {
        found = found || w == small_window({q()});
        return true;
    });
    EXPECT_TRUE(found);

    FormulaSet dead{Formula::box(Formula::bottom()), Formula::diamond(p())};
    n = 0;
    enumerate_windows(dead, {p()}, 1, 2, [&](const Window &) {
        ++n;
        return true;
    });
    EXPECT_EQ(n, 0);
}

TEST(EnumerateWindows, OutputsAreValidAndBounded) {
    Gen g(31);
    for (int m : {2, 3}) {
        for (const auto &u : anchors(g, 60, 3)) {
            int k = depth(u);
            FormulaSet bu = box_minus(u);
            for (const auto &v0 : collect_ccs(bu)) {
                int count = 0;
                enumerate_windows(u, v0, k, m, [&](const Window &w) {
                    EXPECT_TRUE(check_window(w, u, v0, {k, k, m})) << explain_window(w, u, v0, {k, k, m}, false);
                    std::vector<FormulaSet> acc;
                    int n = brute_members(w, acc);
                    EXPECT_EQ(static_cast<std::size_t>(n), members(w).size());
                    EXPECT_LE(BigInt(n), member_bound(k, k, m));
                    for (const auto &v : members(w))
                        EXPECT_LT(depth(v), depth(u));
                    EXPECT_TRUE(pointwise_included(w, w, k));
                    return ++count < 20;
                });
            }
        }
    }
}

TEST(EnumerateContinuations, IncludeShiftedTemplate) {
    FormulaSet u = nested_u();
    Window w = flat_window(flat());
    int n = 0;
    enumerate_continuations(w, u, 2, [&](const Window &w2) {
        EXPECT_TRUE(is_continuation(w, w2, u, 2));
        for (int p = 0; p + 2 <= w.last(); ++p)
            EXPECT_TRUE(w.node(p + 2).subset_of(w2.node(p)));
        ++n;
        return true;
    });
    EXPECT_GE(n, 1);
}

TEST(EnumerateContinuations, GluingAndDegreeBound) {
    Gen g(32);
    int pairs = 0;
    for (int m : {2, 3}) {
        for (const auto &u : anchors(g, 300, 3)) {
            int k = depth(u);
            for (const auto &v0 : collect_ccs(box_minus(u))) {
                WindowGenerator gen(m);
                int taken = 0;
                gen.windows(u, v0, k, [&](const Window &w) {
                    gen.continuations(w, u, k, [&](const Window &w2) {
                        EXPECT_TRUE(is_continuation(w, w2, u, k));
                        EXPECT_TRUE(check_window(w2, u, w2.node(0), {k, k, m}));
                        Window glued = glue(w, w2, u, k);
                        EXPECT_TRUE(check_window(glued, u, v0, {k, k + 1, m}))
                            << explain_window(glued, u, v0, {k, k + 1, m}, false);
                        for (int i = 1; i <= k; ++i)
                            EXPECT_LE(degree_gap(w, w2, u, i), degree_gap_bound(u, i, k));
                        ++pairs;
                        return true;
                    });
                    return ++taken < 5;
                });
            }
        }
    }
    EXPECT_GE(pairs, 1000);
}

TEST(ChiBound, Values) {
    FormulaSet u0{p(), Formula::neg(q())};
    EXPECT_EQ(chi_bound(u0, 0, 2), BigInt(1) << (2 * 3));

    // |u| = 6, d(u) = 2, k = 2, density 2: D = 4, s = 1, 8, 36.
    FormulaSet u{testsupport::boxes(2, p()), Formula::neg(q()), p()};
    ASSERT_EQ(length(u), 6u);
    ASSERT_EQ(depth(u), 2);
    BigInt s = 1;
    for (int i = 0; i < 2; ++i)
        s = 4 + 4 * s;
    EXPECT_EQ(s, 36);
    EXPECT_EQ(chi_bound(u, 2, 2), (BigInt(1) << 432) + 4);
    EXPECT_EQ(chi_bound(u, 2, 2), (BigInt(1) << static_cast<unsigned>(2 * 6 * s)) + 2 * 2);
}

TEST(ChiBound, Monotone) {
    for (int m : {2, 3})
        for (int k = 0; k < 5; ++k) {
            EXPECT_LT(member_bound(k, 2, m), member_bound(k + 1, 2, m));
            if (k > 0)
                EXPECT_LT(member_bound(k, 2, m), member_bound(k, 3, m));
        }
    FormulaSet u{testsupport::boxes(2, p())};
    EXPECT_LT(chi_bound(u, 1, 2), chi_bound(u, 2, 2));
    EXPECT_TRUE(within_chi_bound(u, 1, 2, 1000));
    EXPECT_FALSE(within_chi_bound(FormulaSet{}, 0, 2, 2));
}

TEST(MemberLength, WithinCsfTimesAnchor) {
    Gen g(33);
    double worst = 0;
    int violations = 0;
    std::string example;
    for (int m : {2, 3})
        for (const auto &u : anchors(g, 200, 3)) {
            int k = depth(u);
            for (const auto &v0 : collect_ccs(box_minus(u))) {
                int taken = 0;
                enumerate_windows(u, v0, k, m, [&](const Window &w) {
                    for (const auto &v : members(w)) {
                        double r = static_cast<double>(length(v)) / static_cast<double>(length(u));
                        if (r > worst) {
                            worst = r;
                            example = print(u) + " -> " + print(v);
                        }
                        if (length(v) > static_cast<std::size_t>(kCsf) * length(u))
                            ++violations;
                    }
                    return ++taken < 10;
                });
            }
        }
    std::cout << "measured max |v| / |u| = " << worst << " at " << example << "\n";
    RecordProperty("member_length_ratio", std::to_string(worst));
    EXPECT_EQ(violations, 0) << "c_sf = " << kCsf << ", worst " << example;
}
