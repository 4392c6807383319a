#include "densesat/window.hpp"

#include <algorithm>
#include <unordered_set>

namespace densesat {

namespace {
thread_local std::size_t live_windows = 0;
}

struct Window::Rep {
    int k;
    int density;
    int len;
    std::vector<FormulaSet> nodes;
    std::vector<Window> subs;
    std::size_t hash;

    Rep(int k_, int m, int len_, std::vector<FormulaSet> n, std::vector<Window> s)
        : k(k_), density(m), len(len_), nodes(std::move(n)), subs(std::move(s)) {
        std::uint64_t h = 0x84222325CBF29CE4ull ^ (static_cast<std::uint64_t>(k) << 8 | density);
        for (const auto &v : nodes)
            h = (h ^ v.hash()) * 0x100000001B3ull;
        for (const auto &w : subs)
            h = (h ^ w.hash()) * 0x9E3779B97F4A7C15ull;
        hash = static_cast<std::size_t>(h ^ (h >> 31));
        ++live_windows;
    }
    ~Rep() { --live_windows; }
};

Window Window::make(int k, int density, std::vector<FormulaSet> nodes, std::vector<Window> subs) {
    if (k <= 0)
        throw ShapeMismatch("composite window needs k > 0");
    if (density < 2)
        throw ShapeMismatch("density must be at least 2");
    int step = density - 1;
    if (nodes.empty() || (nodes.size() - 1) % step != 0 || subs.size() + 1 != nodes.size())
        throw ShapeMismatch("node and subwindow counts do not form whole segments");
    int len = static_cast<int>(nodes.size() - 1) / step;
    Window w;
    w.rep_ = std::make_shared<const Rep>(k, density, len, std::move(nodes), std::move(subs));
    return w;
}

int Window::k() const { return rep_ ? rep_->k : 0; }
int Window::density() const { return rep_ ? rep_->density : 0; }
int Window::length() const { return rep_ ? rep_->len : 0; }
int Window::last() const { return rep_ ? static_cast<int>(rep_->nodes.size()) - 1 : -1; }

const FormulaSet &Window::node(int p) const {
    if (!rep_ || p < 0 || p > last())
        throw IndexOutOfRange("node index " + std::to_string(p));
    return rep_->nodes[p];
}

const Window &Window::sub(int p) const {
    if (!rep_ || p < 0 || p >= last())
        throw IndexOutOfRange("subwindow index " + std::to_string(p));
    return rep_->subs[p];
}

const FormulaSet &Window::node(int segment, int offset) const {
    if (!rep_ || offset < 0 || offset >= rep_->density)
        throw IndexOutOfRange("tuple offset " + std::to_string(offset));
    return node(segment * (rep_->density - 1) + offset);
}

const std::vector<FormulaSet> &Window::nodes() const {
    static const std::vector<FormulaSet> none;
    return rep_ ? rep_->nodes : none;
}

const std::vector<Window> &Window::subs() const {
    static const std::vector<Window> none;
    return rep_ ? rep_->subs : none;
}

bool Window::is_successor_position(int p) const { return rep_ && p % (rep_->density - 1) == 0; }

std::size_t Window::hash() const noexcept { return rep_ ? rep_->hash : 0x5bd1e995u; }

bool operator==(const Window &a, const Window &b) {
    if (a.rep_ == b.rep_)
        return true;
    if (!a.rep_ || !b.rep_)
        return false;
    return a.rep_->hash == b.rep_->hash && a.rep_->k == b.rep_->k &&
           a.rep_->density == b.rep_->density && a.rep_->nodes == b.rep_->nodes &&
           a.rep_->subs == b.rep_->subs;
}

std::size_t Window::live_count() { return live_windows; }

// ── Validity ────────────────────────────────────────────────────────────────

namespace {

std::string explain(const Window &w, const FormulaSet &u, const FormulaSet &v0, const WindowParams &p,
                    bool exact_first) {
    if (p.lambda != LambdaKind::Depth)
        return "only depth-length windows are materialized";
    if (p.k == 0)
        return w.empty() ? "" : "budget 0 requires the empty window";
    if (w.empty())
        return "empty window with budget " + std::to_string(p.k);
    if (w.k() != p.k || w.density() != p.density || w.length() != p.len)
        return "window shape differs from (k=" + std::to_string(p.k) + ", len=" + std::to_string(p.len) +
               ", density=" + std::to_string(p.density) + ")";
    FormulaSet bu = box_minus(u);
    for (int q = 0; q <= w.last(); ++q) {
        const FormulaSet &v = w.node(q);
        if (!is_ccs(v))
            return "node " + std::to_string(q) + " is not a CCS";
        if (w.is_successor_position(q) && !bu.subset_of(v))
            return "node " + std::to_string(q) + " misses box-minus of the anchor";
        if (q < w.last() && !box_minus(w.node(q + 1)).subset_of(v))
            return "node " + std::to_string(q) + " misses box-minus of node " + std::to_string(q + 1);
    }
    if (exact_first ? w.node(0) != v0 : !v0.subset_of(w.node(0)))
        return "first node does not match";
    WindowParams sp{p.k - 1, p.k - 1, p.density, p.lambda};
    for (int q = 0; q < w.last(); ++q) {
        std::string why = explain(w.sub(q), w.node(q + 1), w.node(q), sp, true);
        if (!why.empty())
            return "subwindow " + std::to_string(q) + ": " + why;
    }
    return "";
}

Window slice(const Window &w, int a, int b) {
    int step = w.density() - 1;
    const auto &n = w.nodes();
    const auto &s = w.subs();
    std::vector<FormulaSet> nodes(n.begin() + a * step, n.begin() + b * step + 1);
    std::vector<Window> subs(s.begin() + a * step, s.begin() + b * step);
    return Window::make(w.k(), w.density(), std::move(nodes), std::move(subs));
}

bool included(const Window &s1, const Window &s2, int k, bool top) {
    if (!s1.empty() && !s2.empty() &&
        (s1.length() != s2.length() || s1.density() != s2.density())) {
        if (top)
            throw ShapeMismatch("pointwise inclusion of windows with different shapes");
        return false;
    }
    if (k == 0)
        return s1.empty() && s2.empty();
    if (s1.empty() || s2.empty())
        return false;
    for (int q = 0; q <= s2.last(); ++q) {
        const FormulaSet &v2 = s2.node(q);
        if (!is_ccs(v2) || !s1.node(q).subset_of(v2))
            return false;
        if (q < s2.last() && !box_minus(s2.node(q + 1)).subset_of(v2))
            return false;
    }
    for (int q = 0; q < s2.last(); ++q)
        if (!included(s1.sub(q), s2.sub(q), k - 1, false))
            return false;
    return true;
}

} // namespace

bool check_window(const Window &w, const FormulaSet &u, const FormulaSet &v0, const WindowParams &p) {
    return explain(w, u, v0, p, false).empty();
}

bool check_window_exact(const Window &w, const FormulaSet &u, const FormulaSet &v0,
                        const WindowParams &p) {
    return explain(w, u, v0, p, true).empty();
}

std::string explain_window(const Window &w, const FormulaSet &u, const FormulaSet &v0,
                           const WindowParams &p, bool exact_first) {
    return explain(w, u, v0, p, exact_first);
}

std::vector<FormulaSet> members(const Window &w) {
    std::vector<FormulaSet> out;
    std::vector<const Window *> stack{&w};
    while (!stack.empty()) {
        const Window *x = stack.back();
        stack.pop_back();
        for (const auto &v : x->nodes())
            out.push_back(v);
        for (const auto &s : x->subs())
            stack.push_back(&s);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Window partial(const Window &w, int a, int b) {
    if (w.empty() || a < 0 || a >= b || b > w.length())
        throw IndexOutOfRange("partial window [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    return slice(w, a, b);
}

bool pointwise_included(const Window &s1, const Window &s2, int k) { return included(s1, s2, k, true); }

bool is_continuation(const Window &w1, const Window &w2, const FormulaSet &, int k) {
    if (w1.empty() || w2.empty() || w1.length() != w2.length() || w1.density() != w2.density())
        throw ShapeMismatch("continuation needs two composite windows of the same shape");
    int len = w1.length();
    return included(slice(w1, 1, len), slice(w2, 0, len - 1), k, true);
}

Window glue(const Window &w1, const Window &w2, const FormulaSet &u, int k) {
    if (!is_continuation(w1, w2, u, k))
        throw PreconditionViolated("glue needs a continuation");
    int step = w1.density() - 1;
    std::vector<FormulaSet> nodes(w1.nodes().begin(), w1.nodes().begin() + step);
    nodes.insert(nodes.end(), w2.nodes().begin(), w2.nodes().end());
    std::vector<Window> subs(w1.subs().begin(), w1.subs().begin() + step);
    subs.insert(subs.end(), w2.subs().begin(), w2.subs().end());
    return Window::make(w1.k(), w1.density(), std::move(nodes), std::move(subs));
}

int degree_gap(const Window &w1, const Window &w2, const FormulaSet &, int i) {
    if (w1.empty() || w2.empty() || i < 1 || i > w1.length() || w1.length() != w2.length())
        throw IndexOutOfRange("degree gap index " + std::to_string(i));
    int step = w1.density() - 1;
    return depth(w2.node((i - 1) * step).minus(w1.node(i * step)));
}

int degree_gap_bound(const FormulaSet &u, int i, int len) { return std::max(0, depth(u) + i - (len + 1)); }

// ── Generation ──────────────────────────────────────────────────────────────

struct WindowGenerator::Open {
    int k;
    std::vector<FormulaSet> nodes;
    std::vector<Window> subs;
    std::shared_ptr<Open> sub0;
    FormulaSet req;
};

namespace {

struct NodeKey {
    int p;
    FormulaSet next;
    bool operator==(const NodeKey &) const = default;
};
struct NodeKeyHash {
    std::size_t operator()(const NodeKey &k) const noexcept { return k.next.hash() * 131 + k.p; }
};

} // namespace

struct WindowGenerator::Frame {
    FormulaSet anchor_req;
    int k;
    int last;
    const Window *tmpl = nullptr;
    int shift = 0;
    FormulaSet seed;
    bool open = false;
    std::vector<FormulaSet> nodes;
    std::vector<Window> subs;
    std::shared_ptr<Open> sub0;
    std::size_t yields = 0;
    std::unordered_set<NodeKey, NodeKeyHash> dead;

    const FormulaSet *tmpl_node(int p) const {
        if (!tmpl || p + shift > tmpl->last())
            return nullptr;
        return &tmpl->node(p + shift);
    }
    const Window *tmpl_sub(int p) const {
        if (!tmpl || p + shift >= tmpl->last())
            return nullptr;
        return &tmpl->sub(p + shift);
    }
};

WindowGenerator::WindowGenerator(int density) : density_(density) {
    if (density < 2)
        throw PreconditionViolated("density must be at least 2");
}

const FormulaSet &WindowGenerator::closure(const FormulaSet &u) {
    auto it = closure_.find(u);
    if (it == closure_.end())
        it = closure_.emplace(u, box_minus_closure(u, density_)).first;
    return it->second;
}

Window WindowGenerator::close(const std::shared_ptr<Open> &o, const FormulaSet &first, int density) {
    std::vector<FormulaSet> nodes = o->nodes;
    std::vector<Window> subs = o->subs;
    nodes[0] = first;
    subs[0] = o->sub0 ? close(o->sub0, first, density) : Window();
    return Window::make(o->k, density, std::move(nodes), std::move(subs));
}

bool WindowGenerator::fill(Frame &f, int p, const std::function<bool(Frame &)> &done) {
    static const FormulaSet none;
    int step = density_ - 1;
    const FormulaSet *t = f.tmpl_node(p);
    const FormulaSet &base = t ? *t : none;
    if (p == f.last) {
        for (const auto &cand : ccs_.extend(base, f.anchor_req)) {
            ++stats_.nodes;
            f.nodes[p] = cand;
            if (!fill(f, p - 1, done))
                return false;
        }
        return true;
    }

    NodeKey key{p, f.nodes[p + 1]};
    if (f.dead.count(key))
        return true;
    std::size_t before = f.yields;

    FormulaSet req = closure(f.nodes[p + 1]);
    if (p % step == 0)
        req = req.united(f.anchor_req);
    if (p == 0)
        req = req.united(f.seed);

    auto place = [&](const std::shared_ptr<Open> &s) -> bool {
        if (p == 0 && f.open) {
            f.sub0 = s;
            ++f.yields;
            return done(f);
        }
        FormulaSet full = s ? req.united(s->req) : req;
        for (const auto &cand : ccs_.extend(base, full)) {
            ++stats_.nodes;
            f.nodes[p] = cand;
            f.subs[p] = s ? close(s, cand, density_) : Window();
            if (p == 0) {
                ++f.yields;
                if (!done(f))
                    return false;
            } else if (!fill(f, p - 1, done)) {
                return false;
            }
        }
        return true;
    };

    bool go_on = true;
    if (ccs_.consistent(t ? base.united(req) : req)) {
        if (f.k == 1)
            go_on = place(nullptr);
        else
            go_on = subwindows(f.nodes[p + 1], f.k - 1, f.tmpl_sub(p), place);
    }
    if (go_on && f.yields == before)
        f.dead.insert(std::move(key));
    return go_on;
}

bool WindowGenerator::subwindows(const FormulaSet &anchor, int k, const Window *tmpl,
                                 const std::function<bool(const std::shared_ptr<Open> &)> &visit) {
    Frame f;
    f.anchor_req = closure(anchor);
    f.k = k;
    f.last = k * (density_ - 1);
    f.tmpl = tmpl;
    f.open = true;
    f.nodes.resize(f.last + 1);
    f.subs.resize(f.last);
    return fill(f, f.last, [&](Frame &fr) {
        auto o = std::make_shared<Open>();
        o->k = fr.k;
        o->nodes = fr.nodes;
        o->subs = fr.subs;
        o->sub0 = fr.sub0;
        o->req = closure(fr.nodes[1]);
        if (o->sub0)
            o->req = o->req.united(o->sub0->req);
        return visit(o);
    });
}

bool WindowGenerator::windows(const FormulaSet &u, const FormulaSet &v0, int k, const WindowVisitor &visit) {
    if (k == 0)
        return visit(Window());
    Frame f;
    f.anchor_req = closure(u);
    f.k = k;
    f.last = k * (density_ - 1);
    f.seed = v0;
    f.nodes.resize(f.last + 1);
    f.subs.resize(f.last);
    return fill(f, f.last, [&](Frame &fr) {
        ++stats_.windows;
        return visit(Window::make(fr.k, density_, fr.nodes, fr.subs));
    });
}

bool WindowGenerator::continuations(const Window &w, const FormulaSet &u, int k, const WindowVisitor &visit) {
    if (k == 0 || w.empty())
        return true;
    if (w.density() != density_)
        throw ShapeMismatch("window density differs from the generator's");
    Frame f;
    f.anchor_req = closure(u);
    f.k = k;
    f.last = w.last();
    f.tmpl = &w;
    f.shift = density_ - 1;
    f.nodes.resize(f.last + 1);
    f.subs.resize(f.last);
    return fill(f, f.last, [&](Frame &fr) {
        ++stats_.windows;
        return visit(Window::make(fr.k, density_, fr.nodes, fr.subs));
    });
}

bool enumerate_windows(const FormulaSet &u, const FormulaSet &v0, int k, int density,
                       const WindowVisitor &visit) {
    WindowGenerator gen(density);
    return gen.windows(u, v0, k, visit);
}

bool enumerate_continuations(const Window &w, const FormulaSet &u, int k, const WindowVisitor &visit) {
    if (w.empty())
        return true;
    WindowGenerator gen(w.density());
    return gen.continuations(w, u, k, visit);
}

// ── Bounds ──────────────────────────────────────────────────────────────────

BigInt member_bound(int k, int len, int density) {
    BigInt d = BigInt(density) * std::max(len, 1);
    BigInt s = 1;
    for (int i = 1; i <= k; ++i)
        s = d + d * s;
    return s;
}

BigInt chi_exponent(const FormulaSet &u, int k, int density) {
    return BigInt(kCsf) * length(u) * member_bound(k, k, density);
}

BigInt chi_bound(const FormulaSet &u, int k, int density) {
    BigInt value = BigInt(1) << static_cast<unsigned>(chi_exponent(u, k, density));
    return value + BigInt(density) * depth(u);
}

bool within_chi_bound(const FormulaSet &u, int k, int density, std::uint64_t n) {
    BigInt e = chi_exponent(u, k, density);
    if (e >= 64)
        return true;
    return BigInt(n) <= (BigInt(1) << static_cast<unsigned>(e)) + BigInt(density) * depth(u);
}

} // namespace densesat
