#include "densesat/solver.hpp"

#include <algorithm>
#include <iostream>
#include <map>

namespace densesat {

bool SolveStats::same_structure(const SolveStats &o) const {
    return branches == o.branches && windows == o.windows && max_chain == o.max_chain &&
           max_depth == o.max_depth && peak_live_windows == o.peak_live_windows &&
           max_members == o.max_members && members_within_bound == o.members_within_bound &&
           chain_within_bound == o.chain_within_bound;
}

namespace {

std::uint64_t saturate(const BigInt &x) {
    if (x > BigInt(std::numeric_limits<std::uint64_t>::max()))
        return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(x);
}

std::uint64_t member_limit(int k, int len, int density) {
    static thread_local std::map<std::tuple<int, int, int>, std::uint64_t> table;
    auto key = std::make_tuple(k, len, density);
    auto it = table.find(key);
    if (it == table.end())
        it = table.emplace(key, saturate(member_bound(k, len, density))).first;
    return it->second;
}

} // namespace

Solver::Solver(SolverOptions options) : options_(options), gen_(options.density) {
    if (options_.density < 2)
        throw PreconditionViolated("density must be at least 2");
    start_ = std::chrono::steady_clock::now();
}

void Solver::tick() {
    ++stats_.branches;
    if (stats_.branches > options_.ceilings.branches)
        throw ResourceLimit("branch ceiling of " + std::to_string(options_.ceilings.branches) + " reached");
    if ((stats_.branches & 1023) == 0) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                          start_)
                      .count();
        if (ms > options_.ceilings.wall_ms)
            throw ResourceLimit("wall-clock ceiling of " + std::to_string(options_.ceilings.wall_ms) +
                                " ms reached");
    }
}

void Solver::observe(const Window &w, const FormulaSet &, int k) {
    ++stats_.windows;
    std::size_t live = Window::live_count();
    if (live > live_base_)
        stats_.peak_live_windows = std::max<std::uint64_t>(stats_.peak_live_windows, live - live_base_);
    if (w.empty())
        return;
    std::uint64_t n = members(w).size();
    stats_.max_members = std::max(stats_.max_members, n);
    if (n > member_limit(k, w.length(), options_.density))
        stats_.members_within_bound = false;
}

bool Solver::local_ok(const Window &w, int k) {
    int m = options_.density;
    for (int p = 0; p <= m - 2; ++p)
        if (!sat_ccs(w.node(p)))
            return false;
    for (int p = 0; p <= m - 3; ++p)
        if (!satw(w.sub(p), w.node(p + 1), k - 1))
            return false;
    return true;
}

bool Solver::satw(const Window &w, const FormulaSet &anchor, int k) {
    chain_len_.push_back(0);
    ++depth_;
    stats_.max_depth = std::max(stats_.max_depth, depth_);
    bool ok;
    try {
        ok = satw_rec(w, anchor, k);
    } catch (...) {
        --depth_;
        chain_len_.pop_back();
        throw;
    }
    --depth_;
    chain_len_.pop_back();
    return ok;
}

bool Solver::satw_rec(const Window &w, const FormulaSet &anchor, int k) {
    WinKey key{w, anchor, k};
    if (auto it = win_memo_.find(key); it != win_memo_.end())
        return it->second.ok;
    if (k == 0 || depth(anchor) <= 1) {
        win_memo_.emplace(std::move(key), WinRecord{true, Mark::Base, {}});
        return true;
    }
    if (on_path_.count(key))
        return true;
    tick();
    observe(w, anchor, k);
    if (!local_ok(w, k)) {
        win_memo_.emplace(std::move(key), WinRecord{false, Mark::Next, {}});
        return false;
    }

    std::uint64_t len = ++chain_len_.back();
    stats_.max_chain = std::max(stats_.max_chain, len);
    if (len > options_.ceilings.chain)
        throw ResourceLimit("chain ceiling of " + std::to_string(options_.ceilings.chain) + " reached");
    if (!within_chi_bound(anchor, k, options_.density, len))
        stats_.chain_within_bound = false;
    on_path_.emplace(key, len);

    int m = options_.density;
    WindowParams glued{k, w.length() + 1, m, LambdaKind::Depth};
    bool found = false;
    Window next;
    try {
        gen_.continuations(w, anchor, k, [&](const Window &w2) {
            tick();
            observe(w2, anchor, k);
            if (!check_window(glue(w, w2, anchor, k), anchor, w.node(0), glued))
                return true;
            if (!satw(w.sub(m - 2), w2.node(0), k - 1))
                return true;
            if (!satw_rec(w2, anchor, k))
                return true;
            found = true;
            next = w2;
            return false;
        });
    } catch (...) {
        on_path_.erase(key);
        --chain_len_.back();
        throw;
    }
    on_path_.erase(key);
    --chain_len_.back();
    if (options_.trace >= 2)
        std::cerr << "satw k=" << k << " anchor=" << print(anchor) << " -> " << (found ? "sat" : "unsat")
                  << "\n";
    win_memo_.emplace(std::move(key), WinRecord{found, Mark::Next, next});
    return found;
}

bool Solver::sat_ccs(const FormulaSet &u) {
    if (auto it = ccs_memo_.find(u); it != ccs_memo_.end())
        return it->second.ok;
    ++depth_;
    stats_.max_depth = std::max(stats_.max_depth, depth_);
    CcsRecord rec;
    rec.ok = true;
    FormulaSet inherited = box_minus_closure(u, options_.density);
    int k = depth(u);
    for (Formula g : u) {
        if (!g.is_diamond())
            continue;
        FormulaSet s = inherited;
        s.insert(Formula::neg(g.child().child()));
        bool found = false;
        for (const FormulaSet &seed : gen_.ccs().of(s)) {
            tick();
            gen_.windows(u, seed, k, [&](const Window &w) {
                tick();
                observe(w, u, k);
                if (!satw(w, u, k))
                    return true;
                rec.witnesses.push_back({g, seed, w});
                found = true;
                return false;
            });
            if (found)
                break;
        }
        if (options_.trace >= 1)
            std::cerr << "diamond " << print(g) << " in " << print(u) << " -> "
                      << (found ? "witnessed" : "refuted") << "\n";
        if (!found) {
            rec.ok = false;
            rec.witnesses.clear();
            break;
        }
    }
    --depth_;
    bool ok = rec.ok;
    ccs_memo_.emplace(u, std::move(rec));
    return ok;
}

SolveResult Solver::solve(Formula f) {
    start_ = std::chrono::steady_clock::now();
    live_base_ = Window::live_count();
    SolveResult result;
    for (const FormulaSet &u : gen_.ccs().of(FormulaSet{f})) {
        tick();
        if (!sat_ccs(u))
            continue;
        result.status = Status::Satisfiable;
        if (options_.certificate) {
            Certificate c;
            c.density = options_.density;
            c.formula = f;
            std::unordered_map<FormulaSet, int> entries;
            std::unordered_map<WinKey, int, WinKeyHash> chains;
            c.root = entry_of(u, c, entries, chains);
            result.certificate = std::move(c);
        }
        break;
    }
    stats_.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
    result.stats = stats_;
    return result;
}

int Solver::entry_of(const FormulaSet &u, Certificate &c, std::unordered_map<FormulaSet, int> &entries,
                     std::unordered_map<WinKey, int, WinKeyHash> &chains) {
    if (auto it = entries.find(u); it != entries.end())
        return it->second;
    int idx = static_cast<int>(c.entries.size());
    c.entries.push_back({u, {}});
    entries.emplace(u, idx);
    const CcsRecord &rec = ccs_memo_.at(u);
    std::vector<CertDiamond> diamonds;
    for (const Witness &wt : rec.witnesses)
        diamonds.push_back({wt.formula, wt.seed, chain_of(wt.window, u, depth(u), c, entries, chains)});
    c.entries[idx].diamonds = std::move(diamonds);
    return idx;
}

int Solver::chain_of(const Window &w, const FormulaSet &anchor, int k, Certificate &c,
                     std::unordered_map<FormulaSet, int> &entries,
                     std::unordered_map<WinKey, int, WinKeyHash> &chains) {
    WinKey key{w, anchor, k};
    if (auto it = chains.find(key); it != chains.end())
        return it->second;
    int idx = static_cast<int>(c.chains.size());
    c.chains.emplace_back();
    chains.emplace(key, idx);

    CertChain chain;
    chain.anchor = anchor;
    chain.k = k;
    chain.windows.push_back(w);
    if (k == 0 || depth(anchor) <= 1) {
        chain.base = true;
        c.chains[idx] = std::move(chain);
        return idx;
    }
    std::unordered_map<Window, int> seen{{w, 0}};
    for (;;) {
        const WinRecord &rec = win_memo_.at(WinKey{chain.windows.back(), anchor, k});
        Window nxt = rec.next;
        int j = static_cast<int>(chain.windows.size());
        chain.windows.push_back(nxt);
        if (auto it = seen.find(nxt); it != seen.end()) {
            chain.repetition = std::make_pair(it->second, j);
            break;
        }
        seen.emplace(nxt, j);
    }
    int m = options_.density;
    int j = chain.repetition->second;
    for (int i = 0; i < j; ++i) {
        const Window &cur = chain.windows[i];
        CertStep step;
        for (int p = 0; p <= m - 2; ++p)
            step.nodes.push_back(entry_of(cur.node(p), c, entries, chains));
        for (int p = 0; p <= m - 2; ++p) {
            const FormulaSet &sub_anchor = p < m - 2 ? cur.node(p + 1) : chain.windows[i + 1].node(0);
            step.subchains.push_back(chain_of(cur.sub(p), sub_anchor, k - 1, c, entries, chains));
        }
        chain.steps.push_back(std::move(step));
    }
    c.chains[idx] = std::move(chain);
    return idx;
}

SolveResult sat_formula(Formula f, int density, const SolverOptions &options) {
    SolverOptions o = options;
    o.density = density;
    Solver solver(o);
    return solver.solve(f);
}

// ── Checking ────────────────────────────────────────────────────────────────

namespace {

struct Fail {
    std::string reason;
};

void require(bool cond, const std::string &path, const std::string &what) {
    if (!cond)
        throw Fail{path + ": " + what};
}

// Node depth below the anchor's, or 0 under a propositional anchor.
bool descends(const FormulaSet &v, int anchor_depth) { return depth(v) <= std::max(0, anchor_depth - 1); }

// Nodes after the first descend from their anchor; a first node is inherited
// from the enclosing window.
bool nodes_below(const Window &w, int bound) {
    if (w.empty())
        return true;
    for (int q = 1; q <= w.last(); ++q)
        if (!descends(w.node(q), bound))
            return false;
    for (int q = 0; q < w.last(); ++q)
        if (!nodes_below(w.sub(q), depth(w.node(q + 1))))
            return false;
    return true;
}

void check_chain(const Certificate &c, int ci, int m) {
    const CertChain &ch = c.chains[ci];
    std::string path = "chains[" + std::to_string(ci) + "]";
    require(ch.k >= 0, path, "negative budget");
    require(!ch.windows.empty(), path, "no windows");
    int da = depth(ch.anchor);
    require(is_ccs(ch.anchor), path, "anchor is not a CCS");
    WindowParams wp{ch.k, ch.k, m, LambdaKind::Depth};
    for (std::size_t i = 0; i < ch.windows.size(); ++i) {
        const Window &w = ch.windows[i];
        std::string wpath = path + ".windows[" + std::to_string(i) + "]";
        FormulaSet first = w.empty() ? FormulaSet{} : w.node(0);
        std::string why = explain_window(w, ch.anchor, first, wp, true);
        require(why.empty(), wpath, why);
        require(nodes_below(w, da), wpath, "node depth not below the anchor");
        require(i == 0 || w.empty() || descends(w.node(0), da), wpath, "first node depth not below the anchor");
    }
    if (ch.base) {
        require(ch.k == 0 || da <= 1, path, "base case needs k = 0 or anchor depth <= 1");
        require(ch.windows.size() == 1 && ch.steps.empty() && !ch.repetition, path,
                "base chain must be a single window");
        return;
    }
    require(ch.repetition.has_value(), path, "missing repetition");
    auto [h, j] = *ch.repetition;
    require(0 <= h && h < j && j == static_cast<int>(ch.windows.size()) - 1, path, "repetition indices");
    require(ch.windows[h] == ch.windows[j], path, "repetition windows differ");
    require(static_cast<int>(ch.steps.size()) == j, path, "one step per window before the repeat");
    for (int i = 0; i < j; ++i) {
        const Window &a = ch.windows[i];
        const Window &b = ch.windows[i + 1];
        std::string spath = path + ".steps[" + std::to_string(i) + "]";
        bool cont = false;
        try {
            cont = is_continuation(a, b, ch.anchor, ch.k);
        } catch (const Error &) {
            cont = false;
        }
        require(cont, spath, "not a continuation");
        WindowParams gp{ch.k, ch.k + 1, m, LambdaKind::Depth};
        std::string why = explain_window(glue(a, b, ch.anchor, ch.k), ch.anchor, a.node(0), gp, true);
        require(why.empty(), spath, "glued window: " + why);
        const CertStep &st = ch.steps[i];
        require(static_cast<int>(st.nodes.size()) == m - 1, spath, "node reference count");
        require(static_cast<int>(st.subchains.size()) == m - 1, spath, "subchain reference count");
        for (int p = 0; p <= m - 2; ++p) {
            int e = st.nodes[p];
            require(0 <= e && e < static_cast<int>(c.entries.size()), spath, "node reference out of range");
            require(c.entries[e].ccs == a.node(p), spath, "node reference names another set");
            require((i == 0 && p == 0) || descends(c.entries[e].ccs, da), spath, "node reference does not descend");
            int s = st.subchains[p];
            require(0 <= s && s < static_cast<int>(c.chains.size()), spath, "subchain out of range");
            const CertChain &sub = c.chains[s];
            const FormulaSet &want = p < m - 2 ? a.node(p + 1) : b.node(0);
            require(sub.anchor == want, spath, "subchain anchor");
            require(sub.k == ch.k - 1, spath, "subchain budget");
            require(!sub.windows.empty() && sub.windows[0] == a.sub(p), spath, "subchain start window");
        }
    }
}

void check_entry(const Certificate &c, int ei, int m) {
    const CertEntry &en = c.entries[ei];
    std::string path = "entries[" + std::to_string(ei) + "]";
    require(is_ccs(en.ccs), path, "not a CCS");
    std::size_t diamonds = 0;
    for (Formula g : en.ccs)
        if (g.is_diamond())
            ++diamonds;
    require(en.diamonds.size() == diamonds, path, "one witness per diamond");
    FormulaSet bu = box_minus(en.ccs);
    for (std::size_t i = 0; i < en.diamonds.size(); ++i) {
        const CertDiamond &d = en.diamonds[i];
        std::string dpath = path + ".diamonds[" + std::to_string(i) + "]";
        require(d.formula.valid() && d.formula.is_diamond() && en.ccs.contains(d.formula), dpath,
                "not a diamond of the entry");
        for (std::size_t j = 0; j < i; ++j)
            require(en.diamonds[j].formula != d.formula, dpath, "duplicate witness");
        require(is_ccs(d.seed), dpath, "seed is not a CCS");
        require(d.seed.contains(Formula::neg(d.formula.child().child())), dpath, "seed misses the negation");
        require(bu.subset_of(d.seed), dpath, "seed misses box-minus of the entry");
        require(0 <= d.chain && d.chain < static_cast<int>(c.chains.size()), dpath, "chain out of range");
        const CertChain &ch = c.chains[d.chain];
        require(ch.anchor == en.ccs, dpath, "chain anchor");
        require(ch.k == depth(en.ccs), dpath, "chain budget");
        require(!ch.windows.empty() && !ch.windows[0].empty() && d.seed.subset_of(ch.windows[0].node(0)),
                dpath, "first window does not extend the seed");
        require(descends(ch.windows[0].node(0), depth(en.ccs)), dpath, "first node does not descend");
    }
    (void)m;
}

// Entries are vertices 0..E-1, chains E..E+C-1.
void check_acyclic(const Certificate &c) {
    std::size_t e = c.entries.size();
    std::vector<std::vector<std::size_t>> out(e + c.chains.size());
    for (std::size_t i = 0; i < e; ++i)
        for (const auto &d : c.entries[i].diamonds)
            out[i].push_back(e + d.chain);
    for (std::size_t i = 0; i < c.chains.size(); ++i)
        for (const auto &st : c.chains[i].steps) {
            for (int n : st.nodes)
                out[e + i].push_back(n);
            for (int s : st.subchains)
                out[e + i].push_back(e + s);
        }
    std::vector<int> color(out.size(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    for (std::size_t root = 0; root < out.size(); ++root) {
        if (color[root])
            continue;
        stack.push_back({root, 0});
        color[root] = 1;
        while (!stack.empty()) {
            auto &[v, i] = stack.back();
            if (i == out[v].size()) {
                color[v] = 2;
                stack.pop_back();
                continue;
            }
            std::size_t w = out[v][i++];
            require(color[w] != 1, "graph", "references form a cycle");
            if (!color[w]) {
                color[w] = 1;
                stack.push_back({w, 0});
            }
        }
    }
}

} // namespace

CertificateCheck check_certificate(const Certificate &c, int density) {
    try {
        require(c.version == 1, "version", "unsupported version");
        require(c.density == density && density >= 2, "density", "density mismatch");
        require(c.formula.valid(), "formula", "missing formula");
        require(0 <= c.root && c.root < static_cast<int>(c.entries.size()), "root", "out of range");
        require(c.entries[c.root].ccs.contains(c.formula), "root", "root entry misses the formula");
        for (int i = 0; i < static_cast<int>(c.entries.size()); ++i)
            check_entry(c, i, density);
        for (int i = 0; i < static_cast<int>(c.chains.size()); ++i)
            check_chain(c, i, density);
        check_acyclic(c);
    } catch (const Fail &f) {
        return {false, f.reason};
    } catch (const Error &e) {
        return {false, std::string("malformed: ") + e.what()};
    }
    return {};
}

} // namespace densesat
