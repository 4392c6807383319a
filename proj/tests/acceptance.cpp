// Acceptance run: one PASS/FAIL line per criterion.

#include "densesat/corpus.hpp"
#include "densesat/json_io.hpp"
#include "densesat/kripke.hpp"
#include "densesat/reduction.hpp"
#include "densesat/solver.hpp"
#include "densesat/window.hpp"
#include "support.hpp"

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace densesat;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int n, const std::string &name, const Verdict &v) {
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << n << " " << name << ": " << v.detail << std::endl;
    if (!v.pass)
        ++failures;
}

struct Run {
    Status status;
    std::optional<Certificate> certificate;
    SolveStats stats;
};

std::vector<Run> solve_all(const std::vector<Formula> &corpus, int m) {
    std::vector<Run> out;
    out.reserve(corpus.size());
    for (Formula f : corpus) {
        SolverOptions o;
        o.density = m;
        o.certificate = true;
        SolveResult r = sat_formula(f, m, o);
        out.push_back({r.status, std::move(r.certificate), r.stats});
    }
    return out;
}

Verdict agreement(const std::vector<Formula> &corpus, const std::vector<Run> runs[2]) {
    int disagreements = 0, inconclusive = 0, checked = 0;
    std::string first;
    for (int mi = 0; mi < 2; ++mi) {
        int m = mi + 2;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            auto bf = brute_force_sat(corpus[i], m, 4);
            bool sat = runs[mi][i].status == Status::Satisfiable;
            ++checked;
            if (bf.has_value() != sat) {
                if (sat) {
                    ++inconclusive;
                } else {
                    ++disagreements;
                    if (first.empty())
                        first = print(corpus[i]) + " at density " + std::to_string(m);
                }
            }
        }
    }
    std::ostringstream s;
    s << checked << " solves, " << disagreements << " conclusive disagreements, " << inconclusive
      << " satisfiable without a model of <= 4 worlds";
    if (!first.empty())
        s << "; first " << first;
    return {disagreements == 0, s.str()};
}

Verdict axiom_suite() {
    testsupport::Gen g(2024);
    int wrong = 0, total = 0;
    std::string first;
    for (int i = 0; i < 200; ++i) {
        Formula psi = g.formula(2, 1 + g.below(10));
        for (int n : {2, 3}) {
            Formula f = Formula::conj(testsupport::boxes(n, psi), Formula::diamond(Formula::neg(psi)));
            ++total;
            if (sat_formula(f, n).status != Status::Unsatisfiable) {
                ++wrong;
                if (first.empty())
                    first = print(f);
            }
        }
    }
    return {wrong == 0, std::to_string(total) + " instances, " + std::to_string(wrong) + " satisfiable" +
                            (first.empty() ? "" : "; first " + first)};
}

Verdict tau_suite(const std::vector<Formula> &corpus) {
    int wrong = 0, oversize = 0;
    std::string first;
    for (Formula f : corpus) {
        Formula t = tau("g", f);
        bool k_valid = !k_sat(Formula::neg(f));
        bool dense_valid = sat_formula(Formula::neg(t), 2).status == Status::Unsatisfiable;
        if (k_valid != dense_valid) {
            ++wrong;
            if (first.empty())
                first = print(f);
        }
        if (!tau_size_check("g", f))
            ++oversize;
    }
    std::ostringstream s;
    s << corpus.size() << " formulas, " << wrong << " disagreements, " << oversize << " above " << kTauSizeConstant
      << "|f|";
    if (!first.empty())
        s << "; first " << first;
    return {wrong == 0 && oversize == 0, s.str()};
}

Verdict window_pairs(const std::vector<Formula> &corpus) {
    const int target = 1000;
    int failed = 0;
    int pairs[2] = {0, 0};
    std::string first;
    for (int mi = 0; mi < 2; ++mi) {
        int m = mi + 2;
        WindowGenerator gen(m);
        for (Formula f : corpus) {
            if (pairs[mi] >= target)
                break;
            for (const auto &u : collect_ccs({f})) {
                int k = depth(u);
                if (k == 0)
                    continue;
                for (const auto &v0 : collect_ccs(box_minus(u))) {
                    int taken = 0;
                    gen.windows(u, v0, k, [&](const Window &w) {
                        gen.continuations(w, u, k, [&](const Window &w2) {
                            ++pairs[mi];
                            bool ok = is_continuation(w, w2, u, k) &&
                                      check_window(glue(w, w2, u, k), u, v0, {k, k + 1, m});
                            for (int i = 1; ok && i <= k; ++i)
                                ok = degree_gap(w, w2, u, i) <= degree_gap_bound(u, i, k);
                            if (!ok) {
                                ++failed;
                                if (first.empty())
                                    first = print(u);
                            }
                            return pairs[mi] < target;
                        });
                        return ++taken < 4 && pairs[mi] < target;
                    });
                }
            }
        }
    }
    std::ostringstream s;
    s << pairs[0] << " pairs at density 2, " << pairs[1] << " at density 3, " << failed << " failures";
    if (!first.empty())
        s << "; first anchor " << first;
    return {failed == 0 && pairs[0] >= target && pairs[1] >= target, s.str()};
}

Verdict bounds(const std::vector<Formula> &corpus, const std::vector<Run> runs[2]) {
    int members = 0, chain = 0;
    std::uint64_t max_members = 0, max_chain = 0;
    for (int mi = 0; mi < 2; ++mi)
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const SolveStats &s = runs[mi][i].stats;
            members += !s.members_within_bound;
            chain += !s.chain_within_bound;
            max_members = std::max(max_members, s.max_members);
            max_chain = std::max(max_chain, s.max_chain);
        }
    std::ostringstream s;
    s << members << " member-count violations, " << chain << " chain-length violations; largest window "
      << max_members << " members, longest chain " << max_chain;
    return {members == 0 && chain == 0, s.str()};
}

// One field changed in a way the checker must refuse.
bool mutate(Certificate &c, std::mt19937_64 &rng, std::string &what) {
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    Formula bot = Formula::bottom();
    switch (pick(10)) {
    case 0:
        c.version += 1;
        what = "version";
        return true;
    case 1:
        c.density += 1;
        what = "density";
        return true;
    case 2:
        c.root = static_cast<int>(c.entries.size());
        what = "root";
        return true;
    case 3: {
        auto &e = c.entries[pick(c.entries.size())];
        e.ccs = e.ccs.united({bot});
        what = "entry ccs";
        return true;
    }
    default:
        break;
    }
    std::vector<CertDiamond *> diamonds;
    for (auto &e : c.entries)
        for (auto &d : e.diamonds)
            diamonds.push_back(&d);
    if (diamonds.empty() || c.chains.empty())
        return false;
    switch (pick(6)) {
    case 0: {
        CertDiamond *d = diamonds[pick(diamonds.size())];
        d->chain = static_cast<int>(c.chains.size());
        what = "diamond chain";
        return true;
    }
    case 1: {
        CertDiamond *d = diamonds[pick(diamonds.size())];
        d->seed = d->seed.united({bot});
        what = "diamond seed";
        return true;
    }
    case 2: {
        auto &ch = c.chains[pick(c.chains.size())];
        ch.anchor = ch.anchor.united({bot});
        what = "chain anchor";
        return true;
    }
    case 3: {
        auto &ch = c.chains[pick(c.chains.size())];
        ch.k += 1;
        what = "chain budget";
        return true;
    }
    case 4: {
        auto &ch = c.chains[pick(c.chains.size())];
        std::size_t wi = pick(ch.windows.size());
        Window w = ch.windows[wi];
        if (w.empty())
            return false;
        std::vector<FormulaSet> nodes = w.nodes();
        std::size_t p = pick(nodes.size());
        nodes[p] = nodes[p].united({bot});
        ch.windows[wi] = Window::make(w.k(), w.density(), nodes, w.subs());
        what = "window node";
        return true;
    }
    default: {
        auto &ch = c.chains[pick(c.chains.size())];
        if (ch.steps.empty() || ch.steps[0].nodes.empty())
            return false;
        ch.steps[0].nodes[pick(ch.steps[0].nodes.size())] = static_cast<int>(c.entries.size());
        what = "step node";
        return true;
    }
    }
}

Verdict certificates(const std::vector<Formula> &corpus, const std::vector<Run> runs[2]) {
    int sat = 0, invalid = 0, missing = 0;
    std::string first;
    std::vector<std::pair<const Certificate *, int>> pool;
    for (int mi = 0; mi < 2; ++mi)
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const Run &r = runs[mi][i];
            if (r.status != Status::Satisfiable)
                continue;
            ++sat;
            if (!r.certificate) {
                ++missing;
                continue;
            }
            CertificateCheck ch = check_certificate(*r.certificate, mi + 2);
            if (!ch.ok) {
                ++invalid;
                if (first.empty())
                    first = print(corpus[i]) + ": " + ch.reason;
            }
            pool.push_back({&*r.certificate, mi + 2});
        }
    std::mt19937_64 rng(6);
    int mutations = 0, accepted = 0;
    std::string leak;
    while (mutations < 500 && !pool.empty()) {
        auto [cert, m] = pool[rng() % pool.size()];
        Certificate c = *cert;
        std::string what;
        if (!mutate(c, rng, what))
            continue;
        ++mutations;
        if (check_certificate(c, m).ok) {
            ++accepted;
            if (leak.empty())
                leak = what + " in " + print(cert->formula);
        }
    }
    std::ostringstream s;
    s << sat << " certificates, " << invalid << " invalid, " << missing << " missing; " << mutations
      << " mutations, " << accepted << " accepted";
    if (!first.empty())
        s << "; first invalid " << first;
    if (!leak.empty())
        s << "; first accepted mutation " << leak;
    return {invalid == 0 && missing == 0 && mutations == 500 && accepted == 0, s.str()};
}

Verdict k_monotone(const std::vector<Formula> &corpus, const std::vector<Run> runs[2]) {
    int violations = 0;
    for (int mi = 0; mi < 2; ++mi)
        for (std::size_t i = 0; i < corpus.size(); ++i)
            if (runs[mi][i].status == Status::Satisfiable && !k_sat(corpus[i]))
                ++violations;
    return {violations == 0, std::to_string(violations) + " satisfiable formulas unsatisfiable in K"};
}

Verdict determinism(const std::vector<Formula> &corpus, const std::vector<Run> runs[2]) {
    int differ = 0;
    for (int mi = 0; mi < 2; ++mi) {
        std::vector<Run> again = solve_all(corpus, mi + 2);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const Run &a = runs[mi][i], &b = again[i];
            bool same = a.status == b.status && a.stats.same_structure(b.stats) &&
                        a.certificate.has_value() == b.certificate.has_value();
            if (same && a.certificate)
                same = to_json(*a.certificate).dump() == to_json(*b.certificate).dump();
            differ += !same;
        }
    }
    return {differ == 0, std::to_string(2 * corpus.size()) + " solves repeated, " + std::to_string(differ) +
                             " differ"};
}

} // namespace

int main() {
    std::vector<Formula> corpus = full_corpus({});
    std::cout << "corpus " << corpus.size() << " formulas" << std::endl;
    std::vector<Run> runs[2] = {solve_all(corpus, 2), solve_all(corpus, 3)};

    report(1, "oracle agreement", agreement(corpus, runs));
    report(2, "density axiom suite", axiom_suite());
    report(3, "guarded translation", tau_suite(corpus));
    report(4, "window algebra", window_pairs(corpus));
    report(5, "bound accounting", bounds(corpus, runs));
    report(6, "certificates", certificates(corpus, runs));
    report(7, "K-monotonicity", k_monotone(corpus, runs));
    report(8, "determinism", determinism(corpus, runs));
    return failures == 0 ? 0 : 1;
}
