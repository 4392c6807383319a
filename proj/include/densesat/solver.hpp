// Backtracking decision procedure for m-dense logics with certificates.

#ifndef DENSESAT_SOLVER_HPP
#define DENSESAT_SOLVER_HPP

#include "densesat/ccs.hpp"
#include "densesat/formula.hpp"
#include "densesat/window.hpp"

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace densesat {

struct ResourceLimit : Error {
    using Error::Error;
};

struct Ceilings {
    std::uint64_t branches = 50'000'000;
    std::uint64_t chain = 1'000'000;
    std::int64_t wall_ms = 30 * 60 * 1000;
};

struct SolverOptions {
    int density = 2;
    bool certificate = false;
    Ceilings ceilings;
    /// 0 silent, 1 per-diamond decisions, 2 per-window decisions (stderr).
    int trace = 0;
};

enum class Status { Satisfiable, Unsatisfiable };

struct SolveStats {
    std::uint64_t branches = 0;
    std::uint64_t windows = 0;
    std::uint64_t max_chain = 0;
    std::uint64_t max_depth = 0;
    std::uint64_t peak_live_windows = 0;
    /// Largest members(W) over every window examined, with its Q bound.
    std::uint64_t max_members = 0;
    bool members_within_bound = true;
    bool chain_within_bound = true;
    std::int64_t elapsed_ms = 0;

    /// All fields except elapsed_ms.
    bool same_structure(const SolveStats &o) const;
};

// ── Certificates ────────────────────────────────────────────────────────────
//
// A DAG of CCS entries and window chains.  Every diamond of an entry points
// at a chain for (entry, seed); every chain step points at the entries of the
// nodes it fixes and at the subchains it descends into.

struct CertDiamond {
    Formula formula;
    FormulaSet seed;
    int chain = -1;
};

struct CertEntry {
    FormulaSet ccs;
    std::vector<CertDiamond> diamonds;
};

struct CertStep {
    std::vector<int> nodes;
    std::vector<int> subchains;
};

struct CertChain {
    FormulaSet anchor;
    int k = 0;
    bool base = false;
    std::vector<Window> windows;
    std::optional<std::pair<int, int>> repetition;
    std::vector<CertStep> steps;
};

struct Certificate {
    int version = 1;
    int density = 2;
    Formula formula;
    int root = -1;
    std::vector<CertEntry> entries;
    std::vector<CertChain> chains;
};

struct SolveResult {
    Status status = Status::Unsatisfiable;
    std::optional<Certificate> certificate;
    SolveStats stats;
};

struct CertificateCheck {
    bool ok = true;
    /// Path to the first failing clause, empty when ok.
    std::string reason;
};

/// Single-query solver; memo tables persist across calls on one instance.
class Solver {
  public:
    explicit Solver(SolverOptions options = {});

    SolveResult solve(Formula f);
    bool sat_ccs(const FormulaSet &u);
    bool satw(const Window &w, const FormulaSet &anchor, int k);

    const SolveStats &stats() const { return stats_; }
    int density() const { return options_.density; }

  private:
    struct WinKey {
        Window w;
        FormulaSet anchor;
        int k;
        bool operator==(const WinKey &) const = default;
    };
    struct WinKeyHash {
        std::size_t operator()(const WinKey &key) const noexcept {
            return key.w.hash() * 1000003u ^ key.anchor.hash() * 31u ^ static_cast<std::size_t>(key.k);
        }
    };
    enum class Mark { Base, Next };
    struct WinRecord {
        bool ok = false;
        Mark mark = Mark::Base;
        Window next;
    };
    struct Witness {
        Formula formula;
        FormulaSet seed;
        Window window;
    };
    struct CcsRecord {
        bool ok = false;
        std::vector<Witness> witnesses;
    };

    bool satw_rec(const Window &w, const FormulaSet &anchor, int k);
    bool local_ok(const Window &w, int k);
    void observe(const Window &w, const FormulaSet &anchor, int k);
    void tick();

    int entry_of(const FormulaSet &u, Certificate &c, std::unordered_map<FormulaSet, int> &entries,
                 std::unordered_map<WinKey, int, WinKeyHash> &chains);
    int chain_of(const Window &w, const FormulaSet &anchor, int k, Certificate &c,
                 std::unordered_map<FormulaSet, int> &entries,
                 std::unordered_map<WinKey, int, WinKeyHash> &chains);

    SolverOptions options_;
    WindowGenerator gen_;
    SolveStats stats_;
    std::unordered_map<FormulaSet, CcsRecord> ccs_memo_;
    std::unordered_map<WinKey, WinRecord, WinKeyHash> win_memo_;
    std::unordered_map<WinKey, std::size_t, WinKeyHash> on_path_;
    std::vector<std::size_t> chain_len_;
    std::uint64_t depth_ = 0;
    std::size_t live_base_ = 0;
    std::chrono::steady_clock::time_point start_;
};

SolveResult sat_formula(Formula f, int density, const SolverOptions &options = {});

CertificateCheck check_certificate(const Certificate &c, int density);

} // namespace densesat

#endif // DENSESAT_SOLVER_HPP
