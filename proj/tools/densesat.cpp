// densesat: command-line front end.

#include "densesat/corpus.hpp"
#include "densesat/json_io.hpp"
#include "densesat/kripke.hpp"
#include "densesat/reduction.hpp"
#include "densesat/solver.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace densesat;

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitUsage = 1;
constexpr int kExitCeiling = 2;
constexpr int kExitBadCertificate = 3;
constexpr int kExitDisagreement = 4;

struct Config {
    int density = 2;
    int max_worlds = 4;
    std::uint64_t budget = 10000;
    std::string emit_certificate;
    std::string format = "text";
    std::uint64_t seed = 1;
    std::string corpus;
    std::uint64_t ceiling_branches = Ceilings{}.branches;
    std::uint64_t ceiling_chain = Ceilings{}.chain;
    std::int64_t ceiling_ms = Ceilings{}.wall_ms;
    int world = 0;
    int max_length = 7;
    int random_count = 100;
    std::string output;
};

int trace_level() {
    const char *v = std::getenv("DENSESAT_LOG");
    if (!v)
        return 0;
    std::string s(v);
    if (s == "debug" || s == "2")
        return 2;
    if (s == "info" || s == "1")
        return 1;
    return 0;
}

SolverOptions solver_options(const Config &c, bool certificate) {
    SolverOptions o;
    o.density = c.density;
    o.certificate = certificate;
    o.ceilings.branches = c.ceiling_branches;
    o.ceilings.chain = c.ceiling_chain;
    o.ceilings.wall_ms = c.ceiling_ms;
    o.trace = trace_level();
    return o;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string &path, const std::string &text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path);
    out << text;
}

std::vector<Formula> load_corpus(const std::string &path) {
    std::vector<Formula> out;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#')
            out.push_back(parse(line));
    return out;
}

const char *outcome_name(TableauOutcome o) {
    switch (o) {
    case TableauOutcome::Saturated:
        return "saturated";
    case TableauOutcome::Closed:
        return "closed";
    case TableauOutcome::Exhausted:
        return "exhausted";
    }
    return "?";
}

// ── solve ───────────────────────────────────────────────────────────────────

int cmd_solve(const std::string &text, const Config &c) {
    Formula f = parse(text);
    SolveResult r = sat_formula(f, c.density, solver_options(c, !c.emit_certificate.empty()));
    bool sat = r.status == Status::Satisfiable;
    if (r.certificate)
        write_text(c.emit_certificate, to_json(*r.certificate).dump(1) + "\n");
    if (c.format == "json") {
        Json out{{"formula", print(f)}, {"density", c.density}, {"status", sat ? "sat" : "unsat"},
                 {"stats", to_json(r.stats)}};
        std::cout << out.dump() << "\n";
    } else if (c.emit_certificate != "-") {
        std::cout << (sat ? "SAT" : "UNSAT") << "  density=" << c.density << "  branches=" << r.stats.branches
                  << "  windows=" << r.stats.windows << "  max_chain=" << r.stats.max_chain
                  << "  max_depth=" << r.stats.max_depth << "  peak_live_windows=" << r.stats.peak_live_windows
                  << "\n";
    }
    return sat ? kExitSat : kExitUnsat;
}

// ── oracle ──────────────────────────────────────────────────────────────────

struct OracleRow {
    Formula f;
    bool solver;
    bool model;
    TableauOutcome naive;
    bool k;
    bool disagreement() const {
        return (model && !solver) || (naive == TableauOutcome::Saturated && !solver) ||
               (naive == TableauOutcome::Closed && solver) || (solver && !k);
    }
};

OracleRow oracle_row(Formula f, const Config &c) {
    OracleRow row{f, false, false, TableauOutcome::Exhausted, false};
    row.solver = sat_formula(f, c.density, solver_options(c, false)).status == Status::Satisfiable;
    row.model = brute_force_sat(f, c.density, c.max_worlds).has_value();
    row.naive = naive_tableau(FormulaSet{f}, c.density, c.budget).outcome;
    row.k = k_sat(f);
    return row;
}

int cmd_oracle(const std::string &text, const Config &c) {
    std::vector<Formula> items;
    if (!c.corpus.empty())
        items = load_corpus(c.corpus);
    else
        items.push_back(parse(text));
    std::size_t disagreements = 0;
    Json rows = Json::array();
    for (Formula f : items) {
        OracleRow row = oracle_row(f, c);
        disagreements += row.disagreement();
        if (c.format == "json") {
            rows.push_back({{"formula", print(f)},
                            {"solver", row.solver ? "sat" : "unsat"},
                            {"brute_force", row.model ? "model" : "none"},
                            {"naive", outcome_name(row.naive)},
                            {"k", row.k ? "sat" : "unsat"},
                            {"disagreement", row.disagreement()}});
        } else if (items.size() == 1 || row.disagreement()) {
            std::cout << print(f) << "\n"
                      << "  solver       " << (row.solver ? "sat" : "unsat") << "\n"
                      << "  brute force  " << (row.model ? "model found" : "no model")
                      << " (max_worlds " << c.max_worlds << ")\n"
                      << "  naive        " << outcome_name(row.naive) << " (budget " << c.budget << ")\n"
                      << "  K            " << (row.k ? "sat" : "unsat") << "\n";
            if (row.disagreement())
                std::cout << "  DISAGREEMENT\n";
        }
    }
    if (c.format == "json")
        std::cout << Json{{"density", c.density}, {"rows", rows}, {"disagreements", disagreements}}.dump() << "\n";
    else
        std::cout << items.size() << " formulas, " << disagreements << " conclusive disagreements\n";
    return disagreements ? kExitDisagreement : 0;
}

// ── check-cert ──────────────────────────────────────────────────────────────

int cmd_check_cert(const std::string &path, const Config &c, bool density_given) {
    std::string text = read_file(path);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    Certificate cert = certificate_from_json(j);
    int density = density_given ? c.density : cert.density;
    CertificateCheck check = check_certificate(cert, density);
    if (!check.ok) {
        std::cout << "INVALID " << check.reason << "\n";
        return kExitBadCertificate;
    }
    std::cout << "VALID  entries=" << cert.entries.size() << "  chains=" << cert.chains.size() << "\n";
    return 0;
}

// ── reduce ──────────────────────────────────────────────────────────────────

int cmd_reduce(const std::string &atom, const std::string &text) {
    std::cout << print(tau(atom, parse(text))) << "\n";
    return 0;
}

// ── corpus ──────────────────────────────────────────────────────────────────

int cmd_corpus(const Config &c) {
    CorpusConfig cc;
    cc.max_length = c.max_length;
    cc.random_count = c.random_count;
    cc.seed = c.seed;
    std::string text;
    for (Formula f : full_corpus(cc))
        text += print(f) + "\n";
    write_text(c.output.empty() ? "-" : c.output, text);
    return 0;
}

// ── bench ───────────────────────────────────────────────────────────────────

int cmd_bench(const Config &c) {
    std::vector<Formula> items;
    if (!c.corpus.empty()) {
        items = load_corpus(c.corpus);
    } else {
        CorpusConfig cc;
        cc.seed = c.seed;
        items = full_corpus(cc);
    }
    bool bounds_ok = true;
    int ceiling_hits = 0;
    Json report = Json::array();
    for (int density : {2, 3}) {
        Config cd = c;
        cd.density = density;
        std::uint64_t peak = 0, chain = 0, depth = 0, members = 0;
        std::int64_t ms = 0;
        for (Formula f : items) {
            try {
                SolveResult r = sat_formula(f, density, solver_options(cd, false));
                peak = std::max(peak, r.stats.peak_live_windows);
                chain = std::max(chain, r.stats.max_chain);
                depth = std::max(depth, r.stats.max_depth);
                members = std::max(members, r.stats.max_members);
                ms += r.stats.elapsed_ms;
                bool ok = r.stats.members_within_bound && r.stats.chain_within_bound;
                bounds_ok = bounds_ok && ok;
                if (c.format == "json")
                    report.push_back({{"formula", print(f)},
                                      {"density", density},
                                      {"status", r.status == Status::Satisfiable ? "sat" : "unsat"},
                                      {"stats", to_json(r.stats)}});
                else if (!ok)
                    std::cout << "BOUND VIOLATION density=" << density << " " << print(f) << "\n";
            } catch (const ResourceLimit &e) {
                ++ceiling_hits;
                std::cout << "CEILING density=" << density << " " << print(f) << ": " << e.what() << "\n";
            }
        }
        if (c.format != "json")
            std::cout << "density " << density << ": " << items.size() << " formulas  peak_live_windows=" << peak
                      << "  max_chain=" << chain << "  max_depth=" << depth << "  max_members=" << members
                      << "  time_ms=" << ms << "\n";
    }
    if (c.format == "json")
        std::cout << Json{{"items", report}, {"bounds_ok", bounds_ok}, {"ceiling_hits", ceiling_hits}}.dump()
                  << "\n";
    else
        std::cout << "bounds " << (bounds_ok ? "hold" : "VIOLATED") << ", " << ceiling_hits << " ceiling hits\n";
    if (ceiling_hits)
        return kExitCeiling;
    return bounds_ok ? 0 : kExitDisagreement;
}

// ── check-model ─────────────────────────────────────────────────────────────

int cmd_check_model(const std::string &path, const std::string &text, const Config &c) {
    KripkeModel m = model_from_json(Json::parse(read_file(path)));
    Formula f = parse(text);
    bool holds = model_check(m, c.world, f);
    bool dense = is_n_dense(m, c.density);
    std::cout << (holds ? "TRUE" : "FALSE") << " at world " << c.world << "; frame is "
              << (dense ? "" : "not ") << c.density << "-dense\n";
    return holds ? 0 : 5;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Satisfiability for n-dense modal logics"};
    app.require_subcommand(1);
    Config c;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--density", c.density, "Density index n >= 2")->check(CLI::Range(2, 64));
        sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--ceiling-branches", c.ceiling_branches, "Branch ceiling")->check(CLI::PositiveNumber);
        sub->add_option("--ceiling-chain", c.ceiling_chain, "Continuation chain ceiling")
            ->check(CLI::PositiveNumber);
        sub->add_option("--ceiling-ms", c.ceiling_ms, "Wall-clock ceiling in milliseconds")
            ->check(CLI::PositiveNumber);
    };

    std::string formula, file, atom;

    auto *solve = app.add_subcommand("solve", "Decide satisfiability");
    solve->add_option("formula", formula)->required();
    solve->add_option("--emit-certificate", c.emit_certificate, "Write the certificate to FILE ('-' for stdout)");
    common(solve);

    auto *oracle = app.add_subcommand("oracle", "Compare with the semantic oracles");
    oracle->add_option("formula", formula);
    oracle->add_option("--corpus", c.corpus, "One formula per line");
    oracle->add_option("--max-worlds", c.max_worlds, "Brute-force world bound")->check(CLI::Range(1, 4));
    oracle->add_option("--budget", c.budget, "Naive tableau node budget")->check(CLI::PositiveNumber);
    common(oracle);

    auto *check = app.add_subcommand("check-cert", "Check a certificate");
    check->add_option("file", file)->required();
    common(check);

    auto *reduce = app.add_subcommand("reduce", "Apply the guarded-box translation");
    reduce->add_option("atom", atom)->required();
    reduce->add_option("formula", formula)->required();

    auto *corpus = app.add_subcommand("corpus", "Emit the formula corpus");
    corpus->add_option("--seed", c.seed, "Seed for the random part");
    corpus->add_option("--max-length", c.max_length, "Length bound of the exhaustive part")
        ->check(CLI::Range(1, 9));
    corpus->add_option("--random-count", c.random_count, "Number of random formulas")->check(CLI::NonNegativeNumber);
    corpus->add_option("-o,--output", c.output, "Output file");

    auto *bench = app.add_subcommand("bench", "Run the corpus at densities 2 and 3");
    bench->add_option("--corpus", c.corpus, "One formula per line");
    bench->add_option("--seed", c.seed, "Seed for the generated corpus");
    common(bench);

    auto *model = app.add_subcommand("check-model", "Evaluate a formula in a JSON model");
    model->add_option("file", file)->required();
    model->add_option("formula", formula)->required();
    model->add_option("--world", c.world, "Evaluation world");
    common(model);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*solve)
            return cmd_solve(formula, c);
        if (*oracle) {
            if (formula.empty() && c.corpus.empty()) {
                std::cerr << "error: give a formula or --corpus\n";
                return kExitUsage;
            }
            return cmd_oracle(formula, c);
        }
        if (*check)
            return cmd_check_cert(file, c, check->count("--density") > 0);
        if (*reduce)
            return cmd_reduce(atom, formula);
        if (*corpus)
            return cmd_corpus(c);
        if (*bench)
            return cmd_bench(c);
        if (*model)
            return cmd_check_model(file, formula, c);
    } catch (const ResourceLimit &e) {
        std::cerr << "ceiling: " << e.what() << "\n";
        return kExitCeiling;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
