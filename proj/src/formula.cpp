#include "densesat/formula.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace densesat {

ParseError::ParseError(const std::string &msg, int line_, int column_)
    : Error(msg + " at " + std::to_string(line_) + ":" + std::to_string(column_)), line(line_),
      column(column_) {}

namespace {

struct Node {
    Kind kind;
    FormulaId a;
    FormulaId b;
    int depth;
    std::size_t length;
};

struct NodeKey {
    Kind kind;
    FormulaId a;
    FormulaId b;
    bool operator==(const NodeKey &) const = default;
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey &k) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(k.kind);
        h = h * 0x9E3779B97F4A7C15ull ^ k.a;
        h = h * 0x9E3779B97F4A7C15ull ^ k.b;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

constexpr std::size_t kChunkBits = 12;
constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
constexpr std::size_t kMaxChunks = std::size_t{1} << 16;

} // namespace

class FormulaStore {
  public:
    static FormulaStore &instance() {
        static FormulaStore store;
        return store;
    }

    const Node &node(FormulaId id) const {
        return chunks_[id >> kChunkBits].load(std::memory_order_acquire)[id & (kChunkSize - 1)];
    }

    const std::string &atom_name(FormulaId atom) const {
        std::lock_guard lock(mutex_);
        return *atom_names_[atom];
    }

    Formula make(Kind kind, FormulaId a, FormulaId b) {
        NodeKey key{kind, a, b};
        std::lock_guard lock(mutex_);
        if (auto it = table_.find(key); it != table_.end())
            return Formula(it->second);
        int depth = 0;
        std::size_t length = 1;
        switch (kind) {
        case Kind::Bottom:
        case Kind::Atom:
            break;
        case Kind::Neg:
            depth = node(a).depth;
            length = 1 + node(a).length;
            break;
        case Kind::Box:
            depth = 1 + node(a).depth;
            length = 1 + node(a).length;
            break;
        case Kind::Conj:
            depth = std::max(node(a).depth, node(b).depth);
            length = node(a).length + node(b).length;
            break;
        }
        auto id = static_cast<FormulaId>(count_.load(std::memory_order_relaxed));
        std::size_t chunk = id >> kChunkBits;
        if (chunk >= kMaxChunks)
            throw Error("formula table exhausted");
        Node *storage = chunks_[chunk].load(std::memory_order_relaxed);
        if (!storage) {
            owned_.push_back(std::make_unique<Node[]>(kChunkSize));
            storage = owned_.back().get();
            chunks_[chunk].store(storage, std::memory_order_release);
        }
        storage[id & (kChunkSize - 1)] = Node{kind, a, b, depth, length};
        count_.store(id + 1, std::memory_order_release);
        table_.emplace(key, id);
        return Formula(id);
    }

    Formula atom(std::string_view name) {
        FormulaId index;
        {
            std::lock_guard lock(mutex_);
            auto it = atom_index_.find(std::string(name));
            if (it == atom_index_.end()) {
                index = static_cast<FormulaId>(atom_names_.size());
                atom_names_.push_back(std::make_unique<std::string>(name));
                atom_index_.emplace(std::string(name), index);
            } else {
                index = it->second;
            }
        }
        return make(Kind::Atom, index, 0);
    }

    std::size_t count() const { return count_.load(std::memory_order_acquire); }

  private:
    FormulaStore() : chunks_(std::make_unique<std::atomic<Node *>[]>(kMaxChunks)) {
        for (std::size_t i = 0; i < kMaxChunks; ++i)
            chunks_[i].store(nullptr, std::memory_order_relaxed);
    }

    mutable std::mutex mutex_;
    std::unique_ptr<std::atomic<Node *>[]> chunks_;
    std::vector<std::unique_ptr<Node[]>> owned_;
    std::atomic<std::size_t> count_{0};
    std::unordered_map<NodeKey, FormulaId, NodeKeyHash> table_;
    std::vector<std::unique_ptr<std::string>> atom_names_;
    std::unordered_map<std::string, FormulaId> atom_index_;
};

// ── Formula ─────────────────────────────────────────────────────────────────

Formula Formula::bottom() { return FormulaStore::instance().make(Kind::Bottom, 0, 0); }
Formula Formula::atom(std::string_view name) {
    bool ok = !name.empty() && name[0] >= 'a' && name[0] <= 'z' && name != "bot";
    for (char c : name)
        ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    if (!ok)
        throw Error("invalid atom name '" + std::string(name) + "'");
    return FormulaStore::instance().atom(name);
}
Formula Formula::neg(Formula f) { return FormulaStore::instance().make(Kind::Neg, f.id_, 0); }
Formula Formula::conj(Formula a, Formula b) {
    return FormulaStore::instance().make(Kind::Conj, a.id_, b.id_);
}
Formula Formula::box(Formula f) { return FormulaStore::instance().make(Kind::Box, f.id_, 0); }

Kind Formula::kind() const { return FormulaStore::instance().node(id_).kind; }

Formula Formula::child() const { return Formula(FormulaStore::instance().node(id_).a); }

Formula Formula::right() const { return Formula(FormulaStore::instance().node(id_).b); }

const std::string &Formula::name() const {
    auto &store = FormulaStore::instance();
    return store.atom_name(store.node(id_).a);
}

std::size_t interned_count() { return FormulaStore::instance().count(); }

// ── FormulaSet ──────────────────────────────────────────────────────────────

FormulaSet::FormulaSet(std::initializer_list<Formula> fs) : FormulaSet(std::vector<Formula>(fs)) {}

FormulaSet::FormulaSet(std::vector<Formula> fs) : items_(std::move(fs)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

FormulaSet FormulaSet::from_sorted_unique(std::vector<Formula> fs) {
    FormulaSet s;
    s.items_ = std::move(fs);
    return s;
}

bool FormulaSet::contains(Formula f) const {
    return std::binary_search(items_.begin(), items_.end(), f);
}

bool FormulaSet::subset_of(const FormulaSet &other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
}

void FormulaSet::insert(Formula f) {
    auto it = std::lower_bound(items_.begin(), items_.end(), f);
    if (it == items_.end() || *it != f)
        items_.insert(it, f);
}

FormulaSet FormulaSet::united(const FormulaSet &other) const {
    std::vector<Formula> out;
    out.reserve(items_.size() + other.items_.size());
    std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                   std::back_inserter(out));
    return from_sorted_unique(std::move(out));
}

FormulaSet FormulaSet::minus(const FormulaSet &other) const {
    std::vector<Formula> out;
    std::set_difference(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                        std::back_inserter(out));
    return from_sorted_unique(std::move(out));
}

std::size_t FormulaSet::hash() const noexcept {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (Formula f : items_) {
        h ^= f.id();
        h *= 0x100000001B3ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 32));
}

// ── Metrics ─────────────────────────────────────────────────────────────────

int depth(Formula f) { return FormulaStore::instance().node(f.id()).depth; }

int depth(const FormulaSet &s) {
    int d = 0;
    for (Formula f : s)
        d = std::max(d, depth(f));
    return d;
}

std::size_t length(Formula f) { return FormulaStore::instance().node(f.id()).length; }

std::size_t length(const FormulaSet &s) {
    std::size_t n = 0;
    for (Formula f : s)
        n += length(f);
    return n;
}

namespace {

void collect(Formula f, bool stop_at_box, std::vector<Formula> &out, std::vector<char> &seen) {
    std::vector<Formula> stack{f};
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (g.id() >= seen.size())
            seen.resize(interned_count(), 0);
        if (seen[g.id()])
            continue;
        seen[g.id()] = 1;
        out.push_back(g);
        switch (g.kind()) {
        case Kind::Neg:
            stack.push_back(g.child());
            break;
        case Kind::Box:
            if (!stop_at_box)
                stack.push_back(g.child());
            break;
        case Kind::Conj:
            stack.push_back(g.left());
            stack.push_back(g.right());
            break;
        default:
            break;
        }
    }
}

FormulaSet closure(const FormulaSet &s, bool stop_at_box) {
    std::vector<Formula> out;
    std::vector<char> seen(interned_count(), 0);
    for (Formula f : s)
        collect(f, stop_at_box, out, seen);
    return FormulaSet(std::move(out));
}

} // namespace

FormulaSet subformulas(const FormulaSet &s) { return closure(s, false); }

FormulaSet classical_subformulas(const FormulaSet &s) { return closure(s, true); }

std::vector<std::string> atoms_of(Formula f) {
    std::vector<std::string> names;
    for (Formula g : subformulas({f}))
        if (g.is(Kind::Atom))
            names.push_back(g.name());
    std::sort(names.begin(), names.end());
    return names;
}

bool occurs(std::string_view atom, Formula f) {
    for (Formula g : subformulas({f}))
        if (g.is(Kind::Atom) && g.name() == atom)
            return true;
    return false;
}

// ── Parser ──────────────────────────────────────────────────────────────────

namespace {

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    Formula run() {
        Formula f = implication();
        skip_space();
        if (pos_ < text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return f;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, line_, col_); }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            advance();
    }

    bool accept(std::string_view tok) {
        skip_space();
        if (text_.substr(pos_, tok.size()) == tok) {
            advance(tok.size());
            return true;
        }
        return false;
    }

    Formula implication() {
        Formula lhs = disjunction();
        if (accept("->"))
            return Formula::implies(lhs, implication());
        return lhs;
    }

    Formula disjunction() {
        Formula lhs = conjunction();
        while (accept("|"))
            lhs = Formula::disj(lhs, conjunction());
        return lhs;
    }

    Formula conjunction() {
        Formula lhs = unary();
        while (accept("&"))
            lhs = Formula::conj(lhs, unary());
        return lhs;
    }

    Formula unary() {
        if (accept("~"))
            return Formula::neg(unary());
        if (accept("[]"))
            return Formula::box(unary());
        if (accept("<>"))
            return Formula::diamond(unary());
        return primary();
    }

    Formula primary() {
        skip_space();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            advance();
            Formula f = implication();
            if (!accept(")"))
                fail("expected ')'");
            return f;
        }
        if (c >= 'a' && c <= 'z') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                advance();
            std::string_view word = text_.substr(start, pos_ - start);
            if (word == "bot")
                return Formula::bottom();
            return Formula::atom(word);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

void print_to(Formula f, std::string &out) {
    switch (f.kind()) {
    case Kind::Bottom:
        out += "bot";
        break;
    case Kind::Atom:
        out += f.name();
        break;
    case Kind::Neg:
        out += "~(";
        print_to(f.child(), out);
        out += ')';
        break;
    case Kind::Box:
        out += "[](";
        print_to(f.child(), out);
        out += ')';
        break;
    case Kind::Conj:
        out += '(';
        print_to(f.left(), out);
        out += ")&(";
        print_to(f.right(), out);
        out += ')';
        break;
    }
}

} // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

std::string print(Formula f) {
    std::string out;
    print_to(f, out);
    return out;
}

std::string print(const FormulaSet &s) {
    std::string out = "{";
    bool first = true;
    for (Formula f : s) {
        if (!first)
            out += ", ";
        first = false;
        out += print(f);
    }
    return out + "}";
}

} // namespace densesat
