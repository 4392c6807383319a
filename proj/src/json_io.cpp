#include "densesat/json_io.hpp"

namespace densesat {

namespace {

const Json &field(const Json &j, const char *name) {
    if (!j.is_object() || !j.contains(name))
        throw SchemaError(std::string("missing field '") + name + "'");
    return j.at(name);
}

int int_field(const Json &j, const char *name) {
    const Json &v = field(j, name);
    if (!v.is_number_integer())
        throw SchemaError(std::string("field '") + name + "' must be an integer");
    return v.get<int>();
}

const Json &array_field(const Json &j, const char *name) {
    const Json &v = field(j, name);
    if (!v.is_array())
        throw SchemaError(std::string("field '") + name + "' must be an array");
    return v;
}

Formula formula_from_json(const Json &j) {
    if (!j.is_string())
        throw SchemaError("formula must be a string");
    try {
        return parse(j.get<std::string>());
    } catch (const ParseError &e) {
        throw SchemaError(std::string("bad formula: ") + e.what());
    }
}

std::vector<int> int_array(const Json &j) {
    if (!j.is_array())
        throw SchemaError("expected an array of integers");
    std::vector<int> out;
    for (const Json &v : j) {
        if (!v.is_number_integer())
            throw SchemaError("expected an integer");
        out.push_back(v.get<int>());
    }
    return out;
}

} // namespace

Json to_json(const FormulaSet &s) {
    Json out = Json::array();
    for (Formula f : s)
        out.push_back(print(f));
    return out;
}

Json to_json(const Window &w) {
    if (w.empty())
        return Json{{"k", 0}};
    Json nodes = Json::array();
    for (const auto &v : w.nodes())
        nodes.push_back(to_json(v));
    Json subs = Json::array();
    for (const auto &s : w.subs())
        subs.push_back(to_json(s));
    return Json{{"k", w.k()}, {"density", w.density()}, {"nodes", nodes}, {"subwindows", subs}};
}

Json to_json(const Certificate &c) {
    Json entries = Json::array();
    for (const auto &e : c.entries) {
        Json diamonds = Json::array();
        for (const auto &d : e.diamonds)
            diamonds.push_back({{"formula", print(d.formula)}, {"seed", to_json(d.seed)}, {"chain", d.chain}});
        entries.push_back({{"ccs", to_json(e.ccs)}, {"diamonds", diamonds}});
    }
    Json chains = Json::array();
    for (const auto &ch : c.chains) {
        Json windows = Json::array();
        for (const auto &w : ch.windows)
            windows.push_back(to_json(w));
        Json steps = Json::array();
        for (const auto &st : ch.steps)
            steps.push_back({{"nodes", st.nodes}, {"subchains", st.subchains}});
        Json rep = ch.repetition ? Json::array({ch.repetition->first, ch.repetition->second}) : Json(nullptr);
        chains.push_back({{"anchor", to_json(ch.anchor)},
                          {"k", ch.k},
                          {"base", ch.base},
                          {"windows", windows},
                          {"repetition", rep},
                          {"steps", steps}});
    }
    return Json{{"format", "densesat-certificate"},
                {"version", c.version},
                {"density", c.density},
                {"formula", print(c.formula)},
                {"root", c.root},
                {"entries", entries},
                {"chains", chains}};
}

Json to_json(const KripkeModel &m) {
    Json rel = Json::array();
    for (auto [a, b] : m.relation)
        rel.push_back(Json::array({a, b}));
    Json val = Json::object();
    for (const auto &[atom, ws] : m.valuation)
        val[atom] = ws;
    return Json{{"worlds", m.worlds}, {"relation", rel}, {"valuation", val}};
}

Json to_json(const SolveStats &s) {
    return Json{{"branches", s.branches},
                {"windows", s.windows},
                {"max_chain", s.max_chain},
                {"max_depth", s.max_depth},
                {"peak_live_windows", s.peak_live_windows},
                {"max_members", s.max_members},
                {"members_within_bound", s.members_within_bound},
                {"chain_within_bound", s.chain_within_bound},
                {"elapsed_ms", s.elapsed_ms}};
}

FormulaSet formula_set_from_json(const Json &j) {
    if (!j.is_array())
        throw SchemaError("formula set must be an array");
    std::vector<Formula> items;
    for (const Json &v : j)
        items.push_back(formula_from_json(v));
    FormulaSet s(std::move(items));
    if (s.size() != j.size())
        throw SchemaError("formula set lists a formula twice");
    return s;
}

Window window_from_json(const Json &j) {
    int k = int_field(j, "k");
    if (k == 0) {
        if (j.size() != 1)
            throw SchemaError("the empty window carries only k");
        return Window();
    }
    int density = int_field(j, "density");
    std::vector<FormulaSet> nodes;
    for (const Json &v : array_field(j, "nodes"))
        nodes.push_back(formula_set_from_json(v));
    std::vector<Window> subs;
    for (const Json &v : array_field(j, "subwindows"))
        subs.push_back(window_from_json(v));
    try {
        return Window::make(k, density, std::move(nodes), std::move(subs));
    } catch (const ShapeMismatch &e) {
        throw SchemaError(std::string("bad window shape: ") + e.what());
    }
}

Certificate certificate_from_json(const Json &j) {
    if (!j.is_object())
        throw SchemaError("certificate must be an object");
    const Json &format = field(j, "format");
    if (!format.is_string() || format.get<std::string>() != "densesat-certificate")
        throw SchemaError("unknown certificate format");
    Certificate c;
    c.version = int_field(j, "version");
    c.density = int_field(j, "density");
    c.formula = formula_from_json(field(j, "formula"));
    c.root = int_field(j, "root");
    for (const Json &e : array_field(j, "entries")) {
        CertEntry entry;
        entry.ccs = formula_set_from_json(field(e, "ccs"));
        for (const Json &d : array_field(e, "diamonds")) {
            CertDiamond diamond;
            diamond.formula = formula_from_json(field(d, "formula"));
            diamond.seed = formula_set_from_json(field(d, "seed"));
            diamond.chain = int_field(d, "chain");
            entry.diamonds.push_back(std::move(diamond));
        }
        c.entries.push_back(std::move(entry));
    }
    for (const Json &ch : array_field(j, "chains")) {
        CertChain chain;
        chain.anchor = formula_set_from_json(field(ch, "anchor"));
        chain.k = int_field(ch, "k");
        const Json &base = field(ch, "base");
        if (!base.is_boolean())
            throw SchemaError("field 'base' must be a boolean");
        chain.base = base.get<bool>();
        for (const Json &w : array_field(ch, "windows"))
            chain.windows.push_back(window_from_json(w));
        const Json &rep = field(ch, "repetition");
        if (!rep.is_null()) {
            std::vector<int> hj = int_array(rep);
            if (hj.size() != 2)
                throw SchemaError("repetition must be a pair");
            chain.repetition = std::make_pair(hj[0], hj[1]);
        }
        for (const Json &st : array_field(ch, "steps"))
            chain.steps.push_back({int_array(field(st, "nodes")), int_array(field(st, "subchains"))});
        c.chains.push_back(std::move(chain));
    }
    return c;
}

KripkeModel model_from_json(const Json &j) {
    KripkeModel m;
    m.worlds = int_field(j, "worlds");
    for (const Json &pair : array_field(j, "relation")) {
        std::vector<int> ab = int_array(pair);
        if (ab.size() != 2)
            throw SchemaError("relation entries must be pairs");
        m.relation.push_back({ab[0], ab[1]});
    }
    const Json &val = field(j, "valuation");
    if (!val.is_object())
        throw SchemaError("valuation must be an object");
    for (const auto &[atom, ws] : val.items())
        m.valuation[atom] = int_array(ws);
    m.validate();
    return m;
}

} // namespace densesat
