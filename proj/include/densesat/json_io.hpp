// JSON forms of windows, certificates and Kripke models.

#ifndef DENSESAT_JSON_IO_HPP
#define DENSESAT_JSON_IO_HPP

#include "densesat/kripke.hpp"
#include "densesat/solver.hpp"
#include "densesat/window.hpp"

#include "json.hpp"

namespace densesat {

using Json = nlohmann::json;

struct SchemaError : Error {
    using Error::Error;
};

Json to_json(const FormulaSet &s);
Json to_json(const Window &w);
Json to_json(const Certificate &c);
Json to_json(const KripkeModel &m);
Json to_json(const SolveStats &s);

FormulaSet formula_set_from_json(const Json &j);
Window window_from_json(const Json &j);
Certificate certificate_from_json(const Json &j);
KripkeModel model_from_json(const Json &j);

} // namespace densesat

#endif // DENSESAT_JSON_IO_HPP
