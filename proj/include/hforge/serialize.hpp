#pragma once

#include <string>

#include "json.hpp"

#include "hforge/diffpoly.hpp"
#include "hforge/hierarchy.hpp"
#include "hforge/liealg.hpp"
#include "hforge/operator.hpp"
#include "hforge/report.hpp"
#include "hforge/spectral.hpp"

namespace hforge::io {

// Insertion-ordered so that every document has a fixed key order.
using Json = nlohmann::ordered_json;

inline constexpr const char *kSchemaName = "hierarchy-forge";
inline constexpr int kSchemaVersion = 1;

// Rationals are "num/den" strings, den > 0.
Json encode(const Q &q);
Q decode_rational(const Json &j);

// A monomial is an array of [tag, exponent] pairs in canonical order. Tags:
// "p:<name>" parameter, "k:<m>:<r>" r-th time derivative of k_m, "lambda",
// "x", "u:<i>:<d>" jet. An antiderivative factor is [{"I": <monomial>}, e].
Json encode(const Monomial &m);
Monomial decode_monomial(const Json &j);

// [{"c": rational, "m": monomial}, ...] in canonical term order.
Json encode(const DiffPoly &p);
DiffPoly decode_poly(const Json &j);

Json encode(const FlowVector &v);
FlowVector decode_flow(const Json &j);

// {"dim": n, "entries": [row-major list of [{"coeffs": [poly...], "d": k}]]}
Json encode(const OperatorExpr &op);
OperatorExpr decode_operator(const Json &j);

Json encode(const ConstMatrix &m);
ConstMatrix decode_matrix(const Json &j);

Json encode(const SpectralModel &m);
SpectralModel decode_model(const Json &j);

Json encode(const RecursionTable &t);
RecursionTable decode_table(const Json &j);

Json encode(const HierarchyEquation &e);
HierarchyEquation decode_equation(const Json &j);

Json encode(const CheckReport &r);
CheckReport decode_report(const Json &j);

Json encode(const LieBasis &b);

// {"schema", "version", "kind", "data"}. unwrap throws SchemaMismatch when
// the schema name, version or kind differs.
Json wrap(const std::string &kind, Json data);
const Json &unwrap(const Json &doc, const std::string &kind);

// Two-space indentation with a trailing newline.
std::string dump(const Json &j);
Json parse(const std::string &text); // MalformedExpression on bad JSON

} // namespace hforge::io
