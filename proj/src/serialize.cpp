#include "hforge/serialize.hpp"

namespace hforge::io {

namespace {

[[noreturn]] void malformed(const std::string &what) { throw MalformedExpression("json: " + what); }

const Json &field(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field ") + key);
    return j.at(key);
}

int as_int(const Json &j) {
    if (!j.is_number_integer()) malformed("expected an integer");
    return j.get<int>();
}

const Json &as_array(const Json &j) {
    if (!j.is_array()) malformed("expected an array");
    return j;
}

std::vector<std::string> split(const std::string &s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t p = s.find(':', start);
        out.push_back(s.substr(start, p - start));
        if (p == std::string::npos) return out;
        start = p + 1;
    }
}

int to_index(const std::string &s) {
    if (s.empty() || s.size() > 6 || s.find_first_not_of("0123456789") != std::string::npos)
        malformed("bad index " + s);
    return std::stoi(s);
}

std::string tag(std::uint32_t code) {
    int a = int(atom::first(code)), b = int(atom::second(code));
    switch (atom::kind(code)) {
    case Kind::Param: return "p:" + params::name(a);
    case Kind::Time: return "k:" + std::to_string(a) + ":" + std::to_string(b);
    case Kind::Lambda: return "lambda";
    case Kind::X: return "x";
    case Kind::Jet: return "u:" + std::to_string(a) + ":" + std::to_string(b);
    }
    return "?";
}

std::uint32_t untag(const std::string &t) {
    if (t == "lambda") return atom::lambda();
    if (t == "x") return atom::x();
    auto parts = split(t);
    if (parts[0] == "p" && parts.size() == 2 && !parts[1].empty()) return atom::param(params::declare(parts[1]));
    if (parts[0] == "k" && parts.size() == 3) return atom::time(to_index(parts[1]), to_index(parts[2]));
    if (parts[0] == "u" && parts.size() == 3) {
        int comp = to_index(parts[1]);
        if (comp < 1) malformed("component u0 does not exist");
        return atom::jet(comp, to_index(parts[2]));
    }
    malformed("unknown generator tag " + t);
}

Json encode_entry(const OpEntry &e) {
    Json words = Json::array();
    for (const auto &w : e) {
        Json coeffs = Json::array();
        for (const auto &c : w.coeffs) coeffs.push_back(encode(c));
        words.push_back(Json{{"coeffs", std::move(coeffs)}, {"d", w.dpow}});
    }
    return words;
}

OpEntry decode_entry(const Json &j) {
    OpEntry e;
    for (const auto &w : as_array(j)) {
        Word word;
        word.coeffs.clear();
        for (const auto &c : as_array(field(w, "coeffs"))) word.coeffs.push_back(decode_poly(c));
        if (word.coeffs.empty()) malformed("operator word without coefficients");
        word.dpow = as_int(field(w, "d"));
        if (word.dpow < 0) malformed("negative derivative power in an operator word");
        e.push_back(std::move(word));
    }
    return normalize_entry(e);
}

Json encode_rows(const std::vector<std::vector<DiffPoly>> &rows) {
    Json out = Json::array();
    for (const auto &r : rows) {
        Json row = Json::array();
        for (const auto &p : r) row.push_back(encode(p));
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::vector<DiffPoly>> decode_rows(const Json &j) {
    std::vector<std::vector<DiffPoly>> rows;
    for (const auto &r : as_array(j)) {
        std::vector<DiffPoly> row;
        for (const auto &p : as_array(r)) row.push_back(decode_poly(p));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

Json encode(const Q &q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

Q decode_rational(const Json &j) {
    if (!j.is_string()) malformed("rational must be a num/den string");
    const std::string s = j.get<std::string>();
    std::size_t slash = s.find('/');
    if (slash == std::string::npos) malformed("rational without denominator: " + s);
    try {
        mpz_class num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) malformed("zero denominator");
        Q q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument &) {
        malformed("bad rational " + s);
    }
}

Json encode(const Monomial &m) {
    Json out = Json::array();
    for (const auto &[code, e] : m.atoms()) out.push_back(Json::array({tag(code), e}));
    for (const auto &[b, e] : m.antis()) out.push_back(Json::array({Json{{"I", encode(*b)}}, e}));
    return out;
}

Monomial decode_monomial(const Json &j) {
    Monomial m;
    for (const auto &f : as_array(j)) {
        if (!f.is_array() || f.size() != 2) malformed("factor must be [tag, exponent]");
        int e = as_int(f[1]);
        if (e == 0) malformed("zero exponent");
        if (f[0].is_string()) {
            std::uint32_t code = untag(f[0].get<std::string>());
            if (e < 0 && atom::x_dependent(code)) malformed("negative power of " + f[0].get<std::string>());
            m = m * Monomial::of(code, e);
        } else {
            if (e < 0) malformed("negative power of an antiderivative");
            m = m * Monomial::anti(decode_monomial(field(f[0], "I")), e);
        }
    }
    return m;
}

Json encode(const DiffPoly &p) {
    Json out = Json::array();
    for (const auto &[m, c] : p.terms()) out.push_back(Json{{"c", encode(c)}, {"m", encode(m)}});
    return out;
}

DiffPoly decode_poly(const Json &j) {
    DiffPoly p;
    for (const auto &t : as_array(j)) p.add_term(decode_monomial(field(t, "m")), decode_rational(field(t, "c")));
    return p;
}

Json encode(const FlowVector &v) {
    Json out = Json::array();
    for (const auto &p : v) out.push_back(encode(p));
    return out;
}

FlowVector decode_flow(const Json &j) {
    FlowVector v;
    for (const auto &p : as_array(j)) v.push_back(decode_poly(p));
    return v;
}

Json encode(const OperatorExpr &op) {
    Json entries = Json::array();
    for (int r = 0; r < op.dim(); ++r)
        for (int c = 0; c < op.dim(); ++c) entries.push_back(encode_entry(op.at(r, c)));
    return Json{{"dim", op.dim()}, {"entries", std::move(entries)}};
}

OperatorExpr decode_operator(const Json &j) {
    int n = as_int(field(j, "dim"));
    if (n < 1) malformed("operator dimension must be positive");
    const Json &entries = as_array(field(j, "entries"));
    if (entries.size() != std::size_t(n * n)) malformed("operator entry count does not match its dimension");
    OperatorExpr op(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) op.at(r, c) = decode_entry(entries[std::size_t(r * n + c)]);
    return op;
}

Json encode(const ConstMatrix &m) {
    std::vector<std::vector<DiffPoly>> rows(std::size_t(m.order()));
    for (int r = 0; r < m.order(); ++r)
        for (int c = 0; c < m.order(); ++c) rows[std::size_t(r)].push_back(m(r, c));
    return Json{{"order", m.order()}, {"rows", encode_rows(rows)}};
}

ConstMatrix decode_matrix(const Json &j) {
    int n = as_int(field(j, "order"));
    auto rows = decode_rows(field(j, "rows"));
    if (rows.size() != std::size_t(n)) malformed("matrix row count does not match its order");
    for (const auto &r : rows)
        if (r.size() != std::size_t(n)) malformed("matrix is not square");
    return n == 0 ? ConstMatrix(0) : ConstMatrix::from_rows(rows);
}

Json encode(const SpectralModel &m) {
    Json seeds = Json::array();
    for (const auto &s : m.seeds) seeds.push_back(encode(s));
    return Json{{"model", model_name(m.kind)}, {"N", m.n},           {"seeds", std::move(seeds)},
                {"sigma", encode(m.sigma)},    {"eps", encode(m.eps)}, {"isospectral", m.iso}};
}

SpectralModel decode_model(const Json &j) {
    SpectralModel m;
    const Json &name = field(j, "model");
    if (!name.is_string()) malformed("model must be a string");
    m.kind = parse_model(name.get<std::string>());
    m.n = as_int(field(j, "N"));
    m.seeds.clear();
    for (const auto &s : as_array(field(j, "seeds"))) m.seeds.push_back(decode_poly(s));
    m.sigma = decode_poly(field(j, "sigma"));
    m.eps = decode_poly(field(j, "eps"));
    const Json &iso = field(j, "isospectral");
    if (!iso.is_boolean()) malformed("isospectral must be a boolean");
    m.iso = iso.get<bool>();
    m.validate();
    return m;
}

Json encode(const RecursionTable &t) {
    Json comps = Json::array();
    for (std::size_t k = 0; k < t.a.size(); ++k) {
        Json a = Json::array(), b = Json::array(), c = Json::array();
        for (const auto &p : t.a[k]) a.push_back(encode(p));
        for (const auto &p : t.b[k]) b.push_back(encode(p));
        for (const auto &p : t.c[k]) c.push_back(encode(p));
        comps.push_back(Json{{"component", int(k + 1)},
                             {"b_top", encode(t.b_top[k])},
                             {"a", std::move(a)},
                             {"b", std::move(b)},
                             {"c", std::move(c)}});
    }
    return Json{{"spectral", encode(t.model)}, {"order", t.order}, {"components", std::move(comps)}};
}

RecursionTable decode_table(const Json &j) {
    RecursionTable t;
    t.model = decode_model(field(j, "spectral"));
    t.order = as_int(field(j, "order"));
    for (const auto &comp : as_array(field(j, "components"))) {
        t.b_top.push_back(decode_poly(field(comp, "b_top")));
        t.a.push_back(decode_flow(field(comp, "a")));
        t.b.push_back(decode_flow(field(comp, "b")));
        t.c.push_back(decode_flow(field(comp, "c")));
    }
    if (t.a.size() != std::size_t(t.model.n)) malformed("component count does not match the model");
    return t;
}

Json encode(const HierarchyEquation &e) { return Json{{"order", e.order}, {"rhs", encode(e.rhs)}}; }

HierarchyEquation decode_equation(const Json &j) {
    HierarchyEquation e;
    e.order = as_int(field(j, "order"));
    e.rhs = decode_flow(field(j, "rhs"));
    return e;
}

Json encode(const CheckReport &r) {
    Json checks = Json::array();
    for (const auto &c : r.checks) {
        const char *status = c.pass ? "pass" : (c.reported ? "reported-discrepancy" : "fail");
        checks.push_back(Json{{"name", c.name}, {"status", status}, {"detail", c.detail}});
    }
    return Json{{"passed", r.passed()},
                {"failed", r.hard_failures()},
                {"reported_discrepancies", r.discrepancies()},
                {"checks", std::move(checks)}};
}

CheckReport decode_report(const Json &j) {
    CheckReport r;
    for (const auto &c : as_array(field(j, "checks"))) {
        const Json &name = field(c, "name"), &status = field(c, "status"), &detail = field(c, "detail");
        if (!name.is_string() || !status.is_string() || !detail.is_string()) malformed("bad check entry");
        std::string s = status.get<std::string>();
        if (s != "pass" && s != "fail" && s != "reported-discrepancy") malformed("unknown status " + s);
        if (s == "reported-discrepancy") r.report(name.get<std::string>(), false, detail.get<std::string>());
        else r.add(name.get<std::string>(), s == "pass", detail.get<std::string>());
    }
    return r;
}

Json encode(const LieBasis &b) {
    Json elements = Json::array();
    for (int i = 0; i < b.size(); ++i)
        elements.push_back(Json{{"name", element_name(b, i)}, {"matrix", encode(b.elements[std::size_t(i)])}});
    return Json{{"case", case_name(b.which)}, {"N", b.blocks}, {"elements", std::move(elements)}};
}

Json wrap(const std::string &kind, Json data) {
    return Json{{"schema", kSchemaName}, {"version", kSchemaVersion}, {"kind", kind}, {"data", std::move(data)}};
}

const Json &unwrap(const Json &doc, const std::string &kind) {
    if (!doc.is_object() || !doc.contains("schema") || doc.at("schema") != kSchemaName)
        throw SchemaMismatch("not a " + std::string(kSchemaName) + " document");
    if (!doc.contains("version") || doc.at("version") != kSchemaVersion)
        throw SchemaMismatch("expected version " + std::to_string(kSchemaVersion) + ", found " +
                             (doc.contains("version") ? doc.at("version").dump() : "none"));
    if (!doc.contains("kind") || doc.at("kind") != kind)
        throw SchemaMismatch("expected kind " + kind + ", found " + (doc.contains("kind") ? doc.at("kind").dump() : "none"));
    return field(doc, "data");
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

Json parse(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        malformed(e.what());
    }
}

} // namespace hforge::io
