#include "hforge/diffpoly.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>
#include <sstream>

namespace hforge {

// ---- parameter registry ---------------------------------------------------

namespace {

struct ParamInfo {
    std::string name;
    std::string latex;
    std::string pretty;
};

struct Registry {
    std::mutex mu;
    std::vector<ParamInfo> info{
        {"eps", "\\varepsilon", "ε"},   {"alpha", "\\alpha", "α"},
        {"alpha1", "\\alpha_1", "α1"},  {"alpha2", "\\alpha_2", "α2"},
        {"beta1", "\\beta_1", "β1"},    {"sigma", "\\sigma", "σ"},
        {"t", "t", "t"},                {"s", "s", "s"},
    };
};

Registry &registry() {
    static Registry r;
    return r;
}

} // namespace

namespace params {

int declare(const std::string &name) {
    auto &r = registry();
    std::lock_guard<std::mutex> lock(r.mu);
    for (std::size_t i = 0; i < r.info.size(); ++i)
        if (r.info[i].name == name) return int(i);
    if (r.info.size() >= 0x3fff) throw MalformedExpression("too many parameters");
    r.info.push_back({name, name, name});
    return int(r.info.size() - 1);
}

std::optional<int> lookup(const std::string &name) {
    auto &r = registry();
    std::lock_guard<std::mutex> lock(r.mu);
    for (std::size_t i = 0; i < r.info.size(); ++i)
        if (r.info[i].name == name) return int(i);
    return std::nullopt;
}

static ParamInfo info(int id) {
    auto &r = registry();
    std::lock_guard<std::mutex> lock(r.mu);
    if (id < 0 || std::size_t(id) >= r.info.size()) throw MalformedExpression("unknown parameter id");
    return r.info[std::size_t(id)];
}

std::string name(int id) { return info(id).name; }
std::string latex(int id) { return info(id).latex; }
std::string pretty(int id) { return info(id).pretty; }

} // namespace params

// ---- Monomial ---------------------------------------------------------------

Monomial Monomial::of(std::uint32_t code, int e) {
    Monomial m;
    if (e != 0) m.atoms_.emplace_back(code, e);
    return m;
}

Monomial Monomial::anti(const Monomial &body, int e) {
    Monomial m;
    if (e > 0) m.antis_.emplace_back(std::make_shared<const Monomial>(body), e);
    return m;
}

int Monomial::exponent(std::uint32_t code) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), code,
                               [](const AtomPow &a, std::uint32_t c) { return a.first < c; });
    return (it != atoms_.end() && it->first == code) ? it->second : 0;
}

int Monomial::anti_count() const {
    int n = 0;
    for (const auto &[b, e] : antis_) n += e * (1 + b->anti_count());
    return n;
}

int Monomial::max_jet_order() const {
    int best = -1;
    for (const auto &[c, e] : atoms_)
        if (atom::kind(c) == Kind::Jet) best = std::max(best, int(atom::second(c)));
    for (const auto &[b, e] : antis_) best = std::max(best, b->max_jet_order());
    return best;
}

int Monomial::max_component() const {
    int best = 0;
    for (const auto &[c, e] : atoms_)
        if (atom::kind(c) == Kind::Jet) best = std::max(best, int(atom::first(c)));
    for (const auto &[b, e] : antis_) best = std::max(best, b->max_component());
    return best;
}

bool Monomial::x_free() const {
    if (!antis_.empty()) return false;
    for (const auto &[c, e] : atoms_)
        if (atom::x_dependent(c)) return false;
    return true;
}

void Monomial::mul_atom(std::uint32_t code, int e) {
    if (e == 0) return;
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), code,
                               [](const AtomPow &a, std::uint32_t c) { return a.first < c; });
    if (it != atoms_.end() && it->first == code) {
        it->second += e;
        if (it->second == 0) atoms_.erase(it);
    } else {
        atoms_.insert(it, {code, e});
    }
}

void Monomial::mul_anti(const MonoPtr &body, int e) {
    if (e == 0) return;
    auto it = std::lower_bound(antis_.begin(), antis_.end(), body,
                               [](const AntiPow &a, const MonoPtr &b) { return compare(*a.first, *b) < 0; });
    if (it != antis_.end() && compare(*it->first, *body) == 0) {
        it->second += e;
        if (it->second == 0) antis_.erase(it);
    } else {
        antis_.insert(it, {body, e});
    }
}

Monomial Monomial::operator*(const Monomial &o) const {
    Monomial r = *this;
    for (const auto &[c, e] : o.atoms_) r.mul_atom(c, e);
    for (const auto &[b, e] : o.antis_) r.mul_anti(b, e);
    return r;
}

bool Monomial::divides(const Monomial &o) const {
    for (const auto &[c, e] : atoms_) {
        int oe = o.exponent(c);
        if (e > 0 ? oe < e : oe > e) return false;
    }
    for (const auto &[b, e] : antis_) {
        int oe = 0;
        for (const auto &[ob, obe] : o.antis_)
            if (compare(*ob, *b) == 0) oe = obe;
        if (oe < e) return false;
    }
    return true;
}

Monomial Monomial::quotient(const Monomial &d) const {
    Monomial r = *this;
    for (const auto &[c, e] : d.atoms_) r.mul_atom(c, -e);
    for (const auto &[b, e] : d.antis_) r.mul_anti(b, -e);
    return r;
}

std::pair<Monomial, Monomial> Monomial::split_constant() const {
    Monomial k, v;
    for (const auto &ae : atoms_) (atom::x_dependent(ae.first) ? v : k).atoms_.push_back(ae);
    v.antis_ = antis_;
    return {k, v};
}

Monomial Monomial::without_atom(std::uint32_t code) const {
    Monomial r = *this;
    r.atoms_.erase(std::remove_if(r.atoms_.begin(), r.atoms_.end(),
                                  [code](const AtomPow &a) { return a.first == code; }),
                   r.atoms_.end());
    return r;
}

Monomial Monomial::with_atom(std::uint32_t code, int e) const {
    Monomial r = *this;
    r.mul_atom(code, e);
    return r;
}

Monomial Monomial::without_anti(std::size_t idx) const {
    Monomial r = *this;
    if (--r.antis_[idx].second == 0) r.antis_.erase(r.antis_.begin() + std::ptrdiff_t(idx));
    return r;
}

void Monomial::collect_bodies(std::vector<MonoPtr> &out) const {
    for (const auto &[b, e] : antis_) {
        bool seen = false;
        for (const auto &o : out)
            if (compare(*o, *b) == 0) seen = true;
        if (!seen) out.push_back(b);
        b->collect_bodies(out);
    }
}

std::size_t Monomial::hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
    for (const auto &[c, e] : atoms_) {
        mix(c);
        mix(std::size_t(e));
    }
    for (const auto &[b, e] : antis_) {
        mix(b->hash());
        mix(std::size_t(e) + 7);
    }
    return h;
}

namespace {

using AtomIt = std::vector<Monomial::AtomPow>::const_iterator;

int cmp_int(long a, long b) { return a < b ? -1 : (a > b ? 1 : 0); }

int cmp_atom_range(AtomIt a0, AtomIt a1, AtomIt b0, AtomIt b1) {
    for (; a0 != a1 && b0 != b1; ++a0, ++b0) {
        if (a0->first != b0->first) return a0->first < b0->first ? -1 : 1;
        if (a0->second != b0->second) return cmp_int(a0->second, b0->second);
    }
    if (a0 == a1 && b0 == b1) return 0;
    return a0 == a1 ? -1 : 1;
}

AtomIt first_of_kind(const std::vector<Monomial::AtomPow> &v, Kind k) {
    return std::lower_bound(v.begin(), v.end(), atom::make(k),
                            [](const Monomial::AtomPow &a, std::uint32_t c) { return a.first < c; });
}

} // namespace

int compare(const Monomial &a, const Monomial &b) {
    if (&a == &b) return 0;
    if (int c = cmp_int(a.lambda_degree(), b.lambda_degree())) return c;
    if (int c = cmp_int(a.x_degree(), b.x_degree())) return c;
    auto aj = first_of_kind(a.atoms_, Kind::Jet), bj = first_of_kind(b.atoms_, Kind::Jet);
    if (int c = cmp_atom_range(aj, a.atoms_.end(), bj, b.atoms_.end())) return c;
    for (std::size_t i = 0; i < a.antis_.size() && i < b.antis_.size(); ++i) {
        if (a.antis_[i].first != b.antis_[i].first)
            if (int c = compare(*a.antis_[i].first, *b.antis_[i].first)) return c;
        if (int c = cmp_int(a.antis_[i].second, b.antis_[i].second)) return c;
    }
    if (int c = cmp_int(long(a.antis_.size()), long(b.antis_.size()))) return c;
    auto al = first_of_kind(a.atoms_, Kind::Lambda), bl = first_of_kind(b.atoms_, Kind::Lambda);
    return cmp_atom_range(a.atoms_.begin(), al, b.atoms_.begin(), bl);
}

// ---- DiffPoly ---------------------------------------------------------------

DiffPoly::DiffPoly(int c) : DiffPoly(Q(c)) {}

DiffPoly::DiffPoly(const Q &c) : DiffPoly(Monomial(), c) {}

DiffPoly::DiffPoly(const Monomial &m, const Q &c) {
    if (c == 0) return;
    // mpq_class(num, den) is not reduced on construction.
    Q r = c;
    r.canonicalize();
    terms_.emplace(m, r);
}

DiffPoly DiffPoly::u(int comp, int order) {
    if (comp < 1 || order < 0) throw MalformedExpression("jet u" + std::to_string(comp) + " of order " +
                                                         std::to_string(order));
    return DiffPoly(Monomial::of(atom::jet(comp, order)));
}
DiffPoly DiffPoly::x() { return DiffPoly(Monomial::of(atom::x())); }
DiffPoly DiffPoly::lambda(int e) { return DiffPoly(Monomial::of(atom::lambda(), e)); }
DiffPoly DiffPoly::param(int id, int e) { return DiffPoly(Monomial::of(atom::param(id), e)); }
DiffPoly DiffPoly::k(int m, int r) { return DiffPoly(Monomial::of(atom::time(m, r))); }

bool DiffPoly::is_constant() const {
    for (const auto &[m, c] : terms_)
        if (!m.x_free()) return false;
    return true;
}

Q DiffPoly::coefficient(const Monomial &m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Q(0) : it->second;
}

void DiffPoly::add_term(const Monomial &m, const Q &c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (inserted) it->second.canonicalize();
    else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

DiffPoly &DiffPoly::operator+=(const DiffPoly &o) {
    for (const auto &[m, c] : o.terms_) add_term(m, c);
    return *this;
}

DiffPoly &DiffPoly::operator-=(const DiffPoly &o) {
    for (const auto &[m, c] : o.terms_) add_term(m, -c);
    return *this;
}

DiffPoly operator*(const DiffPoly &a, const DiffPoly &b) {
    DiffPoly r;
    for (const auto &[ma, ca] : a.terms_)
        for (const auto &[mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

DiffPoly &DiffPoly::operator*=(const DiffPoly &o) { return *this = *this * o; }

DiffPoly &DiffPoly::operator*=(const Q &c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    Q r = c;
    r.canonicalize();
    for (auto &[m, v] : terms_) v *= r;
    return *this;
}

DiffPoly DiffPoly::operator-() const {
    DiffPoly r = *this;
    for (auto &[m, v] : r.terms_) v = -v;
    return r;
}

bool operator==(const DiffPoly &a, const DiffPoly &b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    auto it = b.terms_.begin();
    for (const auto &[m, c] : a.terms_) {
        if (compare(m, it->first) != 0 || c != it->second) return false;
        ++it;
    }
    return true;
}

DiffPoly DiffPoly::pow(int e) const {
    if (e < 0) throw MalformedExpression("negative power of a polynomial");
    DiffPoly r(1), base = *this;
    while (e) {
        if (e & 1) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

DiffPoly DiffPoly::lambda_coeff(int e) const {
    DiffPoly r;
    for (const auto &[m, c] : terms_)
        if (m.lambda_degree() == e) r.add_term(m.without_atom(atom::lambda()), c);
    return r;
}

int DiffPoly::min_lambda() const {
    int v = 0;
    bool first = true;
    for (const auto &[m, c] : terms_) {
        v = first ? m.lambda_degree() : std::min(v, m.lambda_degree());
        first = false;
    }
    return v;
}

int DiffPoly::max_lambda() const {
    int v = 0;
    bool first = true;
    for (const auto &[m, c] : terms_) {
        v = first ? m.lambda_degree() : std::max(v, m.lambda_degree());
        first = false;
    }
    return v;
}

// ---- plain-text form (also accepted by the parser) --------------------------

namespace {

std::string jet_name(int comp, int order) {
    std::string s = "u" + std::to_string(comp);
    if (order == 0) return s;
    if (order <= 3) return s + "_" + std::string(std::size_t(order), 'x');
    return s + "_x" + std::to_string(order);
}

std::string atom_name(std::uint32_t code) {
    switch (atom::kind(code)) {
    case Kind::Param: return params::name(int(atom::first(code)));
    case Kind::Time: {
        std::string s = "k" + std::to_string(atom::first(code));
        int r = int(atom::second(code));
        if (r > 0) s += "_" + std::string(std::size_t(r), 't');
        return s;
    }
    case Kind::Lambda: return "lambda";
    case Kind::X: return "x";
    case Kind::Jet: return jet_name(int(atom::first(code)), int(atom::second(code)));
    }
    return "?";
}

void write_factors(std::ostream &os, const Monomial &m, bool &any);

void write_power(std::ostream &os, const std::string &base, int e, bool &any) {
    if (any) os << "*";
    os << base;
    if (e != 1) os << "^" << e;
    any = true;
}

std::string monomial_str(const Monomial &m) {
    std::ostringstream os;
    bool any = false;
    write_factors(os, m, any);
    if (!any) os << "1";
    return os.str();
}

void write_factors(std::ostream &os, const Monomial &m, bool &any) {
    // parameters and time symbols first, then lambda, x, jets, antiderivatives
    for (const auto &[c, e] : m.atoms()) write_power(os, atom_name(c), e, any);
    for (const auto &[b, e] : m.antis()) write_power(os, "I(" + monomial_str(*b) + ")", e, any);
}

} // namespace

std::string DiffPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[m, c] : terms_) {
        Q a = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (m.is_one()) {
            os << a.get_str();
            continue;
        }
        if (a != 1) os << a.get_str() << "*";
        os << monomial_str(m);
    }
    return os.str();
}

std::ostream &operator<<(std::ostream &os, const DiffPoly &p) { return os << p.str(); }

// ---- derivatives --------------------------------------------------------------

namespace {

DiffPoly d_x_monomial(const Monomial &m) {
    DiffPoly r;
    for (const auto &[c, e] : m.atoms()) {
        if (!atom::x_dependent(c)) continue;
        Monomial rest = m.with_atom(c, -1);
        if (atom::kind(c) == Kind::X) {
            r.add_term(rest, e);
        } else {
            int comp = int(atom::first(c)), order = int(atom::second(c));
            r.add_term(rest.with_atom(atom::jet(comp, order + 1), 1), e);
        }
    }
    for (std::size_t i = 0; i < m.antis().size(); ++i) {
        const auto &[b, e] = m.antis()[i];
        r.add_term(m.without_anti(i) * (*b), e);
    }
    return r;
}

} // namespace

DiffPoly d_x(const DiffPoly &p) {
    DiffPoly r;
    for (const auto &[m, c] : p.terms()) {
        auto [k, v] = m.split_constant();
        if (v.is_one()) continue;
        DiffPoly dv = d_x_monomial(v);
        for (const auto &[dm, dc] : dv.terms()) r.add_term(k * dm, c * dc);
    }
    return r;
}

DiffPoly d_x(const DiffPoly &p, int times) {
    DiffPoly r = p;
    for (int i = 0; i < times; ++i) r = d_x(r);
    return r;
}

DiffPoly partial_t(const DiffPoly &p) {
    DiffPoly r;
    for (const auto &[m, c] : p.terms()) {
        for (const auto &[code, e] : m.atoms()) {
            Monomial rest = m.with_atom(code, -1);
            if (code == atom::param(params::t)) {
                r.add_term(rest, c * e);
            } else if (atom::kind(code) == Kind::Time) {
                int mm = int(atom::first(code)), rr = int(atom::second(code));
                r.add_term(rest.with_atom(atom::time(mm, rr + 1), 1), c * e);
            }
        }
    }
    return r;
}

DiffPoly partial_jet(const DiffPoly &p, int comp, int order) {
    const std::uint32_t code = atom::jet(comp, order);
    DiffPoly r;
    for (const auto &[m, c] : p.terms()) {
        int e = m.exponent(code);
        if (e != 0) r.add_term(m.with_atom(code, -1), c * e);
    }
    return r;
}

std::vector<MonoPtr> anti_nodes(const DiffPoly &p) {
    std::vector<MonoPtr> out;
    for (const auto &[m, c] : p.terms())
        for (const auto &[b, e] : m.antis()) {
            bool seen = false;
            for (const auto &o : out)
                if (compare(*o, *b) == 0) seen = true;
            if (!seen) out.push_back(b);
        }
    std::sort(out.begin(), out.end(), [](const MonoPtr &a, const MonoPtr &b) { return compare(*a, *b) < 0; });
    return out;
}

DiffPoly partial_anti(const DiffPoly &p, const Monomial &body) {
    DiffPoly r;
    for (const auto &[m, c] : p.terms())
        for (std::size_t i = 0; i < m.antis().size(); ++i)
            if (compare(*m.antis()[i].first, body) == 0) r.add_term(m.without_anti(i), c * m.antis()[i].second);
    return r;
}

// ---- substitution ---------------------------------------------------------------

namespace {

DiffPoly substitute_monomial(const Monomial &m, const AtomRule &rule) {
    DiffPoly r(1);
    Monomial kept;
    for (const auto &[code, e] : m.atoms()) {
        auto rep = rule(code);
        if (!rep) {
            kept = kept * Monomial::of(code, e);
            continue;
        }
        if (e >= 0) {
            r *= rep->pow(e);
        } else {
            if (rep->size() != 1 || !rep->terms().begin()->first.is_one())
                throw MalformedExpression("negative power can only be replaced by a nonzero rational");
            Q inv = 1 / rep->terms().begin()->second;
            r *= DiffPoly(inv).pow(-e);
        }
    }
    for (const auto &[b, e] : m.antis()) {
        DiffPoly body = substitute_monomial(*b, rule);
        r *= int_x(body).pow(e);
    }
    return r * DiffPoly(kept);
}

} // namespace

DiffPoly substitute(const DiffPoly &p, const AtomRule &rule) {
    DiffPoly r;
    for (const auto &[m, c] : p.terms()) r += c * substitute_monomial(m, rule);
    return r;
}

FlowVector substitute(const FlowVector &v, const AtomRule &rule) {
    FlowVector r;
    r.reserve(v.size());
    for (const auto &p : v) r.push_back(substitute(p, rule));
    return r;
}

DiffPoly set_param(const DiffPoly &p, int id, const DiffPoly &value) {
    const std::uint32_t code = atom::param(id);
    return substitute(p, [&](std::uint32_t c) -> std::optional<DiffPoly> {
        if (c == code) return value;
        return std::nullopt;
    });
}

DiffPoly kill_time_symbols(const DiffPoly &p) {
    DiffPoly r;
    for (const auto &[m, c] : p.terms()) {
        bool has = false;
        for (const auto &[code, e] : m.atoms())
            if (atom::kind(code) == Kind::Time) has = true;
        if (!has) r.add_term(m, c);
    }
    return r;
}

DiffPoly scale_jets(const DiffPoly &p, const DiffPoly &factor) {
    return substitute(p, [&](std::uint32_t c) -> std::optional<DiffPoly> {
        if (atom::kind(c) == Kind::Jet) return factor * DiffPoly(Monomial::of(c));
        return std::nullopt;
    });
}

int max_component(const DiffPoly &p) {
    int best = 0;
    for (const auto &[m, c] : p.terms()) best = std::max(best, m.max_component());
    return best;
}

void require_components(const DiffPoly &p, int n) {
    int mc = max_component(p);
    if (mc > n)
        throw MalformedExpression("component u" + std::to_string(mc) + " exceeds model dimension " +
                                  std::to_string(n));
}

// ---- flow vectors -----------------------------------------------------------------

namespace {
void same_dim(const FlowVector &a, const FlowVector &b) {
    if (a.size() != b.size())
        throw DimensionMismatch(std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}
} // namespace

FlowVector operator+(const FlowVector &a, const FlowVector &b) {
    same_dim(a, b);
    FlowVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

FlowVector operator-(const FlowVector &a, const FlowVector &b) {
    same_dim(a, b);
    FlowVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

FlowVector operator*(const DiffPoly &c, const FlowVector &v) {
    FlowVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
    return r;
}

bool is_zero(const FlowVector &v) {
    return std::all_of(v.begin(), v.end(), [](const DiffPoly &p) { return p.is_zero(); });
}

FlowVector d_x(const FlowVector &v) {
    FlowVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = d_x(v[i]);
    return r;
}

FlowVector int_x(const FlowVector &v) {
    FlowVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = int_x(v[i]);
    return r;
}

FlowVector partial_t(const FlowVector &v) {
    FlowVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = partial_t(v[i]);
    return r;
}

} // namespace hforge
