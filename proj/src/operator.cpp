#include "hforge/operator.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace hforge {

namespace {

Q binomial(int n, int k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), unsigned(n), unsigned(k));
    return Q(r);
}

Word scaled(const DiffPoly &c, Word w) {
    w.coeffs[0] = c * w.coeffs[0];
    return w;
}

// ∂^m ∘ w, with ∂^j ∂^{-1} = ∂^{j-1} and coefficients pushed left.
OpEntry push_derivative(int m, const Word &w) {
    if (m == 0) return {w};
    OpEntry out;
    DiffPoly dw = w.coeffs[0];
    for (int j = 0; j <= m; ++j) {
        if (j > 0) dw = d_x(dw);
        if (dw.is_zero()) break;
        DiffPoly coef = binomial(m, j) * dw;
        int rest = m - j;
        if (w.inverses() == 0) {
            Word nw;
            nw.coeffs = {coef};
            nw.dpow = rest + w.dpow;
            out.push_back(std::move(nw));
        } else if (rest == 0) {
            Word nw = w;
            nw.coeffs[0] = coef;
            out.push_back(std::move(nw));
        } else {
            Word tail;
            tail.coeffs.assign(w.coeffs.begin() + 1, w.coeffs.end());
            tail.dpow = w.dpow;
            for (auto &t : push_derivative(rest - 1, tail)) out.push_back(scaled(coef, std::move(t)));
        }
    }
    return out;
}

// Rewrites ... ∂^{-1} a_r ∂^k (k >= 1) as ... a_r ∂^{k-1} - ... ∂^{-1} a_r' ∂^{k-1}.
void drop_trailing(const Word &w, OpEntry &out) {
    if (w.inverses() == 0 || w.dpow == 0) {
        out.push_back(w);
        return;
    }
    const std::size_t r = w.coeffs.size() - 1;
    Word merged;
    merged.coeffs.assign(w.coeffs.begin(), w.coeffs.begin() + std::ptrdiff_t(r));
    merged.coeffs.back() = merged.coeffs.back() * w.coeffs[r];
    merged.dpow = w.dpow - 1;
    drop_trailing(merged, out);
    DiffPoly der = d_x(w.coeffs[r]);
    if (!der.is_zero()) {
        Word rest = w;
        rest.coeffs[r] = der;
        rest.coeffs[0] = -rest.coeffs[0];
        rest.dpow = w.dpow - 1;
        drop_trailing(rest, out);
    }
}

int compare_poly(const DiffPoly &a, const DiffPoly &b) {
    auto ia = a.terms().begin(), ib = b.terms().begin();
    for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
        if (int c = compare(ia->first, ib->first)) return c;
        if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
    }
    if (ia == a.terms().end() && ib == b.terms().end()) return 0;
    return ia == a.terms().end() ? -1 : 1;
}

// Key of a word ignoring its leading coefficient.
int compare_shape(const Word &a, const Word &b) {
    if (a.inverses() != b.inverses()) return a.inverses() < b.inverses() ? -1 : 1;
    if (a.dpow != b.dpow) return a.dpow < b.dpow ? -1 : 1;
    for (std::size_t i = 1; i < a.coeffs.size(); ++i)
        if (int c = compare_poly(a.coeffs[i], b.coeffs[i])) return c;
    return 0;
}

// Splits inner coefficients into unit x-dependent monomials, moving the
// scalar and x-free factors to the leading coefficient.
void expand_inner(const Word &w, std::size_t idx, Word &acc, OpEntry &out) {
    if (idx == w.coeffs.size()) {
        out.push_back(acc);
        return;
    }
    for (const auto &[m, c] : w.coeffs[idx].terms()) {
        auto [k, v] = m.split_constant();
        Word next = acc;
        next.coeffs[0] = DiffPoly(k, c) * next.coeffs[0];
        next.coeffs.push_back(DiffPoly(v));
        expand_inner(w, idx + 1, next, out);
    }
}

} // namespace

OpEntry normalize_entry(const OpEntry &e) {
    OpEntry flat;
    for (const auto &w : e) {
        if (w.coeffs[0].is_zero()) continue;
        OpEntry tmp;
        drop_trailing(w, tmp);
        for (const auto &t : tmp) {
            if (t.coeffs[0].is_zero()) continue;
            if (t.inverses() == 0) {
                flat.push_back(t);
                continue;
            }
            Word acc;
            acc.coeffs = {t.coeffs[0]};
            acc.dpow = t.dpow;
            expand_inner(t, 1, acc, flat);
        }
    }
    std::stable_sort(flat.begin(), flat.end(), [](const Word &a, const Word &b) { return compare_shape(a, b) < 0; });
    OpEntry out;
    for (auto &w : flat) {
        if (!out.empty() && compare_shape(out.back(), w) == 0) {
            out.back().coeffs[0] += w.coeffs[0];
            if (out.back().coeffs[0].is_zero()) out.pop_back();
        } else if (!w.coeffs[0].is_zero()) {
            out.push_back(std::move(w));
        }
    }
    return out;
}

OpEntry compose_entries(const OpEntry &a, const OpEntry &b) {
    OpEntry out;
    for (const auto &wa : a) {
        for (const auto &wb : b) {
            OpEntry s = push_derivative(wa.dpow, wb);
            const std::size_t r = wa.coeffs.size() - 1;
            for (auto &w : s) w.coeffs[0] = wa.coeffs[r] * w.coeffs[0];
            for (std::size_t j = r; j-- > 0;) {
                for (auto &w : s) {
                    Word nw;
                    nw.coeffs.clear();
                    nw.coeffs.reserve(w.coeffs.size() + 1);
                    nw.coeffs.push_back(wa.coeffs[j]);
                    nw.coeffs.insert(nw.coeffs.end(), w.coeffs.begin(), w.coeffs.end());
                    nw.dpow = w.dpow;
                    w = std::move(nw);
                }
            }
            out.insert(out.end(), s.begin(), s.end());
        }
    }
    return normalize_entry(out);
}

OpEntry adjoint_entry(const OpEntry &e) {
    OpEntry out;
    for (const auto &w : e) {
        Word rev;
        rev.coeffs.assign(w.coeffs.rbegin(), w.coeffs.rend());
        rev.dpow = 0;
        bool negate = ((w.dpow + w.inverses()) % 2) != 0;
        for (auto &t : push_derivative(w.dpow, rev)) {
            if (negate) t.coeffs[0] = -t.coeffs[0];
            out.push_back(std::move(t));
        }
    }
    return normalize_entry(out);
}

DiffPoly apply_entry(const OpEntry &e, const DiffPoly &f) {
    DiffPoly total;
    std::vector<DiffPoly> derivs{f};
    for (const auto &w : e) {
        while (int(derivs.size()) <= w.dpow) derivs.push_back(d_x(derivs.back()));
        const std::size_t r = w.coeffs.size() - 1;
        DiffPoly g = w.coeffs[r] * derivs[std::size_t(w.dpow)];
        for (std::size_t j = r; j-- > 0;) g = w.coeffs[j] * int_x(g);
        total += g;
    }
    return total;
}

// ---- OperatorExpr -----------------------------------------------------------

OperatorExpr::OperatorExpr(int n) : n_(n), entries_(std::size_t(n * n)) {
    if (n < 1) throw BadDimension("operator dimension must be positive");
}

OperatorExpr OperatorExpr::identity(int n) {
    OperatorExpr r(n);
    for (int i = 0; i < n; ++i) r.at(i, i) = {Word{}};
    return r;
}

OperatorExpr OperatorExpr::d(int k) {
    if (k < 0) throw MalformedExpression("negative derivative power; use inv()");
    OperatorExpr r(1);
    Word w;
    w.dpow = k;
    r.at(0, 0) = {w};
    return r;
}

OperatorExpr OperatorExpr::inv() {
    OperatorExpr r(1);
    Word w;
    w.coeffs = {DiffPoly(1), DiffPoly(1)};
    r.at(0, 0) = {w};
    return r;
}

OperatorExpr OperatorExpr::mul(const DiffPoly &p) {
    OperatorExpr r(1);
    if (!p.is_zero()) {
        Word w;
        w.coeffs = {p};
        r.at(0, 0) = {w};
    }
    return r;
}

OperatorExpr OperatorExpr::diag(const std::vector<OperatorExpr> &blocks) {
    if (blocks.empty()) throw EmptyInput("diag of nothing");
    int n = 0;
    for (const auto &b : blocks) n += b.dim();
    OperatorExpr r(n);
    int off = 0;
    for (const auto &b : blocks) {
        for (int i = 0; i < b.dim(); ++i)
            for (int j = 0; j < b.dim(); ++j) r.at(off + i, off + j) = b.at(i, j);
        off += b.dim();
    }
    return r;
}

OperatorExpr OperatorExpr::matrix(int n, const std::vector<OperatorExpr> &entries) {
    if (entries.size() != std::size_t(n * n)) throw DimensionMismatch("matrix needs n*n entries");
    OperatorExpr r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto &e = entries[std::size_t(i * n + j)];
            if (e.dim() != 1) throw DimensionMismatch("matrix entries must be scalar operators");
            r.at(i, j) = normalize_entry(e.at(0, 0));
        }
    return r;
}

OperatorExpr OperatorExpr::entry(int r, int c) const {
    OperatorExpr e(1);
    e.at(0, 0) = at(r, c);
    return e;
}

OperatorExpr &OperatorExpr::operator+=(const OperatorExpr &o) {
    if (o.n_ != n_) throw DimensionMismatch("operator sum");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        OpEntry s = entries_[i];
        s.insert(s.end(), o.entries_[i].begin(), o.entries_[i].end());
        entries_[i] = normalize_entry(s);
    }
    return *this;
}

OperatorExpr &OperatorExpr::operator-=(const OperatorExpr &o) { return *this += -o; }

OperatorExpr OperatorExpr::operator-() const {
    OperatorExpr r = *this;
    for (auto &e : r.entries_)
        for (auto &w : e) w.coeffs[0] = -w.coeffs[0];
    return r;
}

OperatorExpr operator*(const OperatorExpr &a, const OperatorExpr &b) {
    if (a.n_ != b.n_) throw DimensionMismatch("operator composition");
    const int n = a.n_;
    OperatorExpr r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            OpEntry acc;
            for (int k = 0; k < n; ++k) {
                if (a.at(i, k).empty() || b.at(k, j).empty()) continue;
                OpEntry p = compose_entries(a.at(i, k), b.at(k, j));
                acc.insert(acc.end(), p.begin(), p.end());
            }
            r.at(i, j) = normalize_entry(acc);
        }
    return r;
}

OperatorExpr operator*(const DiffPoly &c, const OperatorExpr &a) {
    OperatorExpr r = a;
    for (auto &e : r.entries_) {
        for (auto &w : e) w.coeffs[0] = c * w.coeffs[0];
        e = normalize_entry(e);
    }
    return r;
}

OperatorExpr OperatorExpr::pow(int e) const {
    if (e < 0) throw MalformedExpression("negative operator power");
    OperatorExpr r = identity(n_);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

FlowVector OperatorExpr::apply(const FlowVector &v) const {
    if (int(v.size()) != n_)
        throw DimensionMismatch("operator of size " + std::to_string(n_) + " applied to vector of size " +
                                std::to_string(v.size()));
    FlowVector r(v.size());
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (!at(i, j).empty()) r[std::size_t(i)] += apply_entry(at(i, j), v[std::size_t(j)]);
    return r;
}

DiffPoly OperatorExpr::apply(const DiffPoly &p) const {
    if (n_ != 1) throw DimensionMismatch("scalar application of a matrix operator");
    return apply_entry(at(0, 0), p);
}

OperatorExpr OperatorExpr::adjoint() const {
    OperatorExpr r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.at(i, j) = adjoint_entry(at(j, i));
    return r;
}

OperatorExpr OperatorExpr::map_coefficients(const std::function<DiffPoly(const DiffPoly &)> &f) const {
    OperatorExpr r(n_);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        OpEntry e;
        for (const auto &w : entries_[i]) {
            Word nw = w;
            for (auto &c : nw.coeffs) c = f(c);
            e.push_back(std::move(nw));
        }
        r.entries_[i] = normalize_entry(e);
    }
    return r;
}

OperatorExpr OperatorExpr::gateaux(const FlowVector &direction) const {
    OperatorExpr r(n_);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        OpEntry e;
        for (const auto &w : entries_[i]) {
            for (std::size_t j = 0; j < w.coeffs.size(); ++j) {
                DiffPoly dc = hforge::gateaux(w.coeffs[j], direction);
                if (dc.is_zero()) continue;
                Word nw = w;
                nw.coeffs[j] = dc;
                e.push_back(std::move(nw));
            }
        }
        r.entries_[i] = normalize_entry(e);
    }
    return r;
}

bool OperatorExpr::is_differential() const {
    for (const auto &e : entries_)
        for (const auto &w : e)
            if (w.inverses() > 0) return false;
    return true;
}

bool OperatorExpr::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const OpEntry &e) { return e.empty(); });
}

bool operator==(const OperatorExpr &a, const OperatorExpr &b) {
    if (a.n_ != b.n_) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
        const auto &x = a.entries_[i], &y = b.entries_[i];
        if (x.size() != y.size()) return false;
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (compare_shape(x[k], y[k]) != 0) return false;
            if (x[k].coeffs[0] != y[k].coeffs[0]) return false;
        }
    }
    return true;
}

namespace {
std::string entry_str(const OpEntry &e) {
    if (e.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const Word &w = e[i];
        if (i) os << " + ";
        os << "(" << w.coeffs[0].str() << ")";
        for (std::size_t j = 1; j < w.coeffs.size(); ++j) os << "*D^-1*(" << w.coeffs[j].str() << ")";
        if (w.dpow == 1) os << "*D";
        if (w.dpow > 1) os << "*D^" << w.dpow;
    }
    return os.str();
}
} // namespace

std::string OperatorExpr::str() const {
    if (n_ == 1) return entry_str(at(0, 0));
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < n_; ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < n_; ++j) os << (j ? ", " : "") << entry_str(at(i, j));
        os << "]";
    }
    os << "]";
    return os.str();
}

// ---- linearization ------------------------------------------------------------

OpEntry frechet_entry(const DiffPoly &p, int comp) {
    OpEntry out;
    int max_order = -1;
    for (const auto &[m, c] : p.terms())
        for (const auto &[code, e] : m.atoms())
            if (atom::kind(code) == Kind::Jet && int(atom::first(code)) == comp)
                max_order = std::max(max_order, int(atom::second(code)));
    for (int d = 0; d <= max_order; ++d) {
        DiffPoly coef = partial_jet(p, comp, d);
        if (coef.is_zero()) continue;
        Word w;
        w.coeffs = {coef};
        w.dpow = d;
        out.push_back(std::move(w));
    }
    for (const auto &body : anti_nodes(p)) {
        DiffPoly outer = partial_anti(p, *body);
        OpEntry inner = frechet_entry(DiffPoly(*body), comp);
        if (inner.empty()) continue;
        OpEntry prefix;
        Word w;
        w.coeffs = {outer, DiffPoly(1)};
        prefix.push_back(w);
        OpEntry composed = compose_entries(prefix, inner);
        out.insert(out.end(), composed.begin(), composed.end());
    }
    return normalize_entry(out);
}

OperatorExpr frechet_operator(const FlowVector &target) {
    const int n = int(target.size());
    OperatorExpr r(n);
    for (int i = 0; i < n; ++i) {
        require_components(target[std::size_t(i)], n);
        for (int j = 0; j < n; ++j) r.at(i, j) = frechet_entry(target[std::size_t(i)], j + 1);
    }
    return r;
}

std::vector<FlowVector> test_vectors(int n, int count, unsigned seed) {
    std::mt19937 rng(seed);
    auto pick = [&rng](int lo, int hi) { return lo + int(rng() % unsigned(hi - lo + 1)); };
    std::vector<FlowVector> out;
    for (int t = 0; t < count; ++t) {
        FlowVector v;
        for (int i = 0; i < n; ++i) {
            DiffPoly p;
            int terms = pick(2, 3);
            for (int k = 0; k < terms; ++k) {
                int coef = pick(1, 4) * (pick(0, 1) ? 1 : -1);
                int a = pick(1, n), b = pick(1, n);
                DiffPoly term;
                switch (pick(0, 3)) {
                case 0: term = DiffPoly::u(a, pick(0, 2)); break;
                case 1: term = DiffPoly::x() * DiffPoly::u(a, pick(0, 1)); break;
                case 2: term = DiffPoly::u(a) * DiffPoly::u(b, pick(0, 1)); break;
                default: term = DiffPoly::u(a, 1) * DiffPoly::u(b, pick(1, 2)); break;
                }
                p += Q(coef) * term;
            }
            v.push_back(p);
        }
        out.push_back(std::move(v));
    }
    return out;
}

bool agree_on(const OperatorExpr &a, const OperatorExpr &b, const std::vector<FlowVector> &tests) {
    if (a.dim() != b.dim()) return false;
    if (a == b) return true;
    for (const auto &v : tests)
        if (a.apply(v) != b.apply(v)) return false;
    return true;
}

} // namespace hforge
