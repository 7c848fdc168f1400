// Formal antiderivative on the differential polynomial ring.
//
// For a single x-dependent monomial m we build a finite universe of candidate
// primitives by repeatedly "lowering" target monomials (drop one derivative
// order, raise the x power, or trade a known antiderivative body for its
// node), add every monomial of each candidate's derivative to the targets, and
// run Gaussian elimination over Q on the derivative rows. Pivots are the
// largest monomials in the elimination order below, so the normal form keeps
// the fewest antiderivative nodes, the lowest x powers and the lowest
// derivative orders. The normal form of m is its remainder; the combination of
// rows used is the exact part of the primitive.

#include <deque>
#include <mutex>
#include <set>
#include <unordered_map>

#include "hforge/diffpoly.hpp"

namespace hforge {

namespace {

constexpr std::size_t kClosureLimit = 60000;

bool elim_less(const Monomial &a, const Monomial &b) {
    int aa = a.anti_count(), ba = b.anti_count();
    if (aa != ba) return aa < ba;
    int ax = a.x_degree(), bx = b.x_degree();
    if (ax != bx) return ax < bx;
    int ad = a.max_jet_order(), bd = b.max_jet_order();
    if (ad != bd) return ad < bd;
    return compare(a, b) < 0;
}

struct ElimLess {
    bool operator()(const Monomial &a, const Monomial &b) const { return elim_less(a, b); }
};

using Row = std::map<Monomial, Q, ElimLess>;

struct Pivot {
    Row row;           // pivot coefficient normalized to 1
    DiffPoly primitive; // d_x(primitive) == row
};

using Basis = std::map<Monomial, Pivot, ElimLess>;

void axpy(Row &r, const Q &c, const Row &s) {
    for (const auto &[m, v] : s) {
        auto [it, inserted] = r.emplace(m, -c * v);
        if (!inserted) {
            it->second -= c * v;
            if (it->second == 0) r.erase(it);
        }
    }
}

void insert_row(Basis &basis, Row row, DiffPoly prim) {
    while (!row.empty()) {
        auto lead = std::prev(row.end());
        auto hit = basis.find(lead->first);
        if (hit == basis.end()) {
            Q inv = 1 / lead->second;
            for (auto &[m, v] : row) v *= inv;
            prim *= inv;
            Monomial key = lead->first;
            basis.emplace(key, Pivot{std::move(row), std::move(prim)});
            return;
        }
        Q c = lead->second;
        axpy(row, c, hit->second.row);
        prim -= c * hit->second.primitive;
    }
}

struct Split {
    DiffPoly primitive;
    DiffPoly remainder;
};

const Split &cached_unit(const Monomial &m);
DiffPoly int_x_at(const DiffPoly &p, int depth);

std::vector<Monomial> lowerings(const Monomial &t, const std::vector<MonoPtr> &bodies, int x_max, int anti_max,
                                bool root) {
    std::vector<Monomial> out;
    for (const auto &[code, e] : t.atoms()) {
        if (atom::kind(code) != Kind::Jet) continue;
        int comp = int(atom::first(code)), order = int(atom::second(code));
        if (order == 0) continue;
        out.push_back(t.with_atom(code, -1).with_atom(atom::jet(comp, order - 1), 1));
    }
    if (t.x_degree() + 1 <= x_max) out.push_back(t.with_atom(atom::x(), 1));
    if (root && !t.antis().empty() && t.anti_count() + 1 <= anti_max) {
        // The local part of the target as a new body pairs nodes: (A(c) A(b))' = c A(b) + A(c) b.
        Monomial local;
        for (const auto &[code, e] : t.atoms())
            if (atom::x_dependent(code)) local = local * Monomial::of(code, e);
        if (!local.is_one()) {
            // Nodes are only ever built over normal-form bodies.
            const Split &s = cached_unit(local);
            if (s.primitive.is_zero() && s.remainder == DiffPoly(local)) {
                out.push_back(t.quotient(local) * Monomial::anti(local));
            } else {
                for (const auto &[rm, rc] : s.remainder.terms())
                    out.push_back(t.quotient(local) * Monomial::anti(rm.split_constant().second));
            }
        }
    }
    for (const auto &b : bodies) {
        if (!b->divides(t)) continue;
        Monomial g = t.quotient(*b) * Monomial::anti(*b);
        if (g.anti_count() <= anti_max) out.push_back(std::move(g));
    }
    return out;
}

// Pairing candidates wrap raw local parts in nodes; a body that is not its
// own normal form is replaced by its canonical antiderivative.
DiffPoly renode(const DiffPoly &p) {
    DiffPoly out;
    for (const auto &[m, c] : p.terms()) {
        std::size_t bad = m.antis().size();
        for (std::size_t i = 0; i < m.antis().size(); ++i) {
            const Monomial &b = *m.antis()[i].first;
            const Split &s = cached_unit(b);
            if (!s.primitive.is_zero() || s.remainder != DiffPoly(b)) {
                bad = i;
                break;
            }
        }
        if (bad == m.antis().size()) {
            out.add_term(m, c);
            continue;
        }
        DiffPoly node = int_x_at(DiffPoly(*m.antis()[bad].first), 0);
        Monomial rest = m;
        DiffPoly prod(1);
        for (int e = 0; e < m.antis()[bad].second; ++e) {
            rest = rest.without_anti(bad);
            prod *= node;
        }
        prod *= DiffPoly(rest, c);
        out += renode(prod);
    }
    return out;
}

Split integrate_unit(const Monomial &m) {
    std::vector<MonoPtr> bodies;
    m.collect_bodies(bodies);
    const int x_max = m.x_degree() + m.anti_count() + 2;
    const int anti_max = m.anti_count() + 1;

    std::set<Monomial, MonoLess> targets{m};
    std::set<Monomial, MonoLess> candidates;
    std::deque<Monomial> queue{m};
    std::vector<std::pair<Monomial, DiffPoly>> rows;

    while (!queue.empty()) {
        Monomial t = std::move(queue.front());
        queue.pop_front();
        for (auto &g : lowerings(t, bodies, x_max, anti_max, t == m)) {
            if (!candidates.insert(g).second) continue;
            if (candidates.size() > kClosureLimit) throw ClosureLimit("antiderivative search too large");
            DiffPoly dg = d_x(DiffPoly(g));
            for (const auto &[dm, dc] : dg.terms())
                if (targets.insert(dm).second) queue.push_back(dm);
            rows.emplace_back(g, std::move(dg));
        }
    }

    Basis basis;
    for (auto &[g, dg] : rows) {
        Row row;
        for (const auto &[dm, dc] : dg.terms()) row.emplace(dm, dc);
        insert_row(basis, std::move(row), DiffPoly(g));
    }

    Row r{{m, Q(1)}};
    Split out;
    bool have = false;
    Monomial cur;
    for (;;) {
        auto it = have ? r.lower_bound(cur) : r.end();
        if (it == r.begin()) break;
        --it;
        cur = it->first;
        have = true;
        auto hit = basis.find(cur);
        if (hit == basis.end()) continue;
        Q c = it->second;
        axpy(r, c, hit->second.row);
        out.primitive += c * hit->second.primitive;
    }
    for (const auto &[rm, rc] : r) out.remainder.add_term(rm, rc);
    out.primitive = renode(out.primitive);
    return out;
}

struct MonoHash {
    std::size_t operator()(const Monomial &m) const { return m.hash(); }
};

struct MonoEq {
    bool operator()(const Monomial &a, const Monomial &b) const { return compare(a, b) == 0; }
};

const Split &cached_unit(const Monomial &m) {
    static std::mutex mu;
    static std::unordered_map<Monomial, Split, MonoHash, MonoEq> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
    }
    Split s = integrate_unit(m);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(m, std::move(s)).first->second;
}

} // namespace

ExactSplit split_exact(const DiffPoly &p) {
    ExactSplit out;
    for (const auto &[m, c] : p.terms()) {
        auto [k, v] = m.split_constant();
        if (v.is_one()) {
            out.primitive.add_term(k * Monomial::of(atom::x()), c);
            continue;
        }
        const Split &s = cached_unit(v);
        DiffPoly scale(k, c);
        out.primitive += scale * s.primitive;
        out.remainder += scale * s.remainder;
    }
    return out;
}

bool is_exact(const DiffPoly &p) { return split_exact(p).remainder.is_zero(); }

namespace {

// A(c A(d)) and A(d A(c)) sum to A(c) A(d), so only one orientation is kept as
// a node: the one whose local factor orders below the inner body.
DiffPoly anti_node(const Monomial &v, int depth) {
    if (depth < 4 && v.antis().size() == 1 && v.antis()[0].second == 1) {
        const Monomial &d = *v.antis()[0].first;
        Monomial c = v.without_anti(0);
        int cmp = c.is_one() ? -1 : compare(c, d);
        if (cmp == 0) {
            DiffPoly a = int_x_at(DiffPoly(c), depth + 1);
            return Q(1, 2) * a * a;
        }
        if (cmp > 0) {
            DiffPoly a = int_x_at(DiffPoly(c), depth + 1);
            return a * DiffPoly(Monomial::anti(d)) - int_x_at(DiffPoly(d) * a, depth + 1);
        }
    }
    return DiffPoly(Monomial::anti(v));
}

DiffPoly int_x_at(const DiffPoly &p, int depth) {
    ExactSplit s = split_exact(p);
    DiffPoly r = std::move(s.primitive);
    for (const auto &[m, c] : s.remainder.terms()) {
        auto [k, v] = m.split_constant();
        r += DiffPoly(k, c) * anti_node(v, depth);
    }
    return r;
}

} // namespace

DiffPoly int_x(const DiffPoly &p) { return int_x_at(p, 0); }

} // namespace hforge
