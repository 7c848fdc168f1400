#include <map>

#include "hforge/diffpoly.hpp"
#include "hforge/operator.hpp"

namespace hforge {

namespace {

class Linearizer {
public:
    explicit Linearizer(const FlowVector &dir) : dir_(dir) {}

    DiffPoly run(const DiffPoly &p) {
        DiffPoly r;
        for (const auto &[m, c] : p.terms()) r += c * monomial(m);
        return r;
    }

private:
    const FlowVector &dir_;
    std::map<std::pair<int, int>, DiffPoly> jets_;

    const DiffPoly &jet(int comp, int order) {
        auto key = std::make_pair(comp, order);
        auto it = jets_.find(key);
        if (it != jets_.end()) return it->second;
        if (comp < 1 || std::size_t(comp) > dir_.size())
            throw DimensionMismatch("direction has " + std::to_string(dir_.size()) + " components, u" +
                                    std::to_string(comp) + " present");
        DiffPoly v = order == 0 ? dir_[std::size_t(comp - 1)] : d_x(jet(comp, order - 1));
        return jets_.emplace(key, std::move(v)).first->second;
    }

    DiffPoly monomial(const Monomial &m) {
        DiffPoly r;
        for (const auto &[code, e] : m.atoms()) {
            if (atom::kind(code) != Kind::Jet) continue;
            const DiffPoly &dj = jet(int(atom::first(code)), int(atom::second(code)));
            r += DiffPoly(m.with_atom(code, -1), e) * dj;
        }
        for (std::size_t i = 0; i < m.antis().size(); ++i) {
            const auto &[b, e] = m.antis()[i];
            DiffPoly inner = int_x(monomial(*b));
            if (!inner.is_zero()) r += DiffPoly(m.without_anti(i), e) * inner;
        }
        return r;
    }
};

} // namespace

DiffPoly gateaux(const DiffPoly &p, const FlowVector &direction) { return Linearizer(direction).run(p); }

FlowVector gateaux(const FlowVector &target, const FlowVector &direction) {
    if (target.size() != direction.size())
        throw DimensionMismatch("target has " + std::to_string(target.size()) + " components, direction " +
                                std::to_string(direction.size()));
    Linearizer lin(direction);
    FlowVector r;
    r.reserve(target.size());
    for (const auto &p : target) r.push_back(lin.run(p));
    return r;
}

DiffPoly euler_derivative(const DiffPoly &p, int comp) {
    return apply_entry(adjoint_entry(frechet_entry(p, comp)), DiffPoly(1));
}

} // namespace hforge
