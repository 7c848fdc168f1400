#include "hforge/hamiltonian.hpp"

#include <optional>

namespace hforge {

namespace {

using Op = OperatorExpr;

Op D(int k = 1) { return Op::d(k); }
Op mul(const DiffPoly &p) { return Op::mul(p); }
Op half(const Op &o) { return DiffPoly(Q(1, 2)) * o; }

std::optional<Q> as_rational(const DiffPoly &p) {
    if (p.is_zero()) return Q(0);
    if (p.size() == 1 && p.terms().begin()->first.is_one()) return p.terms().begin()->second;
    return std::nullopt;
}

DiffPoly inverse_eps(const DiffPoly &eps) {
    if (eps == DiffPoly::eps()) return DiffPoly::param(params::epsilon, -1);
    auto q = as_rational(eps);
    if (!q || *q == 0) throw BadModel("J_1 needs an invertible ε, got " + eps.str());
    return DiffPoly(Q(1) / *q);
}

// ∂³ + 2∂u + 2u∂ and 2∂u + 2u∂
Op third_order(int comp) { return D(3) + DiffPoly(2) * (D() * mul(DiffPoly::u(comp)) + mul(DiffPoly::u(comp)) * D()); }
Op first_order(int comp) { return DiffPoly(2) * (D() * mul(DiffPoly::u(comp)) + mul(DiffPoly::u(comp)) * D()); }

DiffPoly wrap_weight(const SpectralModel &m) { return m.sigma * m.eps; }

FlowVector constant_flow(int n, const Q &c) { return FlowVector(std::size_t(n), DiffPoly(c)); }

bool agree(const Op &a, const Op &b) { return agree_on(a, b, test_vectors(a.dim(), 3)); }

bool euler_zero(const DiffPoly &p, int n) {
    for (int c = 1; c <= n; ++c)
        if (!euler_derivative(p, c).is_zero()) return false;
    return true;
}

std::string flow_str(const FlowVector &v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "; " : "") + v[i].str();
    return s + ")";
}

Op transpose(const Op &a) {
    std::vector<Op> e;
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c) e.push_back(a.entry(c, r));
    return Op::matrix(a.dim(), e);
}

SpectralModel isospectral(SpectralModel m) {
    m.iso = true;
    return m;
}

} // namespace

Op operator_embed(const std::vector<Op> &blocks, const DiffPoly &wrap) {
    const int n = int(blocks.size());
    if (n == 0) throw EmptyInput("no operator blocks");
    std::vector<Op> e;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) e.push_back(r >= c ? blocks[std::size_t(r - c)] : wrap * blocks[std::size_t(n + r - c)]);
    return Op::matrix(n, e);
}

Op lenard_operator(const SpectralModel &model) {
    std::vector<Op> blocks;
    for (int k = 1; k <= model.n; ++k) {
        Op b = DiffPoly(4) * mul(DiffPoly::u(k)) - DiffPoly(2) * Op::inv() * mul(DiffPoly::u(k, 1));
        blocks.push_back(k == 1 ? D(2) + b : b);
    }
    return operator_embed(blocks, wrap_weight(model));
}

Op recursion_operator(const SpectralModel &model) {
    std::vector<Op> blocks;
    for (int k = 1; k <= model.n; ++k) {
        Op b = DiffPoly(2) * mul(DiffPoly::u(k, 1)) * Op::inv() + DiffPoly(4) * mul(DiffPoly::u(k));
        blocks.push_back(k == 1 ? D(2) + b : b);
    }
    return operator_embed(blocks, wrap_weight(model));
}

std::vector<OperatorTriple> build_operators(const SpectralModel &model) {
    model.validate();
    Op phi = recursion_operator(model);
    switch (model.kind) {
    case ModelKind::Scalar:
        return {{"scalar", half(D()), half(third_order(1)), phi}};
    case ModelKind::Coupled: {
        const DiffPoly &e = model.eps;
        DiffPoly ie = inverse_eps(e);
        Op j1 = half(Op::diag({D(), ie * D()}));
        Op m1 = half(Op::matrix(2, {third_order(1), first_order(2), first_order(2), ie * third_order(1)}));
        Op j2 = half(Op::matrix(2, {Op::zero(1), D(), D(), Op::zero(1)}));
        Op m2 = half(Op::matrix(2, {e * first_order(2), third_order(1), third_order(1), first_order(2)}));
        return {{"coupled-1", j1, m1, phi}, {"coupled-2", j2, m2, phi}};
    }
    case ModelKind::Multi: {
        std::vector<Op> blocks{third_order(1)};
        for (int k = 2; k <= model.n; ++k) blocks.push_back(first_order(k));
        std::vector<Op> ds(std::size_t(model.n), D());
        return {{"multi", half(Op::diag(ds)), half(operator_embed(blocks, wrap_weight(model))), phi}};
    }
    }
    return {};
}

HamiltonianFunctional hamiltonian(const RecursionTable &table, int m, int family) {
    if (family == 2 && table.model.kind != ModelKind::Coupled) throw BadModel("second family exists only for coupled");
    return {m + 1, Q(1, 2 * (2 * m + 1)) * table.C(family == 2 ? 2 : 1, m + 1)};
}

FlowVector claimed_gradient(const RecursionTable &table, int m, int family) {
    if (table.model.kind != ModelKind::Coupled) return {table.C(1, m)};
    if (family == 1) return {table.C(1, m), table.model.eps * table.C(2, m)};
    return {table.C(2, m), table.C(1, m)};
}

FlowVector variational_gradient(const DiffPoly &density, int components) {
    FlowVector g;
    for (int c = 1; c <= components; ++c) g.push_back(euler_derivative(density, c));
    return g;
}

CheckReport verify_gradient_relations(const SpectralModel &model, int max_m) {
    CheckReport r;
    if (model.kind == ModelKind::Multi) return r;
    RecursionTable t = solve_recursion(isospectral(model), max_m);
    const int families = model.kind == ModelKind::Coupled ? 2 : 1;
    for (int f = 1; f <= families; ++f)
        for (int m = 0; m <= max_m; ++m) {
            FlowVector got = variational_gradient(hamiltonian(t, m, f).density, model.n);
            FlowVector want = claimed_gradient(t, m, f);
            std::string name = "gradient H" + (families > 1 ? std::to_string(f) + "," : std::string()) +
                               std::to_string(m + 1);
            r.add(name, got == want, got == want ? std::string() : "got " + flow_str(got) + ", want " + flow_str(want));
        }
    return r;
}

FlowVector phi_power_form(const SpectralModel &model, int n) {
    Op phi = recursion_operator(model);
    auto power = [&phi](FlowVector v, int p) {
        for (int i = 0; i < p; ++i) v = phi.apply(v);
        return v;
    };
    FlowVector out;
    int first_k = 0;
    switch (model.kind) {
    case ModelKind::Scalar:
        // Φ^{n+1} J c_0 read as Φ^n J(L c_0), since J c_0 vanishes for constant c_0.
        out = power({model.seeds[0] * DiffPoly::u(1, 1)}, n);
        break;
    case ModelKind::Coupled: {
        FlowVector a{DiffPoly::u(1, 1), DiffPoly::u(2, 1)};
        FlowVector b{model.eps * DiffPoly::u(2, 1), DiffPoly::u(1, 1)};
        out = power(model.seeds[0] * a + model.seeds[1] * b, n);
        break;
    }
    case ModelKind::Multi: {
        RecursionTable t = solve_recursion(model, 0);
        out = power(hierarchy_equation(t, 0).rhs, n);
        first_k = 1;
        break;
    }
    }
    if (!model.iso)
        for (int m = first_k; m <= n; ++m)
            out = out + (Q(1, 2) * DiffPoly::k(m)) * power(constant_flow(model.n, Q(1, 2)), n - m);
    return out;
}

CheckReport verify_operator_identities(const SpectralModel &model, int max_n) {
    CheckReport r;
    const auto triples = build_operators(model);
    const Op lenard = lenard_operator(model);
    for (const auto &t : triples) {
        r.add(t.tag + ": M = Phi J", agree(t.M, t.Phi * t.J));
        if (model.kind != ModelKind::Multi) {
            r.add(t.tag + ": J* = -J", t.J.adjoint() == -t.J);
            r.add(t.tag + ": M* = -M", t.M.adjoint() == -t.M);
            r.add(t.tag + ": M = J Phi*", agree(t.M, t.J * t.Phi.adjoint()));
        }
        if (model.kind == ModelKind::Coupled)
            r.add(t.tag + ": M = J L^T", agree(t.M, t.J * transpose(lenard)));
        else
            r.add(t.tag + ": M = J L", agree(t.M, t.J * lenard));
    }
    if (model.kind == ModelKind::Coupled) r.add("Phi_1 = Phi_2", triples[0].Phi == triples[1].Phi);
    RecursionTable table = solve_recursion(model, max_n);
    for (int n = 0; n <= max_n; ++n) {
        FlowVector want = hierarchy_equation(table, n).rhs;
        FlowVector got = phi_power_form(model, n);
        r.add("phi-power form n=" + std::to_string(n), got == want,
              got == want ? std::string() : "difference " + flow_str(got - want));
    }
    return r;
}

DiffPoly poisson_bracket(const FlowVector &grad_f, const FlowVector &grad_g, const Op &J) {
    if (grad_f.size() != grad_g.size() || int(grad_f.size()) != J.dim())
        throw DimensionMismatch("bracket of sizes " + std::to_string(grad_f.size()) + ", " +
                                std::to_string(grad_g.size()) + " with a " + std::to_string(J.dim()) + "x" +
                                std::to_string(J.dim()) + " operator");
    FlowVector jg = J.apply(grad_g);
    DiffPoly integrand;
    for (std::size_t i = 0; i < jg.size(); ++i) integrand += grad_f[i] * jg[i];
    return split_exact(integrand).remainder;
}

CheckReport verify_poisson_brackets(const SpectralModel &model, int max_index) {
    CheckReport r;
    if (model.kind == ModelKind::Multi) return r;
    SpectralModel iso = isospectral(model);
    RecursionTable t = solve_recursion(iso, max_index);
    const auto triples = build_operators(iso);
    for (std::size_t f = 0; f < triples.size(); ++f) {
        std::vector<FlowVector> grads;
        for (int m = 0; m <= max_index; ++m)
            grads.push_back(variational_gradient(hamiltonian(t, m, int(f) + 1).density, model.n));
        for (const auto &[opname, op] : {std::pair{"J", &triples[f].J}, std::pair{"M", &triples[f].M}})
            for (int i = 0; i <= max_index; ++i)
                for (int j = i + 1; j <= max_index; ++j) {
                    DiffPoly b = poisson_bracket(grads[std::size_t(i)], grads[std::size_t(j)], *op);
                    r.add(triples[f].tag + " {H" + std::to_string(i + 1) + ",H" + std::to_string(j + 1) + "}_" + opname,
                          euler_zero(b, model.n), b.str());
                }
    }
    return r;
}

FlowVector k_flow(int m, const DiffPoly &eps) {
    SpectralModel c = SpectralModel::coupled();
    c.eps = eps;
    Op phi = recursion_operator(c);
    FlowVector v{DiffPoly::u(1, 1), DiffPoly::u(2, 1)};
    for (int i = 0; i < m; ++i) v = phi.apply(v);
    return v;
}

namespace {

bool scale_inside(const Monomial &m) {
    for (const auto &[b, e] : m.antis())
        if (b->exponent(atom::param(params::scale)) != 0 || scale_inside(*b)) return true;
    return false;
}

} // namespace

HamiltonianFunctional conserved_quantity(int m, const DiffPoly &eps) {
    const DiffPoly s = DiffPoly::param(params::scale);
    FlowVector k = k_flow(m, eps);
    DiffPoly paired;
    for (std::size_t i = 0; i < k.size(); ++i)
        paired += int_x(scale_jets(k[i], s)) * DiffPoly::u(int(i) + 1);
    DiffPoly density;
    const std::uint32_t code = atom::param(params::scale);
    for (const auto &[mono, c] : paired.terms()) {
        int e = mono.exponent(code);
        if (e < 0 || scale_inside(mono)) throw NotPolynomialInScale("term " + DiffPoly(mono, c).str());
        density += DiffPoly(mono.without_atom(code), c / Q(e + 1));
    }
    return {m, split_exact(density).remainder};
}

bool conserved_along(const DiffPoly &density, const FlowVector &flow) {
    return euler_zero(gateaux(density, flow) + partial_t(density), int(flow.size()));
}

} // namespace hforge
