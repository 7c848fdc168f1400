#include "hforge/hierarchy.hpp"

namespace hforge {

DiffPoly convolution(const SpectralModel &model, const std::vector<DiffPoly> &xs, int k) {
    const int n = model.n;
    DiffPoly direct, wrapped;
    for (int i = 1; i <= k; ++i) direct += xs[std::size_t(i - 1)] * DiffPoly::u(k + 1 - i);
    for (int m = k + 1; m <= n; ++m) {
        int j = k + n + 1 - m;
        if (j > k && j <= n) wrapped += xs[std::size_t(m - 1)] * DiffPoly::u(j);
    }
    return direct + model.sigma * model.eps * wrapped;
}

RecursionTable solve_recursion(const SpectralModel &model, int n) {
    model.validate();
    if (n < 0) throw OrderExceeded("order must be nonnegative");
    RecursionTable t;
    t.model = model;
    t.order = n;
    const std::size_t N = std::size_t(model.n);
    t.a.assign(N, {});
    t.b.assign(N, {});
    t.c.assign(N, {});
    for (std::size_t k = 0; k < N; ++k) {
        t.c[k].push_back(model.seeds[k]);
        t.a[k].push_back(DiffPoly());
        t.b_top.push_back(Q(1, 4) * model.seeds[k]);
    }
    const DiffPoly x = DiffPoly::x();
    for (int m = 0; m <= n; ++m) {
        const DiffPoly km = model.iso ? DiffPoly() : DiffPoly::k(m);
        std::vector<DiffPoly> cm, cmx;
        for (std::size_t k = 0; k < N; ++k) {
            cm.push_back(t.c[k][std::size_t(m)]);
            cmx.push_back(d_x(cm.back()));
        }
        for (int k = 1; k <= model.n; ++k) {
            const std::size_t i = std::size_t(k - 1);
            DiffPoly nonlocal = int_x(convolution(model, cmx, k));
            DiffPoly next = d_x(cmx[i]) + Q(2) * convolution(model, cm, k) + Q(2) * nonlocal + Q(1, 2) * km * x;
            t.b[i].push_back(Q(-1, 4) * next + nonlocal + Q(1, 4) * km * x);
            t.a[i].push_back(Q(1, 2) * d_x(next));
            t.c[i].push_back(std::move(next));
        }
    }
    return t;
}

HierarchyEquation hierarchy_equation(const RecursionTable &table, int n) {
    if (n > table.order) throw OrderExceeded("table holds order " + std::to_string(table.order));
    HierarchyEquation eq;
    eq.order = n;
    for (int k = 1; k <= table.model.n; ++k) eq.rhs.push_back(Q(1, 2) * d_x(table.C(k, n + 1)));
    return eq;
}

HierarchyEquation hierarchy_equation(const SpectralModel &model, int n) {
    return hierarchy_equation(solve_recursion(model, n), n);
}

MatrixExpr modification_term(const SpectralPair &pair, const RecursionTable &table, int n) {
    if (n < 0 || n > table.order) throw OrderExceeded("modification term of order " + std::to_string(n));
    MatrixExpr d(pair.U.order());
    for (int k = 1; k <= table.model.n; ++k) d -= Q(1, 4) * table.C(k, n + 1) * element(pair.basis, 1, k);
    return d;
}

MatrixExpr time_matrix(const SpectralPair &pair, const RecursionTable &table, int n) {
    MatrixExpr v = modification_term(pair, table, n);
    for (int k = 1; k <= table.model.n; ++k) {
        v += table.b_top[std::size_t(k - 1)] * DiffPoly::lambda(n + 1) * element(pair.basis, 1, k);
        for (int i = 0; i <= n; ++i) {
            DiffPoly l = DiffPoly::lambda(n - i);
            v += table.A(k, i) * l * element(pair.basis, 0, k);
            v += table.B(k, i) * l * element(pair.basis, 1, k);
            v += table.C(k, i) * l * element(pair.basis, 2, k);
        }
    }
    return v;
}

MatrixExpr zero_curvature_residual(const SpectralPair &pair, const FlowVector &flow, const DiffPoly &lambda_t,
                                   const MatrixExpr &V) {
    if (flow.size() != pair.dU_du.size())
        throw DimensionMismatch("flow has " + std::to_string(flow.size()) + " components");
    MatrixExpr r = lambda_t * pair.dU_dlambda - d_x(V) + commutator(pair.U, V);
    for (std::size_t k = 0; k < flow.size(); ++k) r += flow[k] * pair.dU_du[k];
    return r;
}

MatrixExpr verify_zero_curvature(const SpectralModel &model, int n) {
    SpectralPair pair = build_spectral_pair(model, n + 2);
    RecursionTable table = solve_recursion(model, n);
    DiffPoly lt = split_plus_minus(pair.lambda_t, n).first.to_poly();
    return zero_curvature_residual(pair, hierarchy_equation(table, n).rhs, lt, time_matrix(pair, table, n));
}

OperatorExpr scalar_lenard_operator() {
    OperatorExpr u = OperatorExpr::mul(DiffPoly::u(1));
    return OperatorExpr::d(2) + DiffPoly(2) * (u + OperatorExpr::inv() * u * OperatorExpr::d());
}

DiffPoly scalar_operator_form(const RecursionTable &table, int n) {
    static const OperatorExpr half_d = DiffPoly(Q(1, 2)) * OperatorExpr::d();
    DiffPoly k = table.model.iso ? DiffPoly() : DiffPoly::k(n);
    return half_d.apply(scalar_lenard_operator().apply(table.C(1, n))) + Q(1, 4) * k;
}

OperatorExpr coupled_lenard_operator(const DiffPoly &eps) {
    auto local = [](int comp) {
        return DiffPoly(4) * OperatorExpr::mul(DiffPoly::u(comp)) - DiffPoly(2) * OperatorExpr::inv() * OperatorExpr::mul(DiffPoly::u(comp, 1));
    };
    OperatorExpr diag = OperatorExpr::d(2) + local(1);
    return OperatorExpr::matrix(2, {diag, eps * local(2), local(2), diag});
}

FlowVector coupled_operator_form(const RecursionTable &table, int n) {
    DiffPoly k = table.model.iso ? DiffPoly() : DiffPoly::k(n);
    FlowVector inner = coupled_lenard_operator(table.model.eps).apply(FlowVector{table.C(1, n), table.C(2, n)});
    FlowVector out;
    for (const auto &p : inner) out.push_back(Q(1, 2) * d_x(p + Q(1, 2) * k * DiffPoly::x()));
    return out;
}

FlowVector reduce(const FlowVector &v, const ReduceSpec &spec) {
    if (!spec.isospectral && spec.params.empty()) throw BadSpec("reduction sets nothing");
    for (const auto &[id, val] : spec.params) {
        if (!val.is_constant() || max_component(val) > 0) throw BadSpec("value for " + params::name(id) + " is not constant");
        if (id == params::t || id == params::scale) throw BadSpec("cannot reduce the internal symbol " + params::name(id));
    }
    FlowVector r;
    for (const auto &p : v) {
        DiffPoly q = spec.isospectral ? kill_time_symbols(p) : p;
        for (const auto &[id, val] : spec.params) q = set_param(q, id, val);
        r.push_back(std::move(q));
    }
    return r;
}

HierarchyEquation reduce(const HierarchyEquation &eq, const ReduceSpec &spec) {
    return {eq.order, reduce(eq.rhs, spec)};
}

} // namespace hforge
