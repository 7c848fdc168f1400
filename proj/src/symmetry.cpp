#include "hforge/symmetry.hpp"

#include <random>

#include "hforge/hamiltonian.hpp"

namespace hforge {

namespace {

OperatorExpr phi_for(const DiffPoly &eps) {
    SpectralModel c = SpectralModel::coupled();
    c.eps = eps;
    return recursion_operator(c);
}

FlowVector sigma0() { return {DiffPoly(Q(1, 2)), DiffPoly(Q(1, 2))}; }

std::string diff_str(const FlowVector &got, const FlowVector &want) {
    FlowVector d = got - want;
    return "residual (" + d[0].str() + "; " + d[1].str() + ")";
}

void compare(CheckReport &r, const std::string &name, const FlowVector &got, const FlowVector &want) {
    bool ok = got == want;
    r.add(name, ok, ok ? std::string() : diff_str(got, want));
}

// Cached powers of Φ̄ applied to K_0 and σ_0.
class FlowCache {
public:
    explicit FlowCache(const DiffPoly &eps) : eps_(eps), phi_(phi_for(eps)) {}

    FlowVector K(int m) {
        while (int(k_.size()) <= m) k_.push_back(k_.empty() ? FlowVector{DiffPoly::u(1, 1), DiffPoly::u(2, 1)} : phi_.apply(k_.back()));
        return k_[std::size_t(m)];
    }
    FlowVector K_or_zero(int m) { return m < 0 ? FlowVector(2) : K(m); }
    FlowVector seed(int n) {
        while (int(s_.size()) <= n) s_.push_back(s_.empty() ? sigma0() : phi_.apply(s_.back()));
        return s_[std::size_t(n)];
    }
    FlowVector tau(int m, int n) {
        return (DiffPoly(2 * m + 1) * DiffPoly::param(params::t)) * mix(K_or_zero(m + n - 1), eps_) + seed(n);
    }
    const OperatorExpr &phi() const { return phi_; }
    const DiffPoly &eps() const { return eps_; }

private:
    DiffPoly eps_;
    OperatorExpr phi_;
    std::vector<FlowVector> k_, s_;
};

} // namespace

FlowVector mix(const FlowVector &v, const DiffPoly &eps) {
    if (v.size() != 2) throw DimensionMismatch("H acts on two components");
    return {v[0] + eps * v[1], v[0] + v[1]};
}

FlowVector lie_bracket(const FlowVector &f, const FlowVector &g) {
    if (f.size() != g.size()) throw DimensionMismatch("bracket of flows with different component counts");
    return gateaux(f, g) - gateaux(g, f);
}

SymmetryFlow K_flow(int m, const DiffPoly &eps) {
    FlowCache c(eps);
    return {SymmetryFlow::Kind::K, m, 0, c.K(m)};
}

SymmetryFlow seed_flow(int n, const DiffPoly &eps) {
    FlowCache c(eps);
    return {SymmetryFlow::Kind::Seed, 0, n, c.seed(n)};
}

SymmetryFlow tau_flow(int m, int n, const DiffPoly &eps) {
    if (m < 1 || n < 0) throw BadSpec("τ_n^m needs m >= 1 and n >= 0");
    FlowCache c(eps);
    return {SymmetryFlow::Kind::Tau, m, n, c.tau(m, n)};
}

CheckReport verify_symmetry_equation(int m, int n, const DiffPoly &eps) {
    FlowCache c(eps);
    FlowVector tau = c.tau(m, n);
    const FlowVector k = c.K(m);
    FlowVector lhs = partial_t(tau) + gateaux(tau, k);
    FlowVector rhs = gateaux(k, tau);
    CheckReport r;
    compare(r, "(tau^" + std::to_string(m) + "_" + std::to_string(n) + ")_t = K_" + std::to_string(m) + "'[tau]", lhs,
            rhs);
    return r;
}

CheckReport verify_algebra(int max_m, int max_n, const DiffPoly &eps) {
    FlowCache c(eps);
    CheckReport r;
    // supporting fixtures
    compare(r, "[K_1,sigma_0] = 3HK_0", lie_bracket(c.K(1), c.seed(0)), DiffPoly(3) * mix(c.K(0), eps));
    compare(r, "[Phi sigma_0,sigma_0] = 2H sigma_0", lie_bracket(c.seed(1), c.seed(0)), DiffPoly(2) * mix(c.seed(0), eps));
    compare(r, "Phi sigma_0 closed form", c.seed(1),
            {DiffPoly::x() * DiffPoly::u(1, 1) + DiffPoly(2) * DiffPoly::u(1) + eps * DiffPoly::x() * DiffPoly::u(2, 1) +
                 DiffPoly(2) * eps * DiffPoly::u(2),
             DiffPoly::x() * DiffPoly::u(2, 1) + DiffPoly(2) * DiffPoly::u(2) + DiffPoly::x() * DiffPoly::u(1, 1) +
                 DiffPoly(2) * DiffPoly::u(1)});
    r.add("Phi'[sigma_0] = 2H", agree_on(c.phi().gateaux(sigma0()),
                                        DiffPoly(2) * OperatorExpr::matrix(2, {OperatorExpr::identity(1), OperatorExpr::mul(eps),
                                                                               OperatorExpr::identity(1), OperatorExpr::identity(1)}),
                                        test_vectors(2, 3)));
    // [K_m, K_n] = 0
    for (int m = 0; m <= max_m; ++m)
        for (int n = m + 1; n <= max_m; ++n)
            compare(r, "[K_" + std::to_string(m) + ",K_" + std::to_string(n) + "] = 0", lie_bracket(c.K(m), c.K(n)),
                    FlowVector(2));
    // [K_m, σ_0] and [K_m, Φ^n σ_0]
    for (int m = 1; m <= max_m; ++m)
        for (int n = 0; n <= max_n; ++n)
            compare(r, "[K_" + std::to_string(m) + ",Phi^" + std::to_string(n) + " sigma_0] = (2m+1)HK_{m+n-1}",
                    lie_bracket(c.K(m), c.seed(n)), DiffPoly(2 * m + 1) * mix(c.K(m + n - 1), eps));
    // [Φ^m σ_0, Φ^n σ_0]
    for (int m = 1; m <= max_n; ++m)
        for (int n = 0; n <= max_n; ++n) {
            if (m == n) continue;
            FlowVector want = m + n - 1 >= 0 ? DiffPoly(2 * (m - n)) * mix(c.seed(m + n - 1), eps) : FlowVector(2);
            compare(r, "[Phi^" + std::to_string(m) + " sigma_0,Phi^" + std::to_string(n) + " sigma_0] = 2(m-n)Phi^{m+n-1}H sigma_0",
                    lie_bracket(c.seed(m), c.seed(n)), want);
        }
    // [K_m, τ_n^l]
    for (int m = 1; m <= max_m; ++m)
        for (int l = 1; l <= max_m; ++l)
            for (int n = 0; n <= std::min(max_n, 1); ++n)
                compare(r, "[K_" + std::to_string(m) + ",tau^" + std::to_string(l) + "_" + std::to_string(n) + "] = (2m+1)HK_{m+n-1}",
                        lie_bracket(c.K(m), c.tau(l, n)), DiffPoly(2 * m + 1) * mix(c.K_or_zero(m + n - 1), eps));
    // [τ_l^m, τ_n^m]
    for (int m = 1; m <= max_m; ++m)
        for (int l = 0; l <= max_n; ++l)
            for (int n = l + 1; n <= max_n; ++n)
                compare(r, "[tau^" + std::to_string(m) + "_" + std::to_string(l) + ",tau^" + std::to_string(m) + "_" +
                               std::to_string(n) + "] = 2(l-n)H tau^m_{l+n-1}",
                        lie_bracket(c.tau(m, l), c.tau(m, n)), DiffPoly(2 * (l - n)) * mix(c.tau(m, l + n - 1), eps));
    return r;
}

CheckReport verify_hereditary(const FlowVector &f, const FlowVector &g, const DiffPoly &eps) {
    OperatorExpr phi = phi_for(eps);
    FlowVector pf = phi.apply(f), pg = phi.apply(g);
    FlowVector lhs = phi.gateaux(pf).apply(g) - phi.gateaux(pg).apply(f);
    FlowVector rhs = phi.apply(phi.gateaux(f).apply(g) - phi.gateaux(g).apply(f));
    CheckReport r;
    compare(r, "hereditary", lhs, rhs);
    return r;
}

std::vector<FlowVector> random_flows(int count, unsigned seed) {
    std::mt19937 rng(seed);
    auto pick = [&rng](int n) { return int(rng() % std::uint32_t(n)); };
    auto jet = [&]() { return DiffPoly::u(1 + pick(2), pick(3)); };
    std::vector<FlowVector> out;
    for (int i = 0; i < count; ++i) {
        FlowVector v;
        for (int comp = 0; comp < 2; ++comp) {
            DiffPoly p;
            int terms = 1 + pick(2);
            for (int k = 0; k < terms; ++k) {
                DiffPoly mono = pick(3) == 0 ? jet() * jet() : jet();
                p += DiffPoly(1 + pick(3)) * (pick(2) ? mono : -mono);
            }
            v.push_back(p);
        }
        out.push_back(v);
    }
    return out;
}

CheckReport verify_hereditary_random(int pairs, unsigned seed, const DiffPoly &eps) {
    auto flows = random_flows(2 * pairs, seed);
    CheckReport r;
    for (int i = 0; i < pairs; ++i) {
        CheckReport one = verify_hereditary(flows[std::size_t(2 * i)], flows[std::size_t(2 * i + 1)], eps);
        one.checks[0].name = "hereditary pair " + std::to_string(i + 1);
        r.append(one);
    }
    return r;
}

CheckReport verify_strong_symmetry(int m, const DiffPoly &eps) {
    FlowCache c(eps);
    const FlowVector k = c.K(m);
    OperatorExpr kp = frechet_operator(k);
    OperatorExpr lhs = c.phi().gateaux(k);
    OperatorExpr rhs = kp * c.phi() - c.phi() * kp;
    CheckReport r;
    r.add("Phi'[K_" + std::to_string(m) + "] = [K_" + std::to_string(m) + "',Phi]", agree_on(lhs, rhs, test_vectors(2, 3)));
    return r;
}

CheckReport report_tau_with_time_terms(int max_m, const DiffPoly &eps) {
    SpectralModel model = SpectralModel::coupled();
    model.eps = eps;
    ReduceSpec spec;
    spec.params[params::alpha1] = DiffPoly(1);
    spec.params[params::alpha2] = DiffPoly(0);
    CheckReport r;
    for (int m = 1; m <= max_m; ++m) {
        FlowVector flow = reduce(hierarchy_equation(model, m).rhs, spec);
        for (int n = 0; m + n <= max_m; ++n) {
            FlowVector tau = tau_flow(m, n, eps).value;
            FlowVector res = partial_t(tau) + gateaux(tau, flow) - gateaux(flow, tau);
            r.report("tau^" + std::to_string(m) + "_" + std::to_string(n) + " along the flow with k terms", is_zero(res),
                     is_zero(res) ? "" : diff_str(res, FlowVector(res.size())));
        }
    }
    return r;
}

} // namespace hforge
