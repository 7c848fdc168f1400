#include "doctest.h"
#include "hforge/hierarchy.hpp"
#include "printed.hpp"

using namespace hforge;
using printed::u;

namespace {

SpectralModel iso(SpectralModel m) {
    m.iso = true;
    return m;
}

} // namespace

TEST_CASE("scalar recursion table") {
    RecursionTable t = solve_recursion(SpectralModel::scalar(), 1);
    CHECK(t.A(1, 0).is_zero());
    CHECK(t.C(1, 0) == printed::alpha());
    CHECK(t.C(1, 1) == printed::scalar_c1());
    CHECK(t.B(1, 0) == printed::scalar_b0());
    CHECK(t.A(1, 1) == printed::scalar_a1());
    CHECK(t.C(1, 2) == printed::scalar_c2());
    // The printed b_1 disagrees with the recursion in its k-terms.
    CHECK(t.B(1, 1) != printed::scalar_b1());
    DiffPoly diff = t.B(1, 1) - printed::scalar_b1();
    CHECK(diff.lambda_coeff(0) == diff);
    CHECK(kill_time_symbols(diff).is_zero());
}

TEST_CASE("recursion invariant a = c_x / 2") {
    for (auto m : {SpectralModel::scalar(), SpectralModel::coupled(), SpectralModel::multi(3)}) {
        RecursionTable t = solve_recursion(m, 3);
        for (int k = 1; k <= m.n; ++k)
            for (int i = 0; i <= 4; ++i) CHECK(t.A(k, i) == Q(1, 2) * d_x(t.C(k, i)));
    }
}

TEST_CASE("coupled recursion table") {
    RecursionTable t = solve_recursion(SpectralModel::coupled(), 1);
    CHECK(t.C(1, 1) == printed::coupled_c1());
    CHECK(t.C(2, 1) == printed::coupled_g1());
    CHECK(t.B(1, 0) == printed::coupled_b0());
    CHECK(t.B(2, 0) == printed::coupled_f0());
    CHECK(t.A(1, 1) == printed::coupled_a1());
    CHECK(t.A(2, 1) == printed::coupled_e1());
    CHECK(t.C(1, 2) == printed::coupled_c2());
    CHECK(t.C(2, 2) == printed::coupled_g2());
}

TEST_CASE("multi recursion table") {
    const int n = 3;
    RecursionTable t = solve_recursion(SpectralModel::multi(n), 1);
    for (int k = 1; k <= n; ++k) {
        CHECK(t.C(k, 0) == printed::beta1());
        CHECK(t.C(k, 1) == printed::multi_c1(k, n));
        CHECK(t.B(k, 0) == printed::multi_b0(k, n));
        CHECK(t.A(k, 1) == printed::multi_a1(k, n));
    }
    // The printed second row follows from the seed (β1, 0, 0) instead.
    CHECK(t.C(2, 2) != printed::multi_c2(2, n));
    RecursionTable lead = solve_recursion(SpectralModel::multi(n, true), 1);
    for (int k = 1; k <= n; ++k) CHECK(lead.C(k, 2) == printed::multi_c2(k, n));
}

TEST_CASE("zero curvature scalar") {
    for (int n = 0; n <= 4; ++n) CHECK(verify_zero_curvature(SpectralModel::scalar(), n).is_zero());
    for (int n = 0; n <= 2; ++n) CHECK(verify_zero_curvature(SpectralModel::multi(1), n).is_zero());
}

TEST_CASE("zero curvature isospectral coupled and multi") {
    for (int n = 0; n <= 3; ++n) CHECK(verify_zero_curvature(iso(SpectralModel::coupled()), n).is_zero());
    SpectralModel m = iso(SpectralModel::multi(3));
    m.sigma = 1;
    for (int n = 0; n <= 2; ++n) CHECK(verify_zero_curvature(m, n).is_zero());
    m.sigma = DiffPoly::param(params::sigma);
    CHECK(!verify_zero_curvature(m, 0).is_zero());
}

TEST_CASE("coupled nonisospectral residual is the second-block λ_t term") {
    SpectralModel m = SpectralModel::coupled();
    SpectralPair pair = build_spectral_pair(m);
    for (int n = 0; n <= 2; ++n) {
        DiffPoly lt = split_plus_minus(lambda_t_series(n + 2), n).first.to_poly();
        CHECK(verify_zero_curvature(m, n) == Q(-1, 4) * lt * element(pair.basis, 1, 2));
    }
}

TEST_CASE("modification term") {
    SpectralModel m = SpectralModel::coupled();
    SpectralPair pair = build_spectral_pair(m);
    RecursionTable t = solve_recursion(m, 1);
    MatrixExpr d = modification_term(pair, t, 1);
    CHECK(d == Q(-1, 4) * printed::coupled_c2() * element(pair.basis, 1, 1) -
                   Q(-1, 4) * -printed::coupled_g2() * element(pair.basis, 1, 2));
    CHECK_THROWS_AS(modification_term(pair, t, 2), OrderExceeded);
    SpectralPair sp = build_spectral_pair(SpectralModel::scalar());
    RecursionTable st = solve_recursion(SpectralModel::scalar(), 0);
    CHECK(modification_term(sp, st, 0) ==
          modification_term(build_spectral_pair(SpectralModel::multi(1)), solve_recursion(SpectralModel::multi(1), 0), 0)
              .map([](const DiffPoly &p) { return set_param(p, params::beta1, DiffPoly::param(params::alpha)); }));
}

TEST_CASE("named scalar equations") {
    CHECK(hierarchy_equation(SpectralModel::scalar(), 0).rhs[0] == printed::scalar_flow0());
    HierarchyEquation e1 = hierarchy_equation(SpectralModel::scalar(), 1);
    CHECK(e1.rhs[0] == printed::scalar_flow1());
    ReduceSpec kdv{true, {{params::alpha, DiffPoly(1)}}};
    CHECK(reduce(e1, kdv).rhs[0] == printed::kdv());
}

TEST_CASE("named coupled equations") {
    CHECK(hierarchy_equation(SpectralModel::coupled(), 0).rhs == printed::coupled_flow0());
    HierarchyEquation e1 = hierarchy_equation(SpectralModel::coupled(), 1);
    CHECK(e1.rhs == printed::coupled_flow1());
    ReduceSpec frob{true, {{params::alpha1, DiffPoly(1)}, {params::alpha2, DiffPoly()}}};
    FlowVector f = reduce(e1, frob).rhs;
    CHECK(f == printed::frobenius_kdv());
    // ε = 0 decouples the first component into KdV
    CHECK(reduce(f, ReduceSpec{false, {{params::epsilon, DiffPoly()}}})[0] == printed::kdv().pow(1));
}

TEST_CASE("multi collapses") {
    // N = 1 is the scalar hierarchy with α renamed β1
    for (int n = 0; n <= 2; ++n) {
        FlowVector m1 = hierarchy_equation(SpectralModel::multi(1), n).rhs;
        FlowVector s = hierarchy_equation(SpectralModel::scalar(), n).rhs;
        CHECK(reduce(m1, ReduceSpec{false, {{params::beta1, DiffPoly::param(params::alpha)}}}) == s);
    }
    // N = 2, σ = 1 is the coupled hierarchy with both seeds β1, or (β1, 0)
    for (bool lead : {false, true}) {
        SpectralModel m = SpectralModel::multi(2, lead);
        m.sigma = 1;
        FlowVector got = hierarchy_equation(m, 1).rhs;
        ReduceSpec spec{false,
                        {{params::alpha1, printed::beta1()}, {params::alpha2, lead ? DiffPoly() : printed::beta1()}}};
        CHECK(got == reduce(printed::coupled_flow1(), spec));
    }
}

TEST_CASE("multi named equation follows the leading seed") {
    const int n = 3;
    FlowVector lead = hierarchy_equation(SpectralModel::multi(n, true), 1).rhs;
    FlowVector all = hierarchy_equation(SpectralModel::multi(n), 1).rhs;
    for (int k = 1; k <= n; ++k) CHECK(lead[std::size_t(k - 1)] == printed::multi_flow1(k, n));
    CHECK(all[1] != printed::multi_flow1(2, n));
}

TEST_CASE("operator forms of the hierarchy") {
    RecursionTable s = solve_recursion(SpectralModel::scalar(), 3);
    for (int n = 0; n <= 3; ++n) CHECK(scalar_operator_form(s, n) == hierarchy_equation(s, n).rhs[0]);
    RecursionTable c = solve_recursion(SpectralModel::coupled(), 3);
    for (int n = 0; n <= 3; ++n) CHECK(coupled_operator_form(c, n) == hierarchy_equation(c, n).rhs);
}

TEST_CASE("isospectral reduction commutes with generation") {
    for (auto m : {SpectralModel::scalar(), SpectralModel::coupled(), SpectralModel::multi(3)})
        for (int n = 0; n <= 2; ++n)
            CHECK(reduce(hierarchy_equation(m, n), ReduceSpec{true, {}}).rhs == hierarchy_equation(iso(m), n).rhs);
}

TEST_CASE("Frobenius KdV Lax pair") {
    SpectralPair pair = build_spectral_pair(iso(SpectralModel::coupled()));
    MatrixExpr r = zero_curvature_residual(pair, printed::frobenius_kdv(), DiffPoly(), printed::frobenius_lax_v());
    CHECK(r.is_zero());
    // perturbing the flow breaks it
    FlowVector bad = printed::frobenius_kdv();
    bad[1] += u(2, 1);
    CHECK(!zero_curvature_residual(pair, bad, DiffPoly(), printed::frobenius_lax_v()).is_zero());
}

TEST_CASE("reduction errors") {
    FlowVector v{u(1)};
    CHECK_THROWS_AS(reduce(v, ReduceSpec{}), BadSpec);
    CHECK_THROWS_AS(reduce(v, ReduceSpec{false, {{params::alpha, u(1)}}}), BadSpec);
    CHECK_THROWS_AS(hierarchy_equation(solve_recursion(SpectralModel::scalar(), 1), 2), OrderExceeded);
}
