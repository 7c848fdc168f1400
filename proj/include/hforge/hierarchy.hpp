#pragma once

#include <map>
#include <vector>

#include "hforge/diffpoly.hpp"
#include "hforge/operator.hpp"
#include "hforge/spectral.hpp"

namespace hforge {

// Coefficients of W per component k (1-based) and index m = 0..order+1.
// b is filled to index `order` only; b_top is the λ^{n+1} coefficient ¼c_{k,0}.
struct RecursionTable {
    SpectralModel model;
    int order = 0;
    std::vector<std::vector<DiffPoly>> a, b, c;
    std::vector<DiffPoly> b_top;

    const DiffPoly &A(int k, int m) const { return a.at(std::size_t(k - 1)).at(std::size_t(m)); }
    const DiffPoly &B(int k, int m) const { return b.at(std::size_t(k - 1)).at(std::size_t(m)); }
    const DiffPoly &C(int k, int m) const { return c.at(std::size_t(k - 1)).at(std::size_t(m)); }
};

// The component-k entry of the coupling convolution
// sum_{i+j=k+1, i,j<=k} x_i u_j + σε sum_{m+n=k+N+1, m,n>k} x_m u_n.
DiffPoly convolution(const SpectralModel &model, const std::vector<DiffPoly> &xs, int k);

RecursionTable solve_recursion(const SpectralModel &model, int n);

struct HierarchyEquation {
    int order = 0;
    FlowVector rhs;
};

HierarchyEquation hierarchy_equation(const RecursionTable &table, int n);
HierarchyEquation hierarchy_equation(const SpectralModel &model, int n);

// Δ_n = -¼ sum_k c_{k,n+1} e_k(0). Throws OrderExceeded when the table is too short.
MatrixExpr modification_term(const SpectralPair &pair, const RecursionTable &table, int n);
// V^(n) = W_+^(n) + Δ_n, including the top term b_top λ^{n+1}.
MatrixExpr time_matrix(const SpectralPair &pair, const RecursionTable &table, int n);

// ∂U/∂u·u_t + ∂U/∂λ·λ_t - V_x + [U, V].
MatrixExpr zero_curvature_residual(const SpectralPair &pair, const FlowVector &flow, const DiffPoly &lambda_t,
                                   const MatrixExpr &V);
// Full check of order n: flow from the table, λ_t = λ_{t,+}^(n).
MatrixExpr verify_zero_curvature(const SpectralModel &model, int n);

// Right form of the scalar hierarchy: ½∂(L c_n) + ¼k_n with L = ∂² + 2u + 2∂^{-1}u∂.
OperatorExpr scalar_lenard_operator();
DiffPoly scalar_operator_form(const RecursionTable &table, int n);
// Operator form of the two-component hierarchy: ½∂[L̄(c_n; g_n) + ½k_n(x; x)].
OperatorExpr coupled_lenard_operator(const DiffPoly &eps = DiffPoly::eps());
FlowVector coupled_operator_form(const RecursionTable &table, int n);

struct ReduceSpec {
    bool isospectral = false;        // k_m(t) -> 0
    std::map<int, DiffPoly> params;  // parameter id -> constant value
};

// Substitutes and renormalizes. Throws BadSpec on an empty spec or a
// non-constant value.
HierarchyEquation reduce(const HierarchyEquation &eq, const ReduceSpec &spec);
FlowVector reduce(const FlowVector &v, const ReduceSpec &spec);

} // namespace hforge
