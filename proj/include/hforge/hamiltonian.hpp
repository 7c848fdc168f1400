#pragma once

#include <string>
#include <vector>

#include "hforge/hierarchy.hpp"
#include "hforge/operator.hpp"
#include "hforge/report.hpp"

namespace hforge {

struct OperatorTriple {
    std::string tag; // scalar, coupled-1, coupled-2, multi
    OperatorExpr J, M, Phi;
};

// N x N operator with entry (r, c) = blocks[r-c] for r >= c and
// wrap * blocks[N+r-c] above the diagonal.
OperatorExpr operator_embed(const std::vector<OperatorExpr> &blocks, const DiffPoly &wrap);

// L, L̄ or L̃: the operator taking c_{·,m} to c_{·,m+1} up to the k-term.
OperatorExpr lenard_operator(const SpectralModel &model);
// Φ, Φ̄ or Φ̃.
OperatorExpr recursion_operator(const SpectralModel &model);
std::vector<OperatorTriple> build_operators(const SpectralModel &model);

struct HamiltonianFunctional {
    int index = 0; // H_{index}
    DiffPoly density;
};

// H_{m+1} = c_{m+1} / (2(2m+1)); family 2 uses g_{m+1} (coupled only).
HamiltonianFunctional hamiltonian(const RecursionTable &table, int m, int family = 1);
// The gradient claimed for H_{m+1}: c_m, (c_m; εg_m) or (g_m; c_m).
FlowVector claimed_gradient(const RecursionTable &table, int m, int family = 1);
FlowVector variational_gradient(const DiffPoly &density, int components);

CheckReport verify_gradient_relations(const SpectralModel &model, int max_m);
CheckReport verify_operator_identities(const SpectralModel &model, int max_n);

// Φ-power form of the hierarchy: Φ^n K_0 plus ½ sum k_m Φ^{n-m}(½, …).
FlowVector phi_power_form(const SpectralModel &model, int n);

// Integrand (∇F)^T J ∇G with its exact part removed.
DiffPoly poisson_bracket(const FlowVector &grad_f, const FlowVector &grad_g, const OperatorExpr &J);
CheckReport verify_poisson_brackets(const SpectralModel &model, int max_index);

// K_m = Φ̄^m (u_1x; u_2x) of the two-component hierarchy.
FlowVector k_flow(int m, const DiffPoly &eps = DiffPoly::eps());

// Density of ∫_0^1 <∂^{-1} K_m(s u), u> ds modulo exact derivatives.
HamiltonianFunctional conserved_quantity(int m, const DiffPoly &eps = DiffPoly::eps());
// True iff d/dt of the density along `flow` is an exact x-derivative.
bool conserved_along(const DiffPoly &density, const FlowVector &flow);

} // namespace hforge
