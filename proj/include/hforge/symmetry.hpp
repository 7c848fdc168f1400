#pragma once

#include <vector>

#include "hforge/diffpoly.hpp"
#include "hforge/operator.hpp"
#include "hforge/report.hpp"

namespace hforge {

// Flows of the two-component hierarchy u_t = Φ̄^m (u_1x; u_2x).
struct SymmetryFlow {
    enum class Kind { K, Tau, Seed };
    Kind kind = Kind::K;
    int m = 0, n = 0;
    FlowVector value; // τ flows carry the explicit time symbol t
};

// H = [[1, ε], [1, 1]] acting on a two-component flow.
FlowVector mix(const FlowVector &v, const DiffPoly &eps = DiffPoly::eps());

// F'[G] - G'[F].
FlowVector lie_bracket(const FlowVector &f, const FlowVector &g);

SymmetryFlow K_flow(int m, const DiffPoly &eps = DiffPoly::eps());
// Φ̄^n σ_0 with σ_0 = (½; ½).
SymmetryFlow seed_flow(int n, const DiffPoly &eps = DiffPoly::eps());
// τ_n^m = (2m+1) t H K_{m+n-1} + Φ̄^n σ_0, with K_{-1} = 0.
SymmetryFlow tau_flow(int m, int n, const DiffPoly &eps = DiffPoly::eps());

// d/dt τ_n^m along u_t = K_m (explicit t plus chain rule) against K_m'[τ_n^m].
CheckReport verify_symmetry_equation(int m, int n, const DiffPoly &eps = DiffPoly::eps());

// [K_m, K_n] = 0, [K_m, τ_n^l] = (2m+1)HK_{m+n-1}, [τ_l^m, τ_n^m] = 2(l-n)Hτ_{l+n-1}^m
// and the supporting seed brackets, for indices up to the given bounds.
CheckReport verify_algebra(int max_m, int max_n, const DiffPoly &eps = DiffPoly::eps());

// Φ'[Φf]g - Φ'[Φg]f = Φ(Φ'[f]g - Φ'[g]f).
CheckReport verify_hereditary(const FlowVector &f, const FlowVector &g, const DiffPoly &eps = DiffPoly::eps());
// Random polynomial pairs of degree <= 2.
CheckReport verify_hereditary_random(int pairs, unsigned seed = 2024, const DiffPoly &eps = DiffPoly::eps());
std::vector<FlowVector> random_flows(int count, unsigned seed);

// Φ'[K_m] = K_m'Φ - ΦK_m' on test vectors.
CheckReport verify_strong_symmetry(int m, const DiffPoly &eps = DiffPoly::eps());

// τ_n^m against the flow of order m with its k_m(t) terms kept (α1 = 1,
// α2 = 0). Nothing is asserted: every entry is a reported check.
CheckReport report_tau_with_time_terms(int max_m, const DiffPoly &eps = DiffPoly::eps());

} // namespace hforge
