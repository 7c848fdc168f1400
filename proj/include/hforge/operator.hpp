#pragma once

#include <string>
#include <vector>

#include "hforge/diffpoly.hpp"

namespace hforge {

// A word a_0 ∂^{-1} a_1 ∂^{-1} ... a_r ∂^k acting right to left. After
// normalization words with r >= 1 have k = 0, and every inner coefficient
// a_1..a_r is a single unit monomial.
struct Word {
    std::vector<DiffPoly> coeffs{DiffPoly(1)};
    int dpow = 0;

    int inverses() const { return int(coeffs.size()) - 1; }
};

using OpEntry = std::vector<Word>;

// Square matrix of formal pseudo-differential operators.
class OperatorExpr {
public:
    explicit OperatorExpr(int n = 1);

    static OperatorExpr identity(int n);
    static OperatorExpr zero(int n) { return OperatorExpr(n); }
    static OperatorExpr d(int k = 1);              // 1x1 ∂^k, k >= 0
    static OperatorExpr inv();                     // 1x1 ∂^{-1}
    static OperatorExpr mul(const DiffPoly &p);    // 1x1 multiplication
    static OperatorExpr diag(const std::vector<OperatorExpr> &blocks);
    // Builds an n x n matrix from 1x1 operators given row by row.
    static OperatorExpr matrix(int n, const std::vector<OperatorExpr> &entries);

    int dim() const { return n_; }
    const OpEntry &at(int r, int c) const { return entries_[std::size_t(r * n_ + c)]; }
    OpEntry &at(int r, int c) { return entries_[std::size_t(r * n_ + c)]; }
    OperatorExpr entry(int r, int c) const;

    OperatorExpr &operator+=(const OperatorExpr &o);
    OperatorExpr &operator-=(const OperatorExpr &o);
    friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr &b) { return a += b; }
    friend OperatorExpr operator-(OperatorExpr a, const OperatorExpr &b) { return a -= b; }
    friend OperatorExpr operator*(const OperatorExpr &a, const OperatorExpr &b); // composition
    friend OperatorExpr operator*(const DiffPoly &c, const OperatorExpr &a);
    OperatorExpr operator-() const;
    OperatorExpr pow(int e) const;

    FlowVector apply(const FlowVector &v) const;
    DiffPoly apply(const DiffPoly &p) const; // 1x1 only

    OperatorExpr adjoint() const;
    // Operator-valued directional derivative: every coefficient is
    // differentiated along `direction`.
    OperatorExpr gateaux(const FlowVector &direction) const;
    OperatorExpr map_coefficients(const std::function<DiffPoly(const DiffPoly &)> &f) const;

    bool is_differential() const; // no ∂^{-1} anywhere
    bool is_zero() const;
    // Structural equality of normal forms. Decisive for differential
    // operators; for nonlocal ones use agree_on.
    friend bool operator==(const OperatorExpr &a, const OperatorExpr &b);
    friend bool operator!=(const OperatorExpr &a, const OperatorExpr &b) { return !(a == b); }

    std::string str() const;

private:
    int n_;
    std::vector<OpEntry> entries_;
};

// Entry-level algebra, exposed for the serializer and tests.
OpEntry normalize_entry(const OpEntry &e);
OpEntry compose_entries(const OpEntry &a, const OpEntry &b);
OpEntry adjoint_entry(const OpEntry &e);
DiffPoly apply_entry(const OpEntry &e, const DiffPoly &f);

// Linearization of a flow: frechet_operator(F)[σ] == gateaux(F, σ).
OperatorExpr frechet_operator(const FlowVector &target);
OpEntry frechet_entry(const DiffPoly &p, int comp);

// Deterministic test directions without constant terms, used for deciding
// equality of nonlocal operators.
std::vector<FlowVector> test_vectors(int n, int count, unsigned seed = 12345);
bool agree_on(const OperatorExpr &a, const OperatorExpr &b, const std::vector<FlowVector> &tests);

} // namespace hforge
