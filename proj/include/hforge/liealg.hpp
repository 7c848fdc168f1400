#pragma once

#include <array>
#include <string>
#include <vector>

#include "hforge/diffpoly.hpp"

namespace hforge {

// Square matrix whose entries are polynomials in the parameters (normally ε).
class ConstMatrix {
public:
    explicit ConstMatrix(int n = 0) : n_(n), a_(std::size_t(n * n)) {}
    static ConstMatrix from_rows(const std::vector<std::vector<DiffPoly>> &rows);
    static ConstMatrix identity(int n);

    int order() const { return n_; }
    const DiffPoly &operator()(int r, int c) const { return a_[std::size_t(r * n_ + c)]; }
    DiffPoly &operator()(int r, int c) { return a_[std::size_t(r * n_ + c)]; }

    ConstMatrix &operator+=(const ConstMatrix &o);
    ConstMatrix &operator-=(const ConstMatrix &o);
    friend ConstMatrix operator+(ConstMatrix a, const ConstMatrix &b) { return a += b; }
    friend ConstMatrix operator-(ConstMatrix a, const ConstMatrix &b) { return a -= b; }
    friend ConstMatrix operator*(const ConstMatrix &a, const ConstMatrix &b);
    friend ConstMatrix operator*(const DiffPoly &c, ConstMatrix a);
    friend bool operator==(const ConstMatrix &a, const ConstMatrix &b);
    friend bool operator!=(const ConstMatrix &a, const ConstMatrix &b) { return !(a == b); }

    bool is_zero() const;
    ConstMatrix map(const std::function<DiffPoly(const DiffPoly &)> &f) const;
    std::string str() const;

private:
    int n_;
    std::vector<DiffPoly> a_;
};

ConstMatrix commutator(const ConstMatrix &a, const ConstMatrix &b);

// M(A_1..A_N): block (r, c) is A_{r-c+1} when r >= c, else eps * A_{N+r-c+1}.
ConstMatrix block_embed(const std::vector<ConstMatrix> &blocks, const DiffPoly &eps = DiffPoly::eps());

enum class LieCase { A12, A13, A1N, A22, A2N, A32, A3N };

LieCase parse_case(const std::string &s); // throws UnknownCase
std::string case_name(LieCase c);

// The three generators of the base algebra of a case, in order.
std::vector<ConstMatrix> base_generators(LieCase c);

struct LieBasis {
    LieCase which;
    int blocks; // N
    std::vector<ConstMatrix> elements; // element 3(k-1)+g is generator g at block k (0-based here)
    std::vector<ConstMatrix> base;

    int size() const { return int(elements.size()); }
    int block_of(int idx) const { return idx / 3; }
    int generator_of(int idx) const { return idx % 3; }
};

LieBasis build_basis(LieCase c, int n, const DiffPoly &eps = DiffPoly::eps());

using Expansion = std::vector<DiffPoly>; // coefficient per basis element

// Expands m over the basis; the residual m - sum(coeff * element) is returned
// through `residual` and is zero iff m lies in the span.
Expansion expand(const LieBasis &basis, const ConstMatrix &m, ConstMatrix *residual = nullptr);
std::string expansion_str(const LieBasis &basis, const Expansion &e);
std::string element_name(const LieBasis &basis, int idx);

struct StructureEntry {
    int i = 0, j = 0;       // 0-based basis indices
    Expansion coefficients; // computed
    Expansion expected;     // printed value, empty when none is printed
    ConstMatrix residual;
    bool pass = false;
    std::string note;
};

struct StructureReport {
    std::vector<StructureEntry> entries;
    bool pass() const;
    int passed() const;
};

// A printed bracket [e_i, e_j] = sum coeff * e_k, indices 0-based.
struct Relation {
    int i, j;
    std::vector<std::pair<DiffPoly, int>> rhs;
};

// Printed commutator tables. Cases A12, A13, A22 and A32 give explicit
// tables; A1N and A2N give indexed families which are expanded for n.
std::vector<Relation> printed_relations(LieCase c, int n = 0);

// Expands every commutator of basis pairs i < j; when `relations` is given,
// only those pairs are checked and compared with the printed right sides.
StructureReport verify_structure_constants(const LieBasis &basis);
StructureReport verify_structure_constants(const LieBasis &basis, const std::vector<Relation> &relations);

// Checks [G_i, G_j] ⊆ G_{i+j-1-δN} for all block pairs.
StructureReport verify_grading(const LieBasis &basis);

// Jacobi identity on all (or `limit` sampled) triples; returns failing triples.
std::vector<std::array<int, 3>> jacobi_failures(const LieBasis &basis, std::size_t limit = 0, unsigned seed = 7);

} // namespace hforge
