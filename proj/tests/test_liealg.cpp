#include "doctest.h"

#include "hforge/liealg.hpp"

using namespace hforge;

namespace {

ConstMatrix ints(const std::vector<std::vector<int>> &rows, const DiffPoly &scale = DiffPoly(1)) {
    std::vector<std::vector<DiffPoly>> r;
    for (const auto &row : rows) {
        std::vector<DiffPoly> out;
        for (int v : row) out.push_back(scale * DiffPoly(v));
        r.push_back(out);
    }
    return ConstMatrix::from_rows(r);
}

const DiffPoly eps = DiffPoly::eps();

} // namespace

TEST_CASE("base sl2 relations") {
    auto g = base_generators(LieCase::A12);
    CHECK(commutator(g[0], g[1]) == DiffPoly(2) * g[1]);
    CHECK(commutator(g[0], g[2]) == DiffPoly(-2) * g[2]);
    CHECK(commutator(g[1], g[2]) == g[0]);
    CHECK(commutator(g[1], g[1]).is_zero());
}

TEST_CASE("so(3) relations") {
    auto f = base_generators(LieCase::A32);
    CHECK(commutator(f[0], f[1]) == f[2]);
    CHECK(commutator(f[0], f[2]) == DiffPoly(-1) * f[1]);
    CHECK(commutator(f[1], f[2]) == f[0]);
}

TEST_CASE("block embedding") {
    auto g = base_generators(LieCase::A12);
    CHECK(block_embed({g[0]}) == g[0]);
    ConstMatrix h4 = block_embed({ConstMatrix(2), g[0]});
    ConstMatrix printed(4);
    printed(0, 2) = eps;
    printed(1, 3) = -eps;
    printed(2, 0) = 1;
    printed(3, 1) = -1;
    CHECK(h4 == printed);
    CHECK_THROWS_AS(block_embed({}), EmptyInput);
    CHECK_THROWS_AS(block_embed({g[0], base_generators(LieCase::A32)[0]}), MixedBlockOrder);
}

TEST_CASE("A12 elements match the printed matrices") {
    auto b = build_basis(LieCase::A12, 2);
    CHECK(b.elements[0] == ints({{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}}));
    CHECK(b.elements[1] == ints({{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}}));
    CHECK(b.elements[2] == ints({{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 1, 0}}));
    ConstMatrix h5(4);
    h5(0, 3) = eps;
    h5(2, 1) = 1;
    CHECK(b.elements[4] == h5);
    ConstMatrix h6(4);
    h6(1, 2) = eps;
    h6(3, 0) = 1;
    CHECK(b.elements[5] == h6);
}

TEST_CASE("A22 fifth element is half the printed matrix") {
    auto b = build_basis(LieCase::A22, 2);
    ConstMatrix e5(4);
    e5(0, 3) = Q(1, 2) * eps;
    e5(1, 2) = Q(1, 2) * eps;
    e5(2, 1) = Q(1, 2);
    e5(3, 0) = Q(1, 2);
    CHECK(b.elements[4] == e5);
}

TEST_CASE("A13 seventh element layout") {
    auto b = build_basis(LieCase::A13, 3);
    ConstMatrix m(6);
    m(0, 2) = eps;
    m(1, 3) = -eps;
    m(2, 4) = eps;
    m(3, 5) = -eps;
    m(4, 0) = 1;
    m(5, 1) = -1;
    CHECK(b.elements[6] == m);
}

TEST_CASE("collapse and consistency of families") {
    auto one = build_basis(LieCase::A1N, 1);
    CHECK(one.elements == base_generators(LieCase::A1N));
    CHECK(build_basis(LieCase::A1N, 2).elements == build_basis(LieCase::A12, 2).elements);
    CHECK(build_basis(LieCase::A2N, 2).elements == build_basis(LieCase::A22, 2).elements);
    CHECK(build_basis(LieCase::A3N, 2).elements == build_basis(LieCase::A32, 2).elements);
    CHECK(build_basis(LieCase::A1N, 3).elements == build_basis(LieCase::A13, 3).elements);
    CHECK_THROWS_AS(build_basis(LieCase::A12, 3), BadDimension);
    CHECK_THROWS_AS(parse_case("A99"), UnknownCase);
}

TEST_CASE("expansion recovers coefficients") {
    auto b = build_basis(LieCase::A2N, 3);
    ConstMatrix m = DiffPoly(3) * b.elements[1] + eps * b.elements[7] - DiffPoly(Q(1, 2)) * b.elements[5];
    ConstMatrix res;
    Expansion e = expand(b, m, &res);
    CHECK(res.is_zero());
    CHECK(e[1] == DiffPoly(3));
    CHECK(e[7] == eps);
    CHECK(e[5] == DiffPoly(Q(-1, 2)));
    ConstMatrix off = ConstMatrix::identity(6);
    expand(b, off, &res);
    CHECK_FALSE(res.is_zero());
}

TEST_CASE("commutator expansion in A12") {
    auto b = build_basis(LieCase::A12, 2);
    CHECK(commutator(b.elements[3], b.elements[4]) == DiffPoly(2) * eps * b.elements[1]);
    CHECK(commutator(b.elements[4], b.elements[5]) == eps * b.elements[0]);
}

TEST_CASE("indexed brackets derived for N=4") {
    // [h at block i, e at block k] = 2 e at block i+k-1, with ε when it wraps.
    auto b = build_basis(LieCase::A1N, 4);
    for (int i = 1; i <= 4; ++i)
        for (int k = 1; k <= 4; ++k) {
            int t = k + i - 1;
            DiffPoly c = DiffPoly(2);
            if (t > 4) {
                t -= 4;
                c = DiffPoly(2) * eps;
            }
            CHECK(commutator(b.elements[std::size_t(3 * i - 3)], b.elements[std::size_t(3 * k - 2)]) ==
                  c * b.elements[std::size_t(3 * t - 2)]);
        }
}

TEST_CASE("grading and Jacobi hold for every family") {
    for (auto c : {LieCase::A1N, LieCase::A2N, LieCase::A3N})
        for (int n = 1; n <= 4; ++n) {
            auto b = build_basis(c, n);
            CHECK(verify_grading(b).pass());
            CHECK(verify_structure_constants(b).pass());
            CHECK(jacobi_failures(b).empty());
        }
}

TEST_CASE("specialising epsilon commutes with the bracket") {
    auto b = build_basis(LieCase::A13, 3);
    auto at = [](const ConstMatrix &m) {
        return m.map([](const DiffPoly &p) { return set_param(p, params::epsilon, DiffPoly(-1)); });
    };
    auto bn = build_basis(LieCase::A13, 3, DiffPoly(-1));
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
            CHECK(at(commutator(b.elements[std::size_t(i)], b.elements[std::size_t(j)])) ==
                  commutator(bn.elements[std::size_t(i)], bn.elements[std::size_t(j)]));
}

TEST_CASE("printed tables") {
    CHECK(verify_structure_constants(build_basis(LieCase::A12, 2), printed_relations(LieCase::A12)).passed() == 15);
    CHECK(verify_structure_constants(build_basis(LieCase::A13, 3), printed_relations(LieCase::A13)).pass());
    CHECK(verify_structure_constants(build_basis(LieCase::A32, 2), printed_relations(LieCase::A32)).pass());
    // The A22 table carries four sign errors; see the README.
    auto r = verify_structure_constants(build_basis(LieCase::A22, 2), printed_relations(LieCase::A22));
    CHECK(r.passed() == 11);
}
