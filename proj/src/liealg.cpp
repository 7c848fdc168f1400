#include "hforge/liealg.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace hforge {

ConstMatrix ConstMatrix::from_rows(const std::vector<std::vector<DiffPoly>> &rows) {
    ConstMatrix m(int(rows.size()));
    for (int r = 0; r < m.n_; ++r) {
        if (int(rows[std::size_t(r)].size()) != m.n_) throw DimensionMismatch("matrix rows must be square");
        for (int c = 0; c < m.n_; ++c) m(r, c) = rows[std::size_t(r)][std::size_t(c)];
    }
    return m;
}

ConstMatrix ConstMatrix::identity(int n) {
    ConstMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

ConstMatrix &ConstMatrix::operator+=(const ConstMatrix &o) {
    if (o.n_ != n_) throw DimensionMismatch("matrix sum of different orders");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

ConstMatrix &ConstMatrix::operator-=(const ConstMatrix &o) {
    if (o.n_ != n_) throw DimensionMismatch("matrix difference of different orders");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

ConstMatrix operator*(const ConstMatrix &a, const ConstMatrix &b) {
    if (a.n_ != b.n_) throw DimensionMismatch("matrix product of different orders");
    ConstMatrix r(a.n_);
    for (int i = 0; i < a.n_; ++i)
        for (int k = 0; k < a.n_; ++k) {
            if (a(i, k).is_zero()) continue;
            for (int j = 0; j < a.n_; ++j)
                if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
        }
    return r;
}

ConstMatrix operator*(const DiffPoly &c, ConstMatrix a) {
    for (auto &x : a.a_) x = c * x;
    return a;
}

bool operator==(const ConstMatrix &a, const ConstMatrix &b) { return a.n_ == b.n_ && a.a_ == b.a_; }

bool ConstMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const DiffPoly &p) { return p.is_zero(); });
}

ConstMatrix ConstMatrix::map(const std::function<DiffPoly(const DiffPoly &)> &f) const {
    ConstMatrix r(n_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f(a_[i]);
    return r;
}

std::string ConstMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (int r = 0; r < n_; ++r) {
        os << (r ? ", [" : "[");
        for (int c = 0; c < n_; ++c) os << (c ? ", " : "") << (*this)(r, c).str();
        os << "]";
    }
    os << "]";
    return os.str();
}

ConstMatrix commutator(const ConstMatrix &a, const ConstMatrix &b) {
    if (a.order() != b.order()) throw DimensionMismatch("commutator of matrices of different orders");
    return a * b - b * a;
}

ConstMatrix block_embed(const std::vector<ConstMatrix> &blocks, const DiffPoly &eps) {
    if (blocks.empty()) throw EmptyInput("block_embed needs at least one block");
    const int d = blocks.front().order();
    for (const auto &b : blocks)
        if (b.order() != d) throw MixedBlockOrder("blocks of orders " + std::to_string(d) + " and " +
                                                  std::to_string(b.order()));
    const int n = int(blocks.size());
    ConstMatrix m(n * d);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const bool lower = r >= c;
            const ConstMatrix &blk = blocks[std::size_t(lower ? r - c : n + r - c)];
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    if (blk(i, j).is_zero()) continue;
                    m(r * d + i, c * d + j) = lower ? blk(i, j) : eps * blk(i, j);
                }
        }
    return m;
}

LieCase parse_case(const std::string &s) {
    static const std::vector<std::pair<std::string, LieCase>> names{
        {"A12", LieCase::A12}, {"A13", LieCase::A13}, {"A1N", LieCase::A1N}, {"A22", LieCase::A22},
        {"A2N", LieCase::A2N}, {"A32", LieCase::A32}, {"A3N", LieCase::A3N}};
    for (const auto &[n, c] : names)
        if (n == s) return c;
    throw UnknownCase("no algebra named '" + s + "'");
}

std::string case_name(LieCase c) {
    switch (c) {
    case LieCase::A12: return "A12";
    case LieCase::A13: return "A13";
    case LieCase::A1N: return "A1N";
    case LieCase::A22: return "A22";
    case LieCase::A2N: return "A2N";
    case LieCase::A32: return "A32";
    case LieCase::A3N: return "A3N";
    }
    return "?";
}

namespace {

ConstMatrix rows2(Q a, Q b, Q c, Q d) { return ConstMatrix::from_rows({{a, b}, {c, d}}); }

int family(LieCase c) {
    switch (c) {
    case LieCase::A12:
    case LieCase::A13:
    case LieCase::A1N: return 1;
    case LieCase::A22:
    case LieCase::A2N: return 2;
    default: return 3;
    }
}

} // namespace

std::vector<ConstMatrix> base_generators(LieCase c) {
    const Q h(1, 2);
    switch (family(c)) {
    case 1: return {rows2(1, 0, 0, -1), rows2(0, 1, 0, 0), rows2(0, 0, 1, 0)};
    case 2: return {rows2(h, 0, 0, -h), rows2(0, h, h, 0), rows2(0, h, -h, 0)};
    default:
        return {ConstMatrix::from_rows({{0, 0, 1}, {0, 0, 0}, {-1, 0, 0}}),
                ConstMatrix::from_rows({{0, 0, 0}, {0, 0, -1}, {0, 1, 0}}),
                ConstMatrix::from_rows({{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}})};
    }
}

LieBasis build_basis(LieCase c, int n, const DiffPoly &eps) {
    if (n < 1) throw BadDimension("block count must be positive");
    const bool fixed2 = c == LieCase::A12 || c == LieCase::A22 || c == LieCase::A32;
    if (fixed2 && n != 2) throw BadDimension(case_name(c) + " has exactly 2 blocks");
    if (c == LieCase::A13 && n != 3) throw BadDimension("A13 has exactly 3 blocks");
    LieBasis b{c, n, {}, base_generators(c)};
    const int d = b.base.front().order();
    for (int k = 0; k < n; ++k)
        for (int g = 0; g < 3; ++g) {
            std::vector<ConstMatrix> blocks(static_cast<std::size_t>(n), ConstMatrix(d));
            blocks[std::size_t(k)] = b.base[std::size_t(g)];
            b.elements.push_back(block_embed(blocks, eps));
        }
    return b;
}

namespace {

// Entries (r, c) of the base generators and the inverse of the 3x3 system
// they form, so that coefficients can be read off a block.
struct BaseSolver {
    std::vector<std::pair<int, int>> picks;
    Q inv[3][3];
};

BaseSolver make_solver(const std::vector<ConstMatrix> &base) {
    const int d = base.front().order();
    std::vector<std::pair<int, int>> cells;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) cells.emplace_back(r, c);
    auto val = [&](int g, std::pair<int, int> cell) { return base[std::size_t(g)](cell.first, cell.second).coefficient(Monomial()); };
    for (std::size_t a = 0; a < cells.size(); ++a)
        for (std::size_t b = a + 1; b < cells.size(); ++b)
            for (std::size_t c = b + 1; c < cells.size(); ++c) {
                std::pair<int, int> pk[3] = {cells[a], cells[b], cells[c]};
                Q m[3][3];
                for (int i = 0; i < 3; ++i)
                    for (int g = 0; g < 3; ++g) m[i][g] = val(g, pk[i]);
                Q det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                        m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                        m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
                if (det == 0) continue;
                BaseSolver s;
                s.picks.assign(pk, pk + 3);
                // inverse via adjugate; row g of inv maps picked entries to coefficient g
                for (int g = 0; g < 3; ++g)
                    for (int i = 0; i < 3; ++i) {
                        int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (g + 1) % 3, c1 = (g + 2) % 3;
                        s.inv[g][i] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det;
                    }
                return s;
            }
    throw BadDimension("base generators are linearly dependent");
}

} // namespace

Expansion expand(const LieBasis &basis, const ConstMatrix &m, ConstMatrix *residual) {
    const int d = basis.base.front().order();
    if (m.order() != d * basis.blocks) throw DimensionMismatch("matrix order does not match the basis");
    static thread_local std::map<int, BaseSolver> solvers;
    auto it = solvers.find(int(basis.which));
    if (it == solvers.end()) it = solvers.emplace(int(basis.which), make_solver(basis.base)).first;
    const BaseSolver &s = it->second;
    Expansion coeffs(std::size_t(basis.size()));
    ConstMatrix rebuilt(m.order());
    for (int k = 0; k < basis.blocks; ++k)
        for (int g = 0; g < 3; ++g) {
            DiffPoly c;
            for (int i = 0; i < 3; ++i) c += s.inv[g][i] * m(k * d + s.picks[std::size_t(i)].first, s.picks[std::size_t(i)].second);
            std::size_t idx = std::size_t(3 * k + g);
            if (!c.is_zero()) rebuilt += c * basis.elements[idx];
            coeffs[idx] = std::move(c);
        }
    if (residual) *residual = m - rebuilt;
    return coeffs;
}

std::string element_name(const LieBasis &basis, int idx) {
    static const char *letters[] = {"h", "e", "f"};
    std::string stem = letters[family(basis.which) - 1];
    return stem + std::to_string(idx + 1);
}

std::string expansion_str(const LieBasis &basis, const Expansion &e) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + e[i].str() + ")*" + element_name(basis, int(i));
    }
    return out.empty() ? "0" : out;
}

bool StructureReport::pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const StructureEntry &e) { return e.pass; });
}

int StructureReport::passed() const {
    return int(std::count_if(entries.begin(), entries.end(), [](const StructureEntry &e) { return e.pass; }));
}

namespace {

Relation rel(int i, int j, std::vector<std::pair<DiffPoly, int>> rhs = {}) {
    for (auto &[c, k] : rhs) k -= 1;
    return {i - 1, j - 1, std::move(rhs)};
}

std::vector<Relation> indexed_families(LieCase c, int n) {
    const DiffPoly eps = DiffPoly::eps();
    std::vector<Relation> out;
    for (int i = 1; i <= n; ++i)
        for (int k = i + 1; k <= n; ++k)
            for (int g = 2; g >= 0; --g) out.push_back(rel(3 * i - g, 3 * k - g));
    // index of generator shift s at the combined block, with the ε wrap
    auto target = [&](int i, int k, int shift) -> std::pair<DiffPoly, int> {
        if (k <= n - i + 1) return {DiffPoly(1), 3 * (k + i - 1) - shift};
        return {eps, 3 * (k + i - 1 - n) - shift};
    };
    const bool first = c == LieCase::A1N;
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= n; ++k) {
            auto [c1, t1] = target(i, k, first ? 1 : 0);
            out.push_back(rel(3 * i - 2, 3 * k - 1, {{Q(first ? 2 : 1) * c1, t1}}));
            auto [c2, t2] = target(i, k, first ? 0 : 1);
            out.push_back(rel(3 * i - 2, 3 * k, {{Q(first ? -2 : 1) * c2, t2}}));
            auto [c3, t3] = target(i, k, 2);
            out.push_back(rel(3 * i - 1, 3 * k - 2, {{c3, t3}}));
        }
    return out;
}

} // namespace

std::vector<Relation> printed_relations(LieCase c, int n) {
    const DiffPoly e = DiffPoly::eps();
    using V = std::vector<std::pair<DiffPoly, int>>;
    switch (c) {
    case LieCase::A12:
        return {rel(1, 2, V{{2, 2}}),  rel(1, 3, V{{-2, 3}}), rel(1, 4),
                rel(1, 5, V{{2, 5}}),  rel(1, 6, V{{-2, 6}}), rel(2, 3, V{{1, 1}}),
                rel(2, 4, V{{-2, 5}}), rel(2, 5),             rel(2, 6, V{{1, 4}}),
                rel(3, 4, V{{2, 6}}),  rel(3, 5, V{{-1, 4}}), rel(3, 6),
                rel(4, 5, V{{Q(2) * e, 2}}), rel(4, 6, V{{Q(-2) * e, 3}}), rel(5, 6, V{{e, 1}})};
    case LieCase::A13:
        return {rel(1, 2, V{{2, 2}}),  rel(1, 3, V{{-2, 3}}), rel(1, 5, V{{2, 5}}),  rel(1, 6, V{{-2, 6}}),
                rel(1, 8, V{{2, 8}}),  rel(1, 9, V{{-2, 9}}), rel(2, 3, V{{1, 1}}),  rel(2, 4, V{{-2, 5}}),
                rel(2, 6, V{{1, 4}}),  rel(2, 7, V{{-2, 8}}), rel(2, 9, V{{1, 7}}),  rel(3, 4, V{{2, 6}}),
                rel(3, 5, V{{-1, 4}}), rel(3, 7, V{{2, 9}}),  rel(3, 8, V{{-1, 7}}), rel(4, 5, V{{2, 8}}),
                rel(4, 6, V{{-2, 9}}), rel(4, 8, V{{Q(2) * e, 2}}), rel(4, 9, V{{Q(-2) * e, 3}}),
                rel(5, 6, V{{1, 7}}),  rel(5, 7, V{{Q(-2) * e, 2}}), rel(5, 9, V{{e, 1}}),
                rel(7, 8, V{{Q(2) * e, 5}}), rel(7, 9, V{{Q(-2) * e, 6}}), rel(8, 9, V{{e, 4}}),
                rel(1, 4), rel(2, 5), rel(3, 6), rel(1, 7), rel(2, 8), rel(3, 9), rel(4, 7), rel(5, 8), rel(6, 9)};
    case LieCase::A22:
        return {rel(1, 2, V{{1, 3}}),  rel(1, 3, V{{1, 2}}),  rel(1, 4),
                rel(1, 5, V{{1, 6}}),  rel(1, 6, V{{1, 5}}),  rel(2, 3, V{{1, 1}}),
                rel(2, 4, V{{-1, 6}}), rel(2, 5),             rel(2, 6, V{{1, 4}}),
                rel(3, 4, V{{-1, 5}}), rel(3, 5, V{{-1, 4}}), rel(3, 6),
                rel(4, 5, V{{e, 3}}),  rel(4, 6, V{{e, 2}}),  rel(5, 6, V{{e, 1}})};
    case LieCase::A32:
        return {rel(1, 2, V{{1, 3}}),  rel(1, 3, V{{-1, 2}}), rel(1, 4),
                rel(1, 5, V{{1, 6}}),  rel(1, 6, V{{-1, 5}}), rel(2, 3, V{{1, 1}}),
                rel(2, 4, V{{-1, 6}}), rel(2, 5),             rel(2, 6, V{{1, 4}}),
                rel(3, 4, V{{1, 5}}),  rel(3, 5, V{{-1, 4}}), rel(3, 6),
                rel(4, 5, V{{e, 3}}),  rel(4, 6, V{{-e, 2}}), rel(5, 6, V{{e, 1}})};
    case LieCase::A1N:
    case LieCase::A2N:
        if (n < 1) throw BadDimension("indexed families need a positive block count");
        return indexed_families(c, n);
    case LieCase::A3N: return {};
    }
    return {};
}

namespace {

StructureEntry check_pair(const LieBasis &basis, int i, int j) {
    StructureEntry e;
    e.i = i;
    e.j = j;
    e.coefficients = expand(basis, commutator(basis.elements[std::size_t(i)], basis.elements[std::size_t(j)]), &e.residual);
    e.pass = e.residual.is_zero();
    if (!e.pass) e.note = "commutator leaves the span";
    return e;
}

} // namespace

StructureReport verify_structure_constants(const LieBasis &basis) {
    StructureReport rep;
    for (int i = 0; i < basis.size(); ++i)
        for (int j = i + 1; j < basis.size(); ++j) rep.entries.push_back(check_pair(basis, i, j));
    return rep;
}

StructureReport verify_structure_constants(const LieBasis &basis, const std::vector<Relation> &relations) {
    StructureReport rep;
    for (const auto &r : relations) {
        if (r.i < 0 || r.j < 0 || r.i >= basis.size() || r.j >= basis.size())
            throw BadDimension("relation index outside the basis");
        StructureEntry e = check_pair(basis, r.i, r.j);
        e.expected.assign(std::size_t(basis.size()), DiffPoly());
        for (const auto &[c, k] : r.rhs) e.expected[std::size_t(k)] += c;
        if (e.pass && e.coefficients != e.expected) {
            e.pass = false;
            e.note = "printed " + expansion_str(basis, e.expected);
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

StructureReport verify_grading(const LieBasis &basis) {
    const int n = basis.blocks;
    StructureReport rep;
    for (int bi = 0; bi < n; ++bi)
        for (int bj = 0; bj < n; ++bj) {
            const int sum = (bi + 1) + (bj + 1);
            const int target = sum - 1 - (sum >= n + 2 ? n : 0) - 1;
            for (int g = 0; g < 3; ++g)
                for (int h = 0; h < 3; ++h) {
                    StructureEntry e = check_pair(basis, 3 * bi + g, 3 * bj + h);
                    for (int k = 0; k < basis.size(); ++k)
                        if (basis.block_of(k) != target && !e.coefficients[std::size_t(k)].is_zero()) {
                            e.pass = false;
                            e.note = "component outside block " + std::to_string(target + 1);
                        }
                    rep.entries.push_back(std::move(e));
                }
        }
    return rep;
}

std::vector<std::array<int, 3>> jacobi_failures(const LieBasis &basis, std::size_t limit, unsigned seed) {
    std::vector<std::array<int, 3>> triples;
    const int n = basis.size();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) triples.push_back({a, b, c});
    if (limit && triples.size() > limit) {
        std::mt19937 rng(seed);
        std::shuffle(triples.begin(), triples.end(), rng);
        triples.resize(limit);
        std::sort(triples.begin(), triples.end());
    }
    std::vector<std::array<int, 3>> bad;
    for (const auto &t : triples) {
        const auto &x = basis.elements[std::size_t(t[0])];
        const auto &y = basis.elements[std::size_t(t[1])];
        const auto &z = basis.elements[std::size_t(t[2])];
        ConstMatrix j = commutator(x, commutator(y, z)) + commutator(y, commutator(z, x)) + commutator(z, commutator(x, y));
        if (!j.is_zero()) bad.push_back(t);
    }
    return bad;
}

} // namespace hforge
