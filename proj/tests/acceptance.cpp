// Acceptance runner: one line per criterion, exit status 0 iff all pass.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "hforge/cli.hpp"
#include "hforge/hamiltonian.hpp"
#include "hforge/hierarchy.hpp"
#include "hforge/liealg.hpp"
#include "hforge/parse.hpp"
#include "hforge/serialize.hpp"
#include "hforge/symmetry.hpp"
#include "printed.hpp"

using namespace hforge;
using printed::u;

namespace {

SpectralModel iso(SpectralModel m) {
    m.iso = true;
    return m;
}

std::string kstr(int k) { return std::to_string(k); }

// ---- 1 ------------------------------------------------------------------------

CheckReport lie_tables() {
    CheckReport r;
    const std::vector<std::pair<LieCase, int>> printed_cases{
        {LieCase::A12, 2}, {LieCase::A13, 3}, {LieCase::A22, 2}, {LieCase::A32, 2}};
    for (auto [c, n] : printed_cases) {
        LieBasis b = build_basis(c, n);
        StructureReport rep = verify_structure_constants(b, printed_relations(c));
        for (const auto &e : rep.entries)
            r.add(case_name(c) + " [" + element_name(b, e.i) + "," + element_name(b, e.j) + "]", e.pass,
                  e.pass ? "" : "computed " + expansion_str(b, e.coefficients));
    }
    int a12 = 0;
    for (const auto &c : r.checks) a12 += c.name.rfind("A12 ", 0) == 0 ? 1 : 0;
    r.add("A12 relation count is 15", a12 == 15, kstr(a12));
    for (LieCase c : {LieCase::A1N, LieCase::A2N, LieCase::A3N})
        for (int n = 2; n <= 5; ++n)
            r.add(case_name(c) + " N=" + kstr(n) + " grading closure", verify_grading(build_basis(c, n)).pass());
    return r;
}

// ---- 2 ------------------------------------------------------------------------

CheckReport recursion_regression() {
    CheckReport r;
    RecursionTable s = solve_recursion(SpectralModel::scalar(), 1);
    r.add("scalar a_0", s.A(1, 0).is_zero());
    r.add("scalar a_1", s.A(1, 1) == printed::scalar_a1());
    r.add("scalar b_0", s.B(1, 0) == printed::scalar_b0());
    r.add("scalar c_0", s.C(1, 0) == printed::alpha());
    r.add("scalar c_1", s.C(1, 1) == printed::scalar_c1());
    r.add("scalar c_2", s.C(1, 2) == printed::scalar_c2());
    r.report("scalar b_1", s.B(1, 1) == printed::scalar_b1(),
             "computed - printed = " + (s.B(1, 1) - printed::scalar_b1()).str());

    RecursionTable c = solve_recursion(SpectralModel::coupled(), 1);
    r.add("coupled c_1", c.C(1, 1) == printed::coupled_c1());
    r.add("coupled g_1", c.C(2, 1) == printed::coupled_g1());
    r.add("coupled b_0", c.B(1, 0) == printed::coupled_b0());
    r.add("coupled f_0", c.B(2, 0) == printed::coupled_f0());
    r.add("coupled a_1", c.A(1, 1) == printed::coupled_a1());
    r.add("coupled e_1", c.A(2, 1) == printed::coupled_e1());
    r.add("coupled c_2", c.C(1, 2) == printed::coupled_c2());
    r.add("coupled g_2", c.C(2, 2) == printed::coupled_g2());

    const int n = 3;
    RecursionTable m = solve_recursion(SpectralModel::multi(n), 1);
    for (int k = 1; k <= n; ++k) {
        r.add("multi c_" + kstr(k) + "0", m.C(k, 0) == printed::beta1());
        r.add("multi c_" + kstr(k) + "1", m.C(k, 1) == printed::multi_c1(k, n));
        r.add("multi b_" + kstr(k) + "0", m.B(k, 0) == printed::multi_b0(k, n));
        r.add("multi a_" + kstr(k) + "1", m.A(k, 1) == printed::multi_a1(k, n));
        r.add("multi c_" + kstr(k) + "2", m.C(k, 2) == printed::multi_c2(k, n),
              "computed - printed = " + (m.C(k, 2) - printed::multi_c2(k, n)).str());
    }
    return r;
}

// ---- 3 ------------------------------------------------------------------------

CheckReport zero_curvature() {
    CheckReport r;
    auto run = [&r](const std::string &name, const SpectralModel &m, int top) {
        for (int n = 0; n <= top; ++n) {
            MatrixExpr res = verify_zero_curvature(m, n);
            r.add(name + " n=" + kstr(n), res.is_zero(), res.is_zero() ? "" : res.str());
        }
    };
    run("scalar", SpectralModel::scalar(), 3);
    run("coupled", SpectralModel::coupled(), 3);
    run("multi N=3", SpectralModel::multi(3), 2);
    return r;
}

// ---- 4 ------------------------------------------------------------------------

CheckReport named_equations() {
    CheckReport r;
    HierarchyEquation s1 = hierarchy_equation(SpectralModel::scalar(), 1);
    r.add("scalar u_t1", s1.rhs[0] == printed::scalar_flow1());
    r.add("KdV reduction", reduce(s1, ReduceSpec{true, {{params::alpha, DiffPoly(1)}}}).rhs[0] == printed::kdv());

    HierarchyEquation c1 = hierarchy_equation(SpectralModel::coupled(), 1);
    r.add("coupled u_t1", c1.rhs == printed::coupled_flow1());
    FlowVector frob = reduce(c1, ReduceSpec{true, {{params::alpha1, DiffPoly(1)}, {params::alpha2, DiffPoly()}}}).rhs;
    r.add("Frobenius KdV reduction", frob == printed::frobenius_kdv());

    const int n = 3;
    FlowVector m1 = hierarchy_equation(SpectralModel::multi(n), 1).rhs;
    for (int k = 1; k <= n; ++k)
        r.add("multi u_" + kstr(k) + ",t1", m1[std::size_t(k - 1)] == printed::multi_flow1(k, n),
              "computed - printed = " + (m1[std::size_t(k - 1)] - printed::multi_flow1(k, n)).str());

    for (int order = 0; order <= 1; ++order) {
        FlowVector one = hierarchy_equation(SpectralModel::multi(1), order).rhs;
        FlowVector scalar = hierarchy_equation(SpectralModel::scalar(), order).rhs;
        r.add("N=1 collapse order " + kstr(order),
              reduce(one, ReduceSpec{false, {{params::beta1, printed::alpha()}}}) == scalar);
        SpectralModel two = SpectralModel::multi(2);
        two.sigma = 1;
        FlowVector got = hierarchy_equation(two, order).rhs;
        FlowVector want = hierarchy_equation(SpectralModel::coupled(), order).rhs;
        r.add("N=2 collapse order " + kstr(order),
              got == reduce(want, ReduceSpec{false, {{params::alpha1, printed::beta1()}, {params::alpha2, printed::beta1()}}}));
    }
    return r;
}

// ---- 5 ------------------------------------------------------------------------

CheckReport lax_pair() {
    CheckReport r;
    SpectralPair pair = build_spectral_pair(iso(SpectralModel::coupled()));
    MatrixExpr res = zero_curvature_residual(pair, printed::frobenius_kdv(), DiffPoly(), printed::frobenius_lax_v());
    r.add("printed V under the Frobenius KdV flow", res.is_zero(), res.is_zero() ? "" : res.str());
    return r;
}

// ---- 6 ------------------------------------------------------------------------

CheckReport hamiltonian_suite() {
    CheckReport r;
    for (const auto &m : {SpectralModel::scalar(), SpectralModel::coupled()}) {
        SpectralModel im = iso(m);
        r.append(verify_gradient_relations(im, 2));
        r.append(verify_operator_identities(im, 2));
        r.append(verify_poisson_brackets(im, 2));
    }
    return r;
}

// ---- 7 ------------------------------------------------------------------------

CheckReport symmetry_suite() {
    CheckReport r;
    CheckReport her = verify_hereditary_random(20);
    r.add("20 hereditary pairs", her.checks.size() == 20, kstr(int(her.checks.size())));
    r.append(her);
    r.append(verify_strong_symmetry(0));
    r.append(verify_strong_symmetry(1));
    r.append(verify_symmetry_equation(1, 0));
    r.append(verify_symmetry_equation(1, 1));
    r.append(verify_symmetry_equation(2, 0));
    r.append(verify_algebra(2, 2));
    return r;
}

// ---- 8 ------------------------------------------------------------------------

CheckReport conserved() {
    CheckReport r;
    FlowVector flow = k_flow(1);
    r.add("flow of order 1 is Frobenius KdV", flow == printed::frobenius_kdv());
    const DiffPoly want[] = {printed::density_i0(), printed::density_i1()};
    for (int m = 0; m <= 1; ++m) {
        DiffPoly d = conserved_quantity(m).density;
        r.add("I_" + kstr(m) + " density modulo exact", is_exact(d - want[m]), d.str());
        bool ok = conserved_along(want[m], flow);
        r.add("I_" + kstr(m) + " conserved along Frobenius KdV", ok,
              ok ? "" : "non-exact rate " + split_exact(gateaux(want[m], flow)).remainder.str());
    }
    return r;
}

// ---- 9 ------------------------------------------------------------------------

template <class T, class Enc, class Dec> bool round_trips(const T &v, Enc enc, Dec dec) {
    io::Json j = io::parse(io::dump(io::wrap("object", enc(v))));
    return dec(io::unwrap(j, "object")) == v;
}

std::pair<int, std::string> cli(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str()};
}

CheckReport infrastructure() {
    CheckReport r;
    auto poly = [](const DiffPoly &p) { return io::encode(p); };
    auto flow = [](const FlowVector &v) { return io::encode(v); };
    auto mat = [](const ConstMatrix &m) { return io::encode(m); };

    std::vector<DiffPoly> polys{DiffPoly(), printed::scalar_c1(), printed::scalar_b0(), printed::scalar_a1(),
                                printed::scalar_c2(), printed::scalar_b1(), printed::coupled_c2(),
                                printed::coupled_g2(), printed::multi_c2(2, 3), printed::density_i1(),
                                Q(3, 7) * DiffPoly::param(params::epsilon, -1) * DiffPoly::k(2, 1) * DiffPoly::lambda(-2)};
    bool polys_ok = true, text_ok = true;
    for (const auto &p : polys) {
        polys_ok = polys_ok && round_trips(p, poly, io::decode_poly);
        text_ok = text_ok && parse_poly(p.str()) == p;
    }
    r.add("polynomial round trip", polys_ok);
    r.add("text form round trip", text_ok);

    bool tables_ok = true, eqs_ok = true;
    for (const auto &m : {SpectralModel::scalar(), SpectralModel::coupled(), SpectralModel::multi(3)}) {
        RecursionTable t = solve_recursion(m, 2);
        io::Json j = io::parse(io::dump(io::wrap("table", io::encode(t))));
        RecursionTable back = io::decode_table(io::unwrap(j, "table"));
        tables_ok = tables_ok && io::dump(io::encode(back)) == io::dump(io::encode(t)) && back.c == t.c &&
                    back.b == t.b && back.a == t.a && back.b_top == t.b_top;
        for (int n = 0; n <= 2; ++n) eqs_ok = eqs_ok && round_trips(hierarchy_equation(t, n).rhs, flow, io::decode_flow);
    }
    r.add("recursion table round trip", tables_ok);
    r.add("hierarchy equation round trip", eqs_ok);
    r.add("flow round trip", round_trips(printed::frobenius_kdv(), flow, io::decode_flow) &&
                                 round_trips(K_flow(2).value, flow, io::decode_flow) &&
                                 round_trips(tau_flow(1, 1).value, flow, io::decode_flow));
    r.add("matrix round trip", round_trips(printed::frobenius_lax_v(), mat, io::decode_matrix) &&
                                   round_trips(build_basis(LieCase::A13, 3).elements[6], mat, io::decode_matrix));

    bool ops_ok = true;
    for (const auto &m : {SpectralModel::scalar(), SpectralModel::coupled(), SpectralModel::multi(3)})
        for (const auto &t : build_operators(m))
            for (const OperatorExpr *op : {&t.J, &t.M, &t.Phi}) {
                io::Json j = io::parse(io::dump(io::wrap("operator", io::encode(*op))));
                OperatorExpr back = io::decode_operator(io::unwrap(j, "operator"));
                ops_ok = ops_ok && back == *op;
            }
    OperatorExpr phi = recursion_operator(SpectralModel::coupled());
    OperatorExpr phi_back = io::decode_operator(io::encode(phi));
    ops_ok = ops_ok && agree_on(phi_back, phi, test_vectors(2, 3));
    r.add("operator round trip", ops_ok);

    CheckReport sample;
    sample.add("a", true);
    sample.add("b", false, "detail");
    sample.report("c", false, "known");
    CheckReport back = io::decode_report(io::encode(sample));
    r.add("report round trip", io::dump(io::encode(back)) == io::dump(io::encode(sample)));

    io::Json drift = io::wrap("object", poly(printed::scalar_c1()));
    drift["version"] = io::kSchemaVersion + 1;
    bool threw = false;
    try {
        io::unwrap(drift, "object");
    } catch (const SchemaMismatch &) {
        threw = true;
    }
    r.add("version drift raises SchemaMismatch", threw);

    auto g1 = cli({"gen", "--model", "coupled", "--order", "1", "--format", "json"});
    auto g2 = cli({"gen", "--model", "coupled", "--order", "1", "--format", "json"});
    r.add("gen json byte-identical", g1.first == 0 && g1.second == g2.second && !g1.second.empty());
    io::Json doc = io::parse(g1.second);
    const io::Json &data = io::unwrap(doc, "generation");
    FlowVector parsed = io::decode_equation(data.at("equations").at(1)).rhs;
    r.add("gen json parses to the same flow", parsed == hierarchy_equation(SpectralModel::coupled(), 1).rhs);
    auto v1 = cli({"verify", "symmetries", "--max", "2", "--format", "json"});
    auto v2 = cli({"verify", "symmetries", "--max", "2", "--format", "json"});
    r.add("verify json byte-identical", v1.second == v2.second && !v1.second.empty());
    auto kdv = cli({"gen", "--model", "kdv", "--order", "1"});
    auto multi = cli({"gen", "--model", "multi", "--N", "1", "--order", "1", "--beta1", "alpha"});
    auto tail = [](const std::string &s) { return s.substr(s.find("hierarchy\n")); };
    r.add("multi N=1 generation matches kdv", tail(kdv.second) == tail(multi.second));

    r.add("exit 0 without failures", cli({"verify", "lie-algebra", "--case", "A12"}).first == cli::kExitOk);
    r.add("exit 1 on hard failures", cli({"verify", "lie-algebra", "--case", "A22"}).first == cli::kExitFailures);
    r.add("exit 0 with only reported discrepancies", v1.first == cli::kExitOk);
    r.add("exit 2 on unknown model", cli({"gen", "--model", "mkdv"}).first == cli::kExitUsage);
    r.add("exit 2 when multi lacks N", cli({"gen", "--model", "multi"}).first == cli::kExitUsage);
    r.add("exit 2 on a malformed binding", cli({"gen", "--epsilon", "u1+"}).first == cli::kExitUsage);
    setenv("HIERARCHY_FORGE_MAX_ORDER", "1", 1);
    int capped = cli({"gen", "--order", "2"}).first;
    int within = cli({"gen", "--order", "1"}).first;
    unsetenv("HIERARCHY_FORGE_MAX_ORDER");
    r.add("order cap from the environment", capped == cli::kExitUsage && within == cli::kExitOk);
    return r;
}

struct Criterion {
    int id;
    const char *title;
    CheckReport (*run)();
};

std::string summary(const CheckReport &r) {
    std::string s = std::to_string(r.passed()) + "/" + std::to_string(r.checks.size()) + " checks";
    std::string failed, reported;
    int shown = 0;
    for (const auto &c : r.checks) {
        if (c.pass) continue;
        if (c.reported) {
            reported += (reported.empty() ? "" : ", ") + c.name;
        } else if (shown++ < 4) {
            failed += (failed.empty() ? "" : ", ") + c.name;
        }
    }
    if (r.hard_failures() > 4) failed += ", ...";
    if (!failed.empty()) s += "; failing: " + failed;
    if (!reported.empty()) s += "; reported discrepancy: " + reported;
    return s;
}

} // namespace

int main() {
    const Criterion criteria[] = {
        {1, "Lie algebra tables and grading closure", lie_tables},
        {2, "recursion regression", recursion_regression},
        {3, "zero-curvature residuals", zero_curvature},
        {4, "named equations and reductions", named_equations},
        {5, "Frobenius KdV Lax pair", lax_pair},
        {6, "Hamiltonian structures", hamiltonian_suite},
        {7, "symmetries", symmetry_suite},
        {8, "conserved quantities", conserved},
        {9, "serialization, determinism and exit codes", infrastructure},
    };
    bool all = true;
    for (const auto &c : criteria) {
        CheckReport r;
        try {
            r = c.run();
        } catch (const std::exception &e) {
            r.add("exception", false, e.what());
        }
        all = all && r.pass();
        std::cout << (r.pass() ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " (" << summary(r)
                  << ")" << std::endl;
    }
    return all ? 0 : 1;
}
