#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "hforge/cli.hpp"
#include "hforge/hamiltonian.hpp"
#include "hforge/parse.hpp"
#include "hforge/render.hpp"
#include "hforge/serialize.hpp"
#include "printed.hpp"

using namespace hforge;
using printed::u;

namespace {

std::pair<int, std::string> cli_run(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str() + err.str()};
}

} // namespace

TEST_CASE("rationals are num/den strings") {
    CHECK(io::encode(Q(-3, 4)) == "-3/4");
    CHECK(io::encode(Q(5)) == "5/1");
    CHECK(io::decode_rational("6/4") == Q(3, 2));
    CHECK_THROWS_AS(io::decode_rational("3"), MalformedExpression);
    CHECK_THROWS_AS(io::decode_rational("1/0"), MalformedExpression);
    CHECK_THROWS_AS(io::decode_rational(3), MalformedExpression);
}

TEST_CASE("monomials are tag and exponent pairs") {
    DiffPoly p = DiffPoly::param(params::alpha) * u(2, 3).pow(2) * DiffPoly::k(1, 2) * DiffPoly::lambda(-1);
    const Monomial &m = p.terms().begin()->first;
    io::Json j = io::encode(m);
    CHECK(j.dump() == R"([["p:alpha",1],["k:1:2",1],["lambda",-1],["u:2:3",2]])");
    CHECK(io::decode_monomial(j) == m);
}

TEST_CASE("antiderivative bodies nest") {
    DiffPoly p = u(1) * int_x(u(1) * int_x(u(2)));
    io::Json j = io::encode(p);
    CHECK(j.dump().find(R"({"I":)") != std::string::npos);
    CHECK(io::decode_poly(j) == p);
}

TEST_CASE("round trips of c_2, zero and the recursion operator") {
    RecursionTable t = solve_recursion(SpectralModel::scalar(), 1);
    CHECK(io::decode_poly(io::parse(io::dump(io::encode(t.C(1, 2))))) == t.C(1, 2));
    CHECK(io::encode(DiffPoly()).dump() == "[]");
    CHECK(io::decode_poly(io::encode(DiffPoly())).is_zero());
    OperatorExpr phi = recursion_operator(SpectralModel::coupled());
    OperatorExpr back = io::decode_operator(io::parse(io::dump(io::encode(phi))));
    CHECK(back == phi);
    CHECK(io::dump(io::encode(back)) == io::dump(io::encode(phi)));
}

TEST_CASE("envelope checks kind and version") {
    io::Json doc = io::wrap("equation", io::encode(hierarchy_equation(SpectralModel::scalar(), 1)));
    CHECK(doc.begin().key() == "schema");
    CHECK(io::decode_equation(io::unwrap(doc, "equation")).rhs[0] == printed::scalar_flow1());
    CHECK_THROWS_AS(io::unwrap(doc, "table"), SchemaMismatch);
    doc["version"] = io::kSchemaVersion + 1;
    CHECK_THROWS_AS(io::unwrap(doc, "equation"), SchemaMismatch);
    doc["version"] = io::kSchemaVersion;
    doc["schema"] = "other";
    CHECK_THROWS_AS(io::unwrap(doc, "equation"), SchemaMismatch);
    CHECK_THROWS_AS(io::parse("{\"schema\":"), MalformedExpression);
}

TEST_CASE("models round trip") {
    for (auto m : {SpectralModel::scalar(), SpectralModel::coupled(), SpectralModel::multi(3, true)}) {
        SpectralModel back = io::decode_model(io::encode(m));
        CHECK(back.kind == m.kind);
        CHECK(back.n == m.n);
        CHECK(back.seeds == m.seeds);
        CHECK(back.sigma == m.sigma);
        CHECK(back.eps == m.eps);
        CHECK(back.iso == m.iso);
    }
}

TEST_CASE("parser reads printed text back") {
    for (const DiffPoly &p : {printed::scalar_c2(), printed::scalar_b1(), printed::coupled_g2(), printed::density_i1(),
                              DiffPoly(), Q(-7, 3) * DiffPoly::param(params::epsilon, -2) * u(3, 4)})
        CHECK(parse_poly(p.str()) == p);
    CHECK(parse_poly("u1_xxx + 6*u1*u1_x") == printed::kdv());
    CHECK(parse_poly("u1_x3") == u(1, 3));
    CHECK(parse_poly("(u1 + u2)^2") == u(1) * u(1) + Q(2) * u(1) * u(2) + u(2) * u(2));
    CHECK(parse_poly("u1/2") == Q(1, 2) * u(1));
    CHECK(parse_poly("I(u1)") == int_x(u(1)));
    CHECK(parse_poly("k0_t*x") == DiffPoly::k(0, 1) * DiffPoly::x());
}

TEST_CASE("parser rejects malformed input") {
    for (const char *bad : {"u1 +", "u0", "u1_y", "foo", "u1/u2", "x^-1", "(u1", "u1 u2", "3/0"})
        CHECK_THROWS_AS(parse_poly(bad), MalformedExpression);
    CHECK_THROWS_AS(parse_poly("u3", 2), MalformedExpression);
    CHECK(parse_poly("u2", 2) == u(2));
}

TEST_CASE("latex jets") {
    CHECK(latex::jet(1, 0) == "u_{1}");
    CHECK(latex::jet(2, 3) == "u_{2,xxx}");
    std::string s = latex::render(printed::kdv());
    CHECK(s.find("u_{1,xxx}") != std::string::npos);
    CHECK(s.find("u_{1} u_{1,x}") != std::string::npos);
    CHECK(latex::render(Q(1, 2) * u(1)).find("\\frac{1}{2}") != std::string::npos);
    CHECK(latex::render(int_x(u(1))).find("\\partial^{-1}") != std::string::npos);
}

TEST_CASE("cli generation") {
    auto kdv = cli_run({"gen", "--model", "kdv", "--order", "1"});
    CHECK(kdv.first == cli::kExitOk);
    CHECK(kdv.second.find("u1_t1 = ") != std::string::npos);
    auto multi = cli_run({"gen", "--model", "multi", "--N", "1", "--order", "1", "--beta1", "alpha"});
    CHECK(multi.first == cli::kExitOk);
    auto tail = [](const std::string &s) { return s.substr(s.find("hierarchy\n")); };
    CHECK(tail(kdv.second) == tail(multi.second));
    auto latex = cli_run({"gen", "--model", "coupled", "--order", "1", "--format", "latex"});
    CHECK(latex.second.find("u_{2,xxx}") != std::string::npos);
}

TEST_CASE("cli json is deterministic and parses back") {
    auto a = cli_run({"gen", "--model", "coupled", "--order", "1", "--format", "json"});
    auto b = cli_run({"gen", "--model", "coupled", "--order", "1", "--format", "json"});
    REQUIRE(a.first == cli::kExitOk);
    CHECK(a.second == b.second);
    io::Json doc = io::parse(a.second);
    FlowVector f = io::decode_equation(io::unwrap(doc, "generation").at("equations").at(1)).rhs;
    CHECK(f == printed::coupled_flow1());
}

TEST_CASE("cli exit codes") {
    CHECK(cli_run({"verify", "lie-algebra", "--case", "A12"}).first == cli::kExitOk);
    CHECK(cli_run({"verify", "lie-algebra", "--case", "A22"}).first == cli::kExitFailures);
    CHECK(cli_run({"verify", "zero-curvature", "--model", "coupled", "--order", "1"}).first == cli::kExitFailures);
    CHECK(cli_run({"verify", "zero-curvature", "--model", "coupled", "--order", "1", "--iso"}).first == cli::kExitOk);
    CHECK(cli_run({"gen", "--model", "nope"}).first == cli::kExitUsage);
    CHECK(cli_run({"gen", "--model", "multi"}).first == cli::kExitUsage);
    CHECK(cli_run({"gen", "--format", "yaml"}).first == cli::kExitUsage);
    CHECK(cli_run({"verify", "nothing"}).first == cli::kExitUsage);
    CHECK(cli_run({}).first == cli::kExitUsage);
    setenv("HIERARCHY_FORGE_MAX_ORDER", "2", 1);
    CHECK(cli::max_order() == 2);
    CHECK(cli_run({"gen", "--order", "3"}).first == cli::kExitUsage);
    setenv("HIERARCHY_FORGE_MAX_ORDER", "two", 1);
    CHECK(cli_run({"gen"}).first == cli::kExitUsage);
    unsetenv("HIERARCHY_FORGE_MAX_ORDER");
    CHECK(cli::max_order() == cli::kDefaultMaxOrder);
}

TEST_CASE("cli model configuration") {
    cli::JobConfig cfg;
    cfg.model = "multi";
    CHECK_THROWS_AS(cli::model_of(cfg), BadModel);
    cfg.n = 3;
    cfg.sigma = "1";
    cfg.leading_seed = true;
    SpectralModel m = cli::model_of(cfg);
    CHECK(m.n == 3);
    CHECK(m.sigma == DiffPoly(1));
    CHECK(m.seeds[1].is_zero());
    cfg.model = "kdv";
    cfg.n = 2;
    CHECK_THROWS(cli::model_of(cfg));
}
