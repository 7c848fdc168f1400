#include "hforge/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "hforge/hamiltonian.hpp"
#include "hforge/hierarchy.hpp"
#include "hforge/liealg.hpp"
#include "hforge/parse.hpp"
#include "hforge/render.hpp"
#include "hforge/serialize.hpp"
#include "hforge/symmetry.hpp"

namespace hforge::cli {

using io::Json;

namespace {

DiffPoly binding(const std::string &name, const std::string &text) {
    DiffPoly p = parse_poly(text);
    if (!p.is_constant()) throw BadSpec("--" + name + " must be x-independent, got " + p.str());
    return p;
}

std::string escape_latex(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '_': out += "\\_"; break;
        case '^': out += "\\^{}"; break;
        case '{': out += "\\{"; break;
        case '}': out += "\\}"; break;
        case '&': out += "\\&"; break;
        case '%': out += "\\%"; break;
        case '#': out += "\\#"; break;
        case '$': out += "\\$"; break;
        case '\\': out += "\\textbackslash{}"; break;
        default: out += c;
        }
    }
    return out;
}

std::string clip(const std::string &s, std::size_t n = 400) { return s.size() <= n ? s : s.substr(0, n) + " ..."; }

Json config_json(const JobConfig &c) {
    Json j{{"command", c.command}};
    if (c.command == "verify") j["suite"] = c.suite;
    j["model"] = c.model;
    j["N"] = c.n ? Json(*c.n) : Json(nullptr);
    j["order"] = c.order;
    j["max"] = c.max;
    j["case"] = c.lie_case;
    j["epsilon"] = c.epsilon.empty() ? "eps" : c.epsilon;
    j["sigma"] = c.sigma.empty() ? "sigma" : c.sigma;
    j["isospectral"] = c.iso;
    j["leading_seed"] = c.leading_seed;
    return j;
}

// ---- gen / table ------------------------------------------------------------

struct Line {
    std::string text_lhs, latex_lhs;
    DiffPoly rhs;
};

std::vector<Line> table_lines(const RecursionTable &t) {
    std::vector<Line> out;
    for (int k = 1; k <= t.model.n; ++k) {
        const std::string ks = std::to_string(k);
        out.push_back({"b[" + ks + "][top]", "b_{" + ks + ",-1}", t.b_top[std::size_t(k - 1)]});
        for (std::size_t m = 0; m < t.a[std::size_t(k - 1)].size(); ++m) {
            const std::string ms = std::to_string(m);
            out.push_back({"a[" + ks + "][" + ms + "]", "a_{" + ks + "," + ms + "}", t.a[std::size_t(k - 1)][m]});
            if (m < t.b[std::size_t(k - 1)].size())
                out.push_back({"b[" + ks + "][" + ms + "]", "b_{" + ks + "," + ms + "}", t.b[std::size_t(k - 1)][m]});
            out.push_back({"c[" + ks + "][" + ms + "]", "c_{" + ks + "," + ms + "}", t.c[std::size_t(k - 1)][m]});
        }
    }
    return out;
}

std::vector<Line> equation_lines(const std::vector<HierarchyEquation> &eqs) {
    std::vector<Line> out;
    for (const auto &e : eqs)
        for (std::size_t i = 0; i < e.rhs.size(); ++i) {
            const std::string is = std::to_string(i + 1), ns = std::to_string(e.order);
            out.push_back({"u" + is + "_t" + ns, "u_{" + is + ",t_{" + ns + "}}", e.rhs[i]});
        }
    return out;
}

void write_lines(std::ostream &os, const std::vector<Line> &lines, Format f) {
    if (f == Format::Latex) {
        os << "\\begin{align*}\n";
        for (std::size_t i = 0; i < lines.size(); ++i)
            os << lines[i].latex_lhs << " &= " << latex::render(lines[i].rhs) << (i + 1 < lines.size() ? " \\\\" : "")
               << "\n";
        os << "\\end{align*}\n";
        return;
    }
    for (const auto &l : lines) os << "  " << l.text_lhs << " = " << l.rhs.str() << "\n";
}

void write_header(std::ostream &os, const JobConfig &c, const SpectralModel &m, Format f) {
    const char *lead = f == Format::Latex ? "% " : "";
    os << lead << "model: " << model_name(m.kind) << "\n";
    os << lead << "N: " << m.n << "\n";
    os << lead << "order: " << c.order << "\n";
    os << lead << "epsilon: " << m.eps.str() << "\n";
    if (m.kind == ModelKind::Multi) os << lead << "sigma: " << m.sigma.str() << "\n";
    os << lead << "isospectral: " << (m.iso ? "yes" : "no") << "\n";
}

int cmd_gen(const JobConfig &c, std::ostream &os) {
    SpectralModel m = model_of(c);
    RecursionTable t = solve_recursion(m, c.order);
    std::vector<HierarchyEquation> eqs;
    for (int n = 0; n <= c.order; ++n) eqs.push_back(hierarchy_equation(t, n));
    if (c.format == Format::Json) {
        Json eq = Json::array();
        for (const auto &e : eqs) eq.push_back(io::encode(e));
        os << io::dump(io::wrap("generation", Json{{"config", config_json(c)},
                                                   {"table", io::encode(t)},
                                                   {"equations", std::move(eq)}}));
        return kExitOk;
    }
    write_header(os, c, m, c.format);
    os << (c.format == Format::Latex ? "% recursion\n" : "recursion\n");
    write_lines(os, table_lines(t), c.format);
    os << (c.format == Format::Latex ? "% hierarchy\n" : "hierarchy\n");
    write_lines(os, equation_lines(eqs), c.format);
    return kExitOk;
}

int lie_blocks(LieCase lc, const JobConfig &c) {
    switch (lc) {
    case LieCase::A12:
    case LieCase::A22:
    case LieCase::A32: return 2;
    case LieCase::A13: return 3;
    default: return c.n.value_or(3);
    }
}

int cmd_table(const JobConfig &c, std::ostream &os) {
    if (c.lie_case.empty()) {
        // Recursion table of a model.
        SpectralModel m = model_of(c);
        RecursionTable t = solve_recursion(m, c.order);
        if (c.format == Format::Json) {
            os << io::dump(io::wrap("recursion-table", Json{{"config", config_json(c)}, {"table", io::encode(t)}}));
            return kExitOk;
        }
        write_header(os, c, m, c.format);
        write_lines(os, table_lines(t), c.format);
        return kExitOk;
    }
    LieCase lc = parse_case(c.lie_case);
    LieBasis b = build_basis(lc, lie_blocks(lc, c));
    StructureReport rep = verify_structure_constants(b);
    if (c.format == Format::Json) {
        Json brackets = Json::array();
        for (const auto &e : rep.entries) {
            Json coeffs = Json::array();
            for (const auto &p : e.coefficients) coeffs.push_back(io::encode(p));
            brackets.push_back(Json{{"i", e.i + 1}, {"j", e.j + 1}, {"in_span", e.pass}, {"coefficients", std::move(coeffs)}});
        }
        os << io::dump(io::wrap("commutator-table", Json{{"basis", io::encode(b)}, {"brackets", std::move(brackets)}}));
        return kExitOk;
    }
    if (c.format == Format::Latex) {
        os << "% case: " << case_name(lc) << "\n% N: " << b.blocks << "\n\\begin{align*}\n";
        for (std::size_t k = 0; k < rep.entries.size(); ++k) {
            const auto &e = rep.entries[k];
            os << "[" << element_name(b, e.i) << "," << element_name(b, e.j) << "] &= ";
            std::string rhs;
            for (int i = 0; i < b.size(); ++i) {
                const DiffPoly &p = e.coefficients[std::size_t(i)];
                if (p.is_zero()) continue;
                std::string s = latex::render(p);
                if (!rhs.empty()) rhs += " + ";
                rhs += (p.size() > 1 ? "\\left(" + s + "\\right)" : s == "1" ? "" : s == "-1" ? "-" : s + " ") +
                       element_name(b, i);
            }
            os << (rhs.empty() ? "0" : rhs) << (k + 1 < rep.entries.size() ? " \\\\" : "") << "\n";
        }
        os << "\\end{align*}\n";
        return kExitOk;
    }
    os << "case: " << case_name(lc) << "\nN: " << b.blocks << "\n";
    for (const auto &e : rep.entries)
        os << "  [" << element_name(b, e.i) << "," << element_name(b, e.j) << "] = " << expansion_str(b, e.coefficients)
           << (e.pass ? "" : "  (outside the span)") << "\n";
    return rep.pass() ? kExitOk : kExitFailures;
}

// ---- verify -----------------------------------------------------------------

CheckReport structure_checks(const std::string &prefix, const LieBasis &b, const StructureReport &rep) {
    CheckReport r;
    for (const auto &e : rep.entries) {
        std::string detail;
        if (!e.pass) detail = "computed " + expansion_str(b, e.coefficients) + (e.note.empty() ? "" : "; " + e.note);
        r.add(prefix + " [" + element_name(b, e.i) + "," + element_name(b, e.j) + "]", e.pass, detail);
    }
    return r;
}

CheckReport suite_lie(const JobConfig &c) {
    std::vector<LieCase> cases;
    if (c.lie_case.empty())
        cases = {LieCase::A12, LieCase::A13, LieCase::A22, LieCase::A32, LieCase::A1N, LieCase::A2N, LieCase::A3N};
    else
        cases = {parse_case(c.lie_case)};
    CheckReport r;
    for (LieCase lc : cases) {
        LieBasis b = build_basis(lc, lie_blocks(lc, c));
        const std::string name = case_name(lc);
        const bool family = lc == LieCase::A1N || lc == LieCase::A2N || lc == LieCase::A3N;
        if (!family) {
            r.append(structure_checks(name, b, verify_structure_constants(b, printed_relations(lc))));
            continue;
        }
        const std::string tag = name + " N=" + std::to_string(b.blocks);
        StructureReport grading = verify_grading(b);
        std::string first;
        for (const auto &e : grading.entries)
            if (!e.pass && first.empty()) first = "[" + element_name(b, e.i) + "," + element_name(b, e.j) + "] " + e.note;
        r.add(tag + " grading closure", grading.pass(), first);
        auto jac = jacobi_failures(b);
        r.add(tag + " Jacobi identity", jac.empty(),
              jac.empty() ? "" : std::to_string(jac.size()) + " failing triples");
    }
    return r;
}

std::string matrix_detail(const MatrixExpr &m) { return m.is_zero() ? "" : "residual " + m.str(); }

CheckReport suite_zero_curvature(const JobConfig &c) {
    SpectralModel m = model_of(c);
    CheckReport r;
    for (int n = 0; n <= c.order; ++n) {
        MatrixExpr res = verify_zero_curvature(m, n);
        r.add(model_name(m.kind) + " n=" + std::to_string(n) + " zero curvature", res.is_zero(), matrix_detail(res));
    }
    return r;
}

CheckReport suite_hamiltonian(const JobConfig &c) {
    SpectralModel m = model_of(c);
    m.iso = true;
    CheckReport r;
    r.append(verify_gradient_relations(m, c.max));
    r.append(verify_operator_identities(m, c.max));
    r.append(verify_poisson_brackets(m, c.max));
    if (m.kind == ModelKind::Coupled) {
        FlowVector flow = k_flow(1, m.eps);
        for (int k = 0; k <= std::min(c.max, 1); ++k) {
            HamiltonianFunctional h = conserved_quantity(k, m.eps);
            r.add("density I_" + std::to_string(k) + " conserved along K_1", conserved_along(h.density, flow),
                  "density " + h.density.str());
        }
    }
    return r;
}

CheckReport suite_symmetries(const JobConfig &c) {
    DiffPoly eps = c.epsilon.empty() ? DiffPoly::eps() : binding("epsilon", c.epsilon);
    CheckReport r;
    r.append(verify_algebra(c.max, c.max, eps));
    for (int m = 1; m <= c.max; ++m)
        for (int n = 0; m + n <= c.max; ++n) r.append(verify_symmetry_equation(m, n, eps));
    for (int m = 0; m < c.max; ++m) r.append(verify_strong_symmetry(m, eps));
    r.append(verify_hereditary_random(c.pairs, c.seed, eps));
    r.append(report_tau_with_time_terms(c.max, eps));
    return r;
}

void write_report(std::ostream &os, const JobConfig &c, const CheckReport &r, double ms) {
    if (c.format == Format::Json) {
        Json data{{"config", config_json(c)}, {"summary", io::encode(r)}};
        if (c.timing) data["wall_time_ms"] = ms;
        os << io::dump(io::wrap("verification", std::move(data)));
        return;
    }
    if (c.format == Format::Latex) {
        os << "% suite: " << c.suite << "\n\\begin{tabular}{ll}\n";
        for (const auto &k : r.checks) {
            const char *st = k.pass ? "pass" : k.reported ? "reported" : "fail";
            os << "\\texttt{" << escape_latex(k.name) << "} & " << st << " \\\\\n";
        }
        os << "\\end{tabular}\n";
        os << "% " << r.passed() << " passed, " << r.hard_failures() << " failed, " << r.discrepancies() << " reported\n";
        return;
    }
    os << "suite: " << c.suite << "\n";
    for (const auto &k : r.checks) {
        if (k.reported && !k.pass) continue;
        os << (k.pass ? "PASS  " : "FAIL  ") << k.name << "\n";
        if (!k.pass && !k.detail.empty()) os << "      " << clip(k.detail) << "\n";
    }
    if (r.discrepancies() > 0) {
        os << "reported discrepancies\n";
        for (const auto &k : r.checks)
            if (k.reported && !k.pass) os << "  " << k.name << (k.detail.empty() ? "" : ": " + clip(k.detail)) << "\n";
    }
    os << "result: " << r.passed() << " passed, " << r.hard_failures() << " failed, " << r.discrepancies()
       << " reported\n";
    if (c.timing) os << "wall time: " << ms << " ms\n";
}

int cmd_verify(const JobConfig &c, std::ostream &os) {
    static const std::vector<std::pair<std::string, std::function<CheckReport(const JobConfig &)>>> suites{
        {"lie-algebra", suite_lie},
        {"zero-curvature", suite_zero_curvature},
        {"hamiltonian", suite_hamiltonian},
        {"symmetries", suite_symmetries}};
    for (const auto &[name, fn] : suites) {
        if (name != c.suite) continue;
        auto start = std::chrono::steady_clock::now();
        CheckReport r = fn(c);
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        write_report(os, c, r, ms);
        return r.pass() ? kExitOk : kExitFailures;
    }
    throw BadSpec("unknown suite '" + c.suite + "'");
}

void check_caps(const JobConfig &c) {
    const int cap = max_order();
    if (c.order < 0) throw OrderExceeded("--order must be nonnegative");
    if (c.max < 0) throw OrderExceeded("--max must be nonnegative");
    if (c.order > cap)
        throw OrderExceeded("--order " + std::to_string(c.order) + " exceeds the cap " + std::to_string(cap));
    if (c.command == "verify" && c.max > cap) throw OrderExceeded("--max " + std::to_string(c.max) + " exceeds the cap " + std::to_string(cap));
    if (c.pairs < 0) throw BadSpec("--pairs must be nonnegative");
}

} // namespace

int max_order() {
    const char *env = std::getenv("HIERARCHY_FORGE_MAX_ORDER");
    if (!env || !*env) return kDefaultMaxOrder;
    std::string s(env);
    if (s.size() > 6 || s.find_first_not_of("0123456789") != std::string::npos)
        throw BadSpec("HIERARCHY_FORGE_MAX_ORDER must be a nonnegative integer, got '" + s + "'");
    return std::stoi(s);
}

SpectralModel model_of(const JobConfig &c) {
    ModelKind kind = parse_model(c.model);
    SpectralModel m;
    switch (kind) {
    case ModelKind::Scalar:
        if (c.n && *c.n != 1) throw BadModel("kdv has exactly one component");
        m = SpectralModel::scalar();
        break;
    case ModelKind::Coupled:
        if (c.n && *c.n != 2) throw BadModel("coupled has exactly two components");
        m = SpectralModel::coupled();
        break;
    case ModelKind::Multi:
        if (!c.n) throw BadModel("multi requires --N");
        if (*c.n < 1) throw BadModel("--N must be positive");
        m = SpectralModel::multi(*c.n, c.leading_seed);
        break;
    }
    if (c.leading_seed && kind != ModelKind::Multi) throw BadSpec("--leading-seed applies to multi only");
    if (!c.sigma.empty()) {
        if (kind != ModelKind::Multi) throw BadSpec("--sigma applies to multi only");
        m.sigma = binding("sigma", c.sigma);
    }
    if (!c.epsilon.empty()) m.eps = binding("epsilon", c.epsilon);
    const std::vector<std::pair<int, const std::string *>> seeds{{params::alpha, &c.alpha},
                                                                 {params::alpha1, &c.alpha1},
                                                                 {params::alpha2, &c.alpha2},
                                                                 {params::beta1, &c.beta1}};
    for (const auto &[id, text] : seeds) {
        if (text->empty()) continue;
        DiffPoly v = binding(params::name(id), *text);
        for (auto &s : m.seeds) s = set_param(s, id, v);
    }
    m.iso = c.iso;
    m.validate();
    return m;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    JobConfig cfg;
    std::string format = "text";
    CLI::App app{"Integrable hierarchy generator and verifier", "hierarchy-forge"};
    app.require_subcommand(1);

    auto common = [&](CLI::App *sub) {
        sub->add_option("--model", cfg.model, "kdv, coupled or multi")->check(CLI::IsMember({"kdv", "coupled", "multi"}));
        sub->add_option("--N", cfg.n, "number of components (multi)");
        sub->add_option("--order", cfg.order, "highest hierarchy order");
        sub->add_option("--epsilon", cfg.epsilon, "value of eps, symbolic when omitted");
        sub->add_option("--sigma", cfg.sigma, "value of sigma (multi), symbolic when omitted");
        sub->add_option("--alpha", cfg.alpha, "seed alpha (kdv)");
        sub->add_option("--alpha1", cfg.alpha1, "seed alpha1 (coupled)");
        sub->add_option("--alpha2", cfg.alpha2, "seed alpha2 (coupled)");
        sub->add_option("--beta1", cfg.beta1, "seed beta1 (multi)");
        sub->add_flag("--iso", cfg.iso, "isospectral reduction k_m = 0");
        sub->add_flag("--leading-seed", cfg.leading_seed, "multi seeds (beta1, 0, ..., 0)");
        sub->add_option("--format", format, "text, latex or json")->check(CLI::IsMember({"text", "latex", "json"}));
        sub->add_option("--out", cfg.out, "output file, stdout when omitted");
    };

    CLI::App *gen = app.add_subcommand("gen", "recursion table and hierarchy equations");
    common(gen);
    CLI::App *table = app.add_subcommand("table", "commutator table of an algebra, or a recursion table");
    common(table);
    table->add_option("--case", cfg.lie_case, "A12, A13, A1N, A22, A2N, A32 or A3N");
    CLI::App *verify = app.add_subcommand("verify", "run a verification suite");
    common(verify);
    verify->add_option("suite", cfg.suite, "lie-algebra, zero-curvature, hamiltonian or symmetries")
        ->required()
        ->check(CLI::IsMember({"lie-algebra", "zero-curvature", "hamiltonian", "symmetries"}));
    verify->add_option("--case", cfg.lie_case, "restrict lie-algebra to one case");
    verify->add_option("--max", cfg.max, "index bound for hamiltonian and symmetries");
    verify->add_option("--pairs", cfg.pairs, "random hereditary pairs");
    verify->add_option("--seed", cfg.seed, "seed of the random pairs");
    verify->add_flag("--timing", cfg.timing, "report wall time");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    for (CLI::App *sub : app.get_subcommands()) cfg.command = sub->get_name();
    cfg.format = format == "json" ? Format::Json : format == "latex" ? Format::Latex : Format::Text;

    try {
        check_caps(cfg);
        std::ostringstream buf;
        int code = kExitOk;
        if (cfg.command == "gen") code = cmd_gen(cfg, buf);
        else if (cfg.command == "table") code = cmd_table(cfg, buf);
        else code = cmd_verify(cfg, buf);
        if (cfg.out.empty()) {
            out << buf.str();
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            if (!f) {
                err << "error: cannot open " << cfg.out << "\n";
                return kExitUsage;
            }
            f << buf.str();
        }
        return code;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace hforge::cli
