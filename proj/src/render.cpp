#include "hforge/render.hpp"

#include <sstream>

namespace hforge::latex {

namespace {

std::string time_symbol(int m, int r) {
    std::string s = "k_{" + std::to_string(m) + "}";
    if (r == 1) s += "'";
    else if (r == 2) s += "''";
    else if (r > 2) s += "^{(" + std::to_string(r) + ")}";
    return s + "(t)";
}

std::string base(std::uint32_t code) {
    int a = int(atom::first(code)), b = int(atom::second(code));
    switch (atom::kind(code)) {
    case Kind::Param: return params::latex(a);
    case Kind::Time: return time_symbol(a, b);
    case Kind::Lambda: return "\\lambda";
    case Kind::X: return "x";
    case Kind::Jet: return jet(a, b);
    }
    return "?";
}

std::string power(const std::string &b, int e) {
    if (e == 1) return b;
    // k_m(t) carries parentheses already; wrap so the exponent binds to it.
    std::string wrapped = b.back() == ')' ? "\\left(" + b + "\\right)" : b;
    return wrapped + "^{" + std::to_string(e) + "}";
}

std::string monomial(const Monomial &m) {
    std::string out;
    for (const auto &[code, e] : m.atoms()) {
        if (!out.empty()) out += " ";
        out += power(base(code), e);
    }
    for (const auto &[b, e] : m.antis()) {
        if (!out.empty()) out += " ";
        out += power("\\partial^{-1}\\left(" + monomial(*b) + "\\right)", e);
    }
    return out;
}

std::string rational(const Q &q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

std::string factor(const DiffPoly &p) {
    std::string s = render(p);
    return p.size() > 1 ? "\\left(" + s + "\\right)" : s;
}

std::string word(const Word &w) {
    std::string out;
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
        if (i > 0) out += " \\partial^{-1} ";
        const DiffPoly &c = w.coeffs[i];
        bool followed = i + 1 < w.coeffs.size() || w.dpow > 0;
        if (c == DiffPoly(1) && (i > 0 || followed)) continue;
        if (c == DiffPoly(-1) && i == 0 && followed) {
            out += "-";
            continue;
        }
        out += factor(c);
    }
    if (w.dpow == 1) out += " \\partial";
    else if (w.dpow > 1) out += " \\partial^{" + std::to_string(w.dpow) + "}";
    auto trim = [](std::string s) {
        while (!s.empty() && s.front() == ' ') s.erase(s.begin());
        return s;
    };
    return trim(out);
}

std::string entry(const OpEntry &e) {
    if (e.empty()) return "0";
    std::string out;
    for (const auto &w : e) {
        std::string s = word(w);
        if (!out.empty()) out += s.rfind("-", 0) == 0 ? " " : " + ";
        out += s;
    }
    return out;
}

template <class F> std::string pmatrix(int rows, int cols, F cell) {
    std::ostringstream os;
    os << "\\begin{pmatrix}";
    for (int r = 0; r < rows; ++r) {
        os << (r ? " \\\\ " : " ");
        for (int c = 0; c < cols; ++c) os << (c ? " & " : "") << cell(r, c);
    }
    os << " \\end{pmatrix}";
    return os.str();
}

} // namespace

std::string jet(int comp, int order) {
    std::string s = "u_{" + std::to_string(comp);
    if (order > 0) s += "," + std::string(std::size_t(order), 'x');
    return s + "}";
}

std::string render(const DiffPoly &p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto &[m, c] : p.terms()) {
        Q a = abs(c);
        if (first) out += c < 0 ? "-" : "";
        else out += c < 0 ? " - " : " + ";
        first = false;
        if (m.is_one()) {
            out += rational(a);
            continue;
        }
        if (a != 1) out += rational(a) + " ";
        out += monomial(m);
    }
    return out;
}

std::string render(const FlowVector &v) {
    return pmatrix(int(v.size()), 1, [&](int r, int) { return render(v[std::size_t(r)]); });
}

std::string render(const OperatorExpr &op) {
    if (op.dim() == 1) return entry(op.at(0, 0));
    return pmatrix(op.dim(), op.dim(), [&](int r, int c) { return entry(op.at(r, c)); });
}

std::string render(const ConstMatrix &m) {
    return pmatrix(m.order(), m.order(), [&](int r, int c) { return render(m(r, c)); });
}

} // namespace hforge::latex
