#include "hforge/parse.hpp"

#include <cctype>

namespace hforge {

namespace {

class Parser {
public:
    Parser(const std::string &s, int components) : s_(s), components_(components) {}

    DiffPoly run() {
        DiffPoly p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    const std::string &s_;
    int components_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string &what) const {
        throw MalformedExpression(what + " at offset " + std::to_string(pos_) + " in \"" + s_ + "\"");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int integer() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a number");
        if (pos_ - start > 9) fail("number too large");
        return std::stoi(s_.substr(start, pos_ - start));
    }

    DiffPoly expr() {
        DiffPoly r;
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        r = term();
        if (neg) r = -r;
        for (;;) {
            if (eat('+')) r += term();
            else if (eat('-')) r -= term();
            else return r;
        }
    }

    DiffPoly term() {
        DiffPoly r = power();
        for (;;) {
            if (eat('*')) {
                r *= power();
            } else if (eat('/')) {
                DiffPoly d = power();
                if (d.size() != 1 || !d.terms().begin()->first.is_one())
                    fail("division by a non-constant");
                r *= Q(1) / d.terms().begin()->second;
            } else {
                return r;
            }
        }
    }

    DiffPoly power() {
        if (eat('-')) return -power();
        // A single generator keeps its code so that negative powers of
        // parameters stay representable.
        std::optional<std::uint32_t> code;
        DiffPoly base = primary(code);
        if (!eat('^')) return base;
        bool neg = eat('-');
        int e = integer();
        if (neg) e = -e;
        if (e >= 0) return base.pow(e);
        if (code && !atom::x_dependent(*code)) return DiffPoly(Monomial::of(*code, e));
        if (base.size() == 1 && base.terms().begin()->first.is_one()) {
            Q c = base.terms().begin()->second;
            Q r = 1;
            for (int i = 0; i < -e; ++i) r /= c;
            return DiffPoly(r);
        }
        fail("negative power of a non-parameter");
    }

    DiffPoly primary(std::optional<std::uint32_t> &code) {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            DiffPoly r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return DiffPoly(Q(s_.substr(start, pos_ - start)));
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        std::string id = s_.substr(start, pos_ - start);
        if (id == "I") {
            if (!eat('(')) fail("expected '(' after I");
            DiffPoly body = expr();
            if (!eat(')')) fail("expected ')'");
            return int_x(body);
        }
        code = symbol(id, start);
        return DiffPoly(Monomial::of(*code));
    }

    std::uint32_t symbol(const std::string &id, std::size_t at) {
        // Value of the all-digit suffix of s starting at i, or -1.
        auto digits_from = [](const std::string &s, std::size_t i) {
            if (i >= s.size() || s.size() - i > 6) return -1;
            for (std::size_t j = i; j < s.size(); ++j)
                if (!std::isdigit(static_cast<unsigned char>(s[j]))) return -1;
            return std::stoi(s.substr(i));
        };
        if (id == "x") return atom::x();
        if (id == "lambda") return atom::lambda();
        std::size_t us = id.find('_');
        std::string head = id.substr(0, us);
        std::string tail = us == std::string::npos ? "" : id.substr(us + 1);
        if (head.size() > 1 && head[0] == 'u') {
            int comp = digits_from(head, 1);
            if (comp >= 0) {
                int order = 0;
                if (!tail.empty()) {
                    if (tail.find_first_not_of('x') == std::string::npos) order = int(tail.size());
                    else if (tail[0] == 'x' && (order = digits_from(tail, 1)) >= 0) {
                    } else {
                        pos_ = at;
                        fail("bad jet suffix in " + id);
                    }
                }
                if (comp < 1) {
                    pos_ = at;
                    fail("component u0 does not exist");
                }
                if (components_ > 0 && comp > components_) {
                    pos_ = at;
                    fail("undeclared component u" + std::to_string(comp));
                }
                return atom::jet(comp, order);
            }
        }
        if (head.size() > 1 && head[0] == 'k') {
            int m = digits_from(head, 1);
            if (m >= 0) {
                if (!tail.empty() && tail.find_first_not_of('t') != std::string::npos) {
                    pos_ = at;
                    fail("bad time derivative in " + id);
                }
                return atom::time(m, int(tail.size()));
            }
        }
        if (auto p = params::lookup(id)) return atom::param(*p);
        pos_ = at;
        fail("unknown symbol " + id);
    }
};

} // namespace

DiffPoly parse_poly(const std::string &text, int components) { return Parser(text, components).run(); }

} // namespace hforge
