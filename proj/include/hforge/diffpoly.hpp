#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hforge/errors.hpp"

namespace hforge {

using Q = mpq_class;

// Generators of the ring other than formal antiderivatives. Each one packs
// into a 32-bit code; the kind sits in the top bits so codes sort by kind.
enum class Kind : std::uint8_t { Param = 0, Time = 1, Lambda = 2, X = 3, Jet = 4 };

namespace atom {
constexpr std::uint32_t make(Kind k, std::uint32_t a = 0, std::uint32_t b = 0) {
    return (std::uint32_t(k) << 28) | (a << 14) | b;
}
constexpr Kind kind(std::uint32_t code) { return Kind(code >> 28); }
constexpr std::uint32_t first(std::uint32_t code) { return (code >> 14) & 0x3fff; }
constexpr std::uint32_t second(std::uint32_t code) { return code & 0x3fff; }
constexpr bool x_dependent(std::uint32_t code) { return kind(code) >= Kind::X; }

inline std::uint32_t param(int id) { return make(Kind::Param, std::uint32_t(id)); }
inline std::uint32_t time(int m, int r = 0) { return make(Kind::Time, std::uint32_t(m), std::uint32_t(r)); }
inline std::uint32_t lambda() { return make(Kind::Lambda); }
inline std::uint32_t x() { return make(Kind::X); }
inline std::uint32_t jet(int comp, int order) { return make(Kind::Jet, std::uint32_t(comp), std::uint32_t(order)); }
} // namespace atom

// Named scalar parameters. The built-in ones have fixed ids so that the
// canonical order never depends on declaration history.
namespace params {
constexpr int epsilon = 0;
constexpr int alpha = 1;
constexpr int alpha1 = 2;
constexpr int alpha2 = 3;
constexpr int beta1 = 4;
constexpr int sigma = 5;
constexpr int t = 6;     // explicit time in tau flows
constexpr int scale = 7; // homotopy scaling variable for conserved densities

int declare(const std::string &name);
std::optional<int> lookup(const std::string &name);
std::string name(int id);
std::string latex(int id);
std::string pretty(int id);
} // namespace params

class Monomial;
using MonoPtr = std::shared_ptr<const Monomial>;

// Product of generator powers. Antiderivative factors carry a unit-coefficient
// body that depends on x only through x, jets and nested antiderivatives.
class Monomial {
public:
    using AtomPow = std::pair<std::uint32_t, int>;
    using AntiPow = std::pair<MonoPtr, int>;

    Monomial() = default;

    static Monomial of(std::uint32_t code, int e = 1);
    static Monomial anti(const Monomial &body, int e = 1);

    const std::vector<AtomPow> &atoms() const { return atoms_; }
    const std::vector<AntiPow> &antis() const { return antis_; }

    bool is_one() const { return atoms_.empty() && antis_.empty(); }
    int exponent(std::uint32_t code) const;
    int x_degree() const { return exponent(atom::x()); }
    int lambda_degree() const { return exponent(atom::lambda()); }
    int anti_count() const;     // antiderivative factors, nested ones included
    int max_jet_order() const;  // -1 if no jets
    int max_component() const;  // 0 if no jets, looks inside bodies
    bool x_free() const;        // no x, jets or antiderivatives

    Monomial operator*(const Monomial &o) const;
    bool divides(const Monomial &o) const;
    Monomial quotient(const Monomial &d) const; // o / d, requires d | o

    // (x-independent factor, x-dependent factor)
    std::pair<Monomial, Monomial> split_constant() const;

    Monomial without_atom(std::uint32_t code) const;
    Monomial with_atom(std::uint32_t code, int e) const;
    Monomial without_anti(std::size_t idx) const;

    void collect_bodies(std::vector<MonoPtr> &out) const;

    std::size_t hash() const;

private:
    std::vector<AtomPow> atoms_;  // sorted by code, nonzero exponents
    std::vector<AntiPow> antis_;  // sorted by body, positive exponents

    friend int compare(const Monomial &, const Monomial &);
    void mul_atom(std::uint32_t code, int e);
    void mul_anti(const MonoPtr &body, int e);
};

// Canonical total order: lambda exponent, x exponent, jets, antiderivative
// factors (bodies compared recursively), then parameters and time symbols.
int compare(const Monomial &a, const Monomial &b);
inline bool operator==(const Monomial &a, const Monomial &b) { return compare(a, b) == 0; }
inline bool operator!=(const Monomial &a, const Monomial &b) { return compare(a, b) != 0; }

struct MonoLess {
    bool operator()(const Monomial &a, const Monomial &b) const { return compare(a, b) < 0; }
};

class DiffPoly {
public:
    using TermMap = std::map<Monomial, Q, MonoLess>;

    DiffPoly() = default;
    DiffPoly(int c);
    DiffPoly(const Q &c);
    explicit DiffPoly(const Monomial &m, const Q &c = 1);

    static DiffPoly u(int comp, int order = 0);
    static DiffPoly x();
    static DiffPoly lambda(int e = 1);
    static DiffPoly param(int id, int e = 1);
    static DiffPoly k(int m, int r = 0);
    static DiffPoly eps() { return param(params::epsilon); }

    const TermMap &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const; // no x-dependence at all
    Q coefficient(const Monomial &m) const;

    void add_term(const Monomial &m, const Q &c);

    DiffPoly &operator+=(const DiffPoly &o);
    DiffPoly &operator-=(const DiffPoly &o);
    DiffPoly &operator*=(const DiffPoly &o);
    DiffPoly &operator*=(const Q &c);
    DiffPoly operator-() const;

    friend DiffPoly operator+(DiffPoly a, const DiffPoly &b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly &b) { return a -= b; }
    friend DiffPoly operator*(const DiffPoly &a, const DiffPoly &b);
    friend DiffPoly operator*(DiffPoly a, const Q &c) { return a *= c; }
    friend DiffPoly operator*(const Q &c, DiffPoly a) { return a *= c; }
    friend bool operator==(const DiffPoly &a, const DiffPoly &b);
    friend bool operator!=(const DiffPoly &a, const DiffPoly &b) { return !(a == b); }

    DiffPoly pow(int e) const;

    // Coefficient of lambda^e (lambda removed from the monomials).
    DiffPoly lambda_coeff(int e) const;
    int min_lambda() const;
    int max_lambda() const;

    std::string str() const;

private:
    TermMap terms_;
};

std::ostream &operator<<(std::ostream &os, const DiffPoly &p);

using FlowVector = std::vector<DiffPoly>;

// ---- calculus -------------------------------------------------------------

DiffPoly d_x(const DiffPoly &p);
DiffPoly d_x(const DiffPoly &p, int times);
// Explicit time derivative: t -> 1, k_m^(r) -> k_m^(r+1). Jets are untouched.
DiffPoly partial_t(const DiffPoly &p);

// Antiderivative with zero integration constant. The exact part is extracted
// and the remainder is carried by antiderivative nodes over reduced monomials.
DiffPoly int_x(const DiffPoly &p);
// Splits p = d_x(primitive) + remainder with the remainder supported on
// reduced monomials; int_x(p) = primitive + sum of nodes over the remainder.
struct ExactSplit {
    DiffPoly primitive;
    DiffPoly remainder;
};
ExactSplit split_exact(const DiffPoly &p);
// True iff p is a total x-derivative inside the ring.
bool is_exact(const DiffPoly &p);

DiffPoly partial_jet(const DiffPoly &p, int comp, int order);
// Top-level antiderivative nodes occurring in p.
std::vector<MonoPtr> anti_nodes(const DiffPoly &p);
DiffPoly partial_anti(const DiffPoly &p, const Monomial &body);

DiffPoly gateaux(const DiffPoly &p, const FlowVector &direction);
FlowVector gateaux(const FlowVector &target, const FlowVector &direction);

DiffPoly euler_derivative(const DiffPoly &p, int comp);

// Replaces generators. The callback returns a replacement for an atom code or
// nullopt to keep it. Antiderivative bodies are rewritten and re-integrated.
using AtomRule = std::function<std::optional<DiffPoly>(std::uint32_t)>;
DiffPoly substitute(const DiffPoly &p, const AtomRule &rule);
FlowVector substitute(const FlowVector &v, const AtomRule &rule);

// Common substitutions.
DiffPoly set_param(const DiffPoly &p, int id, const DiffPoly &value);
DiffPoly kill_time_symbols(const DiffPoly &p); // all k_m^(r) -> 0
DiffPoly scale_jets(const DiffPoly &p, const DiffPoly &factor);

int max_component(const DiffPoly &p);
void require_components(const DiffPoly &p, int n);

// ---- flow vectors ---------------------------------------------------------

FlowVector operator+(const FlowVector &a, const FlowVector &b);
FlowVector operator-(const FlowVector &a, const FlowVector &b);
FlowVector operator*(const DiffPoly &c, const FlowVector &v);
bool is_zero(const FlowVector &v);
FlowVector d_x(const FlowVector &v);
FlowVector int_x(const FlowVector &v);
FlowVector partial_t(const FlowVector &v);

} // namespace hforge
