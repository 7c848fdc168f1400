#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hforge/diffpoly.hpp"
#include "hforge/liealg.hpp"

namespace hforge {

// Matrices over DiffPoly; λ enters as an ordinary generator with integer
// exponent, so a finite Laurent polynomial is a single entry.
using MatrixExpr = ConstMatrix;

MatrixExpr d_x(const MatrixExpr &m);
MatrixExpr lambda_coeff(const MatrixExpr &m, int e);

// Truncated series in λ. Exponents in [low, high] are known; anything below
// `low` is unknown rather than zero and arithmetic narrows the window.
class LaurentSeries {
public:
    LaurentSeries() = default;
    LaurentSeries(int high, int low) : high_(high), low_(low) {}
    static LaurentSeries exact(const DiffPoly &p); // finite Laurent polynomial, window [min, max]

    int high() const { return high_; }
    int low() const { return low_; }
    const DiffPoly &coeff(int e) const; // WindowExceeded outside the window
    void set(int e, const DiffPoly &c);
    const std::map<int, DiffPoly> &terms() const { return c_; }

    LaurentSeries &operator+=(const LaurentSeries &o);
    friend LaurentSeries operator+(LaurentSeries a, const LaurentSeries &b) { return a += b; }
    friend LaurentSeries operator-(LaurentSeries a, const LaurentSeries &b);
    friend LaurentSeries operator*(const LaurentSeries &a, const LaurentSeries &b);
    friend LaurentSeries operator*(const DiffPoly &c, LaurentSeries a);
    friend bool operator==(const LaurentSeries &a, const LaurentSeries &b);

    LaurentSeries shift(int k) const; // multiply by λ^k
    LaurentSeries d_x() const;
    // Known part as a DiffPoly in λ.
    DiffPoly to_poly() const;

private:
    int high_ = 0, low_ = 0;
    std::map<int, DiffPoly> c_;
};

// (plus, minus) of λ^n s: plus keeps exponents >= 0, i.e. series indices
// 0..n; the index n belongs to plus only.
std::pair<LaurentSeries, LaurentSeries> split_plus_minus(const LaurentSeries &s, int n);

enum class ModelKind { Scalar, Coupled, Multi };

std::string model_name(ModelKind k);
ModelKind parse_model(const std::string &s); // kdv, coupled, multi; throws BadModel

struct SpectralModel {
    ModelKind kind = ModelKind::Scalar;
    int n = 1;                   // components
    std::vector<DiffPoly> seeds; // c_{k,0}
    DiffPoly sigma = 1;          // weight of the wrapped convolution
    DiffPoly eps = DiffPoly::eps();
    bool iso = false;            // all k_m = 0

    static SpectralModel scalar();
    static SpectralModel coupled();
    // Seeds are β1 in every component unless `leading_only`, which puts β1
    // in the first component and zero elsewhere.
    static SpectralModel multi(int n, bool leading_only = false);
    void validate() const; // BadModel
};

// An unknown slot of the W ansatz: letter in {a, b, c}, component k, basis element.
struct AnsatzSlot {
    char letter;
    int component;
    int element;
};

struct SpectralPair {
    SpectralModel model;
    LieBasis basis;
    MatrixExpr U;
    MatrixExpr dU_dlambda;
    std::vector<MatrixExpr> dU_du; // per component
    std::vector<AnsatzSlot> W;
    LaurentSeries lambda_t;
};

// Basis element of generator g (0 = h, 1 = e, 2 = f) in block k (1-based).
const ConstMatrix &element(const LieBasis &b, int g, int k);

SpectralPair build_spectral_pair(const SpectralModel &model, int depth = 3);

// λ_t truncated to indices 0..depth-1: sum k_m λ^{-m}.
LaurentSeries lambda_t_series(int depth, bool iso = false);

} // namespace hforge
