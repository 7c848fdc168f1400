#include "hforge/spectral.hpp"

#include <algorithm>

namespace hforge {

MatrixExpr d_x(const MatrixExpr &m) {
    return m.map([](const DiffPoly &p) { return d_x(p); });
}

MatrixExpr lambda_coeff(const MatrixExpr &m, int e) {
    return m.map([e](const DiffPoly &p) { return p.lambda_coeff(e); });
}

// ---- LaurentSeries ----------------------------------------------------------------

LaurentSeries LaurentSeries::exact(const DiffPoly &p) {
    if (p.is_zero()) return LaurentSeries(0, 0);
    LaurentSeries s(p.max_lambda(), p.min_lambda());
    for (int e = s.low_; e <= s.high_; ++e) s.set(e, p.lambda_coeff(e));
    return s;
}

const DiffPoly &LaurentSeries::coeff(int e) const {
    static const DiffPoly zero;
    if (e < low_) throw WindowExceeded("exponent " + std::to_string(e) + " below the known window");
    auto it = c_.find(e);
    return it == c_.end() ? zero : it->second;
}

void LaurentSeries::set(int e, const DiffPoly &c) {
    if (e < low_ || e > high_) throw WindowExceeded("exponent " + std::to_string(e) + " outside the window");
    if (c.is_zero())
        c_.erase(e);
    else
        c_[e] = c;
}

LaurentSeries &LaurentSeries::operator+=(const LaurentSeries &o) {
    LaurentSeries r(std::max(high_, o.high_), std::max(low_, o.low_));
    for (int e = r.low_; e <= r.high_; ++e) {
        DiffPoly v;
        if (e <= high_) v += coeff(e);
        if (e <= o.high_) v += o.coeff(e);
        r.set(e, v);
    }
    return *this = std::move(r);
}

LaurentSeries operator-(LaurentSeries a, const LaurentSeries &b) { return a += DiffPoly(-1) * b; }

LaurentSeries operator*(const LaurentSeries &a, const LaurentSeries &b) {
    LaurentSeries r(a.high_ + b.high_, std::max(a.low_ + b.high_, b.low_ + a.high_));
    for (const auto &[ea, ca] : a.c_)
        for (const auto &[eb, cb] : b.c_) {
            int e = ea + eb;
            if (e < r.low_) continue;
            r.set(e, r.coeff(e) + ca * cb);
        }
    return r;
}

LaurentSeries operator*(const DiffPoly &c, LaurentSeries a) {
    for (auto it = a.c_.begin(); it != a.c_.end();) {
        it->second = c * it->second;
        it = it->second.is_zero() ? a.c_.erase(it) : std::next(it);
    }
    return a;
}

bool operator==(const LaurentSeries &a, const LaurentSeries &b) {
    return a.high_ == b.high_ && a.low_ == b.low_ && a.c_ == b.c_;
}

LaurentSeries LaurentSeries::shift(int k) const {
    LaurentSeries r(high_ + k, low_ + k);
    for (const auto &[e, c] : c_) r.c_[e + k] = c;
    return r;
}

LaurentSeries LaurentSeries::d_x() const {
    LaurentSeries r(high_, low_);
    for (const auto &[e, c] : c_) r.set(e, hforge::d_x(c));
    return r;
}

DiffPoly LaurentSeries::to_poly() const {
    DiffPoly p;
    for (const auto &[e, c] : c_) p += c * DiffPoly::lambda(e);
    return p;
}

std::pair<LaurentSeries, LaurentSeries> split_plus_minus(const LaurentSeries &s, int n) {
    LaurentSeries shifted = s.shift(n);
    if (shifted.low() > 0)
        throw WindowExceeded("series known only down to index " + std::to_string(-s.low()) + ", split needs " +
                             std::to_string(n));
    // Each part is exactly zero on the other's exponents, so both keep the full window.
    LaurentSeries plus(shifted.high(), shifted.low()), minus(shifted.high(), shifted.low());
    for (const auto &[e, c] : shifted.terms()) (e >= 0 ? plus : minus).set(e, c);
    return {plus, minus};
}

// ---- models -------------------------------------------------------------------------

std::string model_name(ModelKind k) {
    switch (k) {
    case ModelKind::Scalar: return "kdv";
    case ModelKind::Coupled: return "coupled";
    case ModelKind::Multi: return "multi";
    }
    return "?";
}

ModelKind parse_model(const std::string &s) {
    if (s == "kdv" || s == "scalar") return ModelKind::Scalar;
    if (s == "coupled") return ModelKind::Coupled;
    if (s == "multi") return ModelKind::Multi;
    throw BadModel("unknown model '" + s + "'");
}

SpectralModel SpectralModel::scalar() {
    SpectralModel m;
    m.kind = ModelKind::Scalar;
    m.n = 1;
    m.seeds = {DiffPoly::param(params::alpha)};
    return m;
}

SpectralModel SpectralModel::coupled() {
    SpectralModel m;
    m.kind = ModelKind::Coupled;
    m.n = 2;
    m.seeds = {DiffPoly::param(params::alpha1), DiffPoly::param(params::alpha2)};
    return m;
}

SpectralModel SpectralModel::multi(int n, bool leading_only) {
    if (n < 1) throw BadModel("multi model needs N >= 1");
    SpectralModel m;
    m.kind = ModelKind::Multi;
    m.n = n;
    m.sigma = DiffPoly::param(params::sigma);
    for (int k = 0; k < n; ++k)
        m.seeds.push_back(leading_only && k > 0 ? DiffPoly() : DiffPoly::param(params::beta1));
    return m;
}

void SpectralModel::validate() const {
    if (n < 1) throw BadModel("component count must be positive");
    if (kind == ModelKind::Scalar && n != 1) throw BadModel("kdv model has one component");
    if (kind == ModelKind::Coupled && n != 2) throw BadModel("coupled model has two components");
    if (int(seeds.size()) != n) throw BadModel("one seed per component required");
    for (const auto &s : seeds)
        if (!s.is_constant()) throw BadModel("seeds must be constants");
}

const ConstMatrix &element(const LieBasis &b, int g, int k) { return b.elements[std::size_t(3 * (k - 1) + g)]; }

LaurentSeries lambda_t_series(int depth, bool iso) {
    LaurentSeries s(0, -(depth - 1));
    if (!iso)
        for (int m = 0; m < depth; ++m) s.set(-m, DiffPoly::k(m));
    return s;
}

SpectralPair build_spectral_pair(const SpectralModel &model, int depth) {
    model.validate();
    SpectralPair p;
    p.model = model;
    p.basis = build_basis(model.kind == ModelKind::Coupled ? LieCase::A12 : LieCase::A1N, model.n, model.eps);
    const auto &b = p.basis;
    p.dU_dlambda = DiffPoly(Q(1, 4)) * element(b, 1, 1);
    p.U = DiffPoly::lambda() * p.dU_dlambda + element(b, 2, 1);
    for (int k = 1; k <= model.n; ++k) {
        p.U -= DiffPoly::u(k) * element(b, 1, k);
        p.dU_du.push_back(DiffPoly(-1) * element(b, 1, k));
    }
    static const char letters[3] = {'a', 'b', 'c'};
    for (int k = 1; k <= model.n; ++k)
        for (int g = 0; g < 3; ++g) p.W.push_back({letters[g], k, 3 * (k - 1) + g});
    p.lambda_t = lambda_t_series(depth, model.iso);
    return p;
}

} // namespace hforge
