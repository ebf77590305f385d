#pragma once

/**
 * @file calculus.hpp
 * @brief Exact Cartan calculus on a global polynomial chart.
 *
 * Vector fields are coefficient vectors over the coordinate frame d/dx_i;
 * k-forms store one rational-function coefficient per strictly increasing
 * index tuple.  All operators (exterior derivative, interior product, Lie
 * derivative, wedge, bracket) are exact.
 */

#include "scalar.hpp"

#include <algorithm>

namespace pdv {

class VectorField {
public:
    explicit VectorField(ChartPtr chart)
        : chart_(std::move(chart)), comps_(chart_->dim(), Scalar(chart_)) {}

    VectorField(ChartPtr chart, std::vector<Scalar> comps)
        : chart_(std::move(chart)), comps_(std::move(comps)) {
        if (comps_.size() != chart_->dim())
            throw std::invalid_argument("vector field component arity mismatch");
        for (const auto& c : comps_) require_same_chart(*c.chart(), *chart_, "vector field");
    }

    /// The coordinate vector field d/dx_i.
    static VectorField coordinate(const ChartPtr& chart, std::size_t i) {
        VectorField X(chart);
        X.comps_.at(i) = Scalar(chart, 1);
        return X;
    }

    const ChartPtr& chart() const { return chart_; }
    const Scalar& comp(std::size_t i) const { return comps_.at(i); }
    Scalar& comp(std::size_t i) { return comps_.at(i); }
    const std::vector<Scalar>& comps() const { return comps_; }

    bool is_zero() const {
        return std::all_of(comps_.begin(), comps_.end(),
                           [](const Scalar& s) { return s.is_zero(); });
    }

    /// Directional derivative X(f).
    Scalar apply(const Scalar& f) const {
        require_same_chart(*chart_, *f.chart(), "X(f)");
        Scalar acc(chart_);
        for (std::size_t i = 0; i < comps_.size(); ++i)
            if (!comps_[i].is_zero()) acc += comps_[i] * f.derivative(i);
        return acc;
    }

    VectorField operator+(const VectorField& o) const {
        require_same_chart(*chart_, *o.chart_, "vf +");
        VectorField r(chart_);
        for (std::size_t i = 0; i < comps_.size(); ++i) r.comps_[i] = comps_[i] + o.comps_[i];
        return r;
    }
    VectorField operator-(const VectorField& o) const {
        require_same_chart(*chart_, *o.chart_, "vf -");
        VectorField r(chart_);
        for (std::size_t i = 0; i < comps_.size(); ++i) r.comps_[i] = comps_[i] - o.comps_[i];
        return r;
    }
    VectorField operator-() const {
        VectorField r(chart_);
        for (std::size_t i = 0; i < comps_.size(); ++i) r.comps_[i] = -comps_[i];
        return r;
    }
    VectorField operator*(const Scalar& f) const {
        require_same_chart(*chart_, *f.chart(), "vf * f");
        VectorField r(chart_);
        for (std::size_t i = 0; i < comps_.size(); ++i) r.comps_[i] = comps_[i] * f;
        return r;
    }

    bool operator==(const VectorField& o) const {
        return *chart_ == *o.chart_ && comps_ == o.comps_;
    }
    bool operator!=(const VectorField& o) const { return !(*this == o); }

private:
    ChartPtr chart_;
    std::vector<Scalar> comps_;
};

inline VectorField operator*(const Scalar& f, const VectorField& X) { return X * f; }

/// Lie bracket of vector fields: [X,Y]^i = X(Y^i) - Y(X^i).
inline VectorField vf_bracket(const VectorField& X, const VectorField& Y) {
    require_same_chart(*X.chart(), *Y.chart(), "[X,Y]");
    VectorField r(X.chart());
    for (std::size_t i = 0; i < X.chart()->dim(); ++i)
        r.comp(i) = X.apply(Y.comp(i)) - Y.apply(X.comp(i));
    return r;
}

/// A differential k-form with rational-function coefficients, indexed by
/// strictly increasing coordinate index tuples.
class KForm {
public:
    using Indices = std::vector<std::size_t>;

    KForm(ChartPtr chart, unsigned degree) : chart_(std::move(chart)), degree_(degree) {}

    /// The coordinate 1-form dx_i.
    static KForm coordinate_diff(const ChartPtr& chart, std::size_t i) {
        KForm a(chart, 1);
        a.set({i}, Scalar(chart, 1));
        return a;
    }

    const ChartPtr& chart() const { return chart_; }
    unsigned degree() const { return degree_; }
    const std::map<Indices, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Scalar coeff(const Indices& idx) const {
        auto it = terms_.find(idx);
        return it == terms_.end() ? Scalar(chart_) : it->second;
    }

    void set(const Indices& idx, const Scalar& s) {
        check_indices(idx);
        if (s.is_zero()) terms_.erase(idx);
        else terms_.insert_or_assign(idx, s);
    }

    void add(const Indices& idx, const Scalar& s) {
        check_indices(idx);
        auto it = terms_.find(idx);
        if (it == terms_.end()) {
            if (!s.is_zero()) terms_.emplace(idx, s);
        } else {
            it->second += s;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    /// Add a not-necessarily-sorted term, sorting indices and tracking the sign
    /// of the permutation; repeated indices contribute nothing.
    void add_unsorted(Indices idx, Scalar s) {
        int sign = 1;
        for (std::size_t i = 0; i + 1 < idx.size(); ++i)
            for (std::size_t j = 0; j + 1 < idx.size() - i; ++j) {
                if (idx[j] == idx[j + 1]) return;
                if (idx[j] > idx[j + 1]) {
                    std::swap(idx[j], idx[j + 1]);
                    sign = -sign;
                }
            }
        for (std::size_t i = 0; i + 1 < idx.size(); ++i)
            if (idx[i] == idx[i + 1]) return;
        add(idx, sign < 0 ? -s : s);
    }

    KForm operator+(const KForm& o) const {
        check_compat(o, "form +");
        KForm r = *this;
        for (const auto& [idx, s] : o.terms_) r.add(idx, s);
        return r;
    }
    KForm operator-(const KForm& o) const {
        check_compat(o, "form -");
        KForm r = *this;
        for (const auto& [idx, s] : o.terms_) r.add(idx, -s);
        return r;
    }
    KForm operator-() const {
        KForm r(chart_, degree_);
        for (const auto& [idx, s] : terms_) r.terms_.emplace(idx, -s);
        return r;
    }
    KForm operator*(const Scalar& f) const {
        KForm r(chart_, degree_);
        for (const auto& [idx, s] : terms_) {
            Scalar p = s * f;
            if (!p.is_zero()) r.terms_.emplace(idx, std::move(p));
        }
        return r;
    }
    KForm& operator+=(const KForm& o) { return *this = *this + o; }
    KForm& operator-=(const KForm& o) { return *this = *this - o; }

    bool operator==(const KForm& o) const {
        return *chart_ == *o.chart_ && degree_ == o.degree_ && terms_ == o.terms_;
    }
    bool operator!=(const KForm& o) const { return !(*this == o); }

    /// Evaluate on vector fields (one per degree), yielding a scalar.
    Scalar operator()(const std::vector<VectorField>& args) const;

private:
    ChartPtr chart_;
    unsigned degree_;
    std::map<Indices, Scalar> terms_;

    void check_indices(const Indices& idx) const {
        if (idx.size() != degree_) throw std::invalid_argument("form index arity mismatch");
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] >= chart_->dim()) throw std::invalid_argument("form index out of range");
            if (i + 1 < idx.size() && idx[i] >= idx[i + 1])
                throw std::invalid_argument("form indices must be strictly increasing");
        }
    }
    void check_compat(const KForm& o, const char* what) const {
        require_same_chart(*chart_, *o.chart_, what);
        if (degree_ != o.degree_) throw std::invalid_argument(std::string(what) + ": degree mismatch");
    }
};

inline KForm operator*(const Scalar& f, const KForm& a) { return a * f; }

/// Wedge product.
inline KForm wedge(const KForm& a, const KForm& b) {
    require_same_chart(*a.chart(), *b.chart(), "wedge");
    KForm r(a.chart(), a.degree() + b.degree());
    for (const auto& [ia, sa] : a.terms())
        for (const auto& [ib, sb] : b.terms()) {
            KForm::Indices idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            r.add_unsorted(std::move(idx), sa * sb);
        }
    return r;
}

/// Exterior derivative of a function, as a 1-form.
inline KForm exterior_d(const Scalar& f) {
    KForm r(f.chart(), 1);
    for (std::size_t i = 0; i < f.chart()->dim(); ++i) r.add({i}, f.derivative(i));
    return r;
}

/// Exterior derivative of a k-form.
inline KForm exterior_d(const KForm& a) {
    KForm r(a.chart(), a.degree() + 1);
    for (const auto& [idx, s] : a.terms())
        for (std::size_t i = 0; i < a.chart()->dim(); ++i) {
            const Scalar ds = s.derivative(i);
            if (ds.is_zero()) continue;
            KForm::Indices full;
            full.push_back(i);
            full.insert(full.end(), idx.begin(), idx.end());
            r.add_unsorted(std::move(full), ds);
        }
    return r;
}

/// Interior product: contraction of a k-form with a vector field in the first slot.
inline KForm interior(const VectorField& X, const KForm& a) {
    require_same_chart(*X.chart(), *a.chart(), "interior");
    if (a.degree() == 0) throw std::invalid_argument("interior product of a 0-form");
    KForm r(a.chart(), a.degree() - 1);
    for (const auto& [idx, s] : a.terms())
        for (std::size_t pos = 0; pos < idx.size(); ++pos) {
            const Scalar& xi = X.comp(idx[pos]);
            if (xi.is_zero()) continue;
            KForm::Indices rest;
            for (std::size_t q = 0; q < idx.size(); ++q)
                if (q != pos) rest.push_back(idx[q]);
            Scalar term = xi * s;
            r.add(rest, (pos % 2 == 0) ? term : -term);
        }
    return r;
}

inline Scalar KForm::operator()(const std::vector<VectorField>& args) const {
    if (args.size() != degree_) throw std::invalid_argument("form arity mismatch");
    KForm cur = *this;
    for (const auto& X : args) {
        if (cur.degree() == 0) break;
        cur = interior(X, cur);
    }
    return cur.coeff({});
}

/// Cartan's formula: L_X a = i_X d a + d i_X a.
inline KForm lie_derivative(const VectorField& X, const KForm& a) {
    if (a.degree() == 0) {
        KForm r(a.chart(), 0);
        r.add({}, X.apply(a.coeff({})));
        return r;
    }
    return interior(X, exterior_d(a)) + exterior_d(interior(X, a));
}

/// Pullback of a k-form along the polynomial map whose b-th component is
/// `images[b]` (a polynomial on the source chart of the result).
inline KForm pullback(const KForm& a, const std::vector<Poly>& images) {
    if (images.size() != a.chart()->dim())
        throw std::invalid_argument("pullback arity mismatch");
    ChartPtr src = images.empty() ? a.chart() : images.front().chart();
    // d(phi_b), precomputed per target coordinate.
    std::vector<KForm> dphi;
    dphi.reserve(images.size());
    for (const auto& img : images) dphi.push_back(exterior_d(Scalar(img)));
    KForm r(src, a.degree());
    for (const auto& [idx, s] : a.terms()) {
        KForm term(src, 0);
        term.add({}, s.substitute(images));
        for (std::size_t b : idx) term = wedge(term, dphi[b]);
        r += term;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Tangent lifts.  The tangent chart of (x_1..x_n) is (x_1..x_n, v_1..v_n).
// ---------------------------------------------------------------------------

/// Basic pullback of a function along the bundle projection TM -> M.
inline Scalar lift_scalar_base(const Scalar& f, const ChartPtr& tangent) {
    return f.rename_to(tangent);
}

/// Tangent (fibrewise-derivative) lift of a function: f_T = sum df/dx_i * v_i.
inline Scalar lift_scalar_tangent(const Scalar& f, const ChartPtr& tangent) {
    const std::size_t n = f.chart()->dim();
    Scalar acc(tangent);
    for (std::size_t i = 0; i < n; ++i)
        acc += f.derivative(i).rename_to(tangent) * Scalar::coordinate(tangent, n + i);
    return acc;
}

/// Vertical lift of a vector field: components move to the fibre directions.
inline VectorField lift_vf_vertical(const VectorField& X, const ChartPtr& tangent) {
    const std::size_t n = X.chart()->dim();
    VectorField r(tangent);
    for (std::size_t i = 0; i < n; ++i) r.comp(n + i) = X.comp(i).rename_to(tangent);
    return r;
}

/// Complete (tangent) lift of a vector field.
inline VectorField lift_vf_complete(const VectorField& X, const ChartPtr& tangent) {
    const std::size_t n = X.chart()->dim();
    VectorField r(tangent);
    for (std::size_t i = 0; i < n; ++i) {
        r.comp(i) = lift_scalar_base(X.comp(i), tangent);
        r.comp(n + i) = lift_scalar_tangent(X.comp(i), tangent);
    }
    return r;
}

/// Pullback of a form along TM -> M (coefficients lifted, indices unchanged).
inline KForm lift_form_base(const KForm& a, const ChartPtr& tangent) {
    KForm r(tangent, a.degree());
    for (const auto& [idx, s] : a.terms()) r.set(idx, s.rename_to(tangent));
    return r;
}

/// The core contraction behind the tangent lift of forms: contract the base
/// pullback of a k-form with the tautological vertical vector sum v_i d/dx_i.
inline KForm tangent_contraction(const KForm& a, const ChartPtr& tangent) {
    const std::size_t n = a.chart()->dim();
    VectorField taut(tangent);
    for (std::size_t i = 0; i < n; ++i) taut.comp(i) = Scalar::coordinate(tangent, n + i);
    return interior(taut, lift_form_base(a, tangent));
}

/// Tangent lift of a k-form: a_T = d(tau(a)) + tau(da), where tau is the
/// tangent contraction above.
inline KForm lift_form_tangent(const KForm& a, const ChartPtr& tangent) {
    if (a.degree() == 0) {
        KForm r(tangent, 0);
        r.add({}, lift_scalar_tangent(a.coeff({}), tangent));
        return r;
    }
    return exterior_d(tangent_contraction(a, tangent)) +
           tangent_contraction(exterior_d(a), tangent);
}

} // namespace pdv
