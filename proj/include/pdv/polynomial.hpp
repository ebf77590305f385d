#pragma once

/**
 * @file polynomial.hpp
 * @brief Multivariate polynomials over exact rationals on a fixed chart.
 *
 * Terms are kept in a map ordered by graded lexicographic monomial order
 * (total degree first, then lex on exponents), so iteration order, leading
 * terms and printing are all canonical.  Zero coefficients are never stored.
 *
 * The gcd is computed by the classical primitive polynomial-remainder-sequence
 * algorithm, recursing on the number of variables.  It is what makes rational
 * functions canonically reducible, which in turn makes equality of all derived
 * objects plain data equality.
 */

#include "chart.hpp"
#include "rational.hpp"

#include <map>
#include <sstream>
#include <vector>

namespace pdv {

using Exponents = std::vector<unsigned>;

/// Graded lexicographic order on exponent vectors of equal length.
struct GradedLexLess {
    bool operator()(const Exponents& a, const Exponents& b) const {
        unsigned long da = 0, db = 0;
        for (unsigned e : a) da += e;
        for (unsigned e : b) db += e;
        if (da != db) return da < db;
        return a < b; // lex tie-break
    }
};

class Poly {
public:
    using TermMap = std::map<Exponents, Rational, GradedLexLess>;

    explicit Poly(ChartPtr chart) : chart_(std::move(chart)) {}

    /// Constant polynomial.
    Poly(ChartPtr chart, const Rational& c) : chart_(std::move(chart)) {
        if (c != 0) terms_[Exponents(chart_->dim(), 0)] = c;
    }

    /// The coordinate function x_i.
    static Poly coordinate(const ChartPtr& chart, std::size_t i) {
        Poly p(chart);
        Exponents e(chart->dim(), 0);
        e.at(i) = 1;
        p.terms_[e] = 1;
        return p;
    }

    static Poly constant(const ChartPtr& chart, const Rational& c) { return Poly(chart, c); }

    const ChartPtr& chart() const { return chart_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree() == 0);
    }

    /// The constant term (0 if absent).
    Rational constant_term() const {
        auto it = terms_.find(Exponents(chart_->dim(), 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    unsigned long total_degree() const {
        if (terms_.empty()) return 0;
        unsigned long d = 0;
        for (unsigned e : terms_.rbegin()->first) d += e;
        return d;
    }

    /// Leading coefficient in graded-lex order (0 for the zero polynomial).
    Rational leading_coeff() const {
        return terms_.empty() ? Rational(0) : terms_.rbegin()->second;
    }

    Exponents leading_monomial() const {
        if (terms_.empty()) throw std::logic_error("leading_monomial of zero polynomial");
        return terms_.rbegin()->first;
    }

    /// Degree in a single variable.
    unsigned degree_in(std::size_t var) const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
        return d;
    }

    void add_term(const Exponents& e, const Rational& c) {
        if (e.size() != chart_->dim())
            throw std::invalid_argument("exponent arity does not match chart dimension");
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (c != 0) terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r(chart_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }

    Poly operator+(const Poly& o) const {
        require_same_chart(*chart_, *o.chart_, "poly +");
        Poly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }

    Poly operator-(const Poly& o) const {
        require_same_chart(*chart_, *o.chart_, "poly -");
        Poly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }

    Poly operator*(const Poly& o) const {
        require_same_chart(*chart_, *o.chart_, "poly *");
        Poly r(chart_);
        for (const auto& [ea, ca] : terms_)
            for (const auto& [eb, cb] : o.terms_) {
                Exponents e(ea.size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    Poly operator*(const Rational& c) const {
        Poly r(chart_);
        if (c == 0) return r;
        for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
        return r;
    }

    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    bool operator==(const Poly& o) const { return *chart_ == *o.chart_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly pow(unsigned n) const {
        Poly r(chart_, 1);
        Poly b = *this;
        for (; n; n >>= 1) {
            if (n & 1) r *= b;
            if (n > 1) b *= b;
        }
        return r;
    }

    /// Partial derivative with respect to coordinate `var`.
    Poly derivative(std::size_t var) const {
        Poly r(chart_);
        for (const auto& [e, c] : terms_) {
            if (e.at(var) == 0) continue;
            Exponents d = e;
            --d[var];
            r.add_term(d, c * Rational(e[var]));
        }
        return r;
    }

    /// Evaluate at a rational point (one value per chart coordinate).
    Rational eval(const std::vector<Rational>& point) const {
        if (point.size() != chart_->dim())
            throw std::invalid_argument("evaluation point arity mismatch");
        Rational acc(0);
        for (const auto& [e, c] : terms_) {
            Rational term = c;
            for (std::size_t i = 0; i < e.size(); ++i)
                for (unsigned k = 0; k < e[i]; ++k) term *= point[i];
            acc += term;
        }
        return acc;
    }

    /// Substitute each coordinate by a polynomial on a (possibly different)
    /// chart; all images must share one chart.
    Poly substitute(const std::vector<Poly>& images) const {
        if (images.size() != chart_->dim())
            throw std::invalid_argument("substitution arity mismatch");
        ChartPtr target = images.empty() ? chart_ : images.front().chart();
        Poly acc(target);
        for (const auto& [e, c] : terms_) {
            Poly term = Poly::constant(target, c);
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) term *= images[i].pow(e[i]);
            acc += term;
        }
        return acc;
    }

    /// Reinterpret on another chart via a coordinate-name map: each coordinate
    /// that occurs in a term must exist (by mapped name) in the target chart.
    Poly rename_to(const ChartPtr& target, const std::string& prefix = "") const {
        std::vector<bool> used(chart_->dim(), false);
        for (const auto& [e, coeff] : terms_)
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i]) used[i] = true;
        std::vector<Poly> images;
        images.reserve(chart_->dim());
        for (std::size_t i = 0; i < chart_->dim(); ++i)
            images.push_back(used[i] ? Poly::coordinate(
                                           target, target->index_of(prefix + chart_->coord(i)))
                                     : Poly(target));
        return substitute(images);
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const Rational& c = it->second;
            if (!first) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            Rational a = boost::multiprecision::abs(c);
            bool has_var = false;
            for (unsigned e : it->first)
                if (e) has_var = true;
            if (a != 1 || !has_var) os << format_rational(a);
            bool star = (a != 1 || !has_var);
            for (std::size_t i = 0; i < it->first.size(); ++i) {
                if (it->first[i] == 0) continue;
                if (star) os << "*";
                os << chart_->coord(i);
                if (it->first[i] > 1) os << "^" << it->first[i];
                star = true;
            }
            first = false;
        }
        return os.str();
    }

private:
    ChartPtr chart_;
    TermMap terms_;
};

inline Poly operator*(const Rational& c, const Poly& p) { return p * c; }

// ---------------------------------------------------------------------------
// Exact division and gcd
// ---------------------------------------------------------------------------

/// Exact division: returns f/g, throwing std::domain_error when g does not
/// divide f.  Works by leading-term cancellation in graded-lex order.
inline Poly exact_divide(const Poly& f, const Poly& g) {
    require_same_chart(*f.chart(), *g.chart(), "exact_divide");
    if (g.is_zero()) throw std::domain_error("division by zero polynomial");
    Poly q(f.chart());
    Poly r = f;
    const Exponents lg = g.leading_monomial();
    const Rational lgc = g.leading_coeff();
    while (!r.is_zero()) {
        const Exponents lr = r.leading_monomial();
        Exponents d(lr.size());
        for (std::size_t i = 0; i < lr.size(); ++i) {
            if (lr[i] < lg[i]) throw std::domain_error("inexact polynomial division");
            d[i] = lr[i] - lg[i];
        }
        Poly t(f.chart());
        t.add_term(d, r.leading_coeff() / lgc);
        q += t;
        r -= t * g;
    }
    return q;
}

namespace detail {

/// Coefficient of v^k, as a polynomial with v-degree zero.
inline Poly coeff_of_power(const Poly& f, std::size_t var, unsigned k) {
    Poly r(f.chart());
    for (const auto& [e, c] : f.terms()) {
        if (e.at(var) != k) continue;
        Exponents d = e;
        d[var] = 0;
        r.add_term(d, c);
    }
    return r;
}

/// Pseudo-remainder of f by g with respect to `var` (deg_var g >= 1).
inline Poly pseudo_remainder(Poly f, const Poly& g, std::size_t var) {
    const unsigned dg = g.degree_in(var);
    const Poly lcg = coeff_of_power(g, var, dg);
    while (!f.is_zero() && f.degree_in(var) >= dg) {
        const unsigned df = f.degree_in(var);
        const Poly lcf = coeff_of_power(f, var, df);
        Poly shift(f.chart());
        Exponents e(f.chart()->dim(), 0);
        e[var] = df - dg;
        shift.add_term(e, 1);
        f = f * lcg - g * (lcf * shift);
    }
    return f;
}

} // namespace detail

Poly poly_gcd(const Poly& a, const Poly& b);

namespace detail {

/// Content of f with respect to `var`: gcd of the coefficient polynomials.
inline Poly content(const Poly& f, std::size_t var) {
    Poly c(f.chart());
    for (unsigned k = 0; k <= f.degree_in(var); ++k) {
        Poly ck = coeff_of_power(f, var, k);
        if (!ck.is_zero()) c = poly_gcd(c, ck);
    }
    return c;
}

} // namespace detail

/// Monic normalization: divide by the graded-lex leading coefficient.
inline Poly monic(const Poly& f) {
    if (f.is_zero()) return f;
    return f * (Rational(1) / f.leading_coeff());
}

/// Multivariate gcd over Q, normalized monic (gcd(0,0) = 0).
inline Poly poly_gcd(const Poly& a, const Poly& b) {
    require_same_chart(*a.chart(), *b.chart(), "poly_gcd");
    if (a.is_zero()) return monic(b);
    if (b.is_zero()) return monic(a);
    if (a.is_constant() || b.is_constant()) return Poly::constant(a.chart(), 1);

    // Main variable: the highest-index coordinate occurring in either operand.
    std::size_t var = 0;
    for (std::size_t i = 0; i < a.chart()->dim(); ++i)
        if (a.degree_in(i) > 0 || b.degree_in(i) > 0) var = i;

    Poly f = a, g = b;
    if (f.degree_in(var) < g.degree_in(var)) std::swap(f, g);
    if (g.degree_in(var) == 0) return poly_gcd(detail::content(f, var), g);

    const Poly cf = detail::content(f, var);
    const Poly cg = detail::content(g, var);
    const Poly c = poly_gcd(cf, cg);
    f = exact_divide(f, cf);
    g = exact_divide(g, cg);

    // Primitive PRS.
    while (true) {
        Poly r = detail::pseudo_remainder(f, g, var);
        if (r.is_zero()) return monic(c * g);
        if (r.degree_in(var) == 0) return monic(c);
        f = g;
        g = exact_divide(r, detail::content(r, var));
    }
}

} // namespace pdv
