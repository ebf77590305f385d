#pragma once

/**
 * @file scalar.hpp
 * @brief Rational functions num/den on a chart, kept in canonical reduced form.
 *
 * Invariants: den != 0; gcd(num, den) = 1; den is monic in graded-lex order;
 * num = 0 implies den = 1.  With these, operator== is plain data equality and
 * agrees with cross-multiplied equality (tested).
 */

#include "polynomial.hpp"

namespace pdv {

class Scalar {
public:
    explicit Scalar(ChartPtr chart)
        : num_(Poly(chart)), den_(Poly(chart, 1)) {}

    Scalar(ChartPtr chart, const Rational& c)
        : num_(Poly(chart, c)), den_(Poly(chart, 1)) {}

    Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        require_same_chart(*num_.chart(), *den_.chart(), "scalar");
        reduce();
    }

    /// Promote a polynomial.
    explicit Scalar(Poly num) : num_(std::move(num)), den_(Poly(num_.chart(), 1)) {}

    static Scalar coordinate(const ChartPtr& chart, std::size_t i) {
        return Scalar(Poly::coordinate(chart, i));
    }
    static Scalar constant(const ChartPtr& chart, const Rational& c) {
        return Scalar(chart, c);
    }

    const ChartPtr& chart() const { return num_.chart(); }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    /// Constant value, if the scalar is a constant; throws otherwise.
    Rational constant_value() const {
        if (!num_.is_constant() || !den_.is_constant())
            throw std::domain_error("scalar is not constant");
        return num_.constant_term() / den_.constant_term();
    }

    Scalar operator-() const { return raw(-num_, den_); }

    Scalar operator+(const Scalar& o) const {
        return Scalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Scalar operator-(const Scalar& o) const {
        return Scalar(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    Scalar operator*(const Scalar& o) const { return Scalar(num_ * o.num_, den_ * o.den_); }

    Scalar operator/(const Scalar& o) const {
        if (o.is_zero()) throw std::domain_error("division by zero scalar");
        return Scalar(num_ * o.den_, den_ * o.num_);
    }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    /// Canonical forms make equality plain data equality.
    bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /// Partial derivative (quotient rule).
    Scalar derivative(std::size_t var) const {
        return Scalar(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
    }

    /// Evaluate at a rational point; throws std::domain_error on a pole.
    Rational eval(const std::vector<Rational>& point) const {
        const Rational d = den_.eval(point);
        if (d == 0) throw std::domain_error("scalar evaluation at a denominator zero");
        return num_.eval(point) / d;
    }

    /// Substitute coordinates by polynomials (chart change / pullback).
    Scalar substitute(const std::vector<Poly>& images) const {
        return Scalar(num_.substitute(images), den_.substitute(images));
    }

    Scalar rename_to(const ChartPtr& target, const std::string& prefix = "") const {
        return Scalar(num_.rename_to(target, prefix), den_.rename_to(target, prefix));
    }

    /// Size proxy used for pivot selection over the function field.
    unsigned long complexity() const { return num_.total_degree() + den_.total_degree(); }

    std::string str() const {
        if (den_ == Poly(chart(), 1)) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

private:
    Poly num_, den_;

    static Scalar raw(Poly n, Poly d) {
        Scalar s(n.chart());
        s.num_ = std::move(n);
        s.den_ = std::move(d);
        return s;
    }

    void reduce() {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = Poly(num_.chart(), 1);
            return;
        }
        const Poly g = poly_gcd(num_, den_);
        num_ = exact_divide(num_, g);
        den_ = exact_divide(den_, g);
        const Rational lc = den_.leading_coeff();
        if (lc != 1) {
            num_ = num_ * (Rational(1) / lc);
            den_ = den_ * (Rational(1) / lc);
        }
    }
};

inline Scalar operator*(const Rational& c, const Scalar& s) {
    return Scalar(s.chart(), c) * s;
}

/// Pivot weight hook for the generic linear algebra (prefer simpler entries).
inline unsigned long pivot_weight(const Scalar& s) { return s.complexity(); }
inline unsigned long pivot_weight(const Rational&) { return 0; }

} // namespace pdv
