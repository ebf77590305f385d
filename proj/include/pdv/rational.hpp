#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational scalars: arbitrary-precision rationals with "p/q" text I/O.
 *
 * All numeric work in this library is exact.  There are no epsilons anywhere:
 * equality of rationals, polynomials and rational functions is decided
 * symbolically, and any check that would need a tolerance is a design bug.
 */

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace pdv {

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator (cpp_rational canonicalizes on construction).
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Parse "p", "-p" or "p/q" into an exact rational.  Throws std::invalid_argument
/// on malformed input or a zero denominator.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(text));
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in rational literal");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational literal: " + text);
    }
}

/// Render a rational as "p" or "p/q" (q > 1 only when needed).
inline std::string format_rational(const Rational& r) {
    const Integer num = boost::multiprecision::numerator(r);
    const Integer den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace pdv
