#ifndef CANON_RATIONAL_HPP
#define CANON_RATIONAL_HPP

#include <canon/errors.hpp>

#include <gmpxx.h>

#include <cctype>
#include <cstdio>
#include <string>
#include <string_view>

namespace canon {

using Integer = mpz_class;
using Rational = mpq_class;

namespace detail {

inline bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace detail

/// Parses an exact rational. Accepted forms: "p", "p/q", and decimal
/// notation with an optional exponent ("0.125", "1e-6", "-2.5E3").
/// Decimals are converted exactly, never through binary floating point.
inline Rational parse_rational(std::string_view text)
{
    const std::string_view s = detail::trim(text);
    const std::string quoted = "'" + std::string(text) + "'";
    if (s.empty()) throw ParseError("empty rational " + quoted);

    std::string_view body = s;
    bool negative = false;
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }

    Rational value;
    if (const auto slash = body.find('/'); slash != std::string_view::npos) {
        const auto num = body.substr(0, slash);
        const auto den = body.substr(slash + 1);
        if (!detail::all_digits(num) || !detail::all_digits(den)) {
            throw ParseError("invalid rational " + quoted);
        }
        const Integer d(std::string(den), 10);
        if (d == 0) throw ParseError("zero denominator in rational " + quoted);
        value = Rational(Integer(std::string(num), 10), d);
        value.canonicalize();
    } else {
        std::string_view mantissa = body;
        long exponent = 0;
        if (const auto e = body.find_first_of("eE"); e != std::string_view::npos) {
            mantissa = body.substr(0, e);
            std::string_view exp_text = body.substr(e + 1);
            bool exp_negative = false;
            if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
                exp_negative = exp_text.front() == '-';
                exp_text.remove_prefix(1);
            }
            if (!detail::all_digits(exp_text) || exp_text.size() > 6) {
                throw ParseError("invalid exponent in " + quoted);
            }
            exponent = std::stol(std::string(exp_text));
            if (exp_negative) exponent = -exponent;
        }
        std::string digits;
        if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
            const auto int_part = mantissa.substr(0, dot);
            const auto frac_part = mantissa.substr(dot + 1);
            if ((!int_part.empty() && !detail::all_digits(int_part))
                || (!frac_part.empty() && !detail::all_digits(frac_part))
                || (int_part.empty() && frac_part.empty())) {
                throw ParseError("invalid rational " + quoted);
            }
            digits = std::string(int_part) + std::string(frac_part);
            exponent -= static_cast<long>(frac_part.size());
        } else {
            if (!detail::all_digits(mantissa)) throw ParseError("invalid rational " + quoted);
            digits = std::string(mantissa);
        }
        value = Rational(Integer(digits, 10));
        if (exponent != 0) {
            Integer scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
            if (exponent < 0) {
                value /= scale;
            } else {
                value *= scale;
            }
        }
        value.canonicalize();
    }
    return negative ? Rational(-value) : value;
}

/// Canonical "p/q" form ("p" when the denominator is one).
inline std::string to_string(const Rational& q)
{
    return q.get_str(10);
}

/// Nearest binary64 value when numerator and denominator are exact doubles
/// (IEEE division rounds correctly); GMP truncation otherwise.
inline double to_double(const Rational& q)
{
    if (mpz_sizeinbase(q.get_num_mpz_t(), 2) <= 53 && mpz_sizeinbase(q.get_den_mpz_t(), 2) <= 53)
        return q.get_num().get_d() / q.get_den().get_d();
    return q.get_d();
}

/// Lossless conversion of a finite binary64 value.
inline Rational from_double(double x)
{
    Rational q(x);
    q.canonicalize();
    return q;
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Integer power with a possibly negative exponent.
inline Rational pow(const Rational& base, long exponent)
{
    Rational result(1);
    Rational b = base;
    unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
    while (e > 0) {
        if (e & 1UL) result *= b;
        b *= b;
        e >>= 1;
    }
    if (exponent < 0) {
        if (result == 0) throw PreconditionError("division by zero in rational power");
        result = 1 / result;
    }
    return result;
}

/// 17 significant digits, enough to round-trip any binary64 value.
inline std::string format_float(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace canon

#endif // CANON_RATIONAL_HPP
