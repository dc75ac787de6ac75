#ifndef CANON_LAURENT_HPP
#define CANON_LAURENT_HPP

#include <canon/errors.hpp>
#include <canon/rational.hpp>

#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace canon {

/// Finite sum of terms c * t^k with rational c > 0 and integer k. Positive
/// coefficients rule out cancellation, so the behaviour as t -> 0+ is
/// governed by the term of lowest exponent.
class Laurent {
public:
    Laurent() = default;

    static Laurent monomial(const Rational& c, long k)
    {
        Laurent p;
        p.add_term(c, k);
        return p;
    }

    static Laurent constant(const Rational& c) { return monomial(c, 0); }

    void add_term(const Rational& c, long k)
    {
        if (c <= 0) throw ParseError("coefficient " + to_string(c) + " is not positive");
        Rational& slot = terms_[k];
        slot += c;
        slot.canonicalize();
    }

    bool is_zero() const { return terms_.empty(); }
    const std::map<long, Rational>& terms() const { return terms_; }

    /// Exponent of the dominant term as t -> 0+.
    long lowest_exponent() const
    {
        if (terms_.empty()) throw PreconditionError("zero Laurent polynomial has no lowest term");
        return terms_.begin()->first;
    }

    const Rational& lowest_coefficient() const
    {
        if (terms_.empty()) throw PreconditionError("zero Laurent polynomial has no lowest term");
        return terms_.begin()->second;
    }

    Rational operator()(const Rational& t) const
    {
        if (t <= 0) throw PreconditionError("Laurent polynomial evaluated at non-positive t");
        Rational sum = 0;
        for (const auto& [k, c] : terms_) sum += c * pow(t, k);
        sum.canonicalize();
        return sum;
    }

    double evaluate(double t) const
    {
        if (!(t > 0)) throw PreconditionError("Laurent polynomial evaluated at non-positive t");
        double sum = 0.0;
        for (const auto& [k, c] : terms_) sum += to_double(c) * std::pow(t, static_cast<double>(k));
        return sum;
    }

    friend Laurent operator+(const Laurent& a, const Laurent& b)
    {
        Laurent c = a;
        for (const auto& [k, v] : b.terms_) c.add_term(v, k);
        return c;
    }

    friend Laurent operator*(const Laurent& a, const Laurent& b)
    {
        Laurent c;
        for (const auto& [ka, va] : a.terms_)
            for (const auto& [kb, vb] : b.terms_) c.add_term(va * vb, ka + kb);
        return c;
    }

    friend bool operator==(const Laurent&, const Laurent&) = default;

private:
    std::map<long, Rational> terms_;
};

inline Laurent pow(const Laurent& p, std::size_t n)
{
    Laurent r = Laurent::constant(1);
    for (std::size_t i = 0; i < n; ++i) r = r * p;
    return r;
}

/// Canonical text, terms by increasing exponent: "1/2*t^1 + 3*t^2"; a
/// constant term is written without the t factor.
inline std::string to_string(const Laurent& p)
{
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [k, c] : p.terms()) {
        if (!out.empty()) out += " + ";
        out += to_string(c);
        if (k != 0) out += "*t^" + std::to_string(k);
    }
    return out;
}

/// Parses "c*t^k + ...". Each term is a positive rational, optionally
/// followed by "*t", "*t^k" or "*t^(-k)"; a bare "t" or "t^k" has
/// coefficient one.
inline Laurent parse_laurent(std::string_view text)
{
    const std::string quoted = "'" + std::string(text) + "'";
    Laurent p;
    std::size_t start = 0;
    bool any = false;
    while (start <= text.size()) {
        std::size_t plus = start;
        // A '+' directly after 'e'/'E' belongs to a decimal exponent.
        while (plus < text.size()) {
            if (text[plus] == '+' && !(plus > 0 && (text[plus - 1] == 'e' || text[plus - 1] == 'E'))) break;
            ++plus;
        }
        const std::string_view term = detail::trim(text.substr(start, plus - start));
        if (term.empty()) throw ParseError("empty term in length family " + quoted);

        Rational coeff = 1;
        long exponent = 0;
        std::string_view rest = term;
        const auto t_pos = term.find('t');
        if (t_pos == std::string_view::npos) {
            coeff = parse_rational(term);
        } else {
            std::string_view head = detail::trim(term.substr(0, t_pos));
            if (!head.empty()) {
                if (head.back() != '*') throw ParseError("expected '*' before t in " + quoted);
                head.remove_suffix(1);
                coeff = parse_rational(head);
            }
            rest = detail::trim(term.substr(t_pos + 1));
            if (rest.empty()) {
                exponent = 1;
            } else {
                if (rest.front() != '^') throw ParseError("expected '^' after t in " + quoted);
                rest.remove_prefix(1);
                rest = detail::trim(rest);
                if (!rest.empty() && rest.front() == '(' && rest.back() == ')') {
                    rest = detail::trim(rest.substr(1, rest.size() - 2));
                }
                std::string_view digits = rest;
                bool negative = false;
                if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
                    negative = digits.front() == '-';
                    digits.remove_prefix(1);
                }
                if (!detail::all_digits(digits) || digits.size() > 6) {
                    throw ParseError("invalid exponent in " + quoted);
                }
                exponent = std::stol(std::string(digits));
                if (negative) exponent = -exponent;
            }
        }
        if (coeff <= 0) throw ParseError("non-positive coefficient in length family " + quoted);
        p.add_term(coeff, exponent);
        any = true;
        if (plus >= text.size()) break;
        start = plus + 1;
    }
    if (!any) throw ParseError("empty length family " + quoted);
    return p;
}

/// lim_{t->0+} num(t)/den(t): the ratio of lowest coefficients when the
/// lowest exponents agree, zero when the numerator vanishes faster, and
/// nothing when the ratio diverges.
inline std::optional<Rational> limit_ratio(const Laurent& num, const Laurent& den)
{
    const long a = num.lowest_exponent();
    const long b = den.lowest_exponent();
    if (a > b) return Rational(0);
    if (a < b) return std::nullopt;
    Rational r = num.lowest_coefficient() / den.lowest_coefficient();
    r.canonicalize();
    return r;
}

} // namespace canon

#endif // CANON_LAURENT_HPP
