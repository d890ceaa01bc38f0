#include "dunham/rational.h"

#include "dunham/errors.h"

#include <cctype>

namespace dunham {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
    std::string_view body = s;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
    if (!all_digits(body)) throw ParseError("invalid number '" + std::string(whole) + "'", 0);
    return mpz_class(std::string(s.front() == '+' ? s.substr(1) : s));
}

mpz_class pow10(long exponent) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
    return r;
}

}  // namespace

Rational make_rational(long numerator, long denominator) {
    if (denominator == 0) throw PreconditionError("rational with zero denominator");
    Rational r(numerator, denominator);
    r.canonicalize();
    return r;
}

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
    mpz_class num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) throw ParseError("invalid number '" + std::string(text) + "'", 0);
    mpz_class den(std::string{den_text});
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", 0);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = s.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 6)
            throw ParseError("invalid number '" + std::string(text) + "'", 0);
        exponent = std::stol(std::string(exp_text));
        if (exp_negative) exponent = -exponent;
        s = s.substr(0, e);
    }
    std::string digits;
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = s.substr(0, dot);
        std::string_view frac_part = s.substr(dot + 1);
        if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)) ||
            (int_part.empty() && frac_part.empty()))
            throw ParseError("invalid number '" + std::string(text) + "'", 0);
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        if (!all_digits(s)) throw ParseError("invalid number '" + std::string(text) + "'", 0);
        digits = std::string(s);
    }
    mpz_class num(digits);
    if (negative) num = -num;
    Rational r;
    if (exponent >= 0) {
        r = Rational(num * pow10(exponent));
    } else {
        r = Rational(num, pow10(-exponent));
        r.canonicalize();
    }
    return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

double to_double(const Rational& value) { return value.get_d(); }

}  // namespace dunham
