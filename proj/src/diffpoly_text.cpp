#include "dunham/diffpoly.h"

#include "dunham/errors.h"

#include <cctype>
#include <sstream>

namespace dunham {

namespace {

std::string plain_derivative_name(int k) {
    if (k <= 3) return "Q" + std::string(static_cast<std::size_t>(k), '\'');
    return "Q(" + std::to_string(k) + ")";
}

std::string plain_q_power(int half) {
    if (half == 2) return "Q";
    if (half % 2 == 0) return "Q^" + std::to_string(half / 2);
    return "Q^(" + std::to_string(half) + "/2)";
}

std::string plain_monomial_body(const Monomial& m, const Rational& magnitude) {
    std::vector<std::string> factors;
    for (std::size_t i = 0; i < m.key.deriv_exponents.size(); ++i) {
        const int e = m.key.deriv_exponents[i];
        if (e == 0) continue;
        std::string f = plain_derivative_name(static_cast<int>(i + 1));
        if (e > 1) f += "^" + std::to_string(e);
        factors.push_back(std::move(f));
    }
    if (m.key.q_half_exponent != 0) factors.push_back(plain_q_power(m.key.q_half_exponent));
    std::string out;
    if (magnitude != 1 || factors.empty()) out = to_string(magnitude);
    for (const auto& f : factors) {
        if (!out.empty()) out += " * ";
        out += f;
    }
    return out;
}

std::string latex_rational(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return "\\frac{" + r.get_num().get_str() + "}{" + r.get_den().get_str() + "}";
}

std::string latex_derivative(int k) {
    if (k <= 3) {
        std::string primes;
        for (int i = 0; i < k; ++i) primes += "\\prime";
        return "Q^{" + primes + "}";
    }
    return "Q^{(" + std::to_string(k) + ")}";
}

std::string latex_q_power(int half) {
    if (half == 2) return "Q";
    if (half % 2 == 0) return "Q^{" + std::to_string(half / 2) + "}";
    const std::string sign = half < 0 ? "-" : "";
    return "Q^{" + sign + "\\frac{" + std::to_string(std::abs(half)) + "}{2}}";
}

std::string latex_monomial_body(const Monomial& m, const Rational& magnitude) {
    std::vector<std::string> factors;
    for (std::size_t i = 0; i < m.key.deriv_exponents.size(); ++i) {
        const int e = m.key.deriv_exponents[i];
        if (e == 0) continue;
        std::string f = latex_derivative(static_cast<int>(i + 1));
        if (e > 1) f = "(" + f + ")^{" + std::to_string(e) + "}";
        factors.push_back(std::move(f));
    }
    if (m.key.q_half_exponent != 0) factors.push_back(latex_q_power(m.key.q_half_exponent));
    std::string out;
    if (magnitude != 1 || factors.empty()) out = latex_rational(magnitude);
    for (const auto& f : factors) {
        if (!out.empty()) out += " ";
        out += f;
    }
    return out;
}

template <typename Body>
std::string render(const DiffExpr& e, Body body) {
    if (e.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& m : e.monomials()) {
        const bool negative = m.coeff < 0;
        const Rational magnitude = abs(m.coeff);
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        out += body(m, magnitude);
        first = false;
    }
    return out;
}

// Recursive-descent parser for the plain form.
class PlainParser {
public:
    explicit PlainParser(std::string_view text) : text_(text) {}

    DiffExpr parse() {
        skip_space();
        if (at_end()) fail("empty expression");
        DiffExpr result;
        bool negative = false;
        if (peek() == '-' || peek() == '+') {
            negative = peek() == '-';
            ++pos_;
        }
        DiffExpr term = parse_term();
        result += negative ? -term : term;
        for (;;) {
            skip_space();
            if (at_end()) break;
            const char op = peek();
            if (op != '+' && op != '-') fail(std::string("unexpected '") + op + "'");
            ++pos_;
            DiffExpr t = parse_term();
            if (op == '+')
                result += t;
            else
                result -= t;
        }
        return result;
    }

private:
    DiffExpr parse_term() {
        DiffExpr term = parse_factor();
        for (;;) {
            skip_space();
            if (at_end() || peek() != '*') return term;
            ++pos_;
            term *= parse_factor();
        }
    }

    DiffExpr parse_factor() {
        skip_space();
        if (at_end()) fail("expected a factor");
        if (std::isdigit(static_cast<unsigned char>(peek()))) return DiffExpr::constant(parse_number());
        if (peek() != 'Q') fail(std::string("unexpected '") + peek() + "'");
        ++pos_;
        int order = 0;
        while (!at_end() && peek() == '\'') {
            ++order;
            ++pos_;
        }
        if (order == 0 && !at_end() && peek() == '(') {
            ++pos_;
            order = parse_int();
            if (order < 1) fail("derivative order must be >= 1");
            expect(')');
        }
        if (!at_end() && peek() == '^') {
            ++pos_;
            if (order > 0) {
                const int e = parse_int();
                if (e < 1) fail("derivative exponent must be >= 1");
                return DiffExpr::q_derivative(order, e);
            }
            return DiffExpr::q_power(parse_q_exponent());
        }
        return order > 0 ? DiffExpr::q_derivative(order) : DiffExpr::q_power(2);
    }

    // Returns the exponent of Q in halves.
    int parse_q_exponent() {
        if (!at_end() && peek() == '(') {
            ++pos_;
            const int num = parse_signed_int();
            int halves = 2 * num;
            if (!at_end() && peek() == '/') {
                ++pos_;
                if (parse_int() != 2) fail("only halves are allowed in powers of Q");
                halves = num;
            }
            expect(')');
            return halves;
        }
        return 2 * parse_signed_int();
    }

    Rational parse_number() {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (!at_end() && peek() == '/') {
            ++pos_;
            if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected denominator");
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        try {
            return parse_rational(text_.substr(start, pos_ - start));
        } catch (const ParseError& e) {
            throw ParseError("invalid number", start);
        }
    }

    int parse_signed_int() {
        bool negative = false;
        if (!at_end() && peek() == '-') {
            negative = true;
            ++pos_;
        }
        const int v = parse_int();
        return negative ? -v : v;
    }

    int parse_int() {
        const std::size_t start = pos_;
        long v = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (peek() - '0');
            if (v > 1'000'000) fail("integer too large");
            ++pos_;
        }
        if (pos_ == start) fail("expected an integer");
        return static_cast<int>(v);
    }

    void expect(char c) {
        if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string to_plain(const DiffExpr& e) { return render(e, plain_monomial_body); }

std::string to_latex(const DiffExpr& e) { return render(e, latex_monomial_body); }

DiffExpr parse_plain(std::string_view text) { return PlainParser(text).parse(); }

}  // namespace dunham
