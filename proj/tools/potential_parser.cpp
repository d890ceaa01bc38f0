#include "potential_parser.h"

#include "dunham/errors.h"

#include <cctype>
#include <string>

namespace dunham::cli {

namespace {

using Poly = std::vector<Rational>;

Poly trim(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

Poly add(const Poly& a, const Poly& b, int sign) {
    Poly out(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
    return trim(std::move(out));
}

Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return trim(std::move(out));
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Poly parse() {
        Poly p = expr();
        skip_space();
        if (pos_ < text_.size()) fail("unexpected " + token_at(pos_));
        return p;
    }

private:
    Poly expr() {
        skip_space();
        int sign = 1;
        if (peek() == '+' || peek() == '-') {
            sign = peek() == '-' ? -1 : 1;
            ++pos_;
        }
        Poly acc = add({}, term(), sign);
        for (;;) {
            skip_space();
            if (peek() != '+' && peek() != '-') return acc;
            sign = peek() == '-' ? -1 : 1;
            ++pos_;
            acc = add(acc, term(), sign);
        }
    }

    Poly term() {
        Poly acc = factor();
        for (;;) {
            skip_space();
            if (peek() == '*') {
                ++pos_;
                acc = mul(acc, factor());
            } else if (peek() == '/') {
                ++pos_;
                skip_space();
                const std::size_t at = pos_;
                const Poly d = factor();
                if (d.size() > 1) fail("division by a non-constant", at);
                if (d.empty()) fail("division by zero", at);
                acc = mul(acc, Poly{1 / d[0]});
            } else {
                return acc;
            }
        }
    }

    Poly factor() {
        skip_space();
        Poly base;
        const char c = peek();
        if (c == '(') {
            ++pos_;
            base = expr();
            skip_space();
            if (peek() != ')') fail("expected ')' but found " + token_at(pos_));
            ++pos_;
        } else if (c == 'x' && !is_word(pos_ + 1)) {
            ++pos_;
            base = Poly{0, 1};
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            base = trim(Poly{number()});
        } else if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        } else {
            fail("unexpected " + token_at(pos_));
        }
        skip_space();
        if (peek() == '^') {
            ++pos_;
            skip_space();
            const std::size_t at = pos_;
            std::size_t end = pos_;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
            if (end == pos_) fail("expected a non-negative integer exponent but found " + token_at(pos_), at);
            if (end - pos_ > 3) fail("exponent too large", at);
            const int e = std::stoi(std::string(text_.substr(pos_, end - pos_)));
            pos_ = end;
            Poly out{1};
            for (int i = 0; i < e; ++i) out = mul(out, base);
            return out;
        }
        return base;
    }

    Rational number() {
        const std::size_t start = pos_;
        std::size_t end = pos_;
        while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.')) ++end;
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t exp = end + 1;
            if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
            if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
                end = exp;
                while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
            }
        }
        pos_ = end;
        try {
            return parse_decimal(std::string(text_.substr(start, end - start)));
        } catch (const ParseError&) {
            fail("malformed number '" + std::string(text_.substr(start, end - start)) + "'", start);
        }
    }

    bool is_word(std::size_t i) const {
        return i < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_');
    }

    std::string token_at(std::size_t i) const {
        if (i >= text_.size()) return "end of input";
        std::size_t end = i;
        while (is_word(end)) ++end;
        if (end == i) end = i + 1;
        return "token '" + std::string(text_.substr(i, end - i)) + "'";
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& message) const { fail(message, pos_); }
    [[noreturn]] void fail(const std::string& message, std::size_t at) const { throw ParseError(message, at); }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<Rational> parse_polynomial(std::string_view text) { return Parser(text).parse(); }

Potential parse_potential(std::string_view text) { return Potential(parse_polynomial(text)); }

}  // namespace dunham::cli
