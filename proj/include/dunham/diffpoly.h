#pragma once

// Differential polynomials in an abstract function Q(x).
//
// A DiffExpr is a finite sum of monomials
//
//     c * Q^(p/2) * (Q')^e1 * (Q'')^e2 * ...
//
// with exact rational c, integer p (so half-integer powers of Q are allowed)
// and non-negative integer derivative exponents. Expressions are kept in a
// canonical form at all times, so structural equality is exact equality.

#include "dunham/rational.h"

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dunham {

/// Exponents of Q^(k), stored densely: exponents[k - 1] is the power of the
/// k-th derivative. The last entry is never zero, so "no derivatives" is the
/// empty vector and the dense form is unique.
using DerivExponents = std::vector<int>;

struct MonomialKey {
    int q_half_exponent = 0;
    DerivExponents deriv_exponents;

    /// Sum of k * e_k.
    int weight() const;
    /// Highest k with e_k > 0, or 0.
    int max_derivative_order() const;
    int derivative_exponent(int k) const;

    friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
};

/// Canonical total order on keys: derivative weight, then q_half_exponent,
/// then lexicographic on (e_1, e_2, ...) with missing entries read as 0.
bool key_less(const MonomialKey& a, const MonomialKey& b);

struct Monomial {
    Rational coeff;
    MonomialKey key;

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.coeff == b.coeff && a.key == b.key;
    }
};

class DiffExpr {
public:
    /// The zero expression.
    DiffExpr() = default;

    static DiffExpr constant(const Rational& value);
    /// Q^(half_exponent / 2) with coefficient 1.
    static DiffExpr q_power(int half_exponent);
    /// (Q^(k))^exponent for k >= 1, exponent >= 1.
    static DiffExpr q_derivative(int k, int exponent = 1);
    /// Canonicalizes an arbitrary monomial list: merges equal keys, drops
    /// zero coefficients, trims trailing zero exponents and sorts.
    static DiffExpr from_monomials(std::vector<Monomial> monomials);

    const std::vector<Monomial>& monomials() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    int max_derivative_order() const;
    /// True iff every monomial has an even q_half_exponent.
    bool has_only_integer_q_powers() const;
    /// True iff every monomial has an odd q_half_exponent.
    bool has_only_half_odd_q_powers() const;

    DiffExpr differentiate() const;

    /// Numeric value at a point where Q(z), Q'(z), ... equal q_derivs and
    /// sqrt_q is the caller's branch of sqrt(Q(z)). Throws InputShapeError
    /// when q_derivs is too short and BranchConsistencyError when
    /// sqrt_q^2 differs from Q(z) by more than branch_tol relative.
    std::complex<double> eval(std::span<const std::complex<double>> q_derivs,
                              std::complex<double> sqrt_q,
                              double branch_tol = 1e-8) const;

    DiffExpr operator-() const;
    DiffExpr& operator+=(const DiffExpr& other);
    DiffExpr& operator-=(const DiffExpr& other);
    DiffExpr& operator*=(const DiffExpr& other);
    DiffExpr& operator*=(const Rational& scalar);

    friend DiffExpr operator+(DiffExpr a, const DiffExpr& b) { return a += b; }
    friend DiffExpr operator-(DiffExpr a, const DiffExpr& b) { return a -= b; }
    friend DiffExpr operator*(const DiffExpr& a, const DiffExpr& b);
    friend DiffExpr operator*(DiffExpr a, const Rational& s) { return a *= s; }
    friend DiffExpr operator*(const Rational& s, DiffExpr a) { return a *= s; }

    friend bool operator==(const DiffExpr& a, const DiffExpr& b) { return a.terms_ == b.terms_; }

private:
    std::vector<Monomial> terms_;
};

// Free-function spellings of the core operations.
inline DiffExpr q_power(int half_exponent) { return DiffExpr::q_power(half_exponent); }
inline DiffExpr add(const DiffExpr& a, const DiffExpr& b) { return a + b; }
inline DiffExpr mul(const DiffExpr& a, const DiffExpr& b) { return a * b; }
inline DiffExpr negate(const DiffExpr& a) { return -a; }
inline DiffExpr differentiate(const DiffExpr& a) { return a.differentiate(); }
inline bool equals(const DiffExpr& a, const DiffExpr& b) { return a == b; }
inline std::complex<double> eval_numeric(const DiffExpr& a,
                                         std::span<const std::complex<double>> q_derivs,
                                         std::complex<double> sqrt_q) {
    return a.eval(q_derivs, sqrt_q);
}

/// Re-canonicalizes an expression (identity on canonical input).
DiffExpr canonicalize(const DiffExpr& a);

// Text forms.
//
// Plain: "-1/4 * Q' * Q^-1", "5/32 * Q'^2 * Q^(-5/2)", "Q(4)" for the fourth
// derivative. Factors appear in the order coefficient, derivatives by
// ascending k, power of Q. parse_plain(to_plain(e)) == e for every e.
std::string to_plain(const DiffExpr& e);
std::string to_latex(const DiffExpr& e);
DiffExpr parse_plain(std::string_view text);

}  // namespace dunham
