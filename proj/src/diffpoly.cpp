#include "dunham/diffpoly.h"

#include "dunham/errors.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace dunham {

namespace {

struct KeyLess {
    bool operator()(const MonomialKey& a, const MonomialKey& b) const { return key_less(a, b); }
};

using Accumulator = std::map<MonomialKey, Rational, KeyLess>;

void trim(DerivExponents& e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
}

void accumulate(Accumulator& acc, MonomialKey key, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = acc.try_emplace(std::move(key), coeff);
    if (!inserted) it->second += coeff;
}

std::vector<Monomial> flatten(Accumulator&& acc) {
    std::vector<Monomial> out;
    out.reserve(acc.size());
    for (auto& [key, coeff] : acc) {
        if (coeff != 0) out.push_back(Monomial{coeff, key});
    }
    return out;
}

MonomialKey multiply_keys(const MonomialKey& a, const MonomialKey& b) {
    MonomialKey k;
    k.q_half_exponent = a.q_half_exponent + b.q_half_exponent;
    const auto& longer = a.deriv_exponents.size() >= b.deriv_exponents.size() ? a.deriv_exponents : b.deriv_exponents;
    const auto& shorter = a.deriv_exponents.size() >= b.deriv_exponents.size() ? b.deriv_exponents : a.deriv_exponents;
    k.deriv_exponents = longer;
    for (std::size_t i = 0; i < shorter.size(); ++i) k.deriv_exponents[i] += shorter[i];
    return k;
}

std::complex<double> ipow(std::complex<double> base, int exponent) {
    if (exponent < 0) return 1.0 / ipow(base, -exponent);
    std::complex<double> result = 1.0;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

}  // namespace

int MonomialKey::weight() const {
    int w = 0;
    for (std::size_t i = 0; i < deriv_exponents.size(); ++i) w += static_cast<int>(i + 1) * deriv_exponents[i];
    return w;
}

int MonomialKey::max_derivative_order() const { return static_cast<int>(deriv_exponents.size()); }

int MonomialKey::derivative_exponent(int k) const {
    if (k < 1 || k > static_cast<int>(deriv_exponents.size())) return 0;
    return deriv_exponents[static_cast<std::size_t>(k - 1)];
}

bool key_less(const MonomialKey& a, const MonomialKey& b) {
    const int wa = a.weight();
    const int wb = b.weight();
    if (wa != wb) return wa < wb;
    if (a.q_half_exponent != b.q_half_exponent) return a.q_half_exponent < b.q_half_exponent;
    // Trailing entries are nonzero, so prefix comparison equals zero-padded comparison.
    return a.deriv_exponents < b.deriv_exponents;
}

DiffExpr DiffExpr::constant(const Rational& value) {
    DiffExpr e;
    if (value != 0) e.terms_.push_back(Monomial{value, {}});
    return e;
}

DiffExpr DiffExpr::q_power(int half_exponent) {
    DiffExpr e;
    e.terms_.push_back(Monomial{Rational(1), MonomialKey{half_exponent, {}}});
    return e;
}

DiffExpr DiffExpr::q_derivative(int k, int exponent) {
    if (k < 1) throw PreconditionError("derivative order must be >= 1");
    if (exponent < 0) throw PreconditionError("derivative exponent must be >= 0");
    DiffExpr e;
    MonomialKey key;
    if (exponent > 0) {
        key.deriv_exponents.assign(static_cast<std::size_t>(k), 0);
        key.deriv_exponents.back() = exponent;
    }
    e.terms_.push_back(Monomial{Rational(1), std::move(key)});
    return e;
}

DiffExpr DiffExpr::from_monomials(std::vector<Monomial> monomials) {
    Accumulator acc;
    for (auto& m : monomials) {
        for (int e : m.key.deriv_exponents) {
            if (e < 0) throw PreconditionError("negative derivative exponent in monomial");
        }
        trim(m.key.deriv_exponents);
        accumulate(acc, std::move(m.key), m.coeff);
    }
    DiffExpr e;
    e.terms_ = flatten(std::move(acc));
    return e;
}

DiffExpr canonicalize(const DiffExpr& a) { return DiffExpr::from_monomials(a.monomials()); }

int DiffExpr::max_derivative_order() const {
    int k = 0;
    for (const auto& m : terms_) k = std::max(k, m.key.max_derivative_order());
    return k;
}

bool DiffExpr::has_only_integer_q_powers() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Monomial& m) { return m.key.q_half_exponent % 2 == 0; });
}

bool DiffExpr::has_only_half_odd_q_powers() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Monomial& m) { return m.key.q_half_exponent % 2 != 0; });
}

DiffExpr DiffExpr::operator-() const {
    DiffExpr r = *this;
    for (auto& m : r.terms_) m.coeff = -m.coeff;
    return r;
}

DiffExpr& DiffExpr::operator+=(const DiffExpr& other) {
    if (&other == this) return *this *= Rational(2);
    std::vector<Monomial> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() && b != other.terms_.end()) {
        if (key_less(a->key, b->key)) {
            merged.push_back(std::move(*a++));
        } else if (key_less(b->key, a->key)) {
            merged.push_back(*b++);
        } else {
            Rational c = a->coeff + b->coeff;
            if (c != 0) merged.push_back(Monomial{std::move(c), std::move(a->key)});
            ++a;
            ++b;
        }
    }
    for (; a != terms_.end(); ++a) merged.push_back(std::move(*a));
    for (; b != other.terms_.end(); ++b) merged.push_back(*b);
    terms_ = std::move(merged);
    return *this;
}

DiffExpr& DiffExpr::operator-=(const DiffExpr& other) { return *this += -other; }

DiffExpr& DiffExpr::operator*=(const Rational& scalar) {
    if (scalar == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& m : terms_) m.coeff *= scalar;
    return *this;
}

DiffExpr& DiffExpr::operator*=(const DiffExpr& other) {
    *this = *this * other;
    return *this;
}

DiffExpr operator*(const DiffExpr& a, const DiffExpr& b) {
    Accumulator acc;
    Rational product;
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            product = x.coeff * y.coeff;
            accumulate(acc, multiply_keys(x.key, y.key), product);
        }
    }
    DiffExpr r;
    r.terms_ = flatten(std::move(acc));
    return r;
}

DiffExpr DiffExpr::differentiate() const {
    Accumulator acc;
    for (const auto& m : terms_) {
        const auto& key = m.key;
        // d/dx Q^(p/2) = (p/2) Q^((p-2)/2) Q'
        if (key.q_half_exponent != 0) {
            MonomialKey k = key;
            k.q_half_exponent -= 2;
            if (k.deriv_exponents.empty()) k.deriv_exponents.push_back(0);
            k.deriv_exponents[0] += 1;
            accumulate(acc, std::move(k), m.coeff * make_rational(key.q_half_exponent, 2));
        }
        // d/dx (Q^(k))^e = e (Q^(k))^(e-1) Q^(k+1)
        for (std::size_t i = 0; i < key.deriv_exponents.size(); ++i) {
            const int e = key.deriv_exponents[i];
            if (e == 0) continue;
            MonomialKey k = key;
            k.deriv_exponents[i] -= 1;
            if (k.deriv_exponents.size() < i + 2) k.deriv_exponents.resize(i + 2, 0);
            k.deriv_exponents[i + 1] += 1;
            trim(k.deriv_exponents);
            accumulate(acc, std::move(k), m.coeff * e);
        }
    }
    DiffExpr r;
    r.terms_ = flatten(std::move(acc));
    return r;
}

std::complex<double> DiffExpr::eval(std::span<const std::complex<double>> q_derivs,
                                    std::complex<double> sqrt_q, double branch_tol) const {
    const int max_k = max_derivative_order();
    if (q_derivs.size() < static_cast<std::size_t>(max_k) + 1) {
        throw InputShapeError("eval needs Q and its derivatives up to order " + std::to_string(max_k) + ", got " +
                              std::to_string(q_derivs.size()) + " values");
    }
    const std::complex<double> q = q_derivs[0];
    const double mismatch = std::abs(sqrt_q * sqrt_q - q);
    if (mismatch > branch_tol * (std::abs(q) + std::norm(sqrt_q))) {
        throw BranchConsistencyError("supplied sqrt(Q) does not square to Q");
    }
    std::complex<double> sum = 0.0;
    for (const auto& m : terms_) {
        const int p = m.key.q_half_exponent;
        // floor(p / 2) whole powers of Q, one extra branch factor when p is odd.
        const int whole = (p >= 0) ? p / 2 : -((-p + 1) / 2);
        std::complex<double> term = ipow(q, whole);
        if (p - 2 * whole == 1) term *= sqrt_q;
        for (std::size_t i = 0; i < m.key.deriv_exponents.size(); ++i) {
            const int e = m.key.deriv_exponents[i];
            if (e != 0) term *= ipow(q_derivs[i + 1], e);
        }
        sum += to_double(m.coeff) * term;
    }
    return sum;
}

}  // namespace dunham
