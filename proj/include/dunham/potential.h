#pragma once

#include "dunham/rational.h"

#include <complex>
#include <string>
#include <vector>

namespace dunham {

/// Confining polynomial potential V(x) = sum_k a_k x^k with exact
/// coefficients. Derivatives are taken exactly and only then rounded.
class Potential {
public:
    /// coefficients[k] multiplies x^k. Trailing zeros are dropped; the
    /// remaining degree must be >= 2 with a positive leading coefficient.
    explicit Potential(std::vector<Rational> coefficients);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }

    /// Exact coefficients of d^k V / dx^k.
    std::vector<Rational> derivative_coefficients(int k) const;

    double value(double x) const;
    std::complex<double> value(std::complex<double> z) const;

    /// [V(z) - E, V'(z), V''(z), ..., V^(count-1)(z)].
    std::vector<std::complex<double>> q_derivatives(std::complex<double> z, double energy, int count) const;
    void q_derivatives(std::complex<double> z, double energy, std::vector<std::complex<double>>& out) const;

    /// Global minimum over the real line: (x_min, V(x_min)).
    std::pair<double, double> minimum() const;

    /// "1/2*x^2 + x^4" style text.
    std::string to_string() const;

private:
    std::vector<Rational> coeffs_;
    // Rounded coefficients of V, V', V'', ... up to degree.
    std::vector<std::vector<double>> numeric_derivs_;
};

/// All complex roots of sum_k c_k x^k (c.back() != 0) from the eigenvalues
/// of the companion matrix, each followed by one Newton step.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coefficients);

}  // namespace dunham
