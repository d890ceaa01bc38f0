#include "dunham/potential.h"

#include "dunham/errors.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dunham {

namespace {

template <typename T>
T horner(const std::vector<double>& c, T x) {
    T acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<Rational> differentiate_coeffs(const std::vector<Rational>& c) {
    std::vector<Rational> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<long>(k));
    return d;
}

std::vector<double> rounded(const std::vector<Rational>& c) {
    std::vector<double> out;
    out.reserve(c.size());
    for (const auto& r : c) out.push_back(to_double(r));
    return out;
}

}  // namespace

Potential::Potential(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    if (coeffs_.size() < 3) throw PreconditionError("potential must have degree >= 2");
    if (coeffs_.back() < 0) throw PreconditionError("potential must have a positive leading coefficient");
    if (degree() % 2 != 0) throw PreconditionError("potential of odd degree is not confining");
    std::vector<Rational> c = coeffs_;
    while (!c.empty()) {
        numeric_derivs_.push_back(rounded(c));
        c = differentiate_coeffs(c);
    }
}

std::vector<Rational> Potential::derivative_coefficients(int k) const {
    std::vector<Rational> c = coeffs_;
    for (int i = 0; i < k && !c.empty(); ++i) c = differentiate_coeffs(c);
    return c;
}

double Potential::value(double x) const { return horner(numeric_derivs_[0], x); }

std::complex<double> Potential::value(std::complex<double> z) const { return horner(numeric_derivs_[0], z); }

void Potential::q_derivatives(std::complex<double> z, double energy, std::vector<std::complex<double>>& out) const {
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = k < numeric_derivs_.size() ? horner(numeric_derivs_[k], z) : std::complex<double>(0.0);
    }
    if (!out.empty()) out[0] -= energy;
}

std::vector<std::complex<double>> Potential::q_derivatives(std::complex<double> z, double energy, int count) const {
    std::vector<std::complex<double>> out(static_cast<std::size_t>(std::max(count, 0)));
    q_derivatives(z, energy, out);
    return out;
}

std::pair<double, double> Potential::minimum() const {
    auto critical = polynomial_roots(numeric_derivs_[1]);
    double best_x = 0.0;
    double best_v = std::numeric_limits<double>::infinity();
    for (const auto& z : critical) {
        if (std::abs(z.imag()) > 1e-7 * (1.0 + std::abs(z))) continue;
        const double v = value(z.real());
        if (v < best_v) {
            best_v = v;
            best_x = z.real();
        }
    }
    return {best_x, best_v};
}

std::string Potential::to_string() const {
    std::string out;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        const Rational& c = coeffs_[k];
        if (c == 0) continue;
        const bool negative = c < 0;
        const Rational magnitude = abs(c);
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        const std::string power = k == 0 ? "" : (k == 1 ? "x" : "x^" + std::to_string(k));
        if (k == 0) {
            out += dunham::to_string(magnitude);
        } else if (magnitude == 1) {
            out += power;
        } else {
            out += dunham::to_string(magnitude) + "*" + power;
        }
    }
    return out.empty() ? "0" : out;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coefficients) {
    std::vector<double> c = coefficients;
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    if (c.size() < 2) return {};
    const auto degree = static_cast<Eigen::Index>(c.size() - 1);
    const double lead = c.back();

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -c[static_cast<std::size_t>(i)] / lead;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericError("companion eigenvalue solve failed");

    std::vector<double> dc;
    for (std::size_t k = 1; k < c.size(); ++k) dc.push_back(c[k] * static_cast<double>(k));

    std::vector<std::complex<double>> roots;
    roots.reserve(static_cast<std::size_t>(degree));
    for (Eigen::Index i = 0; i < degree; ++i) {
        std::complex<double> z = solver.eigenvalues()[i];
        const std::complex<double> fz = horner(c, z);
        const std::complex<double> dfz = horner(dc, z);
        if (std::abs(dfz) > 0.0) {
            const std::complex<double> polished = z - fz / dfz;
            // Near a multiple root the Newton step can overshoot; keep it only if it helps.
            if (std::isfinite(polished.real()) && std::isfinite(polished.imag()) &&
                std::abs(horner(c, polished)) <= std::abs(fz)) {
                z = polished;
            }
        }
        roots.push_back(z);
    }
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

}  // namespace dunham
