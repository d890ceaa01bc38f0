#include "dunham/oracle.h"

#include "dunham/errors.h"

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dunham {

namespace {

struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;
};

Tridiagonal fd_hamiltonian(const Potential& v, double half_width, int interior) {
    const double h = 2.0 * half_width / (interior + 1);
    const double inv_h2 = 1.0 / (h * h);
    Tridiagonal t;
    t.diag.resize(static_cast<std::size_t>(interior));
    t.off.assign(static_cast<std::size_t>(std::max(interior - 1, 0)), -inv_h2);
    for (int i = 0; i < interior; ++i) {
        const double x = -half_width + (i + 1) * h;
        t.diag[static_cast<std::size_t>(i)] = 2.0 * inv_h2 + v.value(x);
    }
    return t;
}

void check_fd_args(int count, double half_width, int interior) {
    if (count < 1) throw PreconditionError("eigenvalue count must be >= 1");
    if (!(half_width > 0.0)) throw PreconditionError("domain half-width must be > 0");
    if (interior < 200) throw PreconditionError("finite-difference grid needs >= 200 points");
    if (count > interior) throw PreconditionError("more eigenvalues requested than grid points");
}

double tunnelling_extent(const Potential& v, double e_max, double direction, double start) {
    // Walk outward to the classical turning point, then accumulate the
    // under-barrier action until both cutoffs are met.
    double x = start;
    double step = 1e-3;
    while (v.value(x) < e_max) {
        x += direction * step * std::max(1.0, std::abs(x));
    }
    double action = 0.0;
    double prev = 0.0;
    while (action < 15.0 || v.value(x) < e_max + 25.0) {
        const double dx = step * std::max(1.0, std::abs(x));
        x += direction * dx;
        const double cur = std::sqrt(std::max(v.value(x) - e_max, 0.0));
        action += 0.5 * (prev + cur) * dx;
        prev = cur;
    }
    return std::abs(x);
}

std::vector<double> check_count(std::vector<double> w, int count) {
    if (static_cast<int>(w.size()) < count) throw NumericError("eigensolver returned too few eigenvalues");
    w.resize(static_cast<std::size_t>(count));
    return w;
}

Eigen::MatrixXd basis_hamiltonian(const Potential& v, int basis_size, double length) {
    const int big = basis_size + v.degree() + 2;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(big, big);
    for (int i = 0; i + 1 < big; ++i) {
        x(i, i + 1) = x(i + 1, i) = length * std::sqrt((i + 1) / 2.0);
    }
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(big, big);
    const double inv_l2 = 1.0 / (length * length);
    for (int i = 0; i < big; ++i) {
        h(i, i) = (2.0 * i + 1.0) * inv_l2 / 2.0;
        if (i + 2 < big) h(i, i + 2) = h(i + 2, i) = -std::sqrt((i + 1.0) * (i + 2.0)) * inv_l2 / 2.0;
    }
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(big, big);
    const auto& coeffs = v.coefficients();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (k > 0) power = power * x;
        if (coeffs[k] != 0) h += to_double(coeffs[k]) * power;
    }
    return h.topLeftCorner(basis_size, basis_size);
}

double optimal_length(const Potential& v, int count, int basis_size) {
    const double lead = to_double(v.coefficients().back());
    const double guess = std::pow(lead, -1.0 / (v.degree() + 2.0));
    const int probe = std::min(basis_size, std::max(2 * count + 8, 16));
    auto cost = [&](double log_len) {
        const auto w = basis_eigenvalues(v, count, probe, std::exp(log_len));
        double s = 0.0;
        for (double e : w) s += e;
        return s;
    };
    // Golden-section search on log(length).
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(guess) - 2.0;
    double b = std::log(guess) + 2.0;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = cost(c);
    double fd = cost(d);
    for (int it = 0; it < 40; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = cost(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = cost(d);
        }
    }
    return std::exp(0.5 * (a + b));
}

// Repeated Richardson elimination of the h^2 and h^4 terms; rows are
// successive grid halvings.
std::vector<double> richardson(const std::vector<std::vector<double>>& levels, std::size_t idx, int depth,
                               std::size_t first) {
    std::vector<double> col;
    for (std::size_t r = first; r < first + static_cast<std::size_t>(depth) + 1; ++r) col.push_back(levels[r][idx]);
    double factor = 4.0;
    for (int d = 0; d < depth; ++d) {
        for (std::size_t i = 0; i + 1 < col.size(); ++i) col[i] = (factor * col[i + 1] - col[i]) / (factor - 1.0);
        col.pop_back();
        factor *= 4.0;
    }
    return col;
}

std::string describe(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

}  // namespace

std::vector<double> fd_eigenvalues(const Potential& v, int count, double half_width, int interior) {
    check_fd_args(count, half_width, interior);
    auto t = fd_hamiltonian(v, half_width, interior);
    std::vector<double> w(static_cast<std::size_t>(interior));
    std::vector<lapack_int> iblock(static_cast<std::size_t>(interior));
    std::vector<lapack_int> isplit(static_cast<std::size_t>(interior));
    lapack_int found = 0;
    lapack_int nsplit = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info =
        LAPACKE_dstebz('I', 'E', interior, 0.0, 0.0, 1, count, abstol, t.diag.data(), t.off.data(), &found, &nsplit,
                       w.data(), iblock.data(), isplit.data());
    if (info != 0) throw NumericError("tridiagonal bisection failed (info " + std::to_string(info) + ")");
    w.resize(static_cast<std::size_t>(found));
    return check_count(std::move(w), count);
}

std::vector<std::vector<double>> fd_eigenvectors(const Potential& v, int count, double half_width, int interior) {
    check_fd_args(count, half_width, interior);
    auto t = fd_hamiltonian(v, half_width, interior);
    const auto n = static_cast<std::size_t>(interior);
    std::vector<double> w(n);
    std::vector<double> z(n * static_cast<std::size_t>(count));
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
    lapack_int found = 0;
    t.off.push_back(0.0);  // dstevr wants n entries of workspace in e
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', interior, t.diag.data(), t.off.data(), 0.0,
                                           0.0, 1, count, 0.0, &found, w.data(), z.data(), interior, isuppz.data());
    if (info != 0 || found < count) throw NumericError("tridiagonal eigenvector solve failed");
    std::vector<std::vector<double>> out;
    for (int j = 0; j < count; ++j) {
        out.emplace_back(z.begin() + static_cast<std::ptrdiff_t>(j * n), z.begin() + static_cast<std::ptrdiff_t>((j + 1) * n));
    }
    return out;
}

std::vector<double> basis_eigenvalues(const Potential& v, int count, int basis_size, double length) {
    if (count < 1 || count > basis_size) throw PreconditionError("eigenvalue count must be in [1, basis_size]");
    if (!(length > 0.0)) throw PreconditionError("oscillator length must be > 0");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(basis_hamiltonian(v, basis_size, length),
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("dense eigensolve failed");
    std::vector<double> w(solver.eigenvalues().data(), solver.eigenvalues().data() + count);
    return w;
}

double default_half_width(const Potential& v, double e_max) {
    const double x0 = v.minimum().first;
    return std::max(tunnelling_extent(v, e_max, 1.0, x0), tunnelling_extent(v, e_max, -1.0, x0));
}

OracleSpectrum eigensolve(const Potential& v, int count, const OracleConfig& cfg) {
    if (cfg.basis_size < 16) throw PreconditionError("oracle basis_size must be >= 16");
    if (count < 1) throw PreconditionError("oracle count must be >= 1");
    if (count > cfg.basis_size / 4) throw PreconditionError("oracle count must be <= basis_size / 4");

    OracleSpectrum out;
    out.mode = cfg.mode;
    if (cfg.mode == OracleMode::oscillator_basis) {
        const double length = cfg.oscillator_length ? *cfg.oscillator_length : optimal_length(v, count, cfg.basis_size);
        const auto coarse = basis_eigenvalues(v, count, cfg.basis_size, length);
        out.eigenvalues = basis_eigenvalues(v, count, 2 * cfg.basis_size, length);
        for (int i = 0; i < count; ++i) {
            out.convergence_estimate.push_back(std::abs(coarse[static_cast<std::size_t>(i)] -
                                                        out.eigenvalues[static_cast<std::size_t>(i)]));
        }
        out.oscillator_length = length;
    } else {
        if (cfg.grid_points < 200) throw PreconditionError("oracle grid_points must be >= 200");
        double half_width = 0.0;
        if (cfg.domain_half_width) {
            if (!(*cfg.domain_half_width > 0.0)) throw PreconditionError("domain half-width must be > 0");
            half_width = *cfg.domain_half_width;
        } else {
            // Grow the box until it satisfies the cutoffs for the highest level it produces.
            half_width = default_half_width(v, v.minimum().second + 1.0);
            for (int it = 0; it < 20; ++it) {
                const double e_max = fd_eigenvalues(v, count, half_width, 400).back();
                const double needed = default_half_width(v, e_max);
                if (needed <= half_width) break;
                half_width = needed;
            }
        }
        std::vector<std::vector<double>> levels;
        int interior = cfg.grid_points;
        for (int r = 0; r < 4; ++r) {
            levels.push_back(fd_eigenvalues(v, count, half_width, interior));
            interior = 2 * interior + 1;  // halves h exactly
        }
        for (int i = 0; i < count; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const double coarse = richardson(levels, idx, 2, 0).front();
            const double fine = richardson(levels, idx, 2, 1).front();
            out.eigenvalues.push_back(fine);
            out.convergence_estimate.push_back(std::abs(coarse - fine));
        }
        out.domain_half_width = half_width;
    }
    for (int i = 0; i < count; ++i) {
        const double est = out.convergence_estimate[static_cast<std::size_t>(i)];
        if (!(est <= cfg.convergence_tol)) {
            throw ResolutionError("oracle level " + std::to_string(i) + " converged only to " + describe(est) +
                                  "; raise " +
                                  (cfg.mode == OracleMode::oscillator_basis ? std::string("basis_size")
                                                                            : std::string("grid_points or L")));
        }
    }
    return out;
}

}  // namespace dunham
