#include "doctest.h"

#include "dunham/errors.h"
#include "dunham/oracle.h"

#include <cmath>

using namespace dunham;

namespace {

Potential poly(std::vector<long> c) {
    std::vector<Rational> r;
    for (long v : c) r.emplace_back(v);
    return Potential(std::move(r));
}

const Potential x2 = poly({0, 0, 1});
const Potential x4 = poly({0, 0, 0, 0, 1});
const Potential asym(std::vector<Rational>{0, 0, make_rational(1, 2), make_rational(3, 10), 1});

OracleConfig fd() {
    OracleConfig cfg;
    cfg.mode = OracleMode::finite_difference;
    return cfg;
}

}  // namespace

TEST_CASE("harmonic oscillator spectrum") {
    for (const auto& cfg : {OracleConfig{}, fd()}) {
        const auto s = eigensolve(x2, 3, cfg);
        REQUIRE(s.eigenvalues.size() == 3);
        REQUIRE(s.convergence_estimate.size() == 3);
        for (int k = 0; k < 3; ++k) CHECK(std::abs(s.eigenvalues[static_cast<std::size_t>(k)] - (2 * k + 1)) < 1e-9);
        CHECK(s.mode == cfg.mode);
    }
}

TEST_CASE("quartic ground state") {
    const auto basis = eigensolve(x4, 1);
    const auto grid = eigensolve(x4, 1, fd());
    CHECK(basis.eigenvalues[0] == doctest::Approx(1.060362).epsilon(1e-6));
    CHECK(std::abs(basis.eigenvalues[0] - grid.eigenvalues[0]) < 1e-9);
    CHECK(basis.convergence_estimate[0] <= 1e-9);
    CHECK(grid.convergence_estimate[0] <= 1e-9);
    CHECK(basis.oscillator_length > 0.0);
    CHECK(grid.domain_half_width > 0.0);
}

TEST_CASE("preconditions") {
    OracleConfig small;
    small.basis_size = 16;
    CHECK_THROWS_AS(eigensolve(x4, 5, small), PreconditionError);
    CHECK_THROWS_AS(eigensolve(x4, 33), PreconditionError);
    CHECK_THROWS_AS(eigensolve(x4, 0), PreconditionError);
    OracleConfig tiny;
    tiny.basis_size = 8;
    CHECK_THROWS_AS(eigensolve(x4, 1, tiny), PreconditionError);
    auto coarse = fd();
    coarse.grid_points = 100;
    CHECK_THROWS_AS(eigensolve(x4, 1, coarse), PreconditionError);
    auto bad_l = fd();
    bad_l.domain_half_width = -1.0;
    CHECK_THROWS_AS(eigensolve(x4, 1, bad_l), PreconditionError);
}

TEST_CASE("insufficient resolution is reported") {
    OracleConfig small;
    small.basis_size = 16;
    small.oscillator_length = 0.3;
    CHECK_THROWS_AS(eigensolve(x4, 4, small), ResolutionError);

    auto narrow = fd();
    narrow.domain_half_width = 2.0;  // cuts into the tails of the upper levels
    narrow.grid_points = 200;
    narrow.convergence_tol = 1e-13;
    CHECK_THROWS_AS(eigensolve(x4, 4, narrow), ResolutionError);
}

TEST_CASE("default box width") {
    for (double e_max : {1.0, 10.0, 40.0}) {
        const double l = default_half_width(x4, e_max);
        CHECK(x4.value(l) >= e_max + 25.0);
        CHECK(x4.value(-l) >= e_max + 25.0);
    }
}

TEST_CASE("property: the two discretizations agree") {
    for (const auto& v : {x2, x4, asym}) {
        const auto a = eigensolve(v, 6);
        const auto b = eigensolve(v, 6, fd());
        for (std::size_t k = 0; k < 6; ++k) {
            CAPTURE(v.to_string());
            CAPTURE(k);
            CHECK(std::abs(a.eigenvalues[k] - b.eigenvalues[k]) < 1e-8);
            if (k > 0) CHECK(a.eigenvalues[k] > a.eigenvalues[k - 1]);
        }
    }
}

TEST_CASE("property: basis eigenvalues decrease as the basis grows") {
    for (const auto& v : {x4, asym}) {
        std::vector<double> prev;
        for (int n = 16; n <= 96; n += 8) {
            const auto w = basis_eigenvalues(v, 4, n, 0.6);
            if (!prev.empty()) {
                for (std::size_t k = 0; k < 4; ++k) CHECK(w[k] <= prev[k] + 1e-12 * std::abs(prev[k]));
            }
            prev = w;
        }
    }
}

TEST_CASE("property: eigenfunction parity alternates for even potentials") {
    for (const auto& v : {x2, x4, poly({0, 0, 1, 0, 1})}) {
        const int n = 401;
        const auto vecs = fd_eigenvectors(v, 6, 6.0, n);
        for (std::size_t j = 0; j < vecs.size(); ++j) {
            const double sign = j % 2 == 0 ? 1.0 : -1.0;
            double worst = 0.0;
            double norm = 0.0;
            for (int i = 0; i < n; ++i) {
                const auto a = vecs[j][static_cast<std::size_t>(i)];
                const auto b = vecs[j][static_cast<std::size_t>(n - 1 - i)];
                worst = std::max(worst, std::abs(a - sign * b));
                norm = std::max(norm, std::abs(a));
            }
            CAPTURE(j);
            CHECK(worst < 1e-8 * norm);
        }
    }
}

TEST_CASE("finite-difference building block") {
    // Second-order FD converges to the exact level as h^2.
    const double e_coarse = fd_eigenvalues(x2, 1, 8.0, 400)[0];
    const double e_fine = fd_eigenvalues(x2, 1, 8.0, 801)[0];
    CHECK(std::abs(e_fine - 1.0) < std::abs(e_coarse - 1.0));
    CHECK(std::abs(e_coarse - 1.0) / std::abs(e_fine - 1.0) == doctest::Approx(4.0).epsilon(0.01));
    CHECK_THROWS_AS(fd_eigenvalues(x2, 1, 8.0, 100), PreconditionError);
}
