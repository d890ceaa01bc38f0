#pragma once

// Brute-force reference spectrum of -d^2/dx^2 + V(x) on the real line.
//
// Two independent discretizations:
//  - finite differences: second-order central differences on [-L, L] with
//    Dirichlet ends, Richardson-extrapolated over grids with h, h/2, h/4, h/8;
//  - oscillator basis: Rayleigh-Ritz in harmonic-oscillator eigenfunctions,
//    with x^k built from ladder operators.

#include "dunham/potential.h"

#include <optional>
#include <vector>

namespace dunham {

enum class OracleMode { finite_difference, oscillator_basis };

struct OracleConfig {
    OracleMode mode = OracleMode::oscillator_basis;
    int basis_size = 128;                      // also bounds count <= basis_size / 4 in both modes
    std::optional<double> domain_half_width;   // L; chosen automatically when empty
    int grid_points = 1000;                    // interior points of the coarsest grid
    std::optional<double> oscillator_length;   // basis length scale; chosen variationally when empty
    double convergence_tol = 1e-9;
};

struct OracleSpectrum {
    std::vector<double> eigenvalues;           // ascending
    std::vector<double> convergence_estimate;  // per level, from two resolutions
    OracleMode mode = OracleMode::oscillator_basis;
    double domain_half_width = 0.0;            // finite differences only
    double oscillator_length = 0.0;            // oscillator basis only
};

/// Lowest `count` eigenvalues. Throws PreconditionError when
/// count > basis_size / 4 and ResolutionError when any level's two
/// resolutions differ by more than cfg.convergence_tol.
OracleSpectrum eigensolve(const Potential& v, int count, const OracleConfig& cfg = {});

// Building blocks, exposed for tests.

/// Lowest `count` eigenvalues of the finite-difference Hamiltonian with
/// `interior` grid points on [-half_width, half_width].
std::vector<double> fd_eigenvalues(const Potential& v, int count, double half_width, int interior);

/// Eigenvectors (column per level, values at the interior grid points) for
/// the same discretization.
std::vector<std::vector<double>> fd_eigenvectors(const Potential& v, int count, double half_width, int interior);

/// Rayleigh-Ritz eigenvalues in the first `basis_size` oscillator states of
/// length scale `length`.
std::vector<double> basis_eigenvalues(const Potential& v, int count, int basis_size, double length);

/// Half-width L with V(+-L) >= e_max + 25 and a tunnelling action of at
/// least 15 between the outer turning points and +-L.
double default_half_width(const Potential& v, double e_max);

}  // namespace dunham
