#pragma once

// Eigenvalues from the all-order quantization condition
//
//     B_0(E) + B_1 + sum_{n>=1} B_{2n}(E) = K pi,    B_1 = -pi/2,
//
// truncated after B_{2N}. Odd orders >= 3 are exact derivatives and are
// dropped once certified symbolically. Results are reported in the
// equivalent (K + 1/2) pi convention: B_0 + sum B_{2n} = (K + 1/2) pi.

#include "dunham/contour.h"
#include "dunham/potential.h"
#include "dunham/wkb_series.h"

#include <string>
#include <vector>

namespace dunham {

struct SolverConfig {
    NumericConfig numeric;
    bool use_analytic_maslov = true;   // B_1 = -pi/2 exactly, else integrate T_1
    bool include_odd_numeric = false;  // integrate B_3, B_5, ... instead of dropping them
    double seed_bracket = 1.5;         // initial bracket [seed / f, seed * f] in E - V_min
    int bracket_expansion_cap = 60;
    double bisection_rel_width = 1e-12;
    double residual_tol = 1e-10;
    double odd_spot_check_tol = 1e-8;
};

struct QuantizationRequest {
    Potential potential;
    int k = 0;      // quantum number K >= 0
    int order = 0;  // N: include T_0 .. T_{2N}
    bool use_analytic_maslov = true;  // overrides SolverConfig::use_analytic_maslov
};

struct QuantizationResult {
    int k = 0;
    int order = 0;
    double energy = 0.0;
    double residual = 0.0;             // total_phase(E) - K pi
    std::vector<double> actions;       // B_0, B_2, ..., B_{2N} at E
    int optimal_truncation_index = 0;  // n minimizing |B_{2n}|, 1 <= n <= N (0 when N = 0)
    std::vector<std::string> warnings;
};

struct PhaseBreakdown {
    double total = 0.0;
    double maslov = 0.0;               // B_1
    std::vector<double> even_actions;  // B_0, B_2, ..., B_{2N}
    std::vector<double> odd_actions;   // B_3, B_5, ... (only when integrated)
};

/// Holds the symbolic series for one truncation order; cheap to reuse
/// across energies and quantum numbers, and safe to share between threads.
class Quantizer {
public:
    Quantizer(Potential potential, int order, SolverConfig cfg = {});

    const Potential& potential() const noexcept { return potential_; }
    int order() const noexcept { return order_; }
    const WkbSeries& series() const noexcept { return series_; }

    PhaseBreakdown phase(double energy) const;
    double total_phase(double energy) const { return phase(energy).total; }

    QuantizationResult quantize(int k) const;

private:
    double seed_energy(int k) const;

    Potential potential_;
    int order_;
    SolverConfig cfg_;
    WkbSeries series_;
    double v_min_;
};

double total_phase(const QuantizationRequest& req, double energy, const SolverConfig& cfg = {});
QuantizationResult quantize(const QuantizationRequest& req, const SolverConfig& cfg = {});

struct LevelError {
    int k = 0;
    std::string message;
};

struct SpectrumResult {
    std::vector<QuantizationResult> levels;  // ascending K, failed levels omitted
    std::vector<LevelError> errors;
};

/// K = 0 .. levels-1, each solved independently.
SpectrumResult spectrum(const Potential& v, int levels, int order, const SolverConfig& cfg = {});

/// n in [1, N] minimizing |B_{2n}|; ties among negligible terms resolve to the largest n.
int optimal_truncation_index(const std::vector<double>& even_actions);

}  // namespace dunham
