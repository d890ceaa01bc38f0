#pragma once

// Numeric Dunham actions
//
//     B_n(E) = (1/2i) \oint T_n(z) dz
//
// on an ellipse enclosing both turning points of Q(z) = V(z) - E, with the
// branch of sqrt(Q) continued node by node around the contour.

#include "dunham/potential.h"
#include "dunham/wkb_series.h"

#include <complex>
#include <functional>
#include <vector>

namespace dunham {

/// Every numeric knob of the contour layer, with its default.
struct NumericConfig {
    double margin = 0.5;               // semi-major axis = (1 + margin) * half-distance of turning points
    double root_clearance = 0.2;       // other roots must lie at elliptic radius >= 1 + clearance
    double min_aspect = 0.02;          // smallest allowed semi_minor / semi_major
    int initial_nodes = 64;
    int max_nodes = 1 << 20;
    double quad_rel_tol = 1e-10;       // successive doublings agree to this, relatively ...
    double quad_abs_tol = 1e-12;       // ... or absolutely, for values near zero
    double reality_tol = 1e-8;         // |Im B| < reality_tol * (1 + |Re B|)
    double closure_tol = 1e-8;         // |s_M - s_0| / |s_0|
    double max_phase_step = 0.7853981633974483;  // pi/4; the hard invariant is pi/2
    double branch_tol = 1e-8;          // relative |s^2 - Q| accepted by eval
    double real_root_tol = 1e-7;       // |Im x| <= tol * (1 + |x|) counts as a real root
    double degeneracy_tol = 1e-6;      // roots closer than tol * (1 + |x|) are a multiple root
};

struct TurningPair {
    double x1 = 0.0;
    double x2 = 0.0;
    std::vector<std::complex<double>> all_roots;
};

struct ContourSpec {
    std::complex<double> center;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    int nodes = 64;

    /// z(theta) = center + a cos(theta) + i b sin(theta)
    std::complex<double> point(double theta) const;
    std::complex<double> tangent(double theta) const;
    /// sqrt(((x - c)/a)^2 + (y/b)^2); 1 on the contour.
    double elliptic_radius(std::complex<double> z) const;
};

struct BranchTrace {
    /// M + 1 points; the last repeats the first (theta = 2 pi) for the closure check.
    std::vector<std::complex<double>> node_points;
    std::vector<std::complex<double>> sqrt_values;
    double closure_defect = 0.0;
    double max_phase_step = 0.0;
};

struct ActionValue {
    double value = 0.0;  // Re B_n
    double imag = 0.0;   // Im B_n, checked against reality_tol
    int nodes = 0;       // node count at convergence
};

/// The two real simple roots of V(x) - E plus the full root list.
TurningPair turning_points(const Potential& v, double energy, const NumericConfig& cfg = {});

ContourSpec build_contour(const TurningPair& tp, double margin, const NumericConfig& cfg = {});
inline ContourSpec build_contour(const TurningPair& tp, const NumericConfig& cfg = {}) {
    return build_contour(tp, cfg.margin, cfg);
}

/// Continues sqrt(Q) around the contour by nearest-branch selection.
/// Throws NodeCountError when a phase step reaches cfg.max_phase_step and
/// BranchTrackingError when sqrt(Q) does not return to its starting value.
BranchTrace trace_branch(const std::function<std::complex<double>(std::complex<double>)>& q, const ContourSpec& c,
                         const NumericConfig& cfg = {});
BranchTrace trace_branch(const Potential& v, double energy, const ContourSpec& c, const NumericConfig& cfg = {});

/// B_n(E) by the trapezoidal rule, doubling the node count (starting from
/// trace's resolution) until successive values agree.
ActionValue action_integral(const WkbSeries& series, int n, const Potential& v, double energy, const ContourSpec& c,
                            const BranchTrace& trace, const NumericConfig& cfg = {});

/// Everything needed to evaluate several B_n at one energy.
class ActionEvaluator {
public:
    /// Locates the turning points and builds the contour with cfg.margin.
    ActionEvaluator(const Potential& v, double energy, const NumericConfig& cfg = {});
    ActionEvaluator(const Potential& v, double energy, const TurningPair& tp, const ContourSpec& c,
                    const NumericConfig& cfg = {});

    const TurningPair& turning() const noexcept { return turning_; }
    const ContourSpec& contour() const noexcept { return contour_; }

    ActionValue action(const WkbSeries& series, int n);

private:
    friend ActionValue action_integral(const WkbSeries&, int, const Potential&, double, const ContourSpec&,
                                       const BranchTrace&, const NumericConfig&);

    using ext = long double;
    using cext = std::complex<long double>;

    // Quadrature runs in extended precision; the double trace fixes the branch.
    struct Resolution {
        int nodes = 0;
        BranchTrace trace;
        std::vector<cext> tangent;                // z'(theta_j)
        std::vector<cext> sqrt_q;                 // sqrt(Q(z_j)) on the traced branch
        std::vector<std::vector<cext>> q_derivs;  // per node
    };
    struct CompiledTerm;

    Resolution& resolution(int nodes, int derivative_count);
    cext trapezoid(const CompiledTerm& term, int nodes, ext& l1);

    Potential v_;
    double energy_;
    NumericConfig cfg_;
    TurningPair turning_;
    ContourSpec contour_;
    std::vector<std::vector<ext>> deriv_coeffs_;  // coefficients of V, V', V'', ...
    std::vector<Resolution> cache_;
};

}  // namespace dunham
