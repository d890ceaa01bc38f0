#pragma once

// Terms T_n = S_n' of the all-order WKB series for Q(x) = V(x) - E, their
// even/odd rescalings
//
//     F_j = 2 T_{2j+1},     G_j = -T_{2j} / T_0,
//
// and the closed-form antiderivative of the odd terms,
//
//     Phi_n = sum over ordered compositions (c_1, ..., c_l) of n of
//             (1/l) G_{c_1} ... G_{c_l},
//
// for which d/dx Phi_n = F_n.

#include "dunham/diffpoly.h"

#include <cstddef>
#include <vector>

namespace dunham {

class WkbSeries {
public:
    WkbSeries(int max_order, std::vector<DiffExpr> terms);

    int max_order() const noexcept { return max_order_; }
    const std::vector<DiffExpr>& terms() const noexcept { return terms_; }
    /// T_n; throws PreconditionError if n is outside [0, max_order].
    const DiffExpr& term(int n) const;

private:
    int max_order_;
    std::vector<DiffExpr> terms_;
};

/// T_0 .. T_N from T_n = -(1/(2 T_0)) [T_{n-1}' + sum_{m=1}^{n-1} T_m T_{n-m}].
WkbSeries gen_terms(int max_order);

/// T_0 .. T_N from the rearranged form
///     T_n = -1/2 [ d/dx (T_{n-1} / T_0) + (1/T_0) sum_{m=2}^{n-2} T_m T_{n-m} ],  n >= 3,
/// used as an independent cross-check of gen_terms.
WkbSeries gen_terms_rearranged(int max_order);

/// 2 T_0 T_n + sum_{j=1}^{n-1} T_j T_{n-j} + T_{n-1}'; zero for a correct series.
DiffExpr recursion_residual(const WkbSeries& series, int n);

/// G_j = -T_{2j} / T_0, for 1 <= j, 2j <= max_order.
DiffExpr g_term(const WkbSeries& series, int j);

/// F_j = 2 T_{2j+1}, for 1 <= j, 2j+1 <= max_order.
DiffExpr f_term(const WkbSeries& series, int j);

/// Checks F_n = G_n' + sum_{m=1}^{n-1} G_m F_{n-m} exactly.
bool check_f_recursion(const WkbSeries& series, int n);

struct PhiConstruction {
    DiffExpr phi;
    /// Number of ordered compositions of n that were summed (2^(n-1)).
    std::size_t compositions = 0;
};

/// Phi_n, the antiderivative of F_n.
DiffExpr build_phi(const WkbSeries& series, int n);
PhiConstruction build_phi_detailed(const WkbSeries& series, int n);

struct OddTermCertificate {
    int n = 0;
    DiffExpr f_n;
    DiffExpr phi_n;
    bool verified = false;
};

/// Certifies that S_{2n+1}' = F_n / 2 is the derivative of Phi_n / 2.
OddTermCertificate certify_total_derivative(const WkbSeries& series, int n);

}  // namespace dunham
