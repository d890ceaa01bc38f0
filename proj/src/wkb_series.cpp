#include "dunham/wkb_series.h"

#include "dunham/errors.h"

#include <algorithm>
#include <map>
#include <string>

namespace dunham {

namespace {

// 1 / T_0 = -Q^(-1/2)
DiffExpr inverse_t0() { return -DiffExpr::q_power(-1); }

// sum_{m=lo}^{n-lo} T_m T_{n-m}, folded by symmetry.
DiffExpr symmetric_product_sum(const std::vector<DiffExpr>& t, int n, int lo) {
    DiffExpr sum;
    for (int m = lo; 2 * m < n; ++m) sum += t[m] * t[n - m];
    sum *= Rational(2);
    if (n % 2 == 0 && n / 2 >= lo) sum += t[n / 2] * t[n / 2];
    return sum;
}

void require_order(int max_order) {
    if (max_order < 0) throw PreconditionError("series order must be >= 0");
}

std::vector<DiffExpr> seed_terms(int max_order) {
    std::vector<DiffExpr> t;
    t.reserve(static_cast<std::size_t>(max_order) + 1);
    t.push_back(-DiffExpr::q_power(1));
    return t;
}

// T_n by the direct recursion, for any n >= 1.
DiffExpr next_term_direct(const std::vector<DiffExpr>& t, int n) {
    DiffExpr bracket = t[n - 1].differentiate() + symmetric_product_sum(t, n, 1);
    return (bracket * inverse_t0()) * make_rational(-1, 2);
}

}  // namespace

WkbSeries::WkbSeries(int max_order, std::vector<DiffExpr> terms)
    : max_order_(max_order), terms_(std::move(terms)) {
    if (max_order_ < 0 || terms_.size() != static_cast<std::size_t>(max_order_) + 1) {
        throw PreconditionError("series must hold exactly max_order + 1 terms");
    }
}

const DiffExpr& WkbSeries::term(int n) const {
    if (n < 0 || n > max_order_) {
        throw PreconditionError("term index " + std::to_string(n) + " outside [0, " + std::to_string(max_order_) + "]");
    }
    return terms_[static_cast<std::size_t>(n)];
}

WkbSeries gen_terms(int max_order) {
    require_order(max_order);
    auto t = seed_terms(max_order);
    for (int n = 1; n <= max_order; ++n) t.push_back(next_term_direct(t, n));
    return WkbSeries(max_order, std::move(t));
}

WkbSeries gen_terms_rearranged(int max_order) {
    require_order(max_order);
    auto t = seed_terms(max_order);
    const DiffExpr inv = inverse_t0();
    for (int n = 1; n <= max_order; ++n) {
        if (n < 3) {
            t.push_back(next_term_direct(t, n));
            continue;
        }
        DiffExpr bracket = (t[n - 1] * inv).differentiate();
        DiffExpr interior = symmetric_product_sum(t, n, 2);
        if (!interior.is_zero()) bracket += inv * interior;
        t.push_back(bracket * make_rational(-1, 2));
    }
    return WkbSeries(max_order, std::move(t));
}

DiffExpr recursion_residual(const WkbSeries& series, int n) {
    if (n < 1 || n > series.max_order()) throw PreconditionError("residual index out of range");
    const auto& t = series.terms();
    return Rational(2) * (t[0] * t[n]) + symmetric_product_sum(t, n, 1) + t[n - 1].differentiate();
}

DiffExpr g_term(const WkbSeries& series, int j) {
    if (j < 1 || 2 * j > series.max_order()) {
        throw PreconditionError("G_" + std::to_string(j) + " needs 1 <= j and 2j <= max_order");
    }
    // -T_{2j} / T_0 = T_{2j} Q^(-1/2)
    DiffExpr g = series.term(2 * j) * DiffExpr::q_power(-1);
    if (!g.has_only_integer_q_powers()) throw VerificationError("G_" + std::to_string(j) + " has half-integer powers of Q");
    return g;
}

DiffExpr f_term(const WkbSeries& series, int j) {
    if (j < 1 || 2 * j + 1 > series.max_order()) {
        throw PreconditionError("F_" + std::to_string(j) + " needs 1 <= j and 2j+1 <= max_order");
    }
    DiffExpr f = series.term(2 * j + 1) * Rational(2);
    if (!f.has_only_integer_q_powers()) throw VerificationError("F_" + std::to_string(j) + " has half-integer powers of Q");
    return f;
}

bool check_f_recursion(const WkbSeries& series, int n) {
    if (n < 1 || 2 * n + 1 > series.max_order()) throw PreconditionError("F recursion index out of range");
    DiffExpr rhs = g_term(series, n).differentiate();
    for (int m = 1; m <= n - 1; ++m) rhs += g_term(series, m) * f_term(series, n - m);
    return rhs == f_term(series, n);
}

PhiConstruction build_phi_detailed(const WkbSeries& series, int n) {
    if (n < 1) throw PreconditionError("Phi_n needs n >= 1");
    if (2 * n > series.max_order()) throw PreconditionError("Phi_n needs 2n <= max_order");

    std::vector<DiffExpr> g;
    g.reserve(static_cast<std::size_t>(n) + 1);
    g.emplace_back();
    for (int j = 1; j <= n; ++j) g.push_back(g_term(series, j));

    // Products commute, so compositions are grouped by their multiset of
    // parts (a sorted partition); each group contributes multiplicity / l.
    std::map<std::vector<int>, Rational> weights;
    std::size_t count = 0;
    std::vector<int> parts;
    auto enumerate = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            ++count;
            std::vector<int> sorted = parts;
            std::sort(sorted.begin(), sorted.end());
            const auto length = static_cast<long>(sorted.size());
            weights[std::move(sorted)] += make_rational(1, length);
            return;
        }
        for (int c = 1; c <= remaining; ++c) {
            parts.push_back(c);
            self(self, remaining - c);
            parts.pop_back();
        }
    };
    enumerate(enumerate, n);

    PhiConstruction out;
    out.compositions = count;
    for (const auto& [partition, weight] : weights) {
        DiffExpr product = g[static_cast<std::size_t>(partition.front())];
        for (std::size_t i = 1; i < partition.size(); ++i) product *= g[static_cast<std::size_t>(partition[i])];
        out.phi += product * weight;
    }
    return out;
}

DiffExpr build_phi(const WkbSeries& series, int n) { return build_phi_detailed(series, n).phi; }

OddTermCertificate certify_total_derivative(const WkbSeries& series, int n) {
    if (n < 1 || 2 * n + 1 > series.max_order()) throw PreconditionError("certificate index out of range");
    OddTermCertificate cert;
    cert.n = n;
    cert.f_n = f_term(series, n);
    cert.phi_n = build_phi(series, n);
    cert.verified = cert.phi_n.differentiate() == cert.f_n;
    return cert;
}

}  // namespace dunham
