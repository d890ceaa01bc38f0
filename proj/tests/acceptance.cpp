// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "dunham/contour.h"
#include "dunham/errors.h"
#include "dunham/oracle.h"
#include "dunham/solver.h"
#include "dunham/wkb_series.h"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace dunham;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Clock {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Potential poly(std::vector<long> c) {
    std::vector<Rational> r;
    for (long v : c) r.emplace_back(v);
    return Potential(std::move(r));
}

DiffExpr dq(int k, int e = 1) { return DiffExpr::q_derivative(k, e); }
DiffExpr c(long p, long q = 1) { return DiffExpr::constant(make_rational(p, q)); }

struct GridCase {
    Potential v;
    std::vector<double> energies;
};

std::vector<GridCase> action_grid() {
    return {
        {poly({0, 0, 1}), {1.0, 5.0, 12.0}},
        {poly({0, 0, 0, 0, 1}), {1.0, 4.0, 20.0}},
        {poly({0, 0, 1, 0, 1}), {0.5, 3.0, 15.0}},
    };
}

const WkbSeries& series31() {
    static const WkbSeries s = gen_terms(31);
    return s;
}

Outcome symbolic_fixtures() {
    Clock clock;
    const WkbSeries s = gen_terms(3);
    const double elapsed = clock.seconds();
    Outcome o;
    o.pass = s.term(1) == c(-1, 4) * dq(1) * q_power(-2) &&
             s.term(2) == c(5, 32) * dq(1, 2) * q_power(-5) - c(1, 8) * dq(2) * q_power(-3) &&
             s.term(3) == c(-15, 64) * dq(1, 3) * q_power(-8) + c(9, 32) * dq(1) * dq(2) * q_power(-6) -
                              c(1, 16) * dq(3) * q_power(-4) &&
             elapsed < 1.0;
    o.detail = "T_1, T_2, T_3 exact; generated in " + fmt("%.4f", elapsed) + " s (limit 1 s)";
    return o;
}

Outcome total_derivative_theorem() {
    Clock clock;
    const WkbSeries s = gen_terms(15);
    Outcome o;
    for (int n = 1; n <= 7; ++n) o.pass = o.pass && certify_total_derivative(s, n).verified;
    const auto g = [&](int j) { return g_term(s, j); };
    o.pass = o.pass && build_phi(s, 2) == g(2) + c(1, 2) * g(1) * g(1) &&
             build_phi(s, 3) == g(3) + g(1) * g(2) + c(1, 3) * g(1) * g(1) * g(1) &&
             build_phi(s, 4) == g(4) + g(1) * g(3) + c(1, 2) * g(2) * g(2) + g(1) * g(1) * g(2) +
                                    c(1, 4) * g(1) * g(1) * g(1) * g(1);
    const double elapsed = clock.seconds();
    o.pass = o.pass && elapsed < 300.0;
    o.detail = "d/dx Phi_n = F_n for n = 1..7 (T_3 .. T_15), Phi_2..Phi_4 brackets exact; " + fmt("%.3f", elapsed) +
               " s (limit 300 s)";
    return o;
}

Outcome recursion_cross_check() {
    const WkbSeries direct = gen_terms(15);
    const WkbSeries rearranged = gen_terms_rearranged(15);
    Outcome o;
    for (int n = 0; n <= 15; ++n) o.pass = o.pass && direct.term(n) == rearranged.term(n);
    const auto& big = series31();
    for (int n = 1; n <= big.max_order(); ++n) o.pass = o.pass && recursion_residual(big, n).is_zero();
    o.detail = "both recursions agree for T_0..T_15; residual exactly zero for T_1..T_31";
    return o;
}

Outcome parity_property() {
    const auto& s = series31();
    Outcome o;
    for (int n = 0; n <= 15; ++n) {
        o.pass = o.pass && s.term(2 * n).has_only_half_odd_q_powers();
        if (n >= 1) o.pass = o.pass && s.term(2 * n + 1).has_only_integer_q_powers();
    }
    o.detail = "T_0..T_30 even orders half-odd powers only, T_3..T_31 odd orders integer powers only";
    return o;
}

Outcome maslov_constant(const WkbSeries& s) {
    Outcome o;
    double worst = 0.0;
    for (const auto& g : action_grid()) {
        for (double e : g.energies) {
            ActionEvaluator ev(g.v, e);
            worst = std::max(worst, std::abs(ev.action(s, 1).value + pi / 2));
        }
    }
    o.pass = worst < 1e-10;
    o.detail = "max |B_1 + pi/2| = " + fmt("%.2e", worst) + " over 9 (V, E) pairs (limit 1e-10)";
    return o;
}

Outcome odd_vanishing(const WkbSeries& s) {
    Outcome o;
    double worst = 0.0;
    for (const auto& g : action_grid()) {
        for (double e : g.energies) {
            ActionEvaluator ev(g.v, e);
            worst = std::max({worst, std::abs(ev.action(s, 3).value), std::abs(ev.action(s, 5).value)});
        }
    }
    o.pass = worst < 1e-8;
    o.detail = "max |B_3|, |B_5| = " + fmt("%.2e", worst) + " (limit 1e-8)";
    return o;
}

Outcome harmonic_oscillator() {
    const auto s = spectrum(poly({0, 0, 1}), 6, 3);
    Outcome o;
    o.pass = s.errors.empty() && s.levels.size() == 6;
    double worst_e = 0.0;
    double worst_b = 0.0;
    for (const auto& r : s.levels) {
        worst_e = std::max(worst_e, std::abs(r.energy - (2 * r.k + 1)));
        for (std::size_t n = 1; n < r.actions.size(); ++n) worst_b = std::max(worst_b, std::abs(r.actions[n]));
    }
    o.pass = o.pass && worst_e < 1e-8 && worst_b < 1e-6;
    o.detail = "K = 0..5: max |E - (2K+1)| = " + fmt("%.2e", worst_e) + ", max |B_2n| = " + fmt("%.2e", worst_b);
    return o;
}

Outcome quartic_vs_oracle(std::vector<double>& oracle_out) {
    Clock clock;
    const Potential x4 = poly({0, 0, 0, 0, 1});
    const OracleSpectrum oracle = eigensolve(x4, 6);
    oracle_out = oracle.eigenvalues;
    Outcome o;
    double worst_est = 0.0;
    for (double est : oracle.convergence_estimate) worst_est = std::max(worst_est, est);
    o.pass = worst_est <= 1e-9;

    std::vector<std::vector<double>> rel(3);
    std::vector<std::vector<double>> err(3);
    for (int order : {0, 2}) {
        const Quantizer q(x4, order);
        for (int k = 1; k <= 5; ++k) {
            const double e = q.quantize(k).energy;
            const double d = std::abs(e - oracle.eigenvalues[static_cast<std::size_t>(k)]);
            err[static_cast<std::size_t>(order)].push_back(d);
            rel[static_cast<std::size_t>(order)].push_back(d / oracle.eigenvalues[static_cast<std::size_t>(k)]);
        }
    }
    bool improves = true;
    for (int k = 2; k <= 5; ++k) improves = improves && err[2][static_cast<std::size_t>(k - 1)] < err[0][static_cast<std::size_t>(k - 1)];
    bool monotone = true;
    for (int order : {0, 2}) {
        const auto& r = rel[static_cast<std::size_t>(order)];
        for (std::size_t i = 1; i < r.size(); ++i) monotone = monotone && r[i] < r[i - 1];
    }
    const double elapsed = clock.seconds();
    o.pass = o.pass && improves && monotone && elapsed < 120.0;
    std::ostringstream d;
    d << "oracle estimate " << fmt("%.1e", worst_est) << "; order 2 beats order 0 for K = 2..5: "
      << (improves ? "yes" : "no") << "; relative error decreasing in K = 1..5 at orders 0 and 2: "
      << (monotone ? "yes" : "no") << "; " << fmt("%.2f", elapsed) << " s (limit 120 s)";
    o.detail = d.str();
    return o;
}

Outcome contour_robustness(const WkbSeries& s) {
    Outcome o;
    double worst_rel = 0.0;
    double worst_zero = 0.0;
    NumericConfig narrow;
    narrow.margin = 0.3;
    NumericConfig wide;
    wide.margin = 0.7;
    for (const auto& g : action_grid()) {
        const bool oscillator = g.v.degree() == 2;
        for (double e : g.energies) {
            ActionEvaluator a(g.v, e, narrow);
            ActionEvaluator b(g.v, e, wide);
            for (int n = 0; n <= 3; ++n) {
                const double va = a.action(s, 2 * n).value;
                const double vb = b.action(s, 2 * n).value;
                if (oscillator && n >= 1) {
                    // Identically zero: relative agreement is undefined.
                    worst_zero = std::max({worst_zero, std::abs(va), std::abs(vb)});
                } else {
                    worst_rel = std::max(worst_rel, std::abs(va - vb) / std::abs(vb));
                }
            }
        }
    }
    o.pass = worst_rel < 1e-9 && worst_zero < 1e-8;
    o.detail = "margins 0.3 vs 0.7, B_0..B_6: max relative difference " + fmt("%.2e", worst_rel) +
               " (limit 1e-9); vanishing oscillator terms below " + fmt("%.1e", worst_zero);
    return o;
}

Outcome independent_oracles(const WkbSeries& s, const std::vector<double>& basis_levels) {
    Outcome o;
    const Potential x4 = poly({0, 0, 0, 0, 1});
    OracleConfig fd;
    fd.mode = OracleMode::finite_difference;
    const auto grid = eigensolve(x4, 6, fd);
    double worst = 0.0;
    for (std::size_t k = 0; k < 6; ++k) worst = std::max(worst, std::abs(grid.eigenvalues[k] - basis_levels[k]));

    boost::math::quadrature::tanh_sinh<double> ts;
    const double real_axis = ts.integrate([](double x) { return std::sqrt(1.0 - x * x * x * x); }, -1.0, 1.0);
    ActionEvaluator ev(x4, 1.0);
    const double contour = ev.action(s, 0).value;
    const double b0_diff = std::abs(contour - real_axis) / real_axis;
    o.pass = worst < 1e-8 && b0_diff < 1e-11;
    o.detail = "finite differences vs oscillator basis, K = 0..5: " + fmt("%.1e", worst) +
               "; contour B_0 vs real-axis quadrature: " + fmt("%.1e", b0_diff);
    return o;
}

}  // namespace

int main() {
    const WkbSeries s = gen_terms(6);
    std::vector<double> oracle;
    struct Criterion {
        int id;
        std::string name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "symbolic fixtures", symbolic_fixtures},
        {2, "total-derivative theorem", total_derivative_theorem},
        {3, "recursion cross-check", recursion_cross_check},
        {4, "parity of Q powers", parity_property},
        {5, "Maslov constant", [&] { return maslov_constant(s); }},
        {6, "odd-order vanishing", [&] { return odd_vanishing(s); }},
        {7, "harmonic oscillator", harmonic_oscillator},
        {8, "quartic oscillator vs oracle", [&] { return quartic_vs_oracle(oracle); }},
        {9, "contour robustness", [&] { return contour_robustness(s); }},
        {10, "independent oracles", [&] { return independent_oracles(s, oracle); }},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += o.pass ? 0 : 1;
        std::printf("[%s] %2d %-30s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
