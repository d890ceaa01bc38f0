#include "dunham/solver.h"

#include "dunham/errors.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dunham {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

int series_order_for(int order) {
    if (order < 0) throw PreconditionError("truncation order must be >= 0");
    // T_1 for the numeric Maslov term, even terms up to T_{2N}, odd ones up
    // to T_{2N-1} for certification.
    return std::max(2 * order, 1);
}

}  // namespace

int optimal_truncation_index(const std::vector<double>& even_actions) {
    const int n_max = static_cast<int>(even_actions.size()) - 1;
    if (n_max < 1) return 0;
    const double negligible = 1e-14 * (1.0 + std::abs(even_actions[0]));
    int best = 1;
    for (int n = 2; n <= n_max; ++n) {
        const double a = std::abs(even_actions[static_cast<std::size_t>(n)]);
        const double b = std::abs(even_actions[static_cast<std::size_t>(best)]);
        if (a < b || (a <= negligible && b <= negligible)) best = n;
    }
    return best;
}

Quantizer::Quantizer(Potential potential, int order, SolverConfig cfg)
    : potential_(std::move(potential)),
      order_(order),
      cfg_(cfg),
      series_(gen_terms(series_order_for(order))),
      v_min_(potential_.minimum().second) {
    // Odd orders 3 .. 2N-1 are dropped from the sum; certify that each is an
    // exact derivative before relying on it.
    for (int n = 1; 2 * n + 1 <= 2 * order_ - 1; ++n) {
        if (!certify_total_derivative(series_, n).verified) {
            throw VerificationError("T_" + std::to_string(2 * n + 1) + " failed total-derivative certification");
        }
    }
}

PhaseBreakdown Quantizer::phase(double energy) const {
    ActionEvaluator evaluator(potential_, energy, cfg_.numeric);
    PhaseBreakdown out;
    for (int n = 0; n <= order_; ++n) out.even_actions.push_back(evaluator.action(series_, 2 * n).value);
    out.maslov = cfg_.use_analytic_maslov ? -kPi / 2.0 : evaluator.action(series_, 1).value;
    if (cfg_.include_odd_numeric) {
        for (int n = 3; n <= 2 * order_ - 1; n += 2) out.odd_actions.push_back(evaluator.action(series_, n).value);
    }
    out.total = out.maslov;
    for (double b : out.even_actions) out.total += b;
    for (double b : out.odd_actions) out.total += b;
    return out;
}

double Quantizer::seed_energy(int k) const {
    // Reference energy with exactly two turning points.
    double gap = 1.0;
    double b0_ref = 0.0;
    for (int attempt = 0;; ++attempt) {
        try {
            ActionEvaluator evaluator(potential_, v_min_ + gap, cfg_.numeric);
            b0_ref = evaluator.action(series_, 0).value;
            break;
        } catch (const UnsupportedPotentialError&) {
            if (attempt >= cfg_.bracket_expansion_cap) throw;
            gap *= 2.0;
        } catch (const DegeneracyError&) {
            if (attempt >= cfg_.bracket_expansion_cap) throw;
            gap *= 2.0;
        }
    }
    // B_0 of a degree-d monomial potential scales as (E - V_min)^((d+2)/(2d)).
    const double d = potential_.degree();
    const double exponent = (d + 2.0) / (2.0 * d);
    const double target = (k + 0.5) * kPi;
    return v_min_ + gap * std::pow(target / b0_ref, 1.0 / exponent);
}

QuantizationResult Quantizer::quantize(int k) const {
    if (k < 0) throw PreconditionError("quantum number K must be >= 0");
    const double target = k * kPi;
    auto f = [&](double e) { return total_phase(e) - target; };

    const double seed = seed_energy(k);
    const double seed_gap = seed - v_min_;
    double factor = cfg_.seed_bracket;
    double lo = v_min_ + seed_gap / factor;
    double hi = v_min_ + seed_gap * factor;
    double f_lo = f(lo);
    double f_hi = f(hi);
    int expansions = 0;
    while (!(f_lo <= 0.0 && f_hi >= 0.0)) {
        if (++expansions > cfg_.bracket_expansion_cap) {
            throw NoSolutionError("no bracket for K = " + std::to_string(k) + " around seed E = " + describe(seed));
        }
        // A phase that stops increasing with E means the truncated series is
        // dominated by its divergent tail; expanding further cannot help.
        if (f_lo > 0.0) {
            hi = lo;
            f_hi = f_lo;
            lo = v_min_ + (lo - v_min_) / 2.0;
            f_lo = f(lo);
            if (f_lo >= f_hi) {
                throw NoSolutionError("total phase is not increasing below E = " + describe(hi) + " for K = " +
                                      std::to_string(k) + " at order " + std::to_string(order_) +
                                      "; the asymptotic series is diverging");
            }
        } else {
            lo = hi;
            f_lo = f_hi;
            hi = v_min_ + (hi - v_min_) * 2.0;
            f_hi = f(hi);
            if (f_hi <= f_lo) {
                throw NoSolutionError("total phase is not increasing above E = " + describe(lo) + " for K = " +
                                      std::to_string(k) + " at order " + std::to_string(order_));
            }
        }
    }

    while (hi - lo > cfg_.bisection_rel_width * (1.0 + std::abs(0.5 * (lo + hi)))) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) {
            lo = hi = mid;
            f_lo = f_hi = 0.0;
            break;
        }
        if (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }

    // One secant step inside the final bracket; keep whichever point is best.
    double best_e = std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
    double best_f = std::abs(f_lo) <= std::abs(f_hi) ? f_lo : f_hi;
    if (f_hi != f_lo) {
        const double secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
        if (secant > lo && secant < hi) {
            const double f_sec = f(secant);
            if (std::abs(f_sec) < std::abs(best_f)) {
                best_e = secant;
                best_f = f_sec;
            }
        }
    }

    const PhaseBreakdown at = phase(best_e);
    QuantizationResult result;
    result.k = k;
    result.order = order_;
    result.energy = best_e;
    result.residual = at.total - target;
    result.actions = at.even_actions;
    result.optimal_truncation_index = optimal_truncation_index(at.even_actions);
    if (!(std::abs(result.residual) < cfg_.residual_tol)) {
        throw NoSolutionError("residual " + describe(result.residual) + " at E = " + describe(best_e) +
                              " exceeds tolerance for K = " + std::to_string(k));
    }
    if (!(result.actions[0] > 0.0)) throw NumericError("B_0 must be positive at a solution");
    if (order_ > result.optimal_truncation_index && order_ >= 1) {
        result.warnings.push_back("order " + std::to_string(order_) + " exceeds the optimal truncation index " +
                                  std::to_string(result.optimal_truncation_index) +
                                  "; the asymptotic series is diverging at this K");
    }
    if (!cfg_.include_odd_numeric && order_ >= 2) {
        ActionEvaluator evaluator(potential_, best_e, cfg_.numeric);
        const double b3 = evaluator.action(series_, 3).value;
        if (!(std::abs(b3) < cfg_.odd_spot_check_tol)) {
            result.warnings.push_back("numeric spot check of B_3 gave " + describe(b3));
        }
    }
    return result;
}

namespace {
SolverConfig with_request_flags(const QuantizationRequest& req, SolverConfig cfg) {
    cfg.use_analytic_maslov = req.use_analytic_maslov;
    return cfg;
}
}  // namespace

double total_phase(const QuantizationRequest& req, double energy, const SolverConfig& cfg) {
    return Quantizer(req.potential, req.order, with_request_flags(req, cfg)).total_phase(energy);
}

QuantizationResult quantize(const QuantizationRequest& req, const SolverConfig& cfg) {
    return Quantizer(req.potential, req.order, with_request_flags(req, cfg)).quantize(req.k);
}

SpectrumResult spectrum(const Potential& v, int levels, int order, const SolverConfig& cfg) {
    if (levels < 1) throw PreconditionError("spectrum needs levels >= 1");
    const Quantizer quantizer(v, order, cfg);
    SpectrumResult out;
    for (int k = 0; k < levels; ++k) {
        try {
            out.levels.push_back(quantizer.quantize(k));
        } catch (const Error& e) {
            out.errors.push_back(LevelError{k, e.what()});
        }
    }
    for (std::size_t i = 1; i < out.levels.size(); ++i) {
        if (!(out.levels[i].energy > out.levels[i - 1].energy)) {
            throw NumericError("spectrum is not increasing in K between K = " + std::to_string(out.levels[i - 1].k) +
                               " and K = " + std::to_string(out.levels[i].k));
        }
    }
    return out;
}

}  // namespace dunham
