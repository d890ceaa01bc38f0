#include "dunham/contour.h"

#include "dunham/errors.h"

#include <gmpxx.h>

#include <algorithm>
#include <complex>
#include <iterator>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dunham {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string describe(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

void validate_nodes(int nodes) {
    if (nodes < 64 || nodes % 2 != 0) throw PreconditionError("contour node count must be even and >= 64");
}

}  // namespace

std::complex<double> ContourSpec::point(double theta) const {
    return center + std::complex<double>(semi_major * std::cos(theta), semi_minor * std::sin(theta));
}

std::complex<double> ContourSpec::tangent(double theta) const {
    return {-semi_major * std::sin(theta), semi_minor * std::cos(theta)};
}

double ContourSpec::elliptic_radius(std::complex<double> z) const {
    const std::complex<double> d = z - center;
    return std::hypot(d.real() / semi_major, d.imag() / semi_minor);
}

TurningPair turning_points(const Potential& v, double energy, const NumericConfig& cfg) {
    std::vector<double> coeffs;
    for (const auto& c : v.coefficients()) coeffs.push_back(to_double(c));
    coeffs[0] -= energy;

    TurningPair tp;
    tp.all_roots = polynomial_roots(coeffs);

    std::vector<double> real_roots;
    for (std::size_t i = 0; i < tp.all_roots.size(); ++i) {
        const auto z = tp.all_roots[i];
        if (std::abs(z.imag()) > cfg.real_root_tol * (1.0 + std::abs(z))) continue;
        for (std::size_t j = 0; j < tp.all_roots.size(); ++j) {
            if (j != i && std::abs(tp.all_roots[j] - z) <= cfg.degeneracy_tol * (1.0 + std::abs(z))) {
                throw DegeneracyError("degenerate turning point near x = " + describe(z.real()) + " at E = " +
                                      describe(energy));
            }
        }
        real_roots.push_back(z.real());
    }
    if (real_roots.size() != 2) {
        throw UnsupportedPotentialError("V(x) - E has " + std::to_string(real_roots.size()) +
                                        " real roots at E = " + describe(energy) + "; exactly two are required");
    }
    std::sort(real_roots.begin(), real_roots.end());
    tp.x1 = real_roots[0];
    tp.x2 = real_roots[1];
    return tp;
}

ContourSpec build_contour(const TurningPair& tp, double margin, const NumericConfig& cfg) {
    if (!(margin > 0.0)) throw PreconditionError("contour margin must be > 0");
    validate_nodes(cfg.initial_nodes);
    const double half = 0.5 * (tp.x2 - tp.x1);
    if (!(half > 0.0)) throw ContourError("turning points must satisfy x1 < x2");

    ContourSpec c;
    c.center = {0.5 * (tp.x1 + tp.x2), 0.0};
    c.semi_major = (1.0 + margin) * half;
    c.semi_minor = 0.5 * c.semi_major;
    c.nodes = cfg.initial_nodes;

    const double required = 1.0 + cfg.root_clearance;
    for (const auto& z : tp.all_roots) {
        if (std::abs(z - tp.x1) <= cfg.degeneracy_tol * (1.0 + std::abs(z)) ||
            std::abs(z - tp.x2) <= cfg.degeneracy_tol * (1.0 + std::abs(z))) {
            continue;
        }
        const double u = (z.real() - c.center.real()) / c.semi_major;
        if (std::abs(u) >= required) continue;
        // Largest semi-minor axis that keeps z at elliptic radius >= required.
        const double limit = std::abs(z.imag()) / std::sqrt(required * required - u * u);
        c.semi_minor = std::min(c.semi_minor, 0.999 * limit);
    }
    if (c.semi_minor < cfg.min_aspect * c.semi_major) {
        throw ContourError("a root of V - E lies too close to the segment between the turning points");
    }
    return c;
}

BranchTrace trace_branch(const std::function<std::complex<double>(std::complex<double>)>& q, const ContourSpec& c,
                         const NumericConfig& cfg) {
    validate_nodes(c.nodes);
    const auto m = static_cast<std::size_t>(c.nodes);
    BranchTrace trace;
    trace.node_points.resize(m + 1);
    trace.sqrt_values.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        const double theta = kTwoPi * static_cast<double>(i % m) / static_cast<double>(m);
        const auto z = c.point(theta);
        auto s = std::sqrt(q(z));
        if (i > 0) {
            const auto prev = trace.sqrt_values[i - 1];
            if (std::abs(-s - prev) < std::abs(s - prev)) s = -s;
            const double step = std::abs(std::arg(s / prev));
            trace.max_phase_step = std::max(trace.max_phase_step, step);
            if (step >= cfg.max_phase_step) {
                throw NodeCountError("branch phase step " + describe(step) + " with " + std::to_string(c.nodes) +
                                     " nodes; more nodes are needed");
            }
        }
        trace.node_points[i] = z;
        trace.sqrt_values[i] = s;
    }
    const auto s0 = trace.sqrt_values.front();
    trace.closure_defect = std::abs(trace.sqrt_values.back() - s0) / std::abs(s0);
    if (!(trace.closure_defect < cfg.closure_tol)) {
        throw BranchTrackingError("sqrt(Q) is not single-valued on the contour (closure defect " +
                                  describe(trace.closure_defect) + ")");
    }
    return trace;
}

BranchTrace trace_branch(const Potential& v, double energy, const ContourSpec& c, const NumericConfig& cfg) {
    return trace_branch([&](std::complex<double> z) { return v.value(z) - energy; }, c, cfg);
}

namespace {

long double to_extended(const Rational& r) {
    const mpf_class f(r, 128);
    const double hi = f.get_d();
    const double lo = mpf_class(f - hi).get_d();
    return static_cast<long double>(hi) + static_cast<long double>(lo);
}

}  // namespace

struct ActionEvaluator::CompiledTerm {
    struct Monomial {
        ext coeff;
        int whole;  // integer power of Q
        bool half;  // one extra factor sqrt(Q)
        std::vector<std::pair<std::size_t, int>> derivs;  // (k, exponent) for Q^(k)
    };
    std::vector<Monomial> monomials;
    int derivative_count = 1;

    explicit CompiledTerm(const DiffExpr& e) : derivative_count(e.max_derivative_order() + 1) {
        for (const auto& m : e.monomials()) {
            const int p = m.key.q_half_exponent;
            const int whole = (p >= 0) ? p / 2 : -((-p + 1) / 2);
            Monomial c{to_extended(m.coeff), whole, p - 2 * whole == 1, {}};
            for (std::size_t i = 0; i < m.key.deriv_exponents.size(); ++i) {
                if (m.key.deriv_exponents[i] != 0) c.derivs.emplace_back(i + 1, m.key.deriv_exponents[i]);
            }
            monomials.push_back(std::move(c));
        }
    }
};

ActionEvaluator::ActionEvaluator(const Potential& v, double energy, const NumericConfig& cfg)
    : v_(v), energy_(energy), cfg_(cfg) {
    turning_ = turning_points(v, energy, cfg_);
    contour_ = build_contour(turning_, cfg_.margin, cfg_);
    for (int k = 0; k <= v_.degree(); ++k) {
        std::vector<ext> c;
        for (const auto& r : v_.derivative_coefficients(k)) c.push_back(to_extended(r));
        deriv_coeffs_.push_back(std::move(c));
    }
}

ActionEvaluator::ActionEvaluator(const Potential& v, double energy, const TurningPair& tp, const ContourSpec& c,
                                 const NumericConfig& cfg)
    : v_(v), energy_(energy), cfg_(cfg), turning_(tp), contour_(c) {
    validate_nodes(c.nodes);
    for (int k = 0; k <= v_.degree(); ++k) {
        std::vector<ext> coeffs;
        for (const auto& r : v_.derivative_coefficients(k)) coeffs.push_back(to_extended(r));
        deriv_coeffs_.push_back(std::move(coeffs));
    }
}

ActionEvaluator::Resolution& ActionEvaluator::resolution(int nodes, int derivative_count) {
    auto it = std::find_if(cache_.begin(), cache_.end(), [&](const Resolution& r) { return r.nodes == nodes; });
    if (it == cache_.end()) {
        ContourSpec c = contour_;
        c.nodes = nodes;
        Resolution r;
        r.nodes = nodes;
        r.trace = trace_branch(v_, energy_, c, cfg_);
        cache_.push_back(std::move(r));
        it = std::prev(cache_.end());
    }
    const auto count = static_cast<std::size_t>(std::max(derivative_count, v_.degree() + 1));
    if (it->q_derivs.empty() || it->q_derivs.front().size() < count) {
        const auto m = static_cast<std::size_t>(nodes);
        const ext h = 2 * std::numbers::pi_v<ext> / static_cast<ext>(nodes);
        const cext center(contour_.center.real(), contour_.center.imag());
        const ext a = contour_.semi_major;
        const ext b = contour_.semi_minor;
        it->tangent.resize(m);
        it->sqrt_q.resize(m);
        it->q_derivs.assign(m, std::vector<cext>(count, cext(0)));
        for (std::size_t j = 0; j < m; ++j) {
            const ext theta = h * static_cast<ext>(j);
            const cext z = center + cext(a * std::cos(theta), b * std::sin(theta));
            it->tangent[j] = cext(-a * std::sin(theta), b * std::cos(theta));
            auto& q = it->q_derivs[j];
            for (std::size_t k = 0; k < count && k < deriv_coeffs_.size(); ++k) {
                const auto& c = deriv_coeffs_[k];
                cext acc(0);
                for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
                q[k] = acc;
            }
            q[0] -= static_cast<ext>(energy_);
            cext s = std::sqrt(q[0]);
            const auto& sd = it->trace.sqrt_values[j];
            const cext ref(sd.real(), sd.imag());
            if (std::abs(s - ref) > std::abs(s + ref)) s = -s;
            it->sqrt_q[j] = s;
        }
    }
    return *it;
}

ActionEvaluator::cext ActionEvaluator::trapezoid(const CompiledTerm& term, int nodes, ext& l1) {
    const auto& res = resolution(nodes, term.derivative_count);
    const ext h = 2 * std::numbers::pi_v<ext> / static_cast<ext>(nodes);
    cext sum(0);
    l1 = 0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(nodes); ++j) {
        const auto& q = res.q_derivs[j];
        cext value(0);
        for (const auto& m : term.monomials) {
            cext t = m.whole >= 0 ? std::pow(q[0], m.whole) : cext(1) / std::pow(q[0], -m.whole);
            if (m.half) t *= res.sqrt_q[j];
            for (const auto& [k, e] : m.derivs) t *= e == 1 ? q[k] : std::pow(q[k], e);
            value += m.coeff * t;
        }
        const cext f = value * res.tangent[j];
        sum += f;
        l1 += std::abs(f);
    }
    l1 *= h / 2;
    // (1/2i) * h * sum
    return sum * h / cext(0, 2);
}

ActionValue ActionEvaluator::action(const WkbSeries& series, int n) {
    const CompiledTerm term(series.term(n));
    int nodes = contour_.nodes;
    cext previous;
    bool have_previous = false;
    while (nodes <= cfg_.max_nodes) {
        ext l1 = 0;
        cext current;
        try {
            current = trapezoid(term, nodes, l1);
        } catch (const NodeCountError&) {
            nodes *= 2;
            have_previous = false;
            continue;
        }
        if (have_previous) {
            const ext diff = std::abs(current - previous);
            const ext floor = 64 * std::numeric_limits<ext>::epsilon() * l1;
            if (diff < cfg_.quad_rel_tol * std::abs(current) || diff < cfg_.quad_abs_tol || diff < floor) {
                const double re = static_cast<double>(current.real());
                const double im = static_cast<double>(current.imag());
                if (!(std::abs(im) < cfg_.reality_tol * (1.0 + std::abs(re)))) {
                    throw ContourError("B_" + std::to_string(n) + " has imaginary part " + describe(im) +
                                       "; branch or contour is inconsistent");
                }
                return ActionValue{re, im, nodes};
            }
        }
        previous = current;
        have_previous = true;
        nodes *= 2;
    }
    throw QuadratureError("B_" + std::to_string(n) + " did not converge within " + std::to_string(cfg_.max_nodes) +
                          " nodes");
}

ActionValue action_integral(const WkbSeries& series, int n, const Potential& v, double energy, const ContourSpec& c,
                            const BranchTrace& trace, const NumericConfig& cfg) {
    ActionEvaluator evaluator(v, energy, TurningPair{}, c, cfg);
    if (trace.sqrt_values.size() == static_cast<std::size_t>(c.nodes) + 1) {
        ActionEvaluator::Resolution r;
        r.nodes = c.nodes;
        r.trace = trace;
        evaluator.cache_.push_back(std::move(r));
    }
    return evaluator.action(series, n);
}

}  // namespace dunham
