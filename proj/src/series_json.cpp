#include "dunham/series_json.h"

#include "dunham/errors.h"

namespace dunham {

namespace {
constexpr const char* kSeriesSchema = "dunham.series/1";
}

nlohmann::json to_json(const DiffExpr& e) {
    auto monomials = nlohmann::json::array();
    for (const auto& m : e.monomials()) {
        auto derivs = nlohmann::json::array();
        for (std::size_t i = 0; i < m.key.deriv_exponents.size(); ++i) {
            if (m.key.deriv_exponents[i] != 0) derivs.push_back({static_cast<int>(i + 1), m.key.deriv_exponents[i]});
        }
        monomials.push_back({{"coeff", to_string(m.coeff)}, {"q_half", m.key.q_half_exponent}, {"derivs", derivs}});
    }
    return {{"plain", to_plain(e)}, {"monomials", monomials}};
}

DiffExpr diffexpr_from_json(const nlohmann::json& j) {
    try {
        std::vector<Monomial> monomials;
        for (const auto& m : j.at("monomials")) {
            Monomial out;
            out.coeff = parse_rational(m.at("coeff").get<std::string>());
            out.key.q_half_exponent = m.at("q_half").get<int>();
            for (const auto& pair : m.at("derivs")) {
                const int k = pair.at(0).get<int>();
                const int e = pair.at(1).get<int>();
                if (k < 1 || e < 1) throw ParseError("derivative entries need k >= 1 and e >= 1", 0);
                if (out.key.deriv_exponents.size() < static_cast<std::size_t>(k)) {
                    out.key.deriv_exponents.resize(static_cast<std::size_t>(k), 0);
                }
                out.key.deriv_exponents[static_cast<std::size_t>(k - 1)] += e;
            }
            monomials.push_back(std::move(out));
        }
        return DiffExpr::from_monomials(std::move(monomials));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed expression JSON: ") + e.what(), 0);
    }
}

nlohmann::json to_json(const WkbSeries& series) {
    auto terms = nlohmann::json::array();
    for (int n = 0; n <= series.max_order(); ++n) {
        auto t = to_json(series.term(n));
        t["n"] = n;
        terms.push_back(std::move(t));
    }
    return {{"schema", kSeriesSchema}, {"max_order", series.max_order()}, {"terms", terms}};
}

WkbSeries series_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema").get<std::string>() != kSeriesSchema) throw ParseError("unknown series schema", 0);
        const int max_order = j.at("max_order").get<int>();
        std::vector<DiffExpr> terms;
        for (const auto& t : j.at("terms")) terms.push_back(diffexpr_from_json(t));
        return WkbSeries(max_order, std::move(terms));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed series JSON: ") + e.what(), 0);
    }
}

nlohmann::json to_json(const OddTermCertificate& cert) {
    return {{"n", cert.n},
            {"odd_order", 2 * cert.n + 1},
            {"verified", cert.verified},
            {"f_monomials", cert.f_n.size()},
            {"phi_monomials", cert.phi_n.size()},
            {"f", to_json(cert.f_n)},
            {"phi", to_json(cert.phi_n)}};
}

}  // namespace dunham
