#include "doctest.h"

#include "cli.h"
#include "potential_parser.h"

#include "dunham/errors.h"
#include "dunham/series_json.h"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dunham;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run dunham_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "dunham");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream l(line);
        std::string cell;
        while (std::getline(l, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<Rational> coeffs(std::vector<std::pair<long, long>> c) {
    std::vector<Rational> out;
    for (auto [p, q] : c) out.push_back(make_rational(p, q));
    return out;
}

}  // namespace

TEST_CASE("potential parser") {
    using cli::parse_polynomial;
    CHECK(parse_polynomial("x^2") == coeffs({{0, 1}, {0, 1}, {1, 1}}));
    CHECK(parse_polynomial("0.5*x^2 + 0.1*x^4") == coeffs({{0, 1}, {0, 1}, {1, 2}, {0, 1}, {1, 10}}));
    CHECK(parse_polynomial("(x^2 - 1)^2") == coeffs({{1, 1}, {0, 1}, {-2, 1}, {0, 1}, {1, 1}}));
    CHECK(parse_polynomial("x^4/2 - x") == coeffs({{0, 1}, {-1, 1}, {0, 1}, {0, 1}, {1, 2}}));
    CHECK(parse_polynomial("2*x*x + 1e-1") == coeffs({{1, 10}, {0, 1}, {2, 1}}));
    CHECK(parse_polynomial(" - 3 + x ^ 2 ") == coeffs({{-3, 1}, {0, 1}, {1, 1}}));
    CHECK(parse_polynomial("x^2 - x^2").empty());
    CHECK(cli::parse_potential("1/2*x^2 + 3/10*x^3 + x^4").to_string() == "x^4 + 3/10*x^3 + 1/2*x^2");
}

TEST_CASE("potential parser errors carry positions") {
    using cli::parse_polynomial;
    auto position = [](const std::string& text) -> long {
        try {
            parse_polynomial(text);
        } catch (const ParseError& e) {
            return static_cast<long>(e.position());
        }
        return -1;
    };
    CHECK(position("sin(x)") == 0);
    CHECK(position("x^2 + y") == 6);
    CHECK(position("x^2 +") == 5);
    CHECK(position("3x^2") == 1);
    CHECK(position("x^2 / x") == 6);
    CHECK(position("x^-2") == 2);
    CHECK(position("1.2.3*x") == 0);
    CHECK(position("(x^2 + 1") == 8);
    CHECK_THROWS_WITH_AS(parse_polynomial("sin(x)"), doctest::Contains("'sin'"), ParseError);
    CHECK_THROWS_AS(cli::parse_potential("-x^2"), PreconditionError);
    CHECK_THROWS_AS(cli::parse_potential("x^3"), PreconditionError);
}

TEST_CASE("terms") {
    const auto plain = dunham_cli({"terms", "--n-max", "1"});
    CHECK(plain.code == 0);
    CHECK(plain.out == "T_0 = -Q^(1/2)\nT_1 = -1/4 * Q' * Q^-1\n");

    const auto latex = dunham_cli({"terms", "--n-max", "3", "--format", "latex"});
    CHECK(latex.code == 0);
    CHECK(latex.out == read_file(std::filesystem::path(DUNHAM_GOLDEN_DIR) / "terms_latex_3.txt"));

    const auto single = json::parse(dunham_cli({"terms", "--n-max", "0", "--format", "json"}).out);
    CHECK(single.at("terms").size() == 1);
    CHECK(single.at("max_order") == 0);

    CHECK(dunham_cli({"terms", "--format", "csv"}).code == cli::kUsage);
    CHECK(dunham_cli({"terms", "--n-max", "-1"}).code == cli::kUsage);
}

TEST_CASE("property: terms JSON round-trips") {
    const auto r = dunham_cli({"terms", "--n-max", "9", "--format", "json"});
    const WkbSeries back = series_from_json(json::parse(r.out));
    const WkbSeries fresh = gen_terms(9);
    for (int n = 0; n <= 9; ++n) CHECK(back.term(n) == fresh.term(n));
}

TEST_CASE("verify-odd") {
    const auto r = dunham_cli({"verify-odd", "--n-max", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("all odd orders are exact derivatives") != std::string::npos);

    const auto j = json::parse(dunham_cli({"verify-odd", "--n-max", "7", "--format", "json"}).out);
    CHECK(j.at("all_verified") == true);
    REQUIRE(j.at("certificates").size() == 7);
    CHECK(j.at("certificates")[6].at("odd_order") == 15);

    CHECK(dunham_cli({"verify-odd", "--n-max", "0"}).code == cli::kUsage);
}

TEST_CASE("spectrum") {
    const auto r = dunham_cli({"spectrum", "x^2", "--levels", "4", "--order", "2", "--format", "csv"});
    CHECK(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"K", "E", "residual", "B_0", "B_2", "B_4", "optimal_truncation_index"});
    for (int k = 0; k < 4; ++k) {
        CHECK(std::stoi(rows[static_cast<std::size_t>(k + 1)][0]) == k);
        CHECK(std::abs(std::stod(rows[static_cast<std::size_t>(k + 1)][1]) - (2 * k + 1)) < 1e-8);
    }

    const auto bad = dunham_cli({"spectrum", "sin(x)"});
    CHECK(bad.code == cli::kUsage);
    CHECK(bad.err.find("'sin'") != std::string::npos);
    CHECK(bad.err.find("column 1") != std::string::npos);

    // The quartic ground state has no solution at order 3; siblings still appear.
    const auto partial = dunham_cli({"spectrum", "x^4", "--levels", "3", "--order", "3", "--format", "json"});
    CHECK(partial.code == cli::kNumericFailure);
    const auto j = json::parse(partial.out);
    CHECK(j.at("schema") == "dunham.spectrum/1");
    CHECK(j.at("levels").size() == 2);
    CHECK(j.at("levels")[0].at("K") == 1);
    CHECK(j.at("errors")[0].at("K") == 0);

    CHECK(dunham_cli({"spectrum", "x^2", "--levels", "0"}).code == cli::kUsage);
    CHECK(dunham_cli({"spectrum", "x^2", "--margin", "-1"}).code == cli::kUsage);
    CHECK(dunham_cli({"spectrum", "x^3"}).code == cli::kUsage);
}

TEST_CASE("spectrum flags reach the solver") {
    const auto base = json::parse(dunham_cli({"spectrum", "x^4", "--levels", "3", "--format", "json"}).out);
    const auto tuned = json::parse(dunham_cli({"spectrum", "x^4", "--levels", "3", "--format", "json", "--margin", "0.3",
                                               "--tol", "1e-11", "--seed-bracket", "3", "--include-odd-numeric"})
                                       .out);
    for (std::size_t k = 0; k < 3; ++k) {
        const double a = base.at("levels")[k].at("E");
        const double b = tuned.at("levels")[k].at("E");
        CHECK(b == doctest::Approx(a).epsilon(1e-10));
    }
}

TEST_CASE("oracle") {
    const auto r = dunham_cli({"oracle", "x^2", "--levels", "3", "--format", "csv"});
    CHECK(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 4);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(std::stod(rows[static_cast<std::size_t>(k + 1)][1]) - (2 * k + 1)) < 1e-9);

    const auto q = json::parse(dunham_cli({"oracle", "x^4", "--count", "6", "--format", "json"}).out);
    REQUIRE(q.at("levels").size() == 6);
    for (const auto& level : q.at("levels")) CHECK(level.at("convergence_estimate").get<double>() <= 1e-9);

    const auto fd = json::parse(dunham_cli({"oracle", "x^4", "--levels", "2", "--mode", "fd", "--format", "json"}).out);
    CHECK(fd.at("levels")[0].at("E").get<double>() ==
          doctest::Approx(q.at("levels")[0].at("E").get<double>()).epsilon(1e-9));

    CHECK(dunham_cli({"oracle", "x^4", "--levels", "0"}).code == cli::kUsage);
    CHECK(dunham_cli({"oracle", "x^4", "--levels", "40"}).code == cli::kUsage);
    CHECK(dunham_cli({"oracle", "x^4", "--mode", "qr"}).code == cli::kUsage);
    CHECK(dunham_cli({"oracle", "x^4", "--levels", "4", "--basis-size", "16"}).code == cli::kNumericFailure);
}

TEST_CASE("compare") {
    const auto ho = dunham_cli({"compare", "x^2", "--levels", "3", "--order", "0,2", "--format", "csv"});
    CHECK(ho.code == 0);
    const auto rows = csv_rows(ho.out);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == std::vector<std::string>{"K", "order", "E_dunham", "E_oracle", "abs_error", "rel_error"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][4]) < 1e-8);

    const auto q = json::parse(
        dunham_cli({"compare", "x^4", "--levels", "6", "--order", "0,1,2", "--format", "json"}).out);
    REQUIRE(q.at("rows").size() == 18);
    // Orders 0 and 2 improve steadily with K; order 1 dips at K = 2 before settling.
    for (int order : {0, 2}) {
        double prev = INFINITY;
        for (const auto& row : q.at("rows")) {
            if (row.at("order") != order || row.at("K") == 0) continue;
            const double rel = row.at("rel_error");
            CHECK(rel < prev);
            prev = rel;
        }
    }

    CHECK(dunham_cli({"compare", "x^2", "--levels", "3"}).code == cli::kUsage);
    CHECK(dunham_cli({"compare", "x^2", "--levels", "3", "--order", ""}).code == cli::kUsage);
}

TEST_CASE("usage errors and help") {
    CHECK(dunham_cli({}).code == cli::kUsage);
    CHECK(dunham_cli({"frobnicate"}).code == cli::kUsage);
    const auto help = dunham_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("spectrum") != std::string::npos);
    CHECK(dunham_cli({"--version"}).out.find(cli::kVersion) != std::string::npos);
}

TEST_CASE("property: manifests and deterministic payloads") {
    const auto dir = std::filesystem::temp_directory_path() / "dunham_cli_test";
    std::filesystem::create_directories(dir);
    const auto m1 = (dir / "m1.json").string();
    const auto m2 = (dir / "m2.json").string();
    const auto a = dunham_cli({"spectrum", "x^4", "--levels", "3", "--format", "json", "--manifest-out", m1});
    const auto b = dunham_cli({"spectrum", "x^4", "--levels", "3", "--format", "json", "--manifest-out", m2});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("timestamp") == std::string::npos);

    const auto manifest = json::parse(read_file(m1));
    CHECK(manifest.at("tool") == "dunham");
    CHECK(manifest.at("version") == "0.1.0");
    CHECK(manifest.at("command") == "spectrum");
    CHECK(manifest.at("config").at("potential") == "x^4");
    CHECK(manifest.at("config").at("solver").at("quad_rel_tol") == 1e-10);
    CHECK(manifest.contains("timestamp"));
    auto strip = [](json j) {
        j.erase("timestamp");
        j["arguments"].erase(j["arguments"].end() - 1);
        return j;
    };
    CHECK(strip(manifest) == strip(json::parse(read_file(m2))));

    const auto c1 = dunham_cli({"compare", "x^4", "--levels", "3", "--order", "0,2", "--format", "csv"});
    const auto c2 = dunham_cli({"compare", "x^4", "--levels", "3", "--order", "0,2", "--format", "csv"});
    CHECK(c1.out == c2.out);
    std::filesystem::remove_all(dir);
}
