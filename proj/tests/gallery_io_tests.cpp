#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "fockna/fockna.hpp"
#include "support/generators.hpp"

using namespace fockna;
using fockna::testing::Rng;

TEST_CASE("gallery: nilpotent shift layout") {
    const AffineSymbol sym = gallery::nilpotent_shift(3);
    REQUIRE(std::abs(sym.a(1, 0) - Complex(1.0, 0.0)) < 1e-15);
    REQUIRE(std::abs(sym.a(2, 1) - Complex(1.0, 0.0)) < 1e-15);
    REQUIRE(sym.a.cwiseAbs().sum() == Catch::Approx(2.0));
    REQUIRE(std::abs(sym.b(0) - Complex(1.0, 0.0)) < 1e-15);
    REQUIRE(sym.b.tail(2).norm() == 0.0);
}

TEST_CASE("gallery: weighted shift satisfies (I-S*S)^{1/2} e1 = S*b") {
    const AffineSymbol sym = gallery::weighted_shift(0.5, 4);
    REQUIRE(std::abs(sym.b(1) - Complex(std::sqrt(3.0), 0.0)) < 1e-14);
    const ComplexMatrix root = psd_sqrt(
        ComplexMatrix(ComplexMatrix::Identity(4, 4) - sym.a.adjoint() * sym.a));
    ComplexVector e1 = ComplexVector::Zero(4);
    e1(0) = 1.0;
    REQUIRE((root * e1 - sym.a.adjoint() * sym.b).norm() < 1e-13);
}

TEST_CASE("gallery: isometry embedding is a non-unitary isometry with A*b = 0") {
    const AffineSymbol sym = gallery::isometry_embedding(2);
    REQUIRE(sym.a.rows() == 3);
    REQUIRE(sym.a.cols() == 2);
    REQUIRE((sym.a.adjoint() * sym.a - ComplexMatrix::Identity(2, 2)).norm() < 1e-15);
    REQUIRE((sym.a.adjoint() * sym.b).norm() < 1e-15);
}

TEST_CASE("gallery: identity classifies with unit norm") {
    const SymbolReport report = analyze(gallery::identity_symbol(2));
    REQUIRE(report.bounded);
    REQUIRE(report.norm() == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("gallery: parameter validation") {
    REQUIRE_THROWS_AS(gallery::weighted_shift(0.0, 4), InvalidInput);
    REQUIRE_THROWS_AS(gallery::weighted_shift(1.5, 4), InvalidInput);
    REQUIRE_THROWS_AS(gallery::nilpotent_shift(1), InvalidInput);
}

TEST_CASE("io: symbol JSON round trip") {
    Rng rng;
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = fockna::testing::random_symbol(rng, trial % 2 == 0, 5);
        const io::json j = io::symbol_to_json(spec.symbol);
        const AffineSymbol back = io::symbol_from_json(j);
        REQUIRE((back.a - spec.symbol.a).norm() <= 1e-15 * std::max(1.0, spec.symbol.a.norm()));
        REQUIRE((back.b - spec.symbol.b).norm() <= 1e-15 * std::max(1.0, spec.symbol.b.norm()));
    }
}

TEST_CASE("io: symbol JSON defaults and validation") {
    // m defaults to n
    io::json j = io::json::parse(R"({"n":1,"A":[[[0.5,0]]],"b":[[1,0]]})");
    const AffineSymbol sym = io::symbol_from_json(j);
    REQUIRE(sym.domain_dim() == 1);
    REQUIRE(sym.codomain_dim() == 1);
    REQUIRE(std::abs(sym.a(0, 0) - Complex(0.5, 0.0)) < 1e-15);

    REQUIRE_THROWS_AS(io::symbol_from_json(io::json::parse(R"({"n":1})")), InvalidInput);
    REQUIRE_THROWS_AS(
        io::symbol_from_json(io::json::parse(R"({"n":2,"A":[[[1,0]]],"b":[[0,0]]})")),
        InvalidInput);
    REQUIRE_THROWS_AS(
        io::symbol_from_json(io::json::parse(R"({"n":1,"A":[[[null,0]]],"b":[[0,0]]})")),
        InvalidInput);
}

TEST_CASE("io: combination JSON round trip") {
    Rng rng;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index dim = rng.uniform_int(1, 4);
        std::vector<KernelTerm> terms;
        for (int i = 0, k = rng.uniform_int(1, 3); i < k; ++i) {
            terms.push_back({rng.complex_gaussian(), rng.vector(dim)});
        }
        const KernelCombination f(dim, std::move(terms));
        const KernelCombination back = io::combination_from_json(io::combination_to_json(f));
        REQUIRE(combinations_equal(f, back, 1e-12));
    }
}

TEST_CASE("io: report JSON carries the classification") {
    const SymbolReport report = analyze(gallery::scalar_symbol(Complex(0.5, 0), Complex(1, 0)));
    const io::json j = io::report_to_json(report);
    REQUIRE(j["bounded"].get<bool>());
    REQUIRE(j["criteria"]["carswell"].get<bool>());
    REQUIRE(j["log_norm"].get<double>() == Catch::Approx(2.0 / 3.0).margin(1e-12));
    REQUIRE(j["norm"].get<double>() == Catch::Approx(1.9477340410546757).margin(1e-12));
    // round trip through text stays lossless for the verdict fields
    const io::json again = io::json::parse(j.dump());
    REQUIRE(again == j);
}

TEST_CASE("io: convergence CSV shape") {
    const auto rows =
        convergence_report(gallery::scalar_symbol(Complex(0.5, 0), Complex(1, 0)), 3);
    const std::string csv = io::convergence_to_csv(rows);
    REQUIRE(csv.rfind("d,truncated_norm,exact_norm,relative_gap\n", 0) == 0);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows

    const io::json arr = io::convergence_to_json(rows);
    REQUIRE(arr.size() == 4);
    REQUIRE(arr[0].contains("exact_norm"));
}
