#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "iqcoh/convexroof.hpp"
#include "iqcoh/rng.hpp"
#include "iqcoh/states.hpp"

using namespace iqcoh;
using convexroof::RoofSense;

namespace {

double f_dephase(const Vector& psi) { return linalg::entropy_of(psi.cwiseAbs2()); }

double binary_entropy(double p) {
    RealVector v(2);
    v << p, 1.0 - p;
    return linalg::entropy_of(v);
}

// Coherence of formation of a qubit: h((1 + sqrt(1 - 4|rho01|^2)) / 2).
double qubit_cf_closed(const Matrix& rho) {
    const double t = std::sqrt(std::max(0.0, 1.0 - 4.0 * std::norm(rho(0, 1))));
    return binary_entropy((1.0 + t) / 2.0);
}

} // namespace

TEST_CASE("roofs of a pure state are the objective value itself") {
    Rng rng(1);
    const Vector psi = states::sample_haar_pure(rng, 3);
    const Matrix rho = psi * psi.adjoint();
    CHECK(convexroof::minimize_roof(rho, f_dephase).value ==
          doctest::Approx(f_dephase(psi)).epsilon(1e-10));
    CHECK(convexroof::maximize_roof(rho, f_dephase).value ==
          doctest::Approx(f_dephase(psi)).epsilon(1e-10));
}

TEST_CASE("diagonal states decompose into basis states: roof minimum 0") {
    Rng rng(2);
    const Matrix inc = states::sample_random_incoherent(rng, 3);
    CHECK(convexroof::minimize_roof(inc, f_dephase).value ==
          doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("maximally mixed qubit attains roof maximum 1 with full agreement") {
    const Matrix half = Matrix::Identity(2, 2) * 0.5;
    const auto r = convexroof::maximize_roof(half, f_dephase);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.restarts_agreeing == 32);
}

TEST_CASE("enumerate_decomposition reconstructs and validates") {
    Rng rng(3);
    const Matrix rho = states::sample_ginibre(rng, 3, 2);
    // extend the trivial 2x2 isometry to 4 terms by a random unitary's columns
    const Matrix u = states::random_unitary(rng, 4);
    const Matrix v = u.leftCols(2);
    const auto dec = convexroof::enumerate_decomposition(rho, v);
    CHECK((dec.reconstruct(3) - rho).cwiseAbs().maxCoeff() < 1e-8);
    double wsum = 0.0;
    for (double w : dec.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(
        (void)convexroof::enumerate_decomposition(rho, Matrix::Ones(4, 2)),
        NotIsometryError);
}

TEST_CASE("two-term mixing averages ignore the row phases") {
    // Justifies the 2-parameter (theta, phi) grid: multiplying each
    // unnormalized member by a phase changes neither weights nor objectives.
    Rng rng(4);
    const Matrix rho = states::sample_ginibre(rng, 3, 2);
    Matrix v(2, 2);
    const double th = 0.7, ph = 2.1;
    v << std::cos(th), std::sin(th) * std::exp(Cx(0, ph)),
        -std::sin(th) * std::exp(Cx(0, -ph)), std::cos(th);
    Matrix phases = Matrix::Zero(2, 2);
    phases(0, 0) = std::exp(Cx(0, 0.4));
    phases(1, 1) = std::exp(Cx(0, -1.9));
    const auto a = convexroof::enumerate_decomposition(rho, v);
    const auto b = convexroof::enumerate_decomposition(rho, phases * v);
    CHECK(a.average(f_dephase) == doctest::Approx(b.average(f_dephase)).epsilon(1e-12));
    for (std::size_t k = 0; k < a.weights.size(); ++k)
        CHECK(a.weights[k] == doctest::Approx(b.weights[k]).epsilon(1e-12));
}

TEST_CASE("qubit coherence of formation matches the closed form") {
    Rng rng(5);
    for (int t = 0; t < 8; ++t) {
        const Matrix rho = states::sample_ginibre(rng, 2, 2);
        const double closed = qubit_cf_closed(rho);
        CHECK(std::abs(convexroof::minimize_roof(rho, f_dephase).value - closed) <
              2e-6);
        CHECK(std::abs(convexroof::grid_oracle_rank2(rho, f_dephase, 0.01,
                                                     RoofSense::Minimize) -
                       closed) < 2e-3);
    }
}

TEST_CASE("term count r is as good as r^2 on these objectives") {
    Rng rng(6);
    const Matrix rho = states::sample_ginibre(rng, 2, 2);
    convexroof::RoofConfig small;
    small.terms = 2;
    const double v_small = convexroof::minimize_roof(rho, f_dephase, small).value;
    const double v_default = convexroof::minimize_roof(rho, f_dephase).value;
    CHECK(std::abs(v_small - v_default) < 1e-5);
}

TEST_CASE("roof search vs the 2-term grid oracle on rank-2 states") {
    Rng rng(7);
    convexroof::RoofConfig two;
    two.terms = 2;
    for (int t = 0; t < 4; ++t) {
        const Matrix rho = states::sample_ginibre(rng, 4, 2);
        const auto extrema = convexroof::grid_extrema_rank2(rho, f_dephase, 0.01);
        // matched search space: 2-term optimizer == exhaustive 2-term scan
        CHECK(std::abs(convexroof::minimize_roof(rho, f_dephase, two).value -
                       extrema.min_value) < 2e-3);
        CHECK(std::abs(convexroof::maximize_roof(rho, f_dephase, two).value -
                       extrema.max_value) < 2e-3);
        // default config searches a superset, so it dominates the grid
        CHECK(convexroof::minimize_roof(rho, f_dephase).value <=
              extrema.min_value + 1e-9);
        CHECK(convexroof::maximize_roof(rho, f_dephase).value >=
              extrema.max_value - 1e-9);
    }
}

TEST_CASE("three terms can strictly beat every 2-term decomposition") {
    // rank-2 support is a Bloch ball section; the convex roof generically
    // mixes 3 extreme points, so the 2-term grid is only a one-sided bound
    Rng rng(7);
    states::sample_ginibre(rng, 4, 2);
    const Matrix rho = states::sample_ginibre(rng, 4, 2);
    const double grid_min =
        convexroof::grid_oracle_rank2(rho, f_dephase, 0.01,
                                      RoofSense::Minimize);
    convexroof::RoofConfig three;
    three.terms = 3;
    const auto res = convexroof::minimize_roof(rho, f_dephase, three);
    CHECK(res.value < grid_min - 5e-3);
    CHECK((res.best.reconstruct(4) - rho).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("grid oracle rejects rank above two") {
    Rng rng(8);
    const Matrix rho = states::sample_ginibre(rng, 3, 3);
    CHECK_THROWS_AS((void)convexroof::grid_oracle_rank2(rho, f_dephase, 0.1,
                                                        RoofSense::Minimize),
                    RankTooHighError);
}

TEST_CASE("roof respects convexity: mixtures never beat the average") {
    Rng rng(9);
    const Matrix a = states::sample_ginibre(rng, 2, 2);
    const Matrix b = states::sample_ginibre(rng, 2, 2);
    const Matrix mix = 0.5 * a + 0.5 * b;
    const double fm = convexroof::minimize_roof(mix, f_dephase).value;
    const double fa = convexroof::minimize_roof(a, f_dephase).value;
    const double fb = convexroof::minimize_roof(b, f_dephase).value;
    CHECK(fm <= 0.5 * fa + 0.5 * fb + 1e-6);
}

TEST_CASE("config validation") {
    Rng rng(10);
    const Matrix rho = states::sample_ginibre(rng, 3, 2);
    convexroof::RoofConfig bad;
    bad.terms = 1; // below rank
    CHECK_THROWS_AS((void)convexroof::minimize_roof(rho, f_dephase, bad),
                    ConfigError);
    bad.terms = 0;
    bad.restarts = 0;
    CHECK_THROWS_AS((void)convexroof::minimize_roof(rho, f_dephase, bad),
                    ConfigError);
}
