#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "iqcoh/entanglement.hpp"

using namespace iqcoh;
using coherence::Bipartition;

namespace {

const Bipartition kQubits{2, 2};

double binary_entropy(double p) {
    RealVector v(2);
    v << p, 1.0 - p;
    return linalg::entropy_of(v);
}

// Wootters concurrence closed form for two qubits — external cross-check for
// the roof engine only; not used anywhere in the library.
double ef_concurrence(const Matrix& rho) {
    Matrix sy2 = Matrix::Zero(4, 4);
    sy2(0, 3) = -1.0;
    sy2(1, 2) = 1.0;
    sy2(2, 1) = 1.0;
    sy2(3, 0) = -1.0; // sigma_y (x) sigma_y
    const Matrix rho_tilde = sy2 * rho.conjugate() * sy2;
    // eigenvalues of rho * rho_tilde are real nonnegative; concurrence uses
    // their square roots in decreasing order
    const Eigen::VectorXcd ev = (rho * rho_tilde).eigenvalues();
    RealVector roots = ev.real().cwiseMax(0.0).cwiseSqrt();
    std::sort(roots.data(), roots.data() + roots.size(), std::greater<double>());
    const double c = std::max(0.0, roots(0) - roots(1) - roots(2) - roots(3));
    return binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0);
}

} // namespace

TEST_CASE("bell state entanglement golden values") {
    const Matrix bell = states::bell_phi_plus().rho;
    CHECK(std::abs(entanglement::e_f(bell, kQubits).value - 1.0) < 1e-6);
    CHECK(std::abs(entanglement::e_a(bell, kQubits).value - 1.0) < 1e-6);
    CHECK(entanglement::purity_gap(bell, kQubits) == doctest::Approx(0.5));
}

TEST_CASE("pure states: e_f = e_a = reduced entropy") {
    Rng rng(1);
    for (int t = 0; t < 4; ++t) {
        const Vector psi = states::sample_haar_pure(rng, 4);
        const Matrix rho = psi * psi.adjoint();
        const double s =
            linalg::von_neumann_entropy(linalg::partial_trace(rho, 2, 2, 0));
        CHECK(std::abs(entanglement::e_f(rho, kQubits).value - s) < 1e-8);
        CHECK(std::abs(entanglement::e_a(rho, kQubits).value - s) < 1e-8);
    }
}

TEST_CASE("e_f matches the concurrence closed form on mixed two-qubit states") {
    Rng rng(2);
    for (int rank : {2, 4}) {
        for (int t = 0; t < 3; ++t) {
            const Matrix rho = states::sample_ginibre(rng, 4, rank);
            const double oracle = ef_concurrence(rho);
            const double roof = entanglement::e_f(rho, kQubits).value;
            CHECK(std::abs(roof - oracle) < 2e-3);
            CHECK(roof >= oracle - 1e-9); // roof search is an upper bound
        }
    }
}

TEST_CASE("separable states carry no entanglement of formation") {
    Rng rng(3);
    const Matrix a = states::sample_ginibre(rng, 2, 2);
    const Matrix b = states::sample_ginibre(rng, 2, 2);
    CHECK(entanglement::e_f(linalg::tensor(a, b), kQubits).value < 1e-6);
}

TEST_CASE("conditional entropy signs and values") {
    const Matrix bell = states::bell_phi_plus().rho;
    CHECK(entanglement::conditional_entropy(bell, {2, 2}, {0}, {1}) ==
          doctest::Approx(-1.0).epsilon(1e-10));
    Rng rng(4);
    const Matrix a = states::sample_ginibre(rng, 2, 2);
    const Matrix b = states::sample_ginibre(rng, 2, 2);
    const Matrix prod = linalg::tensor(a, b);
    CHECK(entanglement::conditional_entropy(prod, {2, 2}, {0}, {1}) ==
          doctest::Approx(linalg::von_neumann_entropy(a)).epsilon(1e-9));
    CHECK_THROWS_AS((void)entanglement::conditional_entropy(prod, {2, 2}, {0}, {0}),
                    DimensionMismatchError);
}

TEST_CASE("purity gap vanishes on pure product states, maximal on bell") {
    Rng rng(5);
    const Vector pa = states::sample_haar_pure(rng, 2);
    const Vector pb = states::sample_haar_pure(rng, 2);
    const Matrix prod = linalg::tensor(pa * pa.adjoint(), pb * pb.adjoint());
    CHECK(std::abs(entanglement::purity_gap(prod, kQubits)) < 1e-12);
    // mixed states can go negative; the witness only signals entanglement
    // when positive
    const Matrix mixed = Matrix::Identity(4, 4) * 0.25;
    CHECK(entanglement::purity_gap(mixed, kQubits) == doctest::Approx(-0.25));
}
